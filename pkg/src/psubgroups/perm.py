"""Permutations on {0, ..., n-1} with 1-based cycle notation for I/O.

Products compose left to right: ``(a * b)(x) == b(a(x))``, so conjugation
``a ** b`` is ``b^-1 * a * b``.
"""

from __future__ import annotations

from math import lcm
from typing import Iterable, Sequence

from .errors import DegreeMismatchError, InvalidArgumentError, ParseError


class Permutation:
    __slots__ = ("images", "_hash")

    def __init__(self, images: Sequence[int]):
        images = tuple(int(x) for x in images)
        if sorted(images) != list(range(len(images))):
            raise InvalidArgumentError(f"not a permutation: {images}")
        self.images = images
        self._hash = hash(images)

    @classmethod
    def identity(cls, degree: int) -> Permutation:
        return cls._trusted(tuple(range(degree)))

    @classmethod
    def _trusted(cls, images: tuple) -> Permutation:
        p = cls.__new__(cls)
        p.images = images
        p._hash = hash(images)
        return p

    @classmethod
    def from_cycles(cls, degree: int, cycles: Iterable[Sequence[int]]) -> Permutation:
        """Build from 0-based cycles; cycles are applied left to right."""
        images = list(range(degree))
        for cycle in cycles:
            step = list(range(degree))
            for i, x in enumerate(cycle):
                if not 0 <= x < degree:
                    raise InvalidArgumentError(f"point {x + 1} outside degree {degree}")
                step[x] = cycle[(i + 1) % len(cycle)]
            images = [step[x] for x in images]
        return cls(images)

    @classmethod
    def parse(cls, text: str, degree: int | None = None) -> Permutation:
        cycles = parse_cycle_notation(text)
        needed = max((x for c in cycles for x in c), default=-1) + 1
        if degree is None:
            degree = needed
        elif needed > degree:
            raise ParseError(f"point {needed} exceeds degree {degree}", 1, 1)
        return cls.from_cycles(degree, cycles)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: Permutation) -> Permutation:
        if self.degree != other.degree:
            raise DegreeMismatchError(f"degrees {self.degree} and {other.degree}")
        o = other.images
        return Permutation._trusted(tuple(o[x] for x in self.images))

    def __pow__(self, k):
        if isinstance(k, Permutation):
            return k.inverse() * self * k
        if k < 0:
            return self.inverse() ** (-k)
        result = Permutation.identity(self.degree)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> Permutation:
        inv = [0] * self.degree
        for i, x in enumerate(self.images):
            inv[x] = i
        return Permutation._trusted(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, each starting at its least point, sorted."""
        seen = set()
        out = []
        for i in range(self.degree):
            if i in seen or self.images[i] == i:
                continue
            cycle = [i]
            seen.add(i)
            j = self.images[i]
            while j != i:
                cycle.append(j)
                seen.add(j)
                j = self.images[j]
            out.append(tuple(cycle))
        return out

    def order(self) -> int:
        return lcm(1, *(len(c) for c in self.cycles()))

    def support(self) -> list[int]:
        return [i for i, x in enumerate(self.images) if i != x]

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __lt__(self, other: Permutation) -> bool:
        return self.images < other.images

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        return format_cycles(self.cycles())

    def __repr__(self) -> str:
        return f"Permutation({self!s}, degree={self.degree})"


def format_cycles(cycles: Iterable[Sequence[int]]) -> str:
    """1-based cycle notation, ``()`` for the identity."""
    text = "".join("(" + " ".join(str(x + 1) for x in c) + ")" for c in cycles)
    return text or "()"


def parse_cycle_notation(text: str, line: int = 0, col: int = 1) -> list[list[int]]:
    """Parse ``(1 2 3)(4 5)`` into 0-based cycles.

    Points may be separated by blanks or commas. ``line``/``col`` locate
    ``text`` inside a larger file for error messages.
    """
    cycles: list[list[int]] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch != "(":
            raise ParseError(f"expected '(' but found {ch!r}", line, col + i)
        i += 1
        current: list[int] = []
        while True:
            while i < n and (text[i].isspace() or text[i] == ","):
                i += 1
            if i >= n:
                raise ParseError("unterminated cycle", line, col + i)
            if text[i] == ")":
                i += 1
                break
            start = i
            while i < n and text[i].isdigit():
                i += 1
            if start == i:
                raise ParseError(f"unexpected character {text[i]!r} in cycle", line, col + i)
            point = int(text[start:i])
            if point < 1:
                raise ParseError("points are numbered from 1", line, col + start)
            if point - 1 in current:
                raise ParseError(f"point {point} repeated in cycle", line, col + start)
            current.append(point - 1)
        if len(current) > 1:
            cycles.append(current)
    return cycles
