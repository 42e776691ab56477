"""Permutation realizations of the small groups in the shipped corpus.

Everything here is deterministic; the default corpus file is generated
from :func:`default_corpus_text` and a test keeps the two in sync.
"""

from __future__ import annotations

from itertools import product

from .group import Group
from .perm import Permutation

# -- finite fields --------------------------------------------------------------


class FiniteField:
    """GF(q) for q prime or q = 2^k with k <= 4; elements are ints 0..q-1."""

    def __init__(self, q: int):
        self.q = q
        if q in (4, 8, 16):
            self.char = 2
            self.modulus = {4: 0b111, 8: 0b1011, 16: 0b10011}[q]
        else:
            if q < 2 or any(q % d == 0 for d in range(2, int(q**0.5) + 1)):
                raise ValueError(f"unsupported field order {q}")
            self.char = q
            self.modulus = None
        self.elements = list(range(q))
        self._inv = {x: next(y for y in range(1, q) if self.mul(x, y) == 1) for x in range(1, q)}

    def add(self, a: int, b: int) -> int:
        return a ^ b if self.modulus else (a + b) % self.q

    def neg(self, a: int) -> int:
        return a if self.modulus else (-a) % self.q

    def mul(self, a: int, b: int) -> int:
        if not self.modulus:
            return a * b % self.q
        out = 0
        k = self.q.bit_length() - 1
        while b:
            if b & 1:
                out ^= a
            b >>= 1
            a <<= 1
            if a >> k:
                a ^= self.modulus
        return out

    def inv(self, a: int) -> int:
        return self._inv[a]

    def pow(self, a: int, k: int) -> int:
        out = 1
        for _ in range(k):
            out = self.mul(out, a)
        return out

    def primitive(self) -> int:
        for x in range(2, self.q) if self.q > 2 else [1]:
            if len({self.pow(x, k) for k in range(1, self.q)}) == self.q - 1:
                return x
        return 1


# -- projective linear groups -------------------------------------------------


def psl2(q: int) -> list[Permutation]:
    """PSL(2, q) on the q + 1 points of the projective line (infinity = q)."""
    F = FiniteField(q)
    inf = q
    w = F.primitive()
    scale = w if F.char == 2 else F.mul(w, w)

    def mobius(a, b, c, d):
        images = []
        for x in range(q + 1):
            if x == inf:
                num, den = a, c
            else:
                num, den = F.add(F.mul(a, x), b), F.add(F.mul(c, x), d)
            images.append(inf if den == 0 else F.mul(num, F.inv(den)))
        return Permutation(images)

    return [mobius(1, 1, 0, 1), mobius(scale, 0, 0, 1), mobius(0, F.neg(1), 1, 0)]


def gl32_on_fano() -> list[Permutation]:
    """GL(3, 2) on the seven nonzero vectors of GF(2)^3 (vector v is point v - 1)."""
    F = FiniteField(8)
    singer = Permutation([F.mul(v, 2) - 1 for v in range(1, 8)])
    transvection = Permutation([(v ^ 2 if v & 1 else v) - 1 for v in range(1, 8)])
    return [singer, transvection]


def sl23() -> list[Permutation]:
    """SL(2, 3) on the eight nonzero vectors of GF(3)^2."""
    vectors = [v for v in product(range(3), repeat=2) if v != (0, 0)]
    index = {v: i for i, v in enumerate(vectors)}

    def matrix(a, b, c, d):
        return Permutation([index[((a * x + b * y) % 3, (c * x + d * y) % 3)] for x, y in vectors])

    return [matrix(1, 1, 0, 1), matrix(0, 2, 1, 0)]


def unitary_u34() -> tuple[list[Permutation], Permutation]:
    """U(3, 4) on its 65 isotropic points, plus the field involution x -> x^4.

    The Hermitian form is x0*y2^4 + x1*y1^4 + x2*y0^4 over GF(16).
    """
    F = FiniteField(16)

    def bar(x):
        return F.pow(x, 4)

    def herm(x, y):
        return F.add(F.add(F.mul(x[0], bar(y[2])), F.mul(x[1], bar(y[1]))), F.mul(x[2], bar(y[0])))

    def normalize(v):
        lead = next(c for c in v if c)
        s = F.inv(lead)
        return tuple(F.mul(s, c) for c in v)

    points = sorted({normalize(v) for v in product(range(16), repeat=3) if any(v) and herm(v, v) == 0})
    index = {v: i for i, v in enumerate(points)}

    def apply(m, v):
        return tuple(
            F.add(F.add(F.mul(m[i][0], v[0]), F.mul(m[i][1], v[1])), F.mul(m[i][2], v[2])) for i in range(3)
        )

    basis = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]

    def unitary(m):
        cols = [apply(m, e) for e in basis]
        return all(herm(cols[i], cols[j]) == herm(basis[i], basis[j]) for i in range(3) for j in range(3))

    def as_perm(m):
        return Permutation([index[normalize(apply(m, v))] for v in points])

    candidates = []
    for a, b, c in product(range(16), repeat=3):
        upper = ((1, a, b), (0, 1, c), (0, 0, 1))
        lower = ((1, 0, 0), (a, 1, 0), (b, c, 1))
        for m in (upper, lower):
            if m != ((1, 0, 0), (0, 1, 0), (0, 0, 1)) and unitary(m):
                candidates.append(m)
    target = 16**3 * (16**3 + 1) * (16 - 1) // 16  # q^3 (q^3 + 1)(q^2 - 1) at q = 4
    gens: list[Permutation] = []
    order = 1
    for m in candidates:
        g = as_perm(m)
        trial = Group(gens + [g], len(points)).order
        if trial > order:
            gens.append(g)
            order = trial
        if order == target:
            break
    frobenius = Permutation([index[normalize(tuple(bar(c) for c in v))] for v in points])
    return gens, frobenius


# -- small standard groups --------------------------------------------------------


def cyclic(n: int) -> list[Permutation]:
    return [Permutation([(i + 1) % n for i in range(n)])]


def dihedral(n: int) -> list[Permutation]:
    """Dihedral group of order 2n on n points."""
    return [Permutation([(i + 1) % n for i in range(n)]), Permutation([(-i) % n for i in range(n)])]


def symmetric(n: int) -> list[Permutation]:
    return [Permutation([(i + 1) % n for i in range(n)]), Permutation([1, 0] + list(range(2, n)))]


def alternating(n: int) -> list[Permutation]:
    if n % 2:
        return [Permutation([(i + 1) % n for i in range(n)]), Permutation.from_cycles(n, [(n - 3, n - 2, n - 1)])]
    return [Permutation.from_cycles(n, [(0, 1, 2)]), Permutation([0] + [1 + i % (n - 1) for i in range(1, n)])]


def quaternion() -> list[Permutation]:
    return [Permutation.parse("(1 2 3 4)(5 6 7 8)", 8), Permutation.parse("(1 5 3 7)(2 8 4 6)", 8)]


# -- corpus text --------------------------------------------------------------------


def _block(name: str, gens: list[Permutation], degree: int | None = None) -> list[str]:
    degree = degree if degree is not None else gens[0].degree
    return [f"group {name} degree {degree}"] + [f"gen {g}" for g in gens]


def default_corpus_text() -> str:
    lines = ["format corpus v1", "# Shipped corpus.  Provenance of each entry is given in the comment above it."]

    def add(comment: str, block: list[str], entry: bool = True, stretch: bool = False):
        lines.append(f"# {comment}")
        lines.extend(block)
        name = block[0].split()[1]
        if entry:
            lines.append(f"entry {name}")
        if stretch:
            lines.append(f"stretch {name}")

    add("cyclic group of order 6, regular action", _block("C6", cyclic(6)))
    add("cyclic group of order 9, regular action", _block("C9", cyclic(9)))
    add("dihedral group of order 8 on the square", _block("D8", dihedral(4)))
    add("dihedral group of order 10 on the pentagon", _block("D10", dihedral(5)))
    add("dihedral group of order 12 on the hexagon", _block("D12", dihedral(6)))
    for n in (3, 4, 5, 6):
        add(f"symmetric group S{n}, natural action", _block(f"S{n}", symmetric(n)))
    for n in (4, 5, 6):
        add(f"alternating group A{n}, natural action", _block(f"A{n}", alternating(n)))
    add("SL(2,3) on the eight nonzero vectors of GF(3)^2", _block("SL2_3", sl23()))
    add("quaternion group of order 8, regular action", _block("Q8", quaternion()))
    add("PSL(2,7) = GL(3,2) on the seven points of the Fano plane", _block("PSL2_7", gl32_on_fano()))
    add("PSL(2,8) on the projective line over GF(8)", _block("PSL2_8", psl2(8)))
    lines.append("# building blocks for products (not corpus entries themselves)")
    lines.extend(_block("C3", cyclic(3)))
    lines.extend(_block("C2", cyclic(2)))
    lines.extend(_block("C3xC3xC3", [Permutation.from_cycles(9, [(3 * k, 3 * k + 1, 3 * k + 2)]) for k in range(3)]))
    add("C3 x S3 as a direct product on 3 + 3 points", ["group C3xS3", "product direct C3 S3"])
    add(
        "(C3 x C3 x C3) : C3 with C3 cycling the coordinates, regular on the normal factor",
        ["group C3wrC3", "product semidirect C3xC3xC3 C3 action (4 5 6);(7 8 9);(1 2 3)"],
    )
    swap = Permutation.parse("(1 4)(2 5)(3 6)", 6)
    s3s3 = [Permutation.parse(c, 6) for c in ("(1 2 3)", "(1 2)", "(4 5 6)", "(4 5)")]
    add("S3 wr C2: index-2 extension of S3 x S3, trivial intersection at p=2", _block("S3wrC2", s3s3 + [swap]))
    lines.extend(_block("S3_left", s3s3[:2], 6))
    lines.extend(_block("S3_right", s3s3[2:], 6))
    ex2a = [Permutation.parse(c, 10) for c in ("(1 2 3 4 5)", "(3 4 5)", "(6 7 8 9 10)", "(8 9 10)", "(1 2)(6 7)")]
    add(
        "(A5 x A5) : C2, the involution acting on both factors as conjugation by (1 2)",
        _block("Ex2a", ex2a),
    )
    lines.extend(_block("A5_left", ex2a[:2], 10))
    lines.extend(_block("A5_right", ex2a[2:4], 10))
    add("stretch: PSL(2,11) on the projective line over GF(11)", _block("PSL2_11", psl2(11)), entry=False, stretch=True)
    u_gens, frob = unitary_u34()
    a5 = [Permutation.parse(c, 5) for c in ("(1 2 3 4 5)", "(3 4 5)")]
    ex2b = [Permutation(list(g.images) + list(range(65, 70))) for g in u_gens]
    ex2b += [Permutation(list(range(65)) + [65 + x for x in g.images]) for g in a5]
    ex2b.append(Permutation(list(frob.images) + [66, 65, 67, 68, 69]))
    add(
        "stretch: (U3(4) x A5) : C2, field involution on U3(4) times (1 2) on A5; order 7488000",
        _block("Ex2b", ex2b),
        entry=False,
        stretch=True,
    )
    lines.append("tag S3wrC2 ti-extension S3_left S3_right p=2")
    lines.append("tag Ex2a ti-extension A5_left A5_right p=2")
    return "\n".join(lines) + "\n"
