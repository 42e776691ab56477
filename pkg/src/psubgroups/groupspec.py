"""Line-oriented group specifications, products and the corpus file format.

A group file looks like::

    format group v1
    # the alternating group on five points
    group A5 degree 5
    gen (1 2 3 4 5)
    gen (3 4 5)
    group C2 degree 2
    gen (1 2)
    group A5xA5
    product direct A5 A5

The last group block is the subject of a file.  Semidirect products list,
for every generator of the acting group, the images of the generators of
the normal group: ``action img;img | img;img``.

A corpus file has ``format corpus v1`` and additionally ``entry <name>``,
``stretch <name>`` and ``tag <name> ti-extension <L1> <L2> p=<p>`` lines.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import CapacityError, DegreeMismatchError, InvalidActionError, InvalidSpecError, ParseError
from .group import DEFAULT_ELEMENT_BOUND, Group
from .perm import Permutation, format_cycles, parse_cycle_notation

CONSTRUCTIONS = ("explicit", "direct", "semidirect")


@dataclass
class GroupSpec:
    name: str
    degree: int | None = None
    gens: list[str] = field(default_factory=list)
    construction: str = "explicit"
    children: tuple[str, ...] = ()
    action: list[list[str]] = field(default_factory=list)
    line: int = 0

    def lines(self) -> list[str]:
        if self.construction == "explicit":
            out = [f"group {self.name} degree {self.degree}"]
            out.extend(f"gen {g}" for g in self.gens)
            return out
        out = [f"group {self.name}" + (f" degree {self.degree}" if self.degree is not None else "")]
        if self.construction == "direct":
            out.append(f"product direct {self.children[0]} {self.children[1]}")
        else:
            images = " | ".join(";".join(row) for row in self.action)
            out.append(f"product semidirect {self.children[0]} {self.children[1]} action {images}")
        return out


@dataclass
class Tag:
    group: str
    kind: str
    args: tuple[str, ...]
    prime: int


@dataclass
class SpecBook:
    """All groups of one file, in file order, plus corpus directives."""

    kind: str = "group"
    specs: dict[str, GroupSpec] = field(default_factory=dict)
    entries: list[str] = field(default_factory=list)
    stretch: list[str] = field(default_factory=list)
    tags: list[Tag] = field(default_factory=list)
    source: str = ""
    _built: dict = field(default_factory=dict, repr=False)

    @property
    def subject(self) -> str:
        if not self.specs:
            raise InvalidSpecError("file defines no group")
        return list(self.specs)[-1]

    def to_text(self) -> str:
        out = [f"format {self.kind} v1"]
        for spec in self.specs.values():
            out.extend(spec.lines())
        out.extend(f"entry {e}" for e in self.entries)
        out.extend(f"stretch {e}" for e in self.stretch)
        for t in self.tags:
            out.append(f"tag {t.group} {t.kind} {' '.join(t.args)} p={t.prime}")
        return "\n".join(out) + "\n"

    def build(self, name: str | None = None, element_bound: int = DEFAULT_ELEMENT_BOUND) -> Group:
        name = self.subject if name is None else name
        key = (name, element_bound)
        if key not in self._built:
            if name not in self.specs:
                raise InvalidSpecError(f"unknown group {name!r}")
            self._built[key] = build_product(self.specs[name], self, element_bound)
        return self._built[key]


def _canonical_gen(text: str, degree: int, line: int, col: int, source: str) -> str:
    try:
        cycles = parse_cycle_notation(text, line, col)
    except ParseError as exc:
        raise ParseError(exc.message, exc.line, exc.column, source) from None
    for c in cycles:
        for x in c:
            if x >= degree:
                raise ParseError(f"point {x + 1} exceeds degree {degree}", line, col, source)
    return str(Permutation.from_cycles(degree, cycles))


def parse_specs(text: str, source: str = "") -> SpecBook:
    book = SpecBook(source=source)
    current: GroupSpec | None = None
    seen_format = False
    pending_semidirect: list[tuple[GroupSpec, str, int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        stripped = line.strip()
        if not stripped:
            continue
        indent = len(line) - len(line.lstrip())
        word, _, rest = stripped.partition(" ")
        rest = rest.strip()
        after = indent + len(word)
        rest_col = after + (len(line) - after - len(line[after:].lstrip())) + 1

        def fail(msg: str, col: int = indent + 1):
            raise ParseError(msg, lineno, col, source)

        if not seen_format:
            parts = stripped.split()
            if len(parts) != 3 or parts[0] != "format" or parts[2] != "v1" or parts[1] not in ("group", "corpus"):
                fail("expected 'format group v1' or 'format corpus v1'")
            book.kind = parts[1]
            seen_format = True
            continue
        parts = stripped.split()
        if word == "group":
            if len(parts) not in (2, 4) or (len(parts) == 4 and parts[2] != "degree"):
                fail("expected 'group <name> [degree <n>]'")
            name = parts[1]
            if name in book.specs:
                fail(f"group {name!r} defined twice")
            degree = None
            if len(parts) == 4:
                try:
                    degree = int(parts[3])
                except ValueError:
                    fail("degree must be an integer")
                if degree < 1:
                    fail("degree must be positive")
            current = GroupSpec(name, degree, line=lineno)
            book.specs[name] = current
        elif word == "gen":
            if current is None:
                fail("'gen' outside a group block")
            if current.construction != "explicit":
                fail("'gen' in a product group")
            if current.degree is None:
                fail(f"group {current.name!r} needs a degree before generators")
            current.gens.append(_canonical_gen(rest, current.degree, lineno, rest_col, source))
        elif word == "product":
            if current is None:
                fail("'product' outside a group block")
            if current.gens or current.construction != "explicit":
                fail("a group is either explicit or a product")
            if len(parts) >= 2 and parts[1] == "direct":
                if len(parts) != 4:
                    fail("expected 'product direct <A> <B>'")
                for child in parts[2:]:
                    if child not in book.specs or child == current.name:
                        fail(f"unknown group {child!r}")
                current.construction = "direct"
                current.children = (parts[2], parts[3])
            elif len(parts) >= 2 and parts[1] == "semidirect":
                if len(parts) < 5 or parts[4] != "action":
                    fail("expected 'product semidirect <N> <A> action <images>'")
                for child in parts[2:4]:
                    if child not in book.specs or child == current.name:
                        fail(f"unknown group {child!r}")
                current.construction = "semidirect"
                current.children = (parts[2], parts[3])
                col = indent + 1 + stripped.index(" action") + len(" action ")
                pending_semidirect.append((current, stripped[col - indent - 1:], lineno, col))
            else:
                fail("product must be 'direct' or 'semidirect'")
        elif word in ("entry", "stretch"):
            if book.kind != "corpus":
                fail(f"'{word}' is only allowed in corpus files")
            if len(parts) != 2 or parts[1] not in book.specs:
                fail(f"'{word}' needs a defined group name")
            (book.entries if word == "entry" else book.stretch).append(parts[1])
        elif word == "tag":
            if book.kind != "corpus":
                fail("'tag' is only allowed in corpus files")
            if len(parts) != 6 or parts[2] != "ti-extension" or not parts[5].startswith("p="):
                fail("expected 'tag <G> ti-extension <L1> <L2> p=<p>'")
            for child in (parts[1], parts[3], parts[4]):
                if child not in book.specs:
                    fail(f"unknown group {child!r}")
            try:
                prime = int(parts[5][2:])
            except ValueError:
                fail("prime must be an integer")
            book.tags.append(Tag(parts[1], "ti-extension", (parts[3], parts[4]), prime))
        else:
            fail(f"unknown record {word!r}")
    if not seen_format:
        raise ParseError("missing format line", 1, 1, source)
    for spec, images, lineno, col in pending_semidirect:
        spec.action = _parse_action(images, book, spec, lineno, col, source)
    return book


def _parse_action(text: str, book: SpecBook, spec: GroupSpec, line: int, col: int, source: str) -> list[list[str]]:
    normal = book.specs[spec.children[0]]
    degree = _spec_degree(normal, book)
    rows = []
    offset = 0
    for chunk in text.split("|"):
        row = []
        sub_offset = offset
        for piece in chunk.split(";"):
            lead = len(piece) - len(piece.lstrip())
            row.append(_canonical_gen(piece.strip(), degree, line, col + sub_offset + lead, source))
            sub_offset += len(piece) + 1
        rows.append(row)
        offset += len(chunk) + 1
    return rows


def _spec_degree(spec: GroupSpec, book: SpecBook) -> int:
    if spec.degree is not None and spec.construction == "explicit":
        return spec.degree
    if spec.construction == "direct":
        a, b = (book.specs[c] for c in spec.children)
        return _spec_degree(a, book) + _spec_degree(b, book)
    if spec.construction == "semidirect":
        return book.build(spec.children[0]).order
    return spec.degree


def load_specs(path: str | Path) -> SpecBook:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InvalidSpecError(f"cannot read {path}: {exc.strerror}") from None
    return parse_specs(text, str(path))


def default_corpus_path() -> Path:
    return Path(__file__).with_name("data") / "default.corpus"


# -- construction --------------------------------------------------------------


def build_product(spec: GroupSpec, book: SpecBook | None = None, element_bound: int = DEFAULT_ELEMENT_BOUND) -> Group:
    """Realize a spec as a permutation group.

    Direct products act on disjoint point sets.  Semidirect products act on
    the elements of the normal factor: its generators by right
    multiplication, acting generators through the given automorphisms.
    """
    if spec.construction == "explicit":
        if spec.degree is None:
            raise InvalidSpecError(f"group {spec.name!r} has no degree")
        gens = [Permutation.parse(g, spec.degree) for g in spec.gens]
        return Group(gens, spec.degree, name=spec.name, element_bound=element_bound)
    if book is None:
        raise InvalidSpecError("product groups need the file that defines their factors")
    if spec.construction == "direct":
        A = book.build(spec.children[0], element_bound)
        B = book.build(spec.children[1], element_bound)
        return direct_product(A, B, spec.name, element_bound)
    if spec.construction == "semidirect":
        N = book.build(spec.children[0], element_bound)
        A = book.build(spec.children[1], element_bound)
        images = [[Permutation.parse(g, N.degree) for g in row] for row in spec.action]
        return semidirect_product(N, A, images, spec.name, element_bound)
    raise InvalidSpecError(f"unknown construction {spec.construction!r}")


def direct_product(A: Group, B: Group, name: str = "", element_bound: int = DEFAULT_ELEMENT_BOUND) -> Group:
    n = A.degree + B.degree
    gens = []
    for g in A.generators:
        gens.append(Permutation(list(g.images) + list(range(A.degree, n))))
    for g in B.generators:
        gens.append(Permutation(list(range(A.degree)) + [A.degree + x for x in g.images]))
    G = Group(gens, n, name=name, element_bound=element_bound)
    assert G.order == A.order * B.order
    return G


def semidirect_product(N: Group, A: Group, images: list[list[Permutation]], name: str = "",
                       element_bound: int = DEFAULT_ELEMENT_BOUND) -> Group:
    """``N`` by ``A`` where acting generator k sends ``N.generators[i]`` to ``images[k][i]``."""
    if N.order > element_bound:
        raise CapacityError(f"normal factor of order {N.order} exceeds the element bound {element_bound}",
                            bound="element-bound")
    if len(images) != len(A.generators):
        raise InvalidActionError(f"action lists {len(images)} images but the acting group has {len(A.generators)} generators")
    T = N.table
    n_gens = [T.id_of(g.images) for g in N.generators]
    autos = []
    for k, row in enumerate(images):
        if len(row) != len(n_gens):
            raise InvalidActionError(f"acting generator {k + 1}: expected {len(n_gens)} images, got {len(row)}")
        for img in row:
            if img.degree != N.degree:
                raise DegreeMismatchError("action image has the wrong degree")
            if not N.contains(img):
                raise InvalidActionError(f"image {img} is not in the normal factor")
        autos.append(_extend_automorphism(T, n_gens, [T.id_of(g.images) for g in row], k))
    # relations of A: a -> (phi_a, a) must have kernel-free projection onto A
    if A.generators:
        combined = [Permutation(list(phi) + [T.size + x for x in a.images]) for phi, a in zip(autos, A.generators)]
        if Group(combined, T.size + A.degree).order != A.order:
            raise InvalidActionError("the action does not respect the relations of the acting group")
    gens = [Permutation(T.mul_many(np.arange(T.size), g).tolist()) for g in n_gens]
    gens.extend(Permutation(phi) for phi in autos)
    return Group(gens, T.size, name=name, element_bound=element_bound)


def _extend_automorphism(T, n_gens: list[int], targets: list[int], k: int) -> list[int]:
    """Extend generator images to a map on all elements, checking it is an automorphism."""
    phi = [-1] * T.size
    phi[0] = 0
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for g, t in zip(n_gens, targets):
                y = T.mul(x, g)
                v = T.mul(phi[x], t)
                if phi[y] == -1:
                    phi[y] = v
                    nxt.append(y)
                elif phi[y] != v:
                    raise InvalidActionError(f"acting generator {k + 1} does not induce a homomorphism")
        frontier = nxt
    if len(set(phi)) != T.size or -1 in phi:
        raise InvalidActionError(f"acting generator {k + 1} does not induce a bijection")
    return phi


def explicit_spec(name: str, G: Group) -> GroupSpec:
    return GroupSpec(name, G.degree, [str(g) for g in G.generators])


def format_gens(gens) -> list[str]:
    return [format_cycles(g.cycles()) for g in gens]
