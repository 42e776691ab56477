"""Exact permutation group arithmetic.

A :class:`Group` always carries a deterministic Schreier-Sims stabilizer chain
(order and membership for any desk-scale group).  Below the element bound the
group is also *materialized*: every element gets a dense integer ID (its rank
in lexicographic order of image tuples, so the identity is ID 0) and
subgroups are stored as Python-int bitsets over those IDs.  All poset work
happens on materialized groups.
"""

from __future__ import annotations

from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import (
    CapacityError,
    ContainmentError,
    DegreeMismatchError,
    InvalidArgumentError,
    InvalidSpecError,
)
from .perm import Permutation

DEFAULT_ELEMENT_BOUND = 200_000
_CONJ_CACHE_LIMIT = 256


def is_prime(p) -> bool:
    if not isinstance(p, (int, np.integer)) or p < 2:
        return False
    p = int(p)
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def prime_divisors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def p_part(n: int, p: int) -> int:
    q = 1
    while n % p == 0:
        n //= p
        q *= p
    return q


def _check_prime(p) -> int:
    if not is_prime(p):
        raise InvalidArgumentError(f"{p} is not a prime")
    return int(p)


# -- tuple-level helpers used by the stabilizer chain -------------------------

def _mul(a: tuple, b: tuple) -> tuple:
    return tuple(b[x] for x in a)


def _inv(a: tuple) -> tuple:
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


class StabChain:
    """Deterministic Schreier-Sims base and strong generating set."""

    def __init__(self, degree: int, gens: Iterable[tuple]):
        self.degree = degree
        self.identity = tuple(range(degree))
        self.base: list[int] = []
        self.level_gens: list[list[tuple]] = []
        self.transversal: list[dict[int, tuple]] = []
        self._build([tuple(g) for g in gens if tuple(g) != self.identity])

    def _new_level(self, g: tuple) -> None:
        b = next(i for i, x in enumerate(g) if i != x)
        self.base.append(b)
        self.level_gens.append([])
        self.transversal.append({b: self.identity})

    def _orbit(self, level: int) -> None:
        b = self.base[level]
        trans = {b: self.identity}
        queue = [b]
        gens = self.level_gens[level]
        for pt in queue:
            u = trans[pt]
            for s in gens:
                img = s[pt]
                if img not in trans:
                    trans[img] = _mul(u, s)
                    queue.append(img)
        self.transversal[level] = trans

    def sift(self, g: tuple, start: int = 0) -> tuple[tuple, int]:
        for level in range(start, len(self.base)):
            x = g[self.base[level]]
            u = self.transversal[level].get(x)
            if u is None:
                return g, level
            g = _mul(g, _inv(u))
        return g, len(self.base)

    def _build(self, gens: list[tuple]) -> None:
        if not gens:
            return
        for g in gens:
            if all(g[b] == b for b in self.base):
                self._new_level(g)
        for level in range(len(self.base)):
            fixed = self.base[:level]
            self.level_gens[level] = [g for g in gens if all(g[b] == b for b in fixed)]
            self._orbit(level)
        i = len(self.base) - 1
        while i >= 0:
            moved = False
            trans = self.transversal[i]
            for pt, u in list(trans.items()):
                for s in self.level_gens[i]:
                    h = _mul(_mul(u, s), _inv(trans[s[pt]]))
                    if h == self.identity:
                        continue
                    residue, j = self.sift(h, i + 1)
                    if residue == self.identity:
                        continue
                    if j == len(self.base):
                        self._new_level(residue)
                    for level in range(i + 1, j + 1):
                        self.level_gens[level].append(residue)
                        self._orbit(level)
                    i = j
                    moved = True
                    break
                if moved:
                    break
            if not moved:
                i -= 1

    @property
    def order(self) -> int:
        out = 1
        for t in self.transversal:
            out *= len(t)
        return out

    def contains(self, g: tuple) -> bool:
        residue, _ = self.sift(tuple(g))
        return residue == self.identity

    def element_rows(self) -> np.ndarray:
        """All elements as rows of an (order x degree) array, unsorted."""
        rows = np.arange(self.degree, dtype=np.int64)[None, :]
        for level in reversed(range(len(self.base))):
            us = [np.asarray(u, dtype=np.int64) for u in self.transversal[level].values()]
            rows = np.concatenate([u[rows] for u in us])
        return rows


# -- bitset helpers -----------------------------------------------------------

def mask_from_ids(ids, size: int) -> int:
    flags = np.zeros(size, dtype=bool)
    flags[np.asarray(ids, dtype=np.int64)] = True
    return int.from_bytes(np.packbits(flags, bitorder="little").tobytes(), "little")


def ids_from_mask(mask: int, size: int) -> np.ndarray:
    raw = np.frombuffer(mask.to_bytes((size + 7) // 8, "little"), dtype=np.uint8)
    return np.flatnonzero(np.unpackbits(raw, bitorder="little")[:size])


def iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class ElementTable:
    """Dense element IDs for a materialized group."""

    def __init__(self, group: Group):
        n = group.degree
        rows = group.chain.element_rows()
        keys = self._keys(rows)
        order = np.argsort(keys, kind="stable")
        self.rows = np.ascontiguousarray(rows[order], dtype=np.int64)
        self.keys = keys[order]
        self.size = len(self.rows)
        self.degree = n
        if self.size != group.order:
            raise RuntimeError("stabilizer chain and element enumeration disagree")
        if not (self.rows[0] == np.arange(n)).all():
            raise RuntimeError("identity is not the lexicographically first element")
        self.inv = self.ids(np.argsort(self.rows, axis=1))
        self.generator_ids = [self.id_of(g.images) for g in group.generators]
        self._conj: dict[int, np.ndarray] = {}

    @staticmethod
    def _keys(rows: np.ndarray) -> np.ndarray:
        arr = np.ascontiguousarray(rows, dtype=">u2")
        return arr.view(np.dtype((np.void, 2 * arr.shape[1]))).ravel()

    def ids(self, rows: np.ndarray, checked: bool = False) -> np.ndarray:
        rows = np.asarray(rows).reshape(-1, self.degree)
        q = self._keys(rows)
        pos = np.searchsorted(self.keys, q)
        if checked:
            pos = np.minimum(pos, self.size - 1)
            ok = self.keys[pos] == q
            return np.where(ok, pos, -1)
        return pos

    def id_of(self, images: Sequence[int]) -> int:
        out = int(self.ids(np.asarray(images)[None, :], checked=True)[0])
        if out < 0:
            raise ContainmentError("element is not in the group")
        return out

    def perm(self, eid: int) -> Permutation:
        return Permutation._trusted(tuple(int(x) for x in self.rows[eid]))

    def mul(self, a: int, b: int) -> int:
        """ID of ``a`` followed by ``b``."""
        return int(self.ids(self.rows[b][self.rows[a]][None, :])[0])

    def mul_many(self, a_ids: np.ndarray, b: int) -> np.ndarray:
        return self.ids(self.rows[b][self.rows[a_ids]])

    def left_mul_many(self, a: int, b_ids: np.ndarray) -> np.ndarray:
        rows = self.rows[b_ids]
        return self.ids(np.take_along_axis(rows, np.broadcast_to(self.rows[a], rows.shape), axis=1))

    def conj_table(self, t: int) -> np.ndarray:
        """``table[x]`` is the ID of ``t^-1 x t``."""
        table = self._conj.get(t)
        if table is None:
            rows = self.rows
            tinv = self.rows[self.inv[t]]
            conj = self.rows[t][rows[:, tinv]]
            table = self.ids(conj)
            if len(self._conj) >= _CONJ_CACHE_LIMIT:
                self._conj.pop(next(iter(self._conj)))
            self._conj[t] = table
        return table

    def conj_ids(self, ids: np.ndarray, t: int) -> np.ndarray:
        if self.size <= 20_000 or t in self._conj:
            return self.conj_table(t)[ids]
        tinv = self.rows[self.inv[t]]
        return self.ids(self.rows[t][self.rows[ids][:, tinv]])

    def power_rows(self, ids: np.ndarray, k: int) -> np.ndarray:
        rows = self.rows[ids]
        out = np.broadcast_to(np.arange(self.degree), rows.shape).copy()
        for _ in range(k):
            out = np.take_along_axis(rows, out, axis=1)
        return out

    def power_ids(self, ids: np.ndarray, k: int) -> np.ndarray:
        return self.ids(self.power_rows(ids, k))

    def is_identity_rows(self, rows: np.ndarray) -> np.ndarray:
        return (rows == np.arange(self.degree)).all(axis=1)

    @cached_property
    def element_orders(self) -> np.ndarray:
        orders = np.ones(self.size, dtype=np.int64)
        current = self.rows.copy()
        done = self.is_identity_rows(current)
        k = 1
        while not done.all():
            k += 1
            current = np.take_along_axis(self.rows, current, axis=1)
            hit = self.is_identity_rows(current) & ~done
            orders[hit] = k
            done |= hit
        return orders

    def closure(self, gen_ids: Sequence[int], start: int = 1) -> int:
        """Bitset of the subgroup generated by ``gen_ids`` (and ``start``)."""
        gens = [int(g) for g in gen_ids if int(g) != 0]
        seen = np.zeros(self.size, dtype=bool)
        seen[0] = True
        if start != 1:
            seen[ids_from_mask(start, self.size)] = True
        if not gens:
            return mask_from_ids(np.flatnonzero(seen), self.size)
        frontier = np.flatnonzero(seen)
        gen_rows = self.rows[gens]
        while frontier.size:
            cur = self.rows[frontier]
            found = np.unique(np.concatenate([self.ids(g[cur]) for g in gen_rows]))
            found = found[~seen[found]]
            seen[found] = True
            frontier = found
        return mask_from_ids(np.flatnonzero(seen), self.size)


class Group:
    """A permutation group given by generators."""

    def __init__(
        self,
        generators: Sequence[Permutation],
        degree: int | None = None,
        name: str = "",
        element_bound: int = DEFAULT_ELEMENT_BOUND,
    ):
        gens = list(generators)
        if degree is None:
            if not gens:
                raise InvalidSpecError("empty generator list needs an explicit degree")
            degree = gens[0].degree
        for g in gens:
            if g.degree != degree:
                raise DegreeMismatchError(f"generator of degree {g.degree} in a group of degree {degree}")
        if degree < 1:
            raise InvalidSpecError("degree must be positive")
        self.degree = degree
        self.generators = tuple(gens)
        self.name = name
        self.element_bound = element_bound
        self.chain = StabChain(degree, [g.images for g in gens])
        self.order: int = self.chain.order
        # memo for derived structures (posets, families) keyed by the caller
        self.cache: dict = {}

    def __repr__(self) -> str:
        label = self.name or "Group"
        return f"<{label} degree={self.degree} order={self.order}>"

    def contains(self, g: Permutation) -> bool:
        if g.degree != self.degree:
            return False
        return self.chain.contains(g.images)

    __contains__ = contains

    @property
    def is_materialized(self) -> bool:
        return self.order <= self.element_bound

    @cached_property
    def table(self) -> ElementTable:
        if not self.is_materialized:
            raise CapacityError(
                f"group of order {self.order} exceeds the element bound {self.element_bound}",
                bound="element-bound",
            )
        return ElementTable(self)

    @cached_property
    def whole(self) -> Subgroup:
        t = self.table
        return Subgroup(self, (1 << t.size) - 1, tuple(t.generator_ids))

    @cached_property
    def trivial(self) -> Subgroup:
        return Subgroup(self, 1, ())

    def subgroup(self, gens: Iterable[Permutation]) -> Subgroup:
        t = self.table
        ids = []
        for g in gens:
            if g.degree != self.degree:
                raise DegreeMismatchError("generator degree differs from the group degree")
            ids.append(t.id_of(g.images))
        return Subgroup.generated(self, ids)

    def element_id(self, g: Permutation) -> int:
        return self.table.id_of(g.images)


class Subgroup:
    """A subgroup of a materialized ambient group, stored as a bitset of IDs."""

    __slots__ = ("ambient", "mask", "_gens", "_ids", "__weakref__")

    def __init__(self, ambient: Group, mask: int, gens: Sequence[int] | None = None):
        self.ambient = ambient
        self.mask = mask
        self._gens = None if gens is None else tuple(int(g) for g in gens if int(g) != 0)
        self._ids = None

    @classmethod
    def generated(cls, ambient: Group, gen_ids: Sequence[int]) -> Subgroup:
        gen_ids = [int(g) for g in gen_ids]
        return cls(ambient, ambient.table.closure(gen_ids), gen_ids)

    @property
    def table(self) -> ElementTable:
        return self.ambient.table

    @property
    def order(self) -> int:
        return self.mask.bit_count()

    @property
    def ids(self) -> np.ndarray:
        if self._ids is None:
            self._ids = ids_from_mask(self.mask, self.table.size)
        return self._ids

    @property
    def elements(self) -> list[int]:
        return [int(x) for x in self.ids]

    @property
    def generator_ids(self) -> tuple[int, ...]:
        if self._gens is None:
            self._gens = _greedy_generators(self)
        return self._gens

    @property
    def generators(self) -> list[Permutation]:
        return [self.table.perm(g) for g in self.generator_ids]

    def is_trivial(self) -> bool:
        return self.mask == 1

    def has_id(self, eid: int) -> bool:
        return bool(self.mask >> int(eid) & 1)

    def __contains__(self, g) -> bool:
        if isinstance(g, Permutation):
            eid = self.table.ids(np.asarray(g.images)[None, :], checked=True)[0]
            return eid >= 0 and self.has_id(eid)
        return self.has_id(g)

    def __le__(self, other: Subgroup) -> bool:
        return self.mask & other.mask == self.mask

    def __lt__(self, other: Subgroup) -> bool:
        return self.mask != other.mask and self <= other

    def __and__(self, other: Subgroup) -> Subgroup:
        return Subgroup(self.ambient, self.mask & other.mask)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subgroup)
            and other.ambient is self.ambient
            and other.mask == self.mask
        )

    def __hash__(self) -> int:
        return hash(self.mask)

    def sort_key(self) -> tuple:
        return (self.order, tuple(self.elements))

    def conjugate(self, t: int) -> Subgroup:
        """``t^-1 H t`` for an element ID ``t``."""
        ids = self.table.conj_ids(self.ids, t)
        gens = None
        if self._gens is not None:
            gens = self.table.conj_ids(np.asarray(self._gens, dtype=np.int64), t)
        return Subgroup(self.ambient, mask_from_ids(ids, self.table.size), gens)

    def __repr__(self) -> str:
        return f"<Subgroup order={self.order} of {self.ambient!r}>"


def _greedy_generators(H: Subgroup) -> tuple[int, ...]:
    table = H.table
    if H.mask == 1:
        return ()
    if H.mask == (1 << table.size) - 1:
        return tuple(g for g in table.generator_ids if g != 0)
    orders = table.element_orders[H.ids]
    # elements of large order first keeps the list short
    candidates = H.ids[np.lexsort((H.ids, -orders))]
    gens: list[int] = []
    current = 1
    for x in candidates:
        x = int(x)
        if current >> x & 1:
            continue
        gens.append(x)
        current = table.closure(gens)
        if current == H.mask:
            break
    return tuple(gens)


# -- conversions --------------------------------------------------------------

def as_subgroup(G) -> Subgroup:
    if isinstance(G, Subgroup):
        return G
    if isinstance(G, Group):
        return G.whole
    raise InvalidArgumentError(f"expected a Group or Subgroup, got {type(G).__name__}")


def _within(G, H) -> tuple[Subgroup, Subgroup]:
    C = as_subgroup(G)
    if isinstance(H, Group):
        if H is C.ambient:
            H = H.whole
        else:
            H = C.ambient.subgroup(H.generators) if all(C.ambient.contains(g) for g in H.generators) else None
            if H is None:
                raise ContainmentError("subgroup generators are not in the group")
    elif H.ambient is not C.ambient:
        if not all(C.ambient.contains(g) for g in H.generators):
            raise ContainmentError("subgroup generators are not in the group")
        H = C.ambient.subgroup(H.generators)
    if not H <= C:
        raise ContainmentError("subgroup is not contained in the group")
    return C, H


def generate_group(gens: Sequence[Permutation], degree: int | None = None, name: str = "",
                   element_bound: int = DEFAULT_ELEMENT_BOUND) -> Group:
    return Group(gens, degree=degree, name=name, element_bound=element_bound)


# -- orbits of subgroups under conjugation ------------------------------------

class ConjugacyOrbit(NamedTuple):
    members: list[Subgroup]
    transversal: list[int]      # members[i] == members[0].conjugate(transversal[i])
    schreier: list[int]         # generators of the stabilizer of members[0]


def subgroup_key(ids: np.ndarray) -> bytes:
    return np.sort(ids).astype(np.int64).tobytes()


def conjugacy_orbit(C: Subgroup, H: Subgroup, with_stabilizer: bool = True) -> ConjugacyOrbit:
    """Orbit of ``H`` under conjugation by the generators of ``C``."""
    table = C.table
    gens = [g for g in C.generator_ids if g != 0]
    members = [H]
    member_gens = [None if H._gens is None else np.asarray(H._gens, dtype=np.int64)]
    idsets = [np.sort(H.ids)]
    transversal = [0]
    index = {subgroup_key(H.ids): 0}
    schreier: list[int] = []
    seen_schreier = set()
    i = 0
    while i < len(members):
        for s in gens:
            img = np.sort(table.conj_ids(idsets[i], s))
            key = img.astype(np.int64).tobytes()
            j = index.get(key)
            if j is None:
                j = len(members)
                index[key] = j
                idsets.append(img)
                g_img = None if member_gens[i] is None else table.conj_ids(member_gens[i], s)
                member_gens.append(g_img)
                members.append(Subgroup(C.ambient, mask_from_ids(img, table.size), g_img))
                transversal.append(table.mul(transversal[i], s))
            elif with_stabilizer:
                sg = table.mul(table.mul(transversal[i], s), int(table.inv[transversal[j]]))
                if sg != 0 and sg not in seen_schreier:
                    seen_schreier.add(sg)
                    schreier.append(sg)
        i += 1
    return ConjugacyOrbit(members, transversal, schreier)


def _subgroup_from_schreier(C: Subgroup, target: int, schreier: Sequence[int]) -> Subgroup:
    table = C.table
    gens: list[int] = []
    mask = 1
    for sg in schreier:
        if mask.bit_count() == target:
            break
        if mask >> sg & 1:
            continue
        gens.append(sg)
        mask = table.closure(gens)
    if mask.bit_count() != target:
        raise RuntimeError("orbit-stabilizer produced a subgroup of the wrong order")
    return Subgroup(C.ambient, mask, gens)


def normalizer(G, H) -> Subgroup:
    """N_G(H) by orbit-stabilizer on the conjugation action."""
    C, H = _within(G, H)
    if H.mask == C.mask or H.mask == 1:
        return C
    orbit = conjugacy_orbit(C, H)
    return _subgroup_from_schreier(C, C.order // len(orbit.members), orbit.schreier)


def centralizer(G, H) -> Subgroup:
    C, H = _within(G, H)
    table = C.table
    ids = C.ids
    rows = table.rows[ids]
    keep = np.ones(len(ids), dtype=bool)
    for h in H.generator_ids:
        hr = table.rows[h]
        keep &= (hr[rows] == rows[:, hr]).all(axis=1)
    return Subgroup(C.ambient, mask_from_ids(ids[keep], table.size))


def is_normal(G, H) -> bool:
    C, H = _within(G, H)
    table = C.table
    for g in C.generator_ids:
        if mask_from_ids(table.conj_ids(H.ids, g), table.size) != H.mask:
            return False
    return True


def sylow_subgroup(G, p: int) -> Subgroup:
    """A Sylow p-subgroup, grown through successive normalizers."""
    p = _check_prime(p)
    C = as_subgroup(G)
    return _grow_p_subgroup(C, C.ambient.trivial, p)


def _grow_p_subgroup(C: Subgroup, P: Subgroup, p: int) -> Subgroup:
    table = C.table
    target = p_part(C.order, p)
    while P.order < target:
        N = normalizer(C, P)
        ids = N.ids
        powers = table.power_ids(ids, p)
        pmask = P.ids
        in_p = np.isin(powers, pmask)
        outside = ~np.isin(ids, pmask)
        x = int(ids[np.flatnonzero(in_p & outside)[0]])
        gens = list(P.generator_ids) + [x]
        P = Subgroup(C.ambient, table.closure(gens), gens)
    return P


def p_core(G, p: int) -> Subgroup:
    """O_p(G) as the intersection of the conjugates of one Sylow subgroup."""
    p = _check_prime(p)
    C = as_subgroup(G)
    P = sylow_subgroup(C, p)
    if P.order == 1:
        return P
    mask = P.mask
    for Q in conjugacy_orbit(C, P, with_stabilizer=False).members:
        mask &= Q.mask
    return Subgroup(C.ambient, mask)


def is_p_group(H: Subgroup, p: int) -> bool:
    return p_part(H.order, p) == H.order


def is_abelian(H) -> bool:
    H = as_subgroup(H)
    table = H.table
    gens = H.generator_ids
    for i, a in enumerate(gens):
        for b in gens[i + 1:]:
            if table.mul(a, b) != table.mul(b, a):
                return False
    return True


def is_elementary_abelian(H: Subgroup, p: int) -> bool:
    if not is_p_group(H, p):
        return False
    if H.order == 1:
        return True
    return is_abelian(H) and bool((H.table.element_orders[H.ids[1:]] == p).all())


class Omega1(NamedTuple):
    subgroup: Subgroup
    abelian: bool


def omega1(P, p: int) -> Omega1:
    p = _check_prime(p)
    P = as_subgroup(P)
    if not is_p_group(P, p):
        raise InvalidArgumentError(f"subgroup of order {P.order} is not a {p}-group")
    table = P.table
    ids = P.ids
    small = ids[table.is_identity_rows(table.power_rows(ids, p))]
    W = Subgroup.generated(P.ambient, [int(x) for x in small])
    return Omega1(W, is_abelian(W))


def elementary_rank(H: Subgroup, p: int) -> int:
    k = 0
    n = H.order
    while n > 1:
        n //= p
        k += 1
    return k


# -- solvability ----------------------------------------------------------------

def _normal_closure_chain(seeds: list[tuple], over: list[tuple], degree: int) -> tuple[list[tuple], StabChain]:
    gens = [s for s in seeds]
    chain = StabChain(degree, gens)
    changed = True
    while changed:
        changed = False
        for d in list(gens):
            for k in over:
                c = _mul(_mul(_inv(k), d), k)
                if not chain.contains(c):
                    gens.append(c)
                    chain = StabChain(degree, gens)
                    changed = True
    return gens, chain


def derived_series(H) -> list[tuple[list[tuple], int]]:
    """Generators and orders of H = D0 > D1 > ... until it stabilizes."""
    if isinstance(H, Subgroup):
        gens = [g.images for g in H.generators]
        degree = H.ambient.degree
        order = H.order
    else:
        gens = [g.images for g in H.generators]
        degree = H.degree
        order = H.order
    series = [(gens, order)]
    while order > 1:
        commutators = []
        for i, a in enumerate(gens):
            for b in gens[i + 1:]:
                c = _mul(_mul(_inv(a), _inv(b)), _mul(a, b))
                if c != tuple(range(degree)):
                    commutators.append(c)
        new_gens, chain = _normal_closure_chain(commutators, gens, degree)
        new_order = chain.order
        if new_order == order:
            break
        gens, order = new_gens, new_order
        series.append((gens, order))
    return series


def is_solvable(H) -> bool:
    return derived_series(H)[-1][1] == 1


def is_solvable_over(K: Subgroup, H: Subgroup) -> bool:
    """True iff H is normal in K and K/H is solvable."""
    if not H <= K or not is_normal(K, H):
        return False
    table = K.table
    for gens, _ in derived_series(K):
        if all(H.has_id(table.id_of(g)) for g in gens):
            return True
    return False


# -- conjugacy classes and normal subgroups -------------------------------------

def element_classes(G) -> np.ndarray:
    """Label each element of the ambient group by the least ID in its class."""
    C = as_subgroup(G)
    table = C.table
    labels = np.arange(table.size)
    tables = [table.conj_table(g) for g in C.generator_ids]
    while True:
        before = labels.copy()
        for t in tables:
            labels = np.minimum(labels, labels[t])
            np.minimum.at(labels, t, labels)
        if (labels == before).all():
            return labels


def normal_closure(G, gen_ids: Sequence[int]) -> Subgroup:
    C = as_subgroup(G)
    table = C.table
    gens = [int(g) for g in gen_ids if int(g) != 0]
    mask = table.closure(gens)
    while True:
        ids = ids_from_mask(mask, table.size)
        extra = None
        for g in C.generator_ids:
            img = table.conj_ids(ids, g)
            bad = img[~np.isin(img, ids)]
            if bad.size:
                extra = int(bad[0])
                break
        if extra is None:
            return Subgroup(C.ambient, mask, gens)
        gens.append(extra)
        mask = table.closure(gens)


def normal_subgroups(G) -> list[Subgroup]:
    """All normal subgroups, sorted by (order, elements)."""
    C = as_subgroup(G)
    if C.mask != (1 << C.table.size) - 1:
        raise InvalidArgumentError("normal subgroups are only enumerated for whole groups")
    labels = element_classes(C)
    reps = sorted(set(int(x) for x in labels) - {0})
    found = {1: C.ambient.trivial}
    for x in reps:
        N = normal_closure(C, [x])
        found.setdefault(N.mask, N)
    frontier = list(found.values())
    while frontier:
        new = []
        current = list(found.values())
        for A in frontier:
            for B in current:
                if A <= B or B <= A:
                    continue
                J = normal_closure(C, list(A.generator_ids) + list(B.generator_ids))
                if J.mask not in found:
                    found[J.mask] = J
                    new.append(J)
        frontier = new
    return sorted(found.values(), key=Subgroup.sort_key)
