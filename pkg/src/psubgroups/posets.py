"""Posets of p-subgroups ordered by inclusion, with the conjugation action.

Elements of every :class:`SubgroupPoset` are kept sorted by
``(order, element IDs)``.  That order is a linear extension of inclusion, so
chains of the poset are increasing index tuples.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import group as grp
from .errors import CapacityError, ContainmentError, InvalidArgumentError
from .group import Group, Subgroup, iter_bits, mask_from_ids
from .perm import format_cycles

DEFAULT_SYLOW_BOUND = 256
KINDS = ("Sp", "Ap", "Bp", "iSp", "iAp")


class SubgroupPoset:
    def __init__(self, ambient: Group, prime: int, elements: Sequence[Subgroup], kind: str = "custom"):
        self.ambient = ambient
        self.prime = prime
        self.kind = kind
        uniq = {E.mask: E for E in elements}
        self.elements: list[Subgroup] = sorted(uniq.values(), key=Subgroup.sort_key)
        self._index = {E.mask: i for i, E in enumerate(self.elements)}
        self.up = self._strict_upper_sets()
        self._action = None

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __repr__(self) -> str:
        return f"<SubgroupPoset {self.kind} p={self.prime} size={len(self)}>"

    def _strict_upper_sets(self) -> list[int]:
        containing: dict[int, int] = {}
        for i, E in enumerate(self.elements):
            bit = 1 << i
            for x in E.elements[1:]:
                containing[x] = containing.get(x, 0) | bit
        full = (1 << len(self.elements)) - 1
        up = []
        for i, E in enumerate(self.elements):
            m = full
            for x in E.elements[1:]:
                m &= containing[x]
                if m == 1 << i:
                    break
            up.append(m & ~(1 << i))
        return up

    def index(self, H: Subgroup) -> int:
        try:
            return self._index[H.mask]
        except KeyError:
            raise InvalidArgumentError("subgroup is not an element of the poset") from None

    def __contains__(self, H: Subgroup) -> bool:
        return H.mask in self._index

    @property
    def masks(self) -> list[int]:
        return [E.mask for E in self.elements]

    def covers(self) -> list[tuple[int, int]]:
        """Covering pairs ``(i, j)`` with element i covered by element j."""
        out = []
        for i, m in enumerate(self.up):
            above = 0
            for j in iter_bits(m):
                above |= self.up[j]
            out.extend((i, j) for j in iter_bits(m & ~above))
        return out

    def maximal(self) -> list[int]:
        return [i for i, m in enumerate(self.up) if m == 0]

    def height(self) -> int:
        """Longest chain length minus one; -1 when empty."""
        longest = [0] * len(self)
        for i in reversed(range(len(self))):
            longest[i] = 1 + max((longest[j] for j in iter_bits(self.up[i])), default=0)
        return max(longest, default=0) - 1

    def subposet(self, indices, kind: str = "custom") -> SubgroupPoset:
        return SubgroupPoset(self.ambient, self.prime, [self.elements[i] for i in indices], kind)

    @property
    def action(self) -> list[tuple[int, ...]]:
        """Per ambient generator, the induced permutation of element indices."""
        if self._action is None:
            table = self.ambient.table
            perms = []
            for g in table.generator_ids:
                images = []
                for E in self.elements:
                    img = mask_from_ids(table.conj_ids(E.ids, g), table.size)
                    j = self._index.get(img)
                    if j is None:
                        raise InvalidArgumentError("poset is not invariant under conjugation")
                    images.append(j)
                perms.append(tuple(images))
            self._action = perms
        return self._action

    def is_invariant(self) -> bool:
        """Every generator permutes the elements and preserves covering pairs."""
        try:
            action = self.action
        except InvalidArgumentError:
            return False
        cov = set(self.covers())
        for perm in action:
            if sorted(perm) != list(range(len(self))):
                return False
            if {(perm[i], perm[j]) for i, j in cov} != cov:
                return False
        return True

    def to_text(self) -> str:
        lines = [
            "format poset v1",
            f"poset kind {self.kind} prime {self.prime} group {self.ambient.name or '-'} elements {len(self)}",
        ]
        for i, E in enumerate(self.elements):
            gens = " ; ".join(format_cycles(g.cycles()) for g in E.generators) or "()"
            lines.append(f"el {i} order {E.order} gens {gens}")
        for i, j in self.covers():
            lines.append(f"cov {i} {j}")
        if self.kind != "custom" or self.elements:
            try:
                action = self.action
            except InvalidArgumentError:
                action = []
            for k, perm in enumerate(action):
                lines.append(f"act {k} " + " ".join(map(str, perm)))
        return "\n".join(lines) + "\n"


# -- construction -------------------------------------------------------------

@dataclass
class _PData:
    """Cached p-local data of one group at one prime."""
    sylow: Subgroup
    classes: list = field(default_factory=list)     # list of ConjugacyOrbit
    posets: dict = field(default_factory=dict)


def _pdata(G: Group, p: int, sylow_bound: int) -> _PData:
    key = ("pdata", p)
    data = G.cache.get(key)
    if data is None:
        P = grp.sylow_subgroup(G, p)
        data = _PData(P)
        G.cache[key] = data
    if data.sylow.order > sylow_bound:
        raise CapacityError(
            f"Sylow {p}-subgroup of order {data.sylow.order} exceeds the subgroup-enumeration bound {sylow_bound}",
            bound="sylow-bound",
        )
    return data


def _local_table(P: Subgroup) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Multiplication table, inverses and p-th powers in local indices of P."""
    table = P.table
    ids = P.ids
    m = len(ids)
    rows = table.rows[ids]
    prods = rows[:, None, :]
    # (a then b)[i] = b[a[i]]
    stacked = np.take_along_axis(
        np.broadcast_to(rows[None, :, :], (m, m, rows.shape[1])),
        np.broadcast_to(rows[:, None, :], (m, m, rows.shape[1])),
        axis=2,
    )
    del prods
    glob = table.ids(stacked.reshape(-1, rows.shape[1])).reshape(m, m)
    local = np.searchsorted(ids, glob)
    inv = np.searchsorted(ids, table.inv[ids])
    return local, inv, ids


def subgroups_of_p_group(P: Subgroup, p: int) -> list[Subgroup]:
    """All nontrivial subgroups of a p-group, by extension through normalizers."""
    if P.order == 1:
        return []
    mult, inv, ids = _local_table(P)
    m = len(ids)
    idx = np.arange(m)
    conj = mult[mult[inv[:, None], idx[None, :]], idx[:, None]]  # conj[x, a] = x^-1 a x
    power = np.zeros(m, dtype=np.int64)
    for _ in range(p):
        power = mult[power, idx]
    found: dict[bytes, tuple[np.ndarray, list[int]]] = {}
    layer = []
    for a in range(1, m):
        if power[a] != 0:
            continue
        cyc = [0]
        x = a
        while x != 0:
            cyc.append(x)
            x = mult[x, a]
        members = np.unique(cyc)
        key = members.tobytes()
        if key not in found:
            found[key] = (members, [a])
            layer.append(key)
    while layer:
        nxt = []
        for key in layer:
            members, gens = found[key]
            inside = np.zeros(m, dtype=bool)
            inside[members] = True
            norm = inside[conj[:, members]].all(axis=1)
            cand = np.flatnonzero(norm & ~inside & inside[power])
            covered = np.zeros(m, dtype=bool)
            for x in cand:
                if covered[x]:
                    continue
                block = [members]
                y = x
                while not inside[y]:
                    block.append(mult[members, y])
                    y = mult[y, x]
                new = np.unique(np.concatenate(block))
                covered[new] = True
                nkey = new.tobytes()
                if nkey not in found:
                    found[nkey] = (new, gens + [int(x)])
                    nxt.append(nkey)
        layer = nxt
    size = P.table.size
    out = [
        Subgroup(P.ambient, mask_from_ids(ids[members], size), [int(ids[g]) for g in gens])
        for members, gens in found.values()
    ]
    return sorted(out, key=Subgroup.sort_key)


def _sp_classes(G: Group, p: int, data: _PData) -> list:
    if not data.classes:
        seen: set[int] = set()
        for Q in subgroups_of_p_group(data.sylow, p):
            if Q.mask in seen:
                continue
            orbit = grp.conjugacy_orbit(G.whole, Q)
            seen.update(M.mask for M in orbit.members)
            data.classes.append(orbit)
    return data.classes


def _elementary_abelian_subgroups(G: Group, p: int) -> list[Subgroup]:
    table = G.table
    xs = np.flatnonzero(table.element_orders == p)
    if xs.size == 0:
        return []
    rows = table.rows[xs]
    position = {int(x): k for k, x in enumerate(xs)}
    commute = []
    for x in xs:
        xr = table.rows[x]
        same = (xr[rows] == rows[:, xr]).all(axis=1)
        commute.append(int.from_bytes(np.packbits(same, bitorder="little").tobytes(), "little"))
    found: dict[int, Subgroup] = {}
    layer = []
    for x in xs:
        x = int(x)
        cyc = table.closure([x])
        if cyc not in found:
            found[cyc] = Subgroup(G, cyc, [x])
            layer.append(found[cyc])
    while layer:
        nxt = []
        for E in layer:
            cand = (1 << len(xs)) - 1
            for g in E.generator_ids:
                cand &= commute[position[g]]
            e_ids = E.ids
            for x in e_ids[1:]:
                cand &= ~(1 << position[int(x)])
            covered = 0
            for k in iter_bits(cand):
                if covered >> k & 1:
                    continue
                y = int(xs[k])
                parts = [e_ids]
                yk = y
                while yk != 0:
                    parts.append(table.mul_many(e_ids, yk))
                    yk = table.mul(yk, y)
                new_ids = np.unique(np.concatenate(parts))
                for z in new_ids[1:]:
                    covered |= 1 << position[int(z)]
                mask = mask_from_ids(new_ids, table.size)
                if mask not in found:
                    found[mask] = Subgroup(G, mask, list(E.generator_ids) + [y])
                    nxt.append(found[mask])
        layer = nxt
    return list(found.values())


def is_radical(G: Group, Q: Subgroup, p: int, N: Subgroup | None = None) -> bool:
    """Q == O_p(N_G(Q))."""
    if N is None:
        N = grp.normalizer(G, Q)
    S = grp._grow_p_subgroup(N, Q, p)
    mask = S.mask
    if mask == Q.mask:
        return True
    for T in grp.conjugacy_orbit(N, S, with_stabilizer=False).members:
        mask &= T.mask
        if mask == Q.mask:
            return True
    return mask == Q.mask


def build_poset(G: Group, p: int, kind: str = "Sp", sylow_bound: int = DEFAULT_SYLOW_BOUND) -> SubgroupPoset:
    p = grp._check_prime(p)
    if kind not in KINDS:
        raise InvalidArgumentError(f"unknown poset kind {kind!r}; expected one of {', '.join(KINDS)}")
    if G.order % p:
        return SubgroupPoset(G, p, [], kind)
    data = _pdata(G, p, sylow_bound)
    if kind in data.posets:
        return data.posets[kind]
    if kind == "Sp":
        members = [M for orbit in _sp_classes(G, p, data) for M in orbit.members]
        X = SubgroupPoset(G, p, members, "Sp")
    elif kind == "Ap":
        X = SubgroupPoset(G, p, _elementary_abelian_subgroups(G, p), "Ap")
    elif kind == "Bp":
        members = []
        for orbit in _sp_classes(G, p, data):
            Q = orbit.members[0]
            N = grp._subgroup_from_schreier(G.whole, G.order // len(orbit.members), orbit.schreier)
            if is_radical(G, Q, p, N):
                members.extend(orbit.members)
        X = SubgroupPoset(G, p, members, "Bp")
    else:
        X = i_reduction(build_poset(G, p, kind[1:], sylow_bound))
        X.kind = kind
    data.posets[kind] = X
    return X


def i_reduction(X: SubgroupPoset) -> SubgroupPoset:
    """Nontrivial intersections of nonempty sets of maximal elements."""
    tops = [X.elements[i].mask for i in X.maximal()]
    found = set(tops)
    frontier = list(tops)
    while frontier:
        nxt = []
        for a in frontier:
            for b in tops:
                c = a & b
                if c != 1 and c not in found:
                    found.add(c)
                    nxt.append(c)
        frontier = nxt
    members = []
    for mask in found:
        i = X._index.get(mask)
        if i is None:
            raise InvalidArgumentError("intersection of maximal elements is not in the poset")
        members.append(X.elements[i])
    kind = {"Sp": "iSp", "Ap": "iAp"}.get(X.kind, "custom")
    return SubgroupPoset(X.ambient, X.prime, members, kind)


def poset_height(X: SubgroupPoset) -> int:
    return X.height()


def fixed_subposet(X: SubgroupPoset, K) -> SubgroupPoset:
    """Elements normalized by every generator of K."""
    _, K = grp._within(X.ambient, K)
    table = X.ambient.table
    keep = []
    for i, E in enumerate(X.elements):
        if all(mask_from_ids(table.conj_ids(E.ids, k), table.size) == E.mask for k in K.generator_ids):
            keep.append(i)
    return X.subposet(keep, "fixed")


# -- p-rank and the reduction lemmas --------------------------------------------

@dataclass
class RankWitness:
    rank: int
    witness: Subgroup
    complement: Subgroup | None = None     # the A attaining the max in an extension evaluation
    centralizer_rank: int | None = None    # m_p(C_N(A)) for that A


def _rank(E: Subgroup, p: int) -> int:
    return grp.elementary_rank(E, p)


def p_rank(G: Group, p: int, sylow_bound: int = DEFAULT_SYLOW_BOUND) -> RankWitness:
    A = build_poset(G, p, "Ap", sylow_bound)
    if not len(A):
        return RankWitness(0, G.trivial)
    top = A.elements[-1].order
    best = next(E for E in A.elements if E.order == top)
    return RankWitness(_rank(best, p), best)


def _orbit_labels(X: SubgroupPoset) -> list[int]:
    label = list(range(len(X)))

    def find(i):
        while label[i] != i:
            label[i] = label[label[i]]
            i = label[i]
        return i

    for perm in X.action:
        for i, j in enumerate(perm):
            a, b = find(i), find(j)
            if a != b:
                label[max(a, b)] = min(a, b)
    return [find(i) for i in range(len(X))]


def _max_rank_inside(X: SubgroupPoset, mask: int, p: int) -> tuple[int, Subgroup | None]:
    for E in reversed(X.elements):
        if E.mask & mask == E.mask:
            return _rank(E, p), E
    return 0, None


def lemmaprank_eval(G: Group, N: Subgroup, p: int, sylow_bound: int = DEFAULT_SYLOW_BOUND) -> RankWitness:
    """max over elementary abelian A with A meet N trivial of m_p(C_N(A)) + m_p(A)."""
    p = grp._check_prime(p)
    _, N = grp._within(G, N)
    if not grp.is_normal(G, N):
        raise InvalidArgumentError("N is not normal in G")
    A_p = build_poset(G, p, "Ap", sylow_bound)
    labels = _orbit_labels(A_p) if len(A_p) else []
    best: tuple[int, int, Subgroup | None, Subgroup] | None = None
    m_n, E_n = _max_rank_inside(A_p, N.mask, p)
    best = (m_n, m_n, E_n, G.trivial)
    for i, A in enumerate(A_p.elements):
        if labels[i] != i or A.mask & N.mask != 1:
            continue
        C = grp.centralizer(G, A).mask & N.mask
        m_c, E_c = _max_rank_inside(A_p, C, p)
        value = m_c + _rank(A, p)
        if value > best[0]:
            best = (value, m_c, E_c, A)
    value, m_c, E_c, A = best
    gens = list(A.generator_ids) + (list(E_c.generator_ids) if E_c is not None else [])
    witness = Subgroup.generated(G, gens)
    return RankWitness(value, witness, A, m_c)


@dataclass
class RetractResult:
    hypothesis_holds: bool
    violating: Subgroup | None
    reduced: SubgroupPoset | None
    schedule: list[Subgroup] | None
    ap: SubgroupPoset

    def upward_links(self, H: Subgroup) -> list[SubgroupPoset]:
        """For each E_i of the schedule, the poset A_p(G)_{>E_i} restricted to
        subgroups meeting H nontrivially."""
        X = self.ap
        meets = 0
        for j, E in enumerate(X.elements):
            if E.mask & H.mask != 1:
                meets |= 1 << j
        links = []
        for E in self.schedule or []:
            i = X.index(E)
            links.append(X.subposet(list(iter_bits(X.up[i] & meets)), "link"))
        return links


def retract_reduce(G: Group, H, p: int, sylow_bound: int = DEFAULT_SYLOW_BOUND) -> RetractResult:
    p = grp._check_prime(p)
    C, H = grp._within(G, H)
    A_p = build_poset(G, p, "Ap", sylow_bound)
    outside = [i for i, E in enumerate(A_p.elements) if E.mask & H.mask == 1]
    normal = grp.is_normal(C, H)
    labels = _orbit_labels(A_p) if normal and outside else list(range(len(A_p)))
    checked: dict[int, bool] = {}
    for i in outside:
        rep = labels[i]
        if rep not in checked:
            E = A_p.elements[rep]
            cent = Subgroup(G, grp.centralizer(G, E).mask & H.mask)
            checked[rep] = not grp.p_core(cent, p).is_trivial()
        if not checked[rep]:
            return RetractResult(False, A_p.elements[i], None, None, A_p)
    inside = [i for i, E in enumerate(A_p.elements) if E.mask & H.mask == E.mask]
    reduced = A_p.subposet(inside, "Ap")
    schedule = [A_p.elements[i] for i in outside]
    return RetractResult(True, None, reduced, schedule, A_p)
