"""Claim checks on (group, prime) instances and corpus aggregation.

Every check returns a :class:`Verdict`.  Statuses judge the claim being
tested: an instance outside a claim's hypotheses is ``verified`` with
``applicable: false`` in its data, never ``refuted``.
"""

from __future__ import annotations

import json
import logging
import sys
import time
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from . import group as grp
from .errors import CapacityError, InvalidArgumentError
from .group import Group, Subgroup, iter_bits, mask_from_ids
from .groupspec import SpecBook, Tag, load_specs, parse_specs
from .posets import (
    DEFAULT_SYLOW_BOUND,
    KINDS,
    SubgroupPoset,
    build_poset,
    i_reduction,
    lemmaprank_eval,
    p_rank,
    retract_reduce,
)
from .topology import HomologyGroups, chain_counts, order_complex, reduced_homology

log = logging.getLogger(__name__)

DEFAULT_FAMILY_BOUND = 20_000
PER_PRIME_CLAIMS = ("brown", "quillen", "invariance", "prank", "lemmaprank", "retract", "normal-stab")
GROUP_CLAIMS = ("separating", "os-index")
ALL_CLAIMS = PER_PRIME_CLAIMS + GROUP_CLAIMS + ("dimension",)
STATUSES = ("verified", "refuted", "skipped-capacity")


@dataclass
class Verdict:
    claim: str
    group: str
    prime: int | None
    status: str
    data: dict = field(default_factory=dict)
    ms: int = 0

    def line(self) -> str:
        p = "-" if self.prime is None else str(self.prime)
        blob = json.dumps(self.data, sort_keys=True, separators=(",", ":"))
        return f"verdict {self.claim} {self.group} p={p} status={self.status} data={blob} ms={self.ms}"

    def as_dict(self) -> dict:
        return {
            "claim": self.claim,
            "group": self.group,
            "prime": self.prime,
            "status": self.status,
            "data": self.data,
            "ms": self.ms,
        }


def _timed(fn: Callable[[], Verdict]) -> Verdict:
    start = time.perf_counter()
    try:
        verdict = fn()
    except CapacityError as exc:
        verdict = Verdict("", "", None, "skipped-capacity", {"bound": exc.bound, "reason": str(exc)})
    verdict.ms = int(round((time.perf_counter() - start) * 1000))
    return verdict


def _name(G: Group) -> str:
    return G.name or f"G{G.order}"


# -- shared cached computations ---------------------------------------------------


def poset(G: Group, p: int, kind: str, sylow_bound: int = DEFAULT_SYLOW_BOUND) -> SubgroupPoset:
    return build_poset(G, p, kind, sylow_bound)


def poset_homology(G: Group, p: int, kind: str, sylow_bound: int = DEFAULT_SYLOW_BOUND) -> HomologyGroups:
    key = ("homology", p, kind)
    if key not in G.cache:
        G.cache[key] = reduced_homology(order_complex(poset(G, p, kind, sylow_bound)))
    return G.cache[key]


def poset_euler(X: SubgroupPoset) -> int:
    f = chain_counts([list(iter_bits(m)) for m in X.up])
    return sum((-1) ** d * n for d, n in enumerate(f))


# -- Brown, Quillen, invariance ------------------------------------------------------


def brown_check(G: Group, p: int, sylow_bound: int = DEFAULT_SYLOW_BOUND) -> Verdict:
    p = grp._check_prime(p)
    X = poset(G, p, "Sp", sylow_bound)
    chi = poset_euler(X)
    modulus = grp.p_part(G.order, p)
    ok = (chi - 1) % modulus == 0
    data = {"chi": chi, "modulus": modulus, "elements": len(X)}
    return Verdict("brown", _name(G), p, "verified" if ok else "refuted", data)


def quillen_check(G: Group, p: int, sylow_bound: int = DEFAULT_SYLOW_BOUND) -> Verdict:
    p = grp._check_prime(p)
    core = grp.p_core(G, p)
    X = poset(G, p, "Ap", sylow_bound)
    H = poset_homology(G, p, "Ap", sylow_bound)
    height = X.height()
    data = {"op_order": core.order, "homology": H.summary(), "height": height}
    if not core.is_trivial():
        ok = len(X) > 0 and H.is_zero()
        data["direction"] = "op-nontrivial-acyclic"
    else:
        ok = not H.is_zero() or H.empty
        data["direction"] = "op-trivial-nonzero"
        if height <= 2:
            data["prank3_case"] = True
    verdict = Verdict("quillen", _name(G), p, "verified" if ok else "refuted", data)
    if not ok:
        data["alert"] = "PROBABLE IMPLEMENTATION BUG: contradicts a proven theorem"
        print(f"!!! quillen check refuted on {_name(G)} p={p}: {data}", file=sys.stderr)
        log.error("quillen check refuted on %s p=%d", _name(G), p)
    return verdict


def invariance_check(G: Group, p: int, sylow_bound: int = DEFAULT_SYLOW_BOUND) -> Verdict:
    p = grp._check_prime(p)
    groups = {k: poset_homology(G, p, k, sylow_bound) for k in KINDS}
    first = groups["Sp"]
    ok = all(h == first for h in groups.values())
    data = {k: groups[k].summary() for k in KINDS}
    data["sizes"] = [len(poset(G, p, k, sylow_bound)) for k in KINDS]
    return Verdict("invariance", _name(G), p, "verified" if ok else "refuted", data)


def prank_check(G: Group, p: int, sylow_bound: int = DEFAULT_SYLOW_BOUND) -> Verdict:
    """p-rank equals height(A_p) + 1, and the containments between the models."""
    p = grp._check_prime(p)
    S = poset(G, p, "Sp", sylow_bound)
    A = poset(G, p, "Ap", sylow_bound)
    B = poset(G, p, "Bp", sylow_bound)
    iS = poset(G, p, "iSp", sylow_bound)
    iA = poset(G, p, "iAp", sylow_bound)
    rank = p_rank(G, p, sylow_bound)
    s_masks = set(S.masks)
    checks = {
        "rank_is_height_plus_one": rank.rank == A.height() + 1,
        "ap_in_sp": set(A.masks) <= s_masks,
        "bp_in_isp": set(B.masks) <= set(iS.masks),
        "isp_in_sp": set(iS.masks) <= s_masks,
        "i_idempotent": set(i_reduction(iS).masks) == set(iS.masks) and set(i_reduction(iA).masks) == set(iA.masks),
        "invariant": all(X.is_invariant() for X in (S, A, B, iS, iA)),
        "witness_rank": rank.witness.order == p**rank.rank,
    }
    ok = all(checks.values())
    data = {"rank": rank.rank, "height_ap": A.height()}
    if not ok:
        data["failed"] = sorted(k for k, v in checks.items() if not v)
    return Verdict("prank", _name(G), p, "verified" if ok else "refuted", data)


# -- the two reduction lemmas ------------------------------------------------------------


def proper_normal_subgroups(G: Group) -> list[Subgroup]:
    return [N for N in grp.normal_subgroups(G) if N.mask != G.whole.mask]


def lemmaprank_check(G: Group, p: int, normals: Sequence[Subgroup] | None = None,
                     sylow_bound: int = DEFAULT_SYLOW_BOUND) -> Verdict:
    p = grp._check_prime(p)
    target = p_rank(G, p, sylow_bound).rank
    normals = proper_normal_subgroups(G) if normals is None else list(normals)
    values = []
    ok = True
    for N in normals:
        w = lemmaprank_eval(G, N, p, sylow_bound)
        values.append([N.order, w.rank, w.complement.order if w.complement is not None else 1])
        ok &= w.rank == target
    data = {"p_rank": target, "evaluations": values}
    return Verdict("lemmaprank", _name(G), p, "verified" if ok else "refuted", data)


def retract_check(G: Group, p: int, subgroups: Sequence[Subgroup] | None = None,
                  sylow_bound: int = DEFAULT_SYLOW_BOUND) -> Verdict:
    """When the hypothesis holds: equal homology and acyclic upward links."""
    p = grp._check_prime(p)
    subgroups = proper_normal_subgroups(G) if subgroups is None else list(subgroups)
    full = poset_homology(G, p, "Ap", sylow_bound)
    rows = []
    ok = True
    witnesses = []
    for H in subgroups:
        _, H = grp._within(G, H)
        result = retract_reduce(G, H, p, sylow_bound)
        if not result.hypothesis_holds:
            rows.append([H.order, "hypothesis-fails", result.violating.order])
            continue
        reduced = reduced_homology(order_complex(result.reduced))
        links = result.upward_links(H)
        if grp.is_normal(G, H):
            labels = _orbit_labels_for(result.ap)
            reps = {labels[result.ap.index(E)] for E in result.schedule}
            links = [L for E, L in zip(result.schedule, links) if result.ap.index(E) in reps]
        link_ok = all(reduced_homology(order_complex(L)).is_zero() and len(L) > 0 for L in links)
        same = reduced == full
        rows.append([H.order, "holds", same, link_ok, len(result.schedule)])
        if not (same and link_ok):
            ok = False
            witnesses.append(H.order)
    data = {"cases": rows}
    if witnesses:
        data["failing_orders"] = witnesses
    return Verdict("retract", _name(G), p, "verified" if ok else "refuted", data)


def _orbit_labels_for(X: SubgroupPoset) -> list[int]:
    from .posets import _orbit_labels

    return _orbit_labels(X) if len(X) else []


# -- normal stabilizers -------------------------------------------------------------------


def normal_stabilizer_search(G: Group, X: SubgroupPoset, homology: HomologyGroups | None = None,
                             p: int | None = None) -> Verdict:
    """Find a chain of ``X`` whose stabilizer (meet of normalizers) is normal in G."""
    if not X.is_invariant():
        raise InvalidArgumentError("poset is not invariant under the group")
    C = order_complex(X)
    H = reduced_homology(C) if homology is None else homology
    acyclic = not C.is_empty() and H.is_zero()
    applicable = acyclic and C.dimension <= 2
    norms: dict[int, int] = {}
    normal_cache: dict[int, bool] = {}
    table = G.table
    found = None
    for simplices in C.simplices_by_dim:
        for chain in simplices.tolist():
            mask = G.whole.mask
            for v in chain:
                if v not in norms:
                    norms[v] = grp.normalizer(G, X.elements[v]).mask
                mask &= norms[v]
            if mask not in normal_cache:
                ids = grp.ids_from_mask(mask, table.size)
                normal_cache[mask] = all(
                    mask_from_ids(table.conj_ids(ids, g), table.size) == mask for g in table.generator_ids
                )
            if normal_cache[mask]:
                found = (chain, mask.bit_count())
                break
        if found:
            break
    data = {"kind": X.kind, "applicable": applicable, "dimension": C.dimension, "homology": H.summary()}
    if found:
        data["chain"] = [X.elements[v].order for v in found[0]]
        data["stabilizer_order"] = found[1]
        status = "verified"
    else:
        data["chain"] = None
        status = "refuted" if applicable else "verified"
        if applicable:
            print(f"!!! normal-stabilizer search failed on {_name(G)}: {data}", file=sys.stderr)
    return Verdict("normal-stab", _name(G), p if p is not None else X.prime, status, data)


def normal_stab_check(G: Group, p: int, sylow_bound: int = DEFAULT_SYLOW_BOUND) -> Verdict:
    """Run the search where the theorem applies: O_p(G) != 1 and m_p(G) <= 3."""
    p = grp._check_prime(p)
    core = grp.p_core(G, p)
    rank = p_rank(G, p, sylow_bound).rank
    if core.is_trivial() or rank > 3:
        data = {"applicable": False, "op_order": core.order, "rank": rank}
        return Verdict("normal-stab", _name(G), p, "verified", data)
    for kind in ("Sp", "Ap"):
        X = poset(G, p, kind, sylow_bound)
        if X.height() <= 2 and poset_homology(G, p, kind, sylow_bound).is_zero():
            return normal_stabilizer_search(G, X, poset_homology(G, p, kind, sylow_bound), p)
    data = {"applicable": True, "reason": "no acyclic model of dimension <= 2", "rank": rank}
    return Verdict("normal-stab", _name(G), p, "refuted", data)


# -- families, separating clauses, indices ------------------------------------------------


@dataclass
class Family:
    ambient: Group
    members: list[Subgroup]
    label: str = ""

    def __post_init__(self):
        seen = {}
        for H in self.members:
            seen.setdefault(H.mask, H)
        self.members = sorted(seen.values(), key=lambda H: H.sort_key())
        self.masks = {H.mask for H in self.members}
        table = self.ambient.table
        for H in self.members:
            for g in table.generator_ids:
                if mask_from_ids(table.conj_ids(H.ids, g), table.size) not in self.masks:
                    raise InvalidArgumentError("family is not closed under conjugation")

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, H: Subgroup) -> bool:
        return H.mask in self.masks

    def class_representatives(self) -> list[Subgroup]:
        table = self.ambient.table
        done: set[int] = set()
        reps = []
        for H in self.members:
            if H.mask in done:
                continue
            reps.append(H)
            for K in grp.conjugacy_orbit(self.ambient.whole, H, with_stabilizer=False).members:
                done.add(K.mask)
        return reps


def enumerate_subgroups(C, solvable: bool = False, bound: int = DEFAULT_FAMILY_BOUND,
                        start: Subgroup | None = None, within: Subgroup | None = None) -> list[Subgroup]:
    """Subgroups of ``C`` reachable from ``start`` by cyclic extensions.

    With ``solvable=True`` each step adjoins an element normalizing the
    current subgroup, which yields exactly the solvable subgroups (or, from
    ``start = H``, the K with H normal in K and K/H solvable).  Otherwise
    any element may be adjoined and all subgroups are produced.  Results
    are closed under conjugation by ``within`` (default ``C``).
    """
    C = grp.as_subgroup(C)
    G = C.ambient
    table = C.table
    within = C if within is None else within
    start = G.trivial if start is None else start
    known: dict[int, Subgroup] = {}
    queue: deque[Subgroup] = deque()

    def add_orbit(K: Subgroup) -> None:
        for member in grp.conjugacy_orbit(within, K, with_stabilizer=False).members:
            known.setdefault(member.mask, member)
        if len(known) > bound:
            raise CapacityError(f"more than {bound} subgroups to enumerate", bound="family-bound")
        queue.append(K)

    add_orbit(start)
    while queue:
        M = queue.popleft()
        pool = grp.normalizer(C, M) if solvable else C
        done = M.mask
        m_ids = M.ids
        for g in pool.ids.tolist():
            if done >> g & 1:
                continue
            if solvable:
                mask = M.mask
                coset = table.mul_many(m_ids, g)
                step = coset
                while not (mask >> int(step[0]) & 1):
                    mask |= mask_from_ids(step, table.size)
                    step = table.mul_many(step, g)
                K = Subgroup(G, mask)
                # M g^k generates the same K whenever gcd(k, |K/M|) = 1
                r = K.order // M.order
                powers = [g]
                cur = g
                for k in range(2, r):
                    cur = table.mul(cur, g)
                    if np.gcd(k, r) == 1:
                        powers.append(cur)
                for x in powers:
                    done |= mask_from_ids(table.mul_many(m_ids, x), table.size)
            else:
                mask = table.closure(list(M.generator_ids) + [g])
                K = Subgroup(G, mask)
                done |= 1 << g
            if mask not in known:
                add_orbit(K)
    return sorted(known.values(), key=lambda H: H.sort_key())


def solvable_family(G: Group, bound: int = DEFAULT_FAMILY_BOUND) -> Family:
    key = ("slv", bound)
    if key not in G.cache:
        G.cache[key] = Family(G, enumerate_subgroups(G.whole, solvable=True, bound=bound), "SLV")
    return G.cache[key]


def is_separating_family(G: Group, F: Family, bound: int = DEFAULT_FAMILY_BOUND) -> Verdict:
    name = _name(G)
    if G.whole.mask in F.masks:
        return Verdict("separating", name, None, "refuted", {"clause": "a", "witness_order": G.order})
    reps = F.class_representatives()
    for H in reps:
        subs = enumerate_subgroups(H, solvable=grp.is_solvable(H), bound=bound)
        missing = [K for K in subs if K.mask not in F.masks]
        if missing:
            K = missing[0]
            data = {"clause": "b", "member_order": H.order, "subgroup_order": K.order}
            return Verdict("separating", name, None, "refuted", data)
    for H in reps:
        N = grp.normalizer(G, H)
        ext = enumerate_subgroups(N, solvable=True, bound=bound, start=H, within=N)
        missing = [K for K in ext if K.mask not in F.masks]
        if missing:
            K = missing[0]
            data = {"clause": "c", "h_order": H.order, "k_order": K.order}
            return Verdict("separating", name, None, "refuted", data)
    data = {"clause": None, "members": len(F), "classes": len(reps), "label": F.label}
    return Verdict("separating", name, None, "verified", data)


def os_index(G: Group, F: Family, H: Subgroup) -> Fraction:
    """(1 / [N_G(H):H]) (1 - chi(K(F_{>H})))."""
    _, H = grp._within(G, H)
    if H.mask not in F.masks and not H.is_trivial():
        raise InvalidArgumentError("H is not a member of the family")
    above = [K for K in F.members if K.mask != H.mask and K.mask & H.mask == H.mask]
    X = SubgroupPoset(G, 0, above, kind="custom")
    chi = poset_euler(X) if above else 0
    index = grp.normalizer(G, H).order // H.order
    return Fraction(1 - chi, index)


def _listed_psl2_orders(limit: int = 10**6) -> dict[int, str]:
    """Orders of the simple groups in the index proposition, up to ``limit``."""
    out = {}
    for q in range(4, 200):
        fac = grp.prime_divisors(q)
        if len(fac) != 1:
            continue
        p = fac[0]
        listed = (p == 2 and q >= 4) or (q % 8 in (3, 5) and q >= 5)
        if not listed:
            continue
        order = q * (q * q - 1) // (1 if p == 2 else 2)
        if order <= limit:
            out.setdefault(order, f"PSL2({q})")
    for k in (3, 5):
        q = 2**k
        order = q * q * (q * q + 1) * (q - 1)
        if order <= limit:
            out.setdefault(order, f"Sz({q})")
    return out


def is_simple(G: Group) -> bool:
    return G.order > 1 and len(grp.normal_subgroups(G)) == 2


def os_index_check(G: Group, bound: int = DEFAULT_FAMILY_BOUND) -> Verdict:
    name = _name(G)
    F = solvable_family(G, bound)
    value = os_index(G, F, G.trivial)
    listed = _listed_psl2_orders().get(G.order) if is_simple(G) else None
    maximal = []
    exact = True
    for H in F.class_representatives():
        if any(K.mask != H.mask and K.mask & H.mask == H.mask for K in F.members):
            continue
        v = os_index(G, F, H)
        idx = grp.normalizer(G, H).order // H.order
        exact &= idx % v.denominator == 0
        maximal.append([H.order, str(v)])
    data = {"i1": str(value), "listed": listed, "maximal": maximal, "members": len(F)}
    ok = exact and (listed is None or value == 1)
    data["applicable"] = listed is not None
    return Verdict("os-index", name, None, "verified" if ok else "refuted", data)


def separating_check(G: Group, bound: int = DEFAULT_FAMILY_BOUND) -> Verdict:
    return is_separating_family(G, solvable_family(G, bound), bound)


# -- dimension bound for trivial-intersection extensions -----------------------------------


def has_trivial_intersection(L: Subgroup, p: int) -> bool:
    P = grp.sylow_subgroup(L, p)
    if P.is_trivial():
        return True
    members = grp.conjugacy_orbit(L, P, with_stabilizer=False).members
    return all(a.mask & b.mask == 1 for i, a in enumerate(members) for b in members[i + 1:])


def dimension_check(G: Group, L1: Subgroup, L2: Subgroup, p: int, sylow_bound: int = DEFAULT_SYLOW_BOUND) -> Verdict:
    p = grp._check_prime(p)
    _, L1 = grp._within(G, L1)
    _, L2 = grp._within(G, L2)
    L = Subgroup.generated(G, list(L1.generator_ids) + list(L2.generator_ids))
    table = G.table
    commute = all(table.mul(a, b) == table.mul(b, a) for a in L1.generator_ids for b in L2.generator_ids)
    hyp = {
        "direct": commute and L1.mask & L2.mask == 1 and L.order == L1.order * L2.order,
        "normal_index_p": grp.is_normal(G, L) and G.order == p * L.order,
        "trivial_intersection": has_trivial_intersection(L1, p) and has_trivial_intersection(L2, p),
    }
    data = {"hypotheses": hyp}
    if not all(hyp.values()):
        data["applicable"] = False
        return Verdict("dimension", _name(G), p, "verified", data)
    heights = {k: poset(G, p, k, sylow_bound).height() for k in ("iSp", "Bp", "iAp")}
    omega_abelian = all(grp.omega1(grp.sylow_subgroup(Li, p), p).abelian for Li in (L1, L2))
    ok = heights["iSp"] <= 2 and heights["Bp"] <= 2 and (not omega_abelian or heights["iAp"] <= 2)
    data.update({"applicable": True, "heights": heights, "omega1_abelian": omega_abelian})
    return Verdict("dimension", _name(G), p, "verified" if ok else "refuted", data)


# -- corpus -------------------------------------------------------------------------------


@dataclass
class RunOptions:
    claims: tuple[str, ...] = ALL_CLAIMS
    jobs: int = 1
    stretch: bool = False
    element_bound: int = grp.DEFAULT_ELEMENT_BOUND
    sylow_bound: int = DEFAULT_SYLOW_BOUND
    family_bound: int = DEFAULT_FAMILY_BOUND

    def describe(self) -> str:
        return (
            f"claims={','.join(self.claims)} jobs={self.jobs} stretch={str(self.stretch).lower()} "
            f"element_bound={self.element_bound} sylow_bound={self.sylow_bound} family_bound={self.family_bound}"
        )


@dataclass
class Report:
    verdicts: list[Verdict]
    config: str = ""
    total_ms: int = 0

    def counts(self) -> dict[str, int]:
        return {s: sum(v.status == s for v in self.verdicts) for s in STATUSES}

    def summary_line(self) -> str:
        c = self.counts()
        return f"summary verified={c['verified']} refuted={c['refuted']} skipped={c['skipped-capacity']}"

    def to_text(self) -> str:
        lines = ["format report v1", f"config {self.config}"]
        lines.extend(v.line() for v in self.verdicts)
        lines.append(self.summary_line())
        lines.append(f"timing total_ms={self.total_ms}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        c = self.counts()
        doc = {
            "format": "report v1",
            "config": self.config,
            "verdicts": [v.as_dict() for v in self.verdicts],
            "summary": {"verified": c["verified"], "refuted": c["refuted"], "skipped": c["skipped-capacity"]},
            "timing": {"total_ms": self.total_ms},
        }
        return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def _resolve(book: SpecBook, name: str, G: Group, element_bound: int) -> Subgroup:
    H = book.build(name, element_bound)
    return grp._within(G, H)[1]


def instance_verdicts(book: SpecBook, name: str, options: RunOptions) -> list[Verdict]:
    """All selected claims on one corpus group, in a fixed order."""
    out: list[Verdict] = []
    claims = options.claims
    try:
        G = book.build(name, options.element_bound)
        G.name = name
        G.table  # noqa: B018 - materialization may hit the capacity bound
    except CapacityError as exc:
        data = {"bound": exc.bound, "reason": str(exc)}
        return [Verdict("build", name, None, "skipped-capacity", data)]
    sb, fb = options.sylow_bound, options.family_bound
    per_prime = {
        "brown": lambda p: brown_check(G, p, sb),
        "quillen": lambda p: quillen_check(G, p, sb),
        "invariance": lambda p: invariance_check(G, p, sb),
        "prank": lambda p: prank_check(G, p, sb),
        "lemmaprank": lambda p: lemmaprank_check(G, p, sylow_bound=sb),
        "retract": lambda p: retract_check(G, p, sylow_bound=sb),
        "normal-stab": lambda p: normal_stab_check(G, p, sb),
    }
    for p in grp.prime_divisors(G.order):
        for claim in PER_PRIME_CLAIMS:
            if claim in claims:
                v = _timed(lambda: per_prime[claim](p))
                v.claim, v.group, v.prime = claim, name, p
                out.append(v)
    if not grp.is_solvable(G):
        for claim, fn in (("separating", lambda: separating_check(G, fb)), ("os-index", lambda: os_index_check(G, fb))):
            if claim in claims:
                v = _timed(fn)
                v.claim, v.group, v.prime = claim, name, None
                out.append(v)
    if "dimension" in claims:
        for tag in book.tags:
            if tag.group != name or tag.kind != "ti-extension":
                continue

            def run(tag: Tag = tag) -> Verdict:
                L1 = _resolve(book, tag.args[0], G, options.element_bound)
                L2 = _resolve(book, tag.args[1], G, options.element_bound)
                return dimension_check(G, L1, L2, tag.prime, sb)

            v = _timed(run)
            v.claim, v.group, v.prime = "dimension", name, tag.prime
            out.append(v)
    return out


def _worker(args: tuple[str, str, str, RunOptions]) -> list[Verdict]:
    text, source, name, options = args
    return instance_verdicts(parse_specs(text, source), name, options)


def corpus_run(corpus: str | Path | SpecBook, claims: Iterable[str] | None = None,
               options: RunOptions | None = None) -> Report:
    options = options or RunOptions()
    if claims is not None:
        requested = set(claims)
        unknown = requested - set(ALL_CLAIMS)
        if unknown:
            raise InvalidArgumentError(f"unknown claims: {sorted(unknown)}")
        claims = tuple(c for c in ALL_CLAIMS if c in requested)
        options = RunOptions(claims, options.jobs, options.stretch, options.element_bound,
                             options.sylow_bound, options.family_bound)
    if isinstance(corpus, SpecBook):
        book = corpus
        text = book.to_text()
    else:
        path = Path(corpus)
        book = load_specs(path)
        text = path.read_text(encoding="utf-8")
    names = list(book.entries) + (list(book.stretch) if options.stretch else [])
    start = time.perf_counter()
    if options.jobs > 1 and len(names) > 1:
        with ProcessPoolExecutor(max_workers=options.jobs) as pool:
            chunks = list(pool.map(_worker, [(text, book.source, n, options) for n in names]))
    else:
        chunks = [instance_verdicts(book, n, options) for n in names]
    verdicts = [v for chunk in chunks for v in chunk]
    total = int(round((time.perf_counter() - start) * 1000))
    config = f"corpus={book.source or '-'} " + options.describe()
    return Report(verdicts, config, total)
