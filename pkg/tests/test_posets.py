from __future__ import annotations

import pytest
from conftest import zperm

import oracles
from psubgroups import (
    CapacityError,
    InvalidArgumentError,
    Permutation,
    SubgroupPoset,
    build_poset,
    fixed_subposet,
    i_reduction,
    lemmaprank_eval,
    p_rank,
    poset_height,
    retract_reduce,
)
from psubgroups import group as grp
from psubgroups.posets import KINDS
from psubgroups.topology import read_complex_text, reduced_homology, order_complex


def element_sets(X) -> set[frozenset]:
    t = X.ambient.table
    return {frozenset(t.perm(i).images for i in E.ids) for E in X.elements}


def brute_posets(G, p):
    whole = frozenset(G.table.perm(i).images for i in G.whole.ids)
    subs = oracles.all_subgroups(whole, G.degree)
    sp = {H for H in subs if len(H) > 1 and oracles.is_p_power(len(H), p)}
    ap = {H for H in sp if oracles.is_elementary_abelian(H, p)}
    bp = set()
    for Q in sp:
        N = oracles.normalizer(whole, Q)
        if oracles.p_core(N, p, G.degree) == Q:
            bp.add(Q)
    return sp, ap, bp


# -- the three models --------------------------------------------------------------


def test_s2_of_a5(A5):
    X = build_poset(A5, 2, "Sp")
    assert len(X) == 20
    assert sorted(E.order for E in X) == [2] * 15 + [4] * 5
    assert len(X.covers()) == 15
    assert X.kind == "Sp"


def test_b2_of_a5(A5):
    X = build_poset(A5, 2, "Bp")
    assert [E.order for E in X] == [4] * 5


def test_b2_of_s4(S4):
    X = build_poset(S4, 2, "Bp")
    assert sorted(E.order for E in X) == [4, 8, 8, 8]
    V = X.index(grp.p_core(S4, 2))
    assert sorted(j for i, j in X.covers() if i == V) == [1, 2, 3]
    assert len(X.covers()) == 3


@pytest.mark.parametrize("name", ["S4", "A5", "D12", "SL2_3", "C3xS3", "Q8", "A4", "D8"])
def test_models_against_brute_force(corpus, name):
    G = corpus.build(name)
    for p in grp.prime_divisors(G.order):
        sp, ap, bp = brute_posets(G, p)
        assert element_sets(build_poset(G, p, "Sp")) == sp
        assert element_sets(build_poset(G, p, "Ap")) == ap
        assert element_sets(build_poset(G, p, "Bp")) == bp


def test_ap_members_are_elementary_abelian(Ex2a):
    X = build_poset(Ex2a, 2, "Ap")
    assert all(grp.is_elementary_abelian(E, 2) for E in X)
    assert max(E.order for E in X) == 16


def test_prime_not_dividing_gives_empty_poset(A5):
    X = build_poset(A5, 7, "Sp")
    assert len(X) == 0
    assert X.height() == -1


def test_unknown_kind(A5):
    with pytest.raises(InvalidArgumentError):
        build_poset(A5, 2, "Cp")


def test_sylow_bound(corpus):
    G = corpus.build("S6")
    with pytest.raises(CapacityError) as err:
        build_poset(G, 2, "Sp", sylow_bound=8)
    assert "8" in str(err.value)


@pytest.mark.parametrize("name", ["S4", "A5", "PSL2_7", "C3wrC3"])
def test_every_model_is_invariant(corpus, name):
    G = corpus.build(name)
    for p in grp.prime_divisors(G.order):
        for kind in KINDS:
            X = build_poset(G, p, kind)
            assert X.is_invariant()
            for perm in X.action:
                assert sorted(perm) == list(range(len(X)))


def test_non_invariant_poset_is_detected(A5):
    X = build_poset(A5, 2, "Sp")
    part = X.subposet([0, 1, 2], "custom")
    assert not part.is_invariant()


# -- i(X), heights, fixed points -------------------------------------------------------------


def test_i_reduction_a5(A5):
    X = i_reduction(build_poset(A5, 2, "Sp"))
    assert len(X) == 5 and poset_height(X) == 0
    assert X.kind == "iSp"


def test_i_reduction_s4(S4):
    X = i_reduction(build_poset(S4, 2, "Sp"))
    assert sorted(E.order for E in X) == [4, 8, 8, 8]
    assert poset_height(X) == 1


def test_i_reduction_single_maximal(S4):
    D8 = grp.sylow_subgroup(S4, 2)
    sub = build_poset(S4, 2, "Sp")
    inside = [i for i, E in enumerate(sub.elements) if E <= D8]
    X = i_reduction(sub.subposet(inside))
    assert [E.mask for E in X] == [D8.mask]


def test_i_reduction_empty(A5):
    assert len(i_reduction(build_poset(A5, 7, "Sp"))) == 0


@pytest.mark.parametrize("name", ["S4", "A5", "S5", "SL2_3", "S3wrC2"])
def test_i_reduction_is_idempotent(corpus, name):
    G = corpus.build(name)
    for p in grp.prime_divisors(G.order):
        for kind in ("Sp", "Ap"):
            X = i_reduction(build_poset(G, p, kind))
            assert set(i_reduction(X).masks) == set(X.masks)


def test_heights(A5, S4):
    assert poset_height(build_poset(A5, 2, "Sp")) == 1
    assert poset_height(build_poset(S4, 2, "Sp")) == 2
    assert poset_height(SubgroupPoset(A5, 2, [])) == -1


def test_height_against_chain_oracle(S4):
    X = build_poset(S4, 2, "Sp")
    less = lambda i, j: X.elements[i] < X.elements[j]  # noqa: E731
    longest = max(len(c) for c in oracles.chains(list(range(len(X))), less))
    assert X.height() == longest - 1


def test_fixed_subposet(S4, A5):
    X = build_poset(S4, 2, "Sp")
    F = fixed_subposet(X, S4.whole)
    assert [E.mask for E in F] == [grp.p_core(S4, 2).mask]
    assert fixed_subposet(X, S4.trivial).masks == X.masks
    assert len(fixed_subposet(build_poset(A5, 2, "Sp"), A5)) == 0


def test_fixed_subposet_containment(S4, A5):
    X = build_poset(A5, 2, "Sp")
    with pytest.raises(InvalidArgumentError):
        fixed_subposet(X, S4.whole)


def test_model_containments(corpus):
    for name in ("S4", "A5", "S6", "PSL2_7", "Ex2a"):
        G = corpus.build(name)
        for p in grp.prime_divisors(G.order):
            S, A, B, iS = (set(build_poset(G, p, k).masks) for k in ("Sp", "Ap", "Bp", "iSp"))
            assert A <= S and B <= iS <= S, (name, p)


# -- p-rank ---------------------------------------------------------------------------------


@pytest.mark.parametrize("name, p, rank", [("A5", 2, 2), ("PSL2_8", 3, 1), ("Ex2a", 2, 4), ("S6", 2, 3), ("C3wrC3", 3, 3)])
def test_p_rank(corpus, name, p, rank):
    G = corpus.build(name)
    w = p_rank(G, p)
    assert w.rank == rank
    assert w.witness.order == p**rank
    assert grp.is_elementary_abelian(w.witness, p)
    assert poset_height(build_poset(G, p, "Ap")) + 1 == rank


def test_p_rank_of_coprime_prime(A5):
    assert p_rank(A5, 7).rank == 0


# -- the rank lemma ---------------------------------------------------------------------------


def test_lemmaprank_on_c3xs3(C3xS3, S3_factor):
    w = lemmaprank_eval(C3xS3, S3_factor, 3)
    assert w.rank == 2
    assert w.complement.order == 3
    assert w.centralizer_rank == 1
    assert w.witness.order == 9


def test_lemmaprank_on_ex2a(Ex2a):
    base = [N for N in grp.normal_subgroups(Ex2a) if N.order == 3600][0]
    w = lemmaprank_eval(Ex2a, base, 2)
    assert w.rank == 4
    assert w.witness.order == 16


def test_lemmaprank_trivial_normal_subgroup(corpus):
    for name in ("S4", "A5", "C3xS3"):
        G = corpus.build(name)
        for p in grp.prime_divisors(G.order):
            w = lemmaprank_eval(G, G.trivial, p)
            assert w.rank == p_rank(G, p).rank
            assert w.centralizer_rank == 0


def test_lemmaprank_rejects_non_normal(S4):
    with pytest.raises(InvalidArgumentError):
        lemmaprank_eval(S4, S4.subgroup([zperm(4, (0, 1))]), 2)


# -- the retraction lemma ----------------------------------------------------------------------


def test_retract_on_c3xs3(C3xS3, S3_factor):
    r = retract_reduce(C3xS3, S3_factor, 3)
    assert r.hypothesis_holds and r.violating is None
    assert len(r.reduced) == 1 and r.reduced.elements[0].order == 3
    outside = [E for E in build_poset(C3xS3, 3, "Ap") if E.mask & S3_factor.mask == 1]
    # four subgroups of order 3 in C3 x C3; one lies in the S3 factor
    assert len(r.schedule) == len(outside) == 3
    for E in r.schedule:
        C = grp.Subgroup(C3xS3, grp.centralizer(C3xS3, E).mask & S3_factor.mask)
        assert grp.p_core(C, 3).order >= 3
    # the schedule is a linear extension: ordered by size, then element IDs
    assert [E.sort_key() for E in r.schedule] == sorted(E.sort_key() for E in r.schedule)
    for L in r.upward_links(S3_factor):
        assert len(L) > 0 and reduced_homology(order_complex(L)).is_zero()
    full = reduced_homology(order_complex(build_poset(C3xS3, 3, "Ap")))
    assert reduced_homology(order_complex(r.reduced)) == full


def test_retract_on_a5_with_trivial_subgroup(A5):
    r = retract_reduce(A5, A5.trivial, 2)
    assert not r.hypothesis_holds
    assert r.violating.order == 2
    assert r.reduced is None


def test_retract_with_the_whole_group(corpus):
    for name in ("A5", "S4"):
        G = corpus.build(name)
        r = retract_reduce(G, G.whole, 2)
        assert r.hypothesis_holds
        assert r.reduced.masks == build_poset(G, 2, "Ap").masks
        assert r.schedule == []


def test_retract_containment(A5, S4):
    with pytest.raises(InvalidArgumentError):
        retract_reduce(A5, S4.subgroup([zperm(4, (0, 1))]), 2)


# -- export -------------------------------------------------------------------------------------


def test_poset_export_format(S4):
    X = build_poset(S4, 2, "Bp")
    text = X.to_text()
    lines = text.splitlines()
    assert lines[0] == "format poset v1"
    assert sum(l.startswith("el ") for l in lines) == 4
    assert sum(l.startswith("cov ") for l in lines) == 3
    assert sum(l.startswith("act ") for l in lines) == len(S4.generators)
    assert lines[2].startswith("el 0 order 4 gens ")
    C = read_complex_text(text)
    assert C == order_complex(X)


def test_element_generators_round_trip(S4):
    X = build_poset(S4, 2, "Sp")
    for E in X:
        again = S4.subgroup([Permutation.parse(str(g), 4) for g in E.generators])
        assert again.mask == E.mask
