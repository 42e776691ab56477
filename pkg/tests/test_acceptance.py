"""Acceptance gate: one test per criterion, each recording a PASS/FAIL line.

The lines are printed as they happen (visible with ``-s``) and again in a
block at the end of the pytest session.
"""

from __future__ import annotations

import json
import random
import re
import resource
import subprocess
import sys
import time
from contextlib import contextmanager
from fractions import Fraction

import pytest
from conftest import ACCEPTANCE

import oracles
from psubgroups import (
    HomologyGroups,
    IntegerMatrix,
    SimplicialComplex,
    build_poset,
    load_specs,
    order_complex,
    os_index,
    p_rank,
    reduced_homology,
    retract_reduce,
    smith_normal_form,
    solvable_family,
)
from psubgroups import group as grp
from psubgroups.groupspec import default_corpus_path
from psubgroups.posets import KINDS, lemmaprank_eval
from psubgroups.topology import boundary_squares_vanish

CORPUS_BUDGET_S = 600
EX2A_BUDGET_S = 1800
MEMORY_BUDGET_KB = 8 * 1024 * 1024


class _Outcome:
    detail = ""


@contextmanager
def criterion(n: int, title: str):
    out = _Outcome()
    try:
        yield out
    except BaseException as exc:
        line = f"criterion {n:>2} FAIL  {title}: {type(exc).__name__}: {str(exc).splitlines()[0] if str(exc) else ''}"
        ACCEPTANCE[n] = line
        print(line)
        raise
    line = f"criterion {n:>2} PASS  {title}" + (f" ({out.detail})" if out.detail else "")
    ACCEPTANCE[n] = line
    print(line)


def _run_corpus(path) -> float:
    start = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "psubgroups", "corpus", "default", "--claims", "all", "--out", str(path)],
        capture_output=True, text=True, check=False,
    )
    elapsed = time.perf_counter() - start
    assert proc.returncode == 0, proc.stderr
    return elapsed


@pytest.fixture(scope="module")
def corpus_runs(tmp_path_factory):
    """Two consecutive full runs of the shipped corpus through the command line."""
    base = tmp_path_factory.mktemp("corpus")
    first, second = base / "first.txt", base / "second.txt"
    elapsed = _run_corpus(first)
    _run_corpus(second)
    doc = json.loads(first.with_suffix(".json").read_text())
    return {"elapsed": elapsed, "texts": (first.read_text(), second.read_text()), "verdicts": doc["verdicts"]}


def _claim(verdicts, claim):
    return [v for v in verdicts if v["claim"] == claim]


@pytest.fixture(scope="module")
def book():
    return load_specs(default_corpus_path())


def _named(book, name):
    G = book.build(name)
    G.name = name
    return G


# -- 1 ------------------------------------------------------------------------------------


def test_criterion_01_brown(corpus_runs, book):
    with criterion(1, "Brown congruence on the default corpus") as c:
        verdicts = corpus_runs["verdicts"]
        assert not _claim(verdicts, "build"), "a corpus entry could not be built"
        brown = _claim(verdicts, "brown")
        expected = sum(len(grp.prime_divisors(book.build(n).order)) for n in book.entries)
        assert len(brown) == expected
        bad = [(v["group"], v["prime"], v["status"]) for v in brown if v["status"] != "verified"]
        assert not bad, bad
        for v in brown:
            assert (v["data"]["chi"] - 1) % v["data"]["modulus"] == 0
        assert corpus_runs["elapsed"] < CORPUS_BUDGET_S
        c.detail = f"{len(brown)} instances, full corpus {corpus_runs['elapsed']:.0f}s < {CORPUS_BUDGET_S}s"


# -- 2 ------------------------------------------------------------------------------------


def test_criterion_02_quillen(corpus_runs, book):
    with criterion(2, "Quillen, both directions") as c:
        quillen = _claim(corpus_runs["verdicts"], "quillen")
        bad = [(v["group"], v["prime"]) for v in quillen if v["status"] != "verified"]
        assert not bad, bad
        directions = {v["data"]["direction"] for v in quillen}
        assert directions == {"op-nontrivial-acyclic", "op-trivial-nonzero"}
        A5 = _named(book, "A5")
        H = reduced_homology(order_complex(build_poset(A5, 2, "Ap")))
        assert H == HomologyGroups([4], [[]])
        assert H.lines() == ["H~0 rank 4 torsion -", "H~1 rank 0 torsion -"]
        c.detail = f"{len(quillen)} instances; A5 p=2 gives H~0 = Z^4 and nothing else"


# -- 3 ------------------------------------------------------------------------------------


def test_criterion_03_model_invariance(corpus_runs):
    with criterion(3, "homology identical across Sp, Ap, Bp, iSp, iAp") as c:
        inv = _claim(corpus_runs["verdicts"], "invariance")
        bad = [(v["group"], v["prime"]) for v in inv if v["status"] != "verified"]
        assert not bad, bad
        for v in inv:
            assert len({v["data"][k] for k in KINDS}) == 1
        c.detail = f"{len(inv)} instances"


# -- 4 ------------------------------------------------------------------------------------


def test_criterion_04_example_group(book):
    with criterion(4, "(A5 x A5):C2 of order 7200 at p = 2") as c:
        start = time.perf_counter()
        G = load_specs(default_corpus_path()).build("Ex2a")
        assert G.order == 7200
        rank = p_rank(G, 2)
        assert rank.rank == 4 and rank.witness.order == 16
        heights = {k: build_poset(G, 2, k).height() for k in ("iSp", "iAp", "Bp")}
        assert all(h <= 2 for h in heights.values()), heights
        assert grp.p_core(G, 2).is_trivial()
        H = reduced_homology(order_complex(build_poset(G, 2, "Ap")))
        assert not H.is_zero()
        elapsed = time.perf_counter() - start
        peak_kb = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss
        assert elapsed < EX2A_BUDGET_S
        assert peak_kb < MEMORY_BUDGET_KB
        c.detail = (
            f"m_2 = 4, heights {heights}, O_2 = 1, H~(A_2) = {H.summary()}; "
            f"{elapsed:.0f}s, peak {peak_kb // 1024} MB"
        )


# -- 5 ------------------------------------------------------------------------------------


def test_criterion_05_index(book):
    with criterion(5, "index of the solvable family of A5") as c:
        A5 = _named(book, "A5")
        F = solvable_family(A5)
        assert os_index(A5, F, A5.trivial) == Fraction(1)
        maximal = {}
        for H in F.class_representatives():
            if any(H < K for K in F.members):
                continue
            assert grp.normalizer(A5, H) == H
            maximal[H.order] = os_index(A5, F, H)
        assert maximal == {6: 1, 10: 1, 12: 1}
        c.detail = "i(1) = 1; i(S3) = i(D10) = i(A4) = 1"


# -- 6 ------------------------------------------------------------------------------------


def test_criterion_06_rank_lemma(corpus_runs, book):
    with criterion(6, "rank lemma equals the p-rank") as c:
        lem = _claim(corpus_runs["verdicts"], "lemmaprank")
        bad = [(v["group"], v["prime"]) for v in lem if v["status"] != "verified"]
        assert not bad, bad
        evaluations = sum(len(v["data"]["evaluations"]) for v in lem)
        G = _named(book, "Ex2a")
        base = grp._within(G, book.build("A5_left"))[1]
        other = grp._within(G, book.build("A5_right"))[1]
        N = grp.Subgroup.generated(G, list(base.generator_ids) + list(other.generator_ids))
        assert N.order == 3600 and grp.is_normal(G, N)
        assert lemmaprank_eval(G, N, 2).rank == 4
        C = _named(book, "C3xS3")
        S3 = C.subgroup([grp.Permutation.parse(t, 6) for t in ("(4 5 6)", "(4 5)")])
        assert lemmaprank_eval(C, S3, 3).rank == 2
        c.detail = f"{len(lem)} instances, {evaluations} normal subgroups; Ex2a -> 4, C3xS3 -> 2"


# -- 7 ------------------------------------------------------------------------------------


def test_criterion_07_retraction_lemma(book):
    with criterion(7, "retraction lemma") as c:
        G = _named(book, "C3xS3")
        H = G.subgroup([grp.Permutation.parse(t, 6) for t in ("(4 5 6)", "(4 5)")])
        r = retract_reduce(G, H, 3)
        assert r.hypothesis_holds
        full = reduced_homology(order_complex(build_poset(G, 3, "Ap")))
        assert reduced_homology(order_complex(r.reduced)) == full
        links = r.upward_links(H)
        assert links and all(len(L) and reduced_homology(order_complex(L)).is_zero() for L in links)
        A5 = _named(book, "A5")
        bad = retract_reduce(A5, A5.trivial, 2)
        assert not bad.hypothesis_holds and bad.violating is not None and bad.violating.order == 2
        c.detail = f"C3xS3: holds, {len(links)} acyclic links; A5 with H = 1: refuted by a C2"


# -- 8 ------------------------------------------------------------------------------------


def test_criterion_08_normal_stabilizer(corpus_runs, book):
    with criterion(8, "normal stabilizer found wherever the theorem applies") as c:
        ns = _claim(corpus_runs["verdicts"], "normal-stab")
        bad = [(v["group"], v["prime"]) for v in ns if v["status"] != "verified"]
        assert not bad, bad
        applicable = 0
        for v in ns:
            G = book.build(v["group"])
            p = v["prime"]
            expect = not grp.p_core(G, p).is_trivial() and p_rank(G, p).rank <= 3
            assert v["data"]["applicable"] is expect, (v["group"], p)
            if expect:
                applicable += 1
                assert v["data"]["chain"], (v["group"], p)
        assert applicable > 0
        c.detail = f"{applicable} applicable instances, all found"


# -- 9 ------------------------------------------------------------------------------------


def test_criterion_09_topology_kernel(book):
    with criterion(9, "boundary, Smith normal form and reference homology") as c:
        built = 0
        for name in book.entries:
            G = book.build(name)
            for p in grp.prime_divisors(G.order):
                for kind in KINDS:
                    assert boundary_squares_vanish(order_complex(build_poset(G, p, kind))), (name, p, kind)
                    built += 1
        rng = random.Random(9)
        for trial in range(1000):
            m, n = rng.randint(1, 40), rng.randint(1, 40)
            density = rng.choice((0.05, 0.15, 0.3))
            dense = [[rng.randint(-9, 9) if rng.random() < density else 0 for _ in range(n)] for _ in range(m)]
            M = IntegerMatrix.from_dense(dense)
            res = smith_normal_form(M, transforms=True)
            d = res.diagonal
            assert all(d[i + 1] % d[i] == 0 for i in range(len(d) - 1)), trial
            assert res.left @ M @ res.right == IntegerMatrix(m, n, {(i, i): v for i, v in enumerate(d)}), trial
            assert oracles.rank_mod_p_fast(dense, 2_147_483_647) == res.rank, trial
        triangle = SimplicialComplex.from_simplices([(0, 1), (1, 2), (0, 2)])
        assert reduced_homology(triangle) == HomologyGroups([0, 1], [[], []])
        rp2 = [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 1, 5), (1, 2, 4), (2, 3, 5), (1, 3, 4), (2, 4, 5), (1, 3, 5)]
        assert oracles.reduced_betti(rp2, None) == [0, 0, 0] and oracles.reduced_betti(rp2, 2) == [0, 1, 1]
        assert reduced_homology(SimplicialComplex.from_simplices(rp2)) == HomologyGroups([0, 0, 0], [[], [2], []])
        octa = [(a, b, e) for a in (0, 1) for b in (2, 3) for e in (4, 5)]
        assert reduced_homology(SimplicialComplex.from_simplices(octa)) == HomologyGroups([0, 0, 1], [[], [], []])
        c.detail = f"d^2 = 0 on {built} corpus complexes; 1000 random SNFs; circle, RP2, sphere exact"


# -- 10 -----------------------------------------------------------------------------------


def test_criterion_10_determinism(corpus_runs):
    with criterion(10, "two corpus runs agree outside timing fields") as c:
        a, b = (re.sub(r" ms=\d+$|^timing total_ms=\d+$", "", t, flags=re.M) for t in corpus_runs["texts"])
        assert a == b
        leftover = [l for l in a.splitlines() if re.search(r"(^| |total_)ms=\d", l)]
        assert not leftover
        c.detail = f"{len(a.splitlines())} report lines identical"
