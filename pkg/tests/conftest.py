from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from psubgroups import Group, Permutation, load_specs  # noqa: E402
from psubgroups.groupspec import default_corpus_path  # noqa: E402


def perm(text: str, degree: int) -> Permutation:
    """1-based cycle notation, as in group files."""
    return Permutation.parse(text, degree)


def zperm(degree: int, *cycles) -> Permutation:
    """0-based cycles."""
    return Permutation.from_cycles(degree, cycles)


@pytest.fixture(scope="session")
def corpus():
    return load_specs(default_corpus_path())


@pytest.fixture(scope="session")
def A5():
    return Group([zperm(5, (0, 1, 2, 3, 4)), zperm(5, (2, 3, 4))], name="A5")


@pytest.fixture(scope="session")
def S4():
    return Group([zperm(4, (0, 1, 2, 3)), zperm(4, (0, 1))], name="S4")


@pytest.fixture(scope="session")
def S3():
    return Group([zperm(3, (0, 1, 2)), zperm(3, (0, 1))], name="S3")


@pytest.fixture(scope="session")
def C3xS3(corpus):
    G = corpus.build("C3xS3")
    G.name = "C3xS3"
    return G


@pytest.fixture(scope="session")
def S3_factor(C3xS3):
    """The S3 factor of C3 x S3, on points 4..6."""
    return C3xS3.subgroup([perm("(4 5 6)", 6), perm("(4 5)", 6)])


@pytest.fixture(scope="session")
def Ex2a(corpus):
    G = corpus.build("Ex2a")
    G.name = "Ex2a"
    return G


@pytest.fixture(scope="session")
def PSL2_8(corpus):
    G = corpus.build("PSL2_8")
    G.name = "PSL2_8"
    return G


# -- acceptance reporting -------------------------------------------------------------

ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
