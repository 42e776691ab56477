from __future__ import annotations

import json
import re
import subprocess
import sys

import pytest

from psubgroups import build_poset, load_specs, order_complex, reduced_homology
from psubgroups.cli import run_cli

A5_FILE = "format group v1\ngroup A5 degree 5\ngen (1 2 3 4 5)\ngen (3 4 5)\n"
C3XS3_FILE = """format group v1
group C3 degree 3
gen (1 2 3)
group S3 degree 3
gen (1 2 3)
gen (1 2)
group S3f degree 6
gen (4 5 6)
gen (4 5)
group C3xS3
product direct C3 S3
"""


@pytest.fixture
def a5(tmp_path):
    path = tmp_path / "a5.grp"
    path.write_text(A5_FILE)
    return str(path)


@pytest.fixture
def c3xs3(tmp_path):
    path = tmp_path / "c3xs3.grp"
    path.write_text(C3XS3_FILE)
    return str(path)


def run(argv, capsys):
    code = run_cli(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_group_info(a5, capsys):
    code, out, _ = run(["group-info", a5, "--prime", "2"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("config command=group-info spec=")
    assert "group A5 degree 5 order 60" in lines
    assert "solvable false" in lines
    assert "p=2 sylow_order 4 op_order 1 p_rank 2" in lines


def test_verify_brown(a5, capsys):
    code, out, _ = run(["verify", a5, "--prime", "2", "--claim", "brown"], capsys)
    assert code == 0
    verdicts = [l for l in out.splitlines() if l.startswith("verdict ")]
    assert len(verdicts) == 1
    assert verdicts[0].startswith("verdict brown A5 p=2 status=verified")


@pytest.mark.parametrize(
    "claim, expect",
    [
        ("retract:S3f", '"holds",true,true,3'),
        ("lemmaprank:S3f", '"evaluations":[[6,2,3]]'),
        ("normal-stab", '"stabilizer_order":18'),
        ("quillen", '"op_order":9'),
    ],
)
def test_verify_claims_with_arguments(c3xs3, capsys, claim, expect):
    code, out, _ = run(["verify", c3xs3, "--prime", "3", "--claim", claim], capsys)
    assert code == 0
    assert expect in out


def test_verify_retract_failing_hypothesis(a5, capsys):
    code, out, _ = run(["verify", a5, "--prime", "2", "--claim", "retract:1"], capsys)
    assert code == 0
    assert '"hypothesis-fails"' in out


def test_verify_group_level_claims(a5, capsys):
    code, out, _ = run(["verify", a5, "--claim", "os-index"], capsys)
    assert code == 0 and '"i1":"1"' in out and " p=- " in out
    code, out, _ = run(["verify", a5, "--claim", "separating"], capsys)
    assert code == 0 and "status=verified" in out


def test_refuted_verdict_exits_one(tmp_path, capsys):
    # for a solvable group the solvable family contains the group itself: clause (a) fails
    path = tmp_path / "s4.grp"
    path.write_text("format group v1\ngroup S4 degree 4\ngen (1 2 3 4)\ngen (1 2)\n")
    code, out, _ = run(["verify", str(path), "--claim", "separating"], capsys)
    assert code == 1
    assert 'status=refuted data={"clause":"a","witness_order":24}' in out


def test_usage_errors(a5, capsys):
    assert run(["verify", a5, "--prime", "4", "--claim", "brown"], capsys)[0] == 2
    assert run(["verify", a5, "--claim", "brown"], capsys)[0] == 2
    assert run(["verify", a5, "--prime", "2", "--claim", "fermat"], capsys)[0] == 2
    assert run(["poset", a5, "--prime", "2", "--kind", "Xp"], capsys)[0] == 2
    assert run(["group-info", a5, "--bogus"], capsys)[0] == 2
    assert run([], capsys)[0] == 2
    assert run(["corpus", "default", "--claims", "brown,fermat"], capsys)[0] == 2


def test_parse_error_has_position(tmp_path, capsys):
    bad = tmp_path / "bad.grp"
    bad.write_text("format group v1\ngroup A degree 3\ngen (1 2 x)\n")
    code, _, err = run(["group-info", str(bad)], capsys)
    assert code == 2
    assert f"{bad}:3:10:" in err


def test_capacity_exit_code(a5, capsys):
    code, _, err = run(["group-info", a5, "--element-bound", "10"], capsys)
    assert code == 3
    assert "capacity" in err


def test_strict_capacity_skip(tmp_path, capsys):
    path = tmp_path / "c.corpus"
    path.write_text(A5_FILE.replace("format group", "format corpus") + "entry A5\n")
    base = ["corpus", str(path), "--claims", "brown", "--element-bound", "10"]
    assert run(base, capsys)[0] == 0
    assert run(base + ["--strict"], capsys)[0] == 3


def test_poset_export_round_trip(a5, tmp_path, capsys):
    poset_file = tmp_path / "a5_s2.poset"
    complex_file = tmp_path / "a5_s2.complex"
    code, out, _ = run(
        ["poset", a5, "--prime", "2", "--kind", "Sp", "--export", str(poset_file), "--export-complex", str(complex_file)],
        capsys,
    )
    assert code == 0
    assert "poset kind Sp elements 20 covers 15 height 1" in out
    expected = reduced_homology(order_complex(build_poset(load_specs(a5).build(), 2, "Sp"))).lines()
    for path in (poset_file, complex_file):
        code, out, _ = run(["homology", str(path)], capsys)
        assert code == 0
        lines = out.splitlines()
        assert lines[1] == "f-vector 20 15"
        assert lines[2:] == expected == ["H~0 rank 4 torsion -", "H~1 rank 0 torsion -"]


@pytest.mark.parametrize("kind", ["Ap", "Bp", "iSp", "iAp"])
def test_poset_export_to_stdout(a5, capsys, kind):
    code, out, _ = run(["poset", a5, "--prime", "2", "--kind", kind, "--export", "-"], capsys)
    assert code == 0
    assert "format poset v1" in out


def test_homology_of_missing_file(tmp_path, capsys):
    code, _, err = run(["homology", str(tmp_path / "none.txt")], capsys)
    assert code == 2 and "cannot read" in err


def test_corpus_writes_text_and_json(tmp_path, capsys):
    out_file = tmp_path / "report.txt"
    code, out, _ = run(["corpus", "default", "--claims", "brown", "--out", str(out_file)], capsys)
    assert code == 0
    assert re.fullmatch(r"summary verified=\d+ refuted=0 skipped=0\n", out)
    text = out_file.read_text()
    assert text.splitlines()[1].startswith("config corpus=default claims=brown ")
    doc = json.loads(out_file.with_suffix(".json").read_text())
    assert doc["summary"]["refuted"] == 0
    assert len(doc["verdicts"]) == sum(l.startswith("verdict ") for l in text.splitlines())


def test_corpus_is_deterministic(tmp_path, capsys):
    reports = []
    for k in range(2):
        path = tmp_path / f"r{k}.txt"
        run(["corpus", "default", "--claims", "brown,quillen,prank", "--out", str(path)], capsys)
        reports.append(re.sub(r" ms=\d+|total_ms=\d+", "", path.read_text()))
    assert reports[0] == reports[1]


def test_module_entry_point(a5):
    proc = subprocess.run(
        [sys.executable, "-m", "psubgroups", "verify", a5, "--prime", "5", "--claim", "brown"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert "verdict brown A5 p=5 status=verified" in proc.stdout
