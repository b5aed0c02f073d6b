import json
from pathlib import Path

import pytest

from tentlimit.cli import main

GOLDEN = Path(__file__).parent / "golden"

CASES = {
    "fp_s2_d3": ["fp", "--slope", "2", "--depth", "3"],
    "fp_golden_d5_csv": ["fp", "--slope", "golden", "--depth", "5", "--format", "csv"],
    "orbit_golden_n4": ["orbit", "--slope", "golden", "--n", "4"],
    "chain_s2_p1_verify": ["chain", "--slope", "2", "--p", "1", "--verify"],
    "chain_74_p3_csv": ["chain", "--slope", "7/4", "--p", "3", "--format", "csv"],
    "kneading_74": ["kneading", "--slope", "7/4", "--n", "24"],
    "linkseq_s2_p1_d3": ["linkseq", "--slope", "2", "--p", "1", "--depth", "3"],
    "symmetric_golden_p1_l3": ["symmetric", "--slope", "golden", "--p", "1", "--level", "3"],
    "salient_golden": ["salient", "--slope", "golden", "--p", "1", "--count", "5"],
    "folding_golden_cycle": ["folding-test", "--slope", "golden", "--cycle", "1"],
    "isotopy_s2": ["isotopy", "--slope", "2", "--depth", "3", "--a", "1/16", "--b", "3/16"],
    "limits_nu_r3": ["two-sided-limits", "--radius", "3", "--prefix-length", "3000"],
    "slope_nu": ["slope-from-kneading", "--prefix", "nu", "--eps", "1e-9"],
}


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden_outputs(name, capsys):
    code, out, _ = run(CASES[name], capsys)
    assert code == 0
    assert out == (GOLDEN / f"{name}.txt").read_text(encoding="utf-8")


def test_fp_example(capsys):
    assert run(["fp", "--slope", "2", "--depth", "3"], capsys)[1] == "∞01020103\n"


def test_chain_example(capsys):
    code, out, _ = run(["chain", "--slope", "2", "--p", "1", "--verify"], capsys)
    d = json.loads(out)
    assert code == 0 and d["links"] == 4 and d["refines_previous"] and d["axioms"]


def test_orbit_example(capsys):
    d = json.loads(run(["orbit", "--slope", "golden", "--n", "4"], capsys)[1])
    assert d["periodic"] == 3 and d["points"][:3] == ["(1+sqrt5)/4", "(-1+sqrt5)/4", "1/2"]


@pytest.mark.parametrize(
    "argv,code,tag",
    [
        (["fp", "--depth", "3"], 1, "E_USAGE"),
        (["bogus"], 1, "E_USAGE"),
        (["fp", "--slope", "1.2", "--depth", "3"], 1, "E_SLOPE"),
        (["isotopy", "--slope", "2", "--depth", "3", "--a", "0", "--b", "1/16"], 1, "E_FOLDING"),
        (["slope-from-kneading", "--prefix", "10111011"], 1, "E_UNRESOLVABLE"),
        (["isotopy", "--slope", "2", "--depth", "3", "--a", "x", "--b", "1"], 1, "E_USAGE"),
    ],
)
def test_error_codes(argv, code, tag, capsys):
    rc, _, err = run(argv, capsys)
    assert rc == code and f"error[{tag}]" in err


def test_verification_failure_exit(capsys, monkeypatch):
    from tentlimit import chains
    from tentlimit.ppoints import CheckReport

    monkeypatch.setattr(chains, "verify_refinement", lambda f, c: CheckReport(False, "forced"))
    rc, _, err = run(["chain", "--slope", "2", "--p", "2", "--verify"], capsys)
    assert rc == 2 and "E_VERIFY" in err


def test_output_dir_env(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("TENTLIMIT_OUTPUT_DIR", str(tmp_path))
    rc, out, _ = run(["fp", "--slope", "2", "--depth", "2", "--out", "fp.txt"], capsys)
    assert rc == 0 and out == ""
    assert (tmp_path / "fp.txt").read_text() == "∞0102\n"


def test_svg_written(tmp_path, capsys):
    rc, _, _ = run(["chain", "--slope", "2", "--p", "2", "--svg", str(tmp_path / "c.svg")], capsys)
    assert rc == 0 and (tmp_path / "c.svg").read_text().startswith("<svg")


def test_deterministic(capsys):
    argv = ["symmetric", "--slope", "2", "--p", "2", "--level", "4"]
    assert run(argv, capsys)[1] == run(argv, capsys)[1]
