import json

import pytest

from bqiso import cli
from bqiso.tensor import load


def _run(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr().out


def test_obstruction_run_is_clean(capsys):
    code, out = _run(capsys, "--n", "3", "--suite", "obstructions", "--format", "json")
    records = json.loads(out)
    assert code == 0
    assert [(r["check"], r["status"]) for r in records] == [
        ("obstruction.r_ybe", "pass"), ("obstruction.ordering_identities", "pass")]
    assert set(records[0]) == {"check", "anchor", "N", "status", "defect_summary", "inputs"}


def test_json_is_byte_stable(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert cli.main(["--n", "2", "--suite", "frt,quantum", "--json", str(path)]) == 0
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()


def test_mutation_run_fails_and_diff_lists_regressions(tmp_path, capsys):
    good, bad = tmp_path / "good.json", tmp_path / "bad.json"
    assert cli.main(["--n", "2", "--suite", "quantum", "--json", str(good)]) == 0
    assert cli.main(["--n", "2", "--suite", "quantum", "--mutate", "sigma_q", "--json", str(bad)]) == 1
    capsys.readouterr()
    code, out = _run(capsys, "diff", str(good), str(bad))
    assert code == 0
    assert "quantum.matrix_lemma N=2: pass -> fail" in out
    assert "quantum.delta.xx N=2: pass -> fail" in out
    _, same = _run(capsys, "diff", str(good), str(good))
    assert same == ""


def test_diff_reports_check_set_mismatch():
    a = [{"check": "frt.ybe_w", "N": 3, "status": "pass"}]
    b = [{"check": "frt.ybe_w", "N": 4, "status": "pass"}]
    assert "check sets differ" in cli.diff_reports(a, b)


def test_empty_and_invalid_configs(capsys):
    assert cli.run(cli.RunConfig([])) == []
    code, _ = _run(capsys, "--n", "9")
    assert code == 2
    code, _ = _run(capsys, "--suite", "nope")
    assert code == 2
    with pytest.raises(ValueError):
        cli.RunConfig([3], degree_max=6).validate()


def test_dump_tensors_round_trip(tmp_path, capsys):
    cli.main(["--n", "3", "--suite", "obstructions", "--dump-tensors", str(tmp_path)])
    capsys.readouterr()
    header = json.loads((tmp_path / "N3_header.json").read_text())
    assert header == {"n": 3, "ranks": {"minus": 3, "plus": 5, "zero": 1}, "sigma": "[1+0i] / [0+0i, 1+0i]"}
    from bqiso import frt
    assert load((tmp_path / "N3_W.txt").read_text()) == frt.build(3).w_mat
    assert (tmp_path / "N3_eta.txt").read_text().splitlines()[0] == "2 3 | 2 0 | [1+0i] / [1+0i]"


def test_text_table_and_timings(capsys):
    code, out = _run(capsys, "--n", "2", "--suite", "frt", "--timings")
    lines = out.splitlines()
    assert code == 0 and lines[0].split() == ["check", "N", "status", "time"]
    assert all(" pass " in line for line in lines[1:])


def test_lorentz_runs_once_at_n4():
    records = cli.run(cli.RunConfig([2, 3], suites=("lorentz",)))
    assert {r.N for r in records} == {4}
    assert len(records) == 7
    assert {r.status for r in records} == {"pass", "recorded"}


def test_anchor_table_covers_every_check():
    records = cli.run(cli.RunConfig([2], suites=cli.SUITES, degree_max=2))
    assert all(r.anchor == cli.ANCHORS[r.check] for r in records)
    assert not cli.failed(records)
    # N=2 has an abelian rotation algebra, so the obstruction is only recorded there
    assert {r.status for r in records if r.check.startswith("obstruction")} == {"recorded"}
