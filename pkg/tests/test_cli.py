import json
import subprocess
import sys
from fractions import Fraction

import pytest

from l2rank.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


def test_betti_eleven_side_by_side(capsys):
    code, rep = run_json(capsys, "betti", "--factory", "eleven", "--depth", "12")
    assert code == 0
    cf = rep["closed_form"]
    assert cf["q0"] == "55/8" and cf["q1"] == "1/2"
    assert cf["enclosure"]["decimal"]["lo"].startswith("6.9082337619")
    assert cf["contained"] is True
    assert Fraction(rep["lo"]) <= Fraction(rep["hi"])
    assert set(rep) >= {"lo", "hi", "decimal", "coverage", "windows"}


def test_betti_a0_from_file(capsys, data_dir):
    code, rep = run_json(capsys, "betti", "--preset", "a0", "--element", str(data_dir / "an.json"), "--depth", "40")
    assert code == 0
    assert Fraction(rep["lo"]) <= Fraction(1, 3) <= Fraction(rep["hi"])


def test_betti_an_flag(capsys):
    code, rep = run_json(capsys, "betti", "--an", "1", "--depth", "20")
    assert code == 0 and rep["closed_form"]["value"] == "1/11" and rep["closed_form"]["contained"]


def test_betti_zero(capsys, data_dir):
    code, rep = run_json(capsys, "betti", "--element", str(data_dir / "zero.json"), "--depth", "5")
    assert code == 0
    assert Fraction(rep["hi"]) - Fraction(rep["lo"]) == 1 - Fraction(rep["coverage"])


def test_betti_expression_file(capsys, data_dir):
    code, a = run_json(capsys, "betti", "--element", str(data_dir / "half_g0.txt"), "--depth", "8")
    code2, b = run_json(capsys, "betti", "--expr", "g0 + g0'", "--depth", "8")
    assert code == code2 == 0 and a["lo"] == b["lo"] and a["hi"] == b["hi"]


def test_betti_is_deterministic(capsys):
    argv = ("betti", "--factory", "poly_times_power", "--poly", "1,1", "--d", "2", "--depth", "9")
    _, out1, _ = run(capsys, *argv)
    _, out2, _ = run(capsys, *argv, "--jobs", "3")
    assert out1 == out2


def test_betti_plain_engine_matches(capsys):
    _, a = run_json(capsys, "betti", "--factory", "eleven", "--depth", "8")
    _, b = run_json(capsys, "betti", "--factory", "eleven", "--depth", "8", "--plain", "--jobs", "2")
    assert (a["lo"], a["hi"]) == (b["lo"], b["hi"])


def test_betti_csv_and_text(capsys):
    code, out, _ = run(capsys, "betti", "--an", "0", "--depth", "6", "--format", "csv")
    assert code == 0 and out.startswith("key,value\n") and "\nlo," in out
    code, out, _ = run(capsys, "betti", "--an", "0", "--depth", "6", "--format", "text")
    assert code == 0 and "coverage: " in out


def test_betti_input_errors(capsys, tmp_path):
    assert run(capsys, "betti", "--depth", "4")[0] == 2
    assert run(capsys, "betti", "--element", str(tmp_path / "missing.json"), "--depth", "4")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "betti", "--element", str(bad), "--depth", "4")[0] == 2
    with pytest.raises(SystemExit) as e:
        main(["betti", "--an", "0", "--depth", "3", "--coverage", "1/2"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(["betti", "--an", "0", "--coverage", "1"])
    assert e.value.code == 2


def test_betti_nonconstant_and_reject(capsys):
    code, _, err = run(capsys, "betti", "--expr", "1", "--depth", "3", "--preset", "a0", "--verify-membership")
    assert code == 0
    el = {"size": 1, "entries": [{"row": 0, "col": 0, "terms": [{"coef": "1", "power": 1, "cylinder": {}}]}]}
    import tempfile, os

    with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as fh:
        json.dump(el, fh)
    try:
        code, _, err = run(capsys, "betti", "--element", fh.name, "--depth", "3", "--verify-membership")
        assert code == 2 and "rejected" in err
    finally:
        os.unlink(fh.name)
    fine = {"size": 1, "entries": [{"row": 0, "col": 0, "terms": [{"coef": "1", "power": 0, "cylinder": {"coords": {"5": 1}}}]}]}
    with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as fh:
        json.dump(fine, fh)
    try:
        code, _, err = run(capsys, "betti", "--element", fh.name, "--depth", "3")
        assert code == 2 and "not constant" in err and "entry (0,0) power 0" in err
    finally:
        os.unlink(fh.name)


def test_memory_cap_exit_code(capsys, monkeypatch):
    monkeypatch.setenv("L2RANK_MAX_MEM", "1")
    code, _, err = run(capsys, "betti", "--factory", "eleven", "--depth", "6", "--plain")
    assert code == 3 and "memory cap" in err


def test_odo_rank(capsys, data_dir):
    code, rep = run_json(capsys, "odo", "rank", "--radices", "2", "--continuation", "constant",
                         "--element", str(data_dir / "e00.json"))
    assert code == 0
    assert rep == {"command": "odo rank", "rank": "1/2", "rank_decimal": "0.500000000000",
                   "level": 1, "p_m": 2, "in_Zn": True}
    code, rep = run_json(capsys, "odo", "rank", "--radices", "2,3", "--element", str(data_dir / "e00.json"), "--level", "2")
    assert rep["rank"] == "1/2" and rep["p_m"] == 6
    assert run(capsys, "odo", "rank", "--radices", "1", "--element", str(data_dir / "e00.json"))[0] == 2


def test_lang(capsys, data_dir):
    code, rep = run_json(capsys, "lang", "alpha", "--automaton", str(data_dir / "all_x2.json"))
    assert code == 0 and rep["alpha"] == "1/5"
    code, rep = run_json(capsys, "lang", "alpha", "--automaton", str(data_dir / "x1_star.json"))
    assert rep["alpha"] == "1/6"
    code, rep = run_json(capsys, "lang", "balanced", "--r", "1", "--s", "2", "--eps", "1e-10")
    assert code == 0 and rep["encloses_closed_form"] and rep["closed_form_square"] == "1/56"
    assert Fraction(rep["hi"]) - Fraction(rep["lo"]) <= Fraction(1, 10 ** 10)


def test_check_suites(capsys):
    code, rep = run_json(capsys, "check", "macci", "--m", "2..8")
    assert code == 0 and rep["failed"] == 0 and rep["passed"] > 0
    assert rep["notes"]["2"]["sum"] == "4/5"
    code, rep = run_json(capsys, "check", "sylvester", "--trials", "6")
    assert code == 0 and rep["ok"]
    code, rep = run_json(capsys, "check", "coverage", "--depth", "10")
    assert code == 0
    with pytest.raises(SystemExit) as e:
        main(["check", "nosuch"])
    assert e.value.code == 2


def test_check_failure_exit(capsys, monkeypatch):
    import l2rank.checks as checks

    def broken(**kw):
        r = checks.SuiteResult("macci")
        r.record(False, {"m": 2})
        return r

    monkeypatch.setitem(checks.SUITES, "macci", broken)
    code, rep = run_json(capsys, "check", "macci")
    assert code == 1 and rep["counterexamples"] == [{"m": 2}]


def test_graph(capsys, tmp_path):
    code, out, err = run(capsys, "graph", "--factory", "eleven", "--ks", "1", "--census")
    assert code == 0 and out.startswith("digraph EA {")
    cen = json.loads(err)
    assert cen["isolated"] == 12 + 8 + 3
    assert sorted((c["size"], c["kernel"]) for c in cen["components"]) == [(3, 1), (7, 1)]
    code, out, _ = run(capsys, "graph", "--expr", "1", "--ks", "2")
    assert "->" not in out
    code, out, _ = run(capsys, "graph", "--expr", "g0", "--itinerary", "2,0,0,1")
    assert out.count("->") == 2
    assert run(capsys, "graph", "--expr", "g0", "--itinerary", "0,0")[0] == 2
    target = tmp_path / "g.dot"
    assert run(capsys, "graph", "--an", "0", "--itinerary", "0,0", "-o", str(target))[0] == 0
    assert target.read_text().count("->") == 4


def test_console_entry_point(data_dir):
    r = subprocess.run(
        [sys.executable, "-m", "l2rank", "lang", "alpha", "--automaton", str(data_dir / "all_x2.json")],
        capture_output=True, text=True, check=True,
    )
    assert json.loads(r.stdout)["alpha"] == "1/5"
