import json

import pytest

from holonomy.cli import run
from holonomy.cli.main import _attach_dash_values
from holonomy.operators import DiffOp


def invoke(tmp_path, *argv, name="report.json"):
    out = tmp_path / name
    code = run([*argv, "--out", str(out)])
    return code, json.loads(out.read_text(encoding="utf-8")), out


def test_series_gen_report(tmp_path):
    code, report, _ = invoke(tmp_path, "series", "gen", "--target", "phiH", "--n", "1", "--order", "5")
    assert code == 0
    assert report["status"] == "pass"
    assert report["command"] == "series gen"
    assert report["result"]["series"]["coefficients"] == ["1", "4", "16", "64", "256", "1024"]
    assert report["arguments"]["order"] == 5


def test_fit_reads_generated_report(tmp_path):
    _, _, series_path = invoke(
        tmp_path, "series", "gen", "--target", "phiH", "--n", "1", "--order", "20", name="series.json"
    )
    code, report, _ = invoke(tmp_path, "ode", "fit", "--series", str(series_path), "--order", "1", "--degree", "1")
    assert code == 0
    assert report["result"]["method"] == "exact"
    found = DiffOp.from_dict(report["result"]["operator"])
    expected = DiffOp.from_strings(["-4", "1-4*w"], "w")
    assert found.normalized() == expected.normalized()


def test_fit_auto_degree(tmp_path):
    _, _, series_path = invoke(
        tmp_path, "series", "gen", "--target", "K", "--order", "30", name="series.json"
    )
    code, report, _ = invoke(tmp_path, "ode", "fit", "--series", str(series_path), "--order", "2")
    assert code == 0
    assert report["result"]["operator"]["order"] == 2


def test_compose_inline_operators(tmp_path):
    code, report, _ = invoke(tmp_path, "op", "compose", "--op", "0;1", "--op", "0;1")
    assert code == 0
    assert DiffOp.from_dict(report["result"]["operator"]) == DiffOp.from_strings(["0", "0", "1"])


def test_operand_count_is_a_usage_error(tmp_path):
    code, report, _ = invoke(tmp_path, "op", "compose", "--op", "0;1")
    assert code == 2
    assert report["status"] == "usage-error"
    assert "--in/--op" in report["error"]


def test_bad_flag_value_is_a_usage_error(capsys):
    assert run(["series", "gen", "--target", "phiH", "--order", "-3"]) == 2
    assert "positive integer" in capsys.readouterr().err


def test_intertwiner_search_failure_exits_one(tmp_path):
    code, report, _ = invoke(
        tmp_path, "op", "intertwine", "--op", "0;1", "--op", "0;0;1", "--order-bound", "0", "--degree-bound", "0"
    )
    assert code == 1
    assert report["result"]["found"] is False


def test_operator_files_round_trip(tmp_path):
    _, _, first = invoke(tmp_path, "op", "lclm", "--op", "0;1", "--op=-1;1", name="lclm.json")
    code, report, _ = invoke(tmp_path, "op", "divrem", "--in", str(first), "--op", "0;1")
    assert code == 0
    assert report["result"]["divides"] is True


def test_apparent_point(tmp_path):
    code, report, _ = invoke(tmp_path, "op", "apparent", "--op=-1;t", "--point", "0")
    assert code == 0
    assert report["result"]["apparent"] is True


def test_modular_j_exact(tmp_path):
    code, report, _ = invoke(tmp_path, "modular", "j", "--k", "1/2")
    assert code == 0
    assert report["result"]["j"] == "35152/9"


def test_modular_landen_fixed_points(tmp_path):
    code, report, _ = invoke(tmp_path, "modular", "landen", "--fixed-points")
    assert code == 0
    polys = [f["polynomial"] for f in report["result"]["fixed_points"]]
    assert [4, 3, 1] in polys


def test_modular_landen_needs_modulus(tmp_path):
    code, report, _ = invoke(tmp_path, "modular", "landen")
    assert code == 2
    assert "--k" in report["error"]


def test_verify_kw(tmp_path):
    csv = tmp_path / "cells.csv"
    code, report, _ = invoke(tmp_path, "verify", "kw", "--csv", str(csv))
    assert code == 0
    assert report["result"]["suite"] == "kw"
    assert csv.exists()


def test_events_are_stable_without_timings(tmp_path):
    _, report, _ = invoke(tmp_path, "series", "gen", "--target", "K", "--order", "10")
    assert report["events"]
    assert all("timestamp" not in e for e in report["events"])
    assert all("seconds" not in e["context"] for e in report["events"])


def test_timings_keep_timestamps(tmp_path):
    _, report, _ = invoke(tmp_path, "series", "gen", "--target", "K", "--order", "10", "--timings")
    assert all("timestamp" in e for e in report["events"])


def test_reports_are_reproducible(tmp_path):
    argv = ("op", "gcrd", "--op", "0;0;1", "--op", "0;1")
    _, _, a = invoke(tmp_path, *argv, name="a.json")
    _, _, b = invoke(tmp_path, *argv, name="b.json")
    assert a.read_text() == b.read_text()


def test_stdout_when_no_out(capsys):
    assert run(["modular", "curve", "--j1", "1728", "--j2", "287496"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["result"]["residual"] == "0"


@pytest.mark.slow
def test_verify_intertwiners(tmp_path):
    code, report, _ = invoke(tmp_path, "verify", "intertwiners")
    assert code == 0
    assert all(c["status"] == "pass" for c in report["result"]["cells"])


def test_inline_operator_with_leading_minus(tmp_path):
    code, report, _ = invoke(tmp_path, "op", "apparent", "--op", "-1;t", "--point", "0")
    assert code == 0
    assert report["result"]["apparent"] is True


def test_attach_dash_values():
    argv = ["op", "lclm", "--op", "-1;1", "--op", "0;1", "--op", "--var", "t"]
    assert _attach_dash_values(argv) == ["op", "lclm", "--op=-1;1", "--op", "0;1", "--op", "--var", "t"]
    assert _attach_dash_values(["--op", "-"]) == ["--op", "-"]


def test_modular_classify_extra_singularities(tmp_path):
    code, report, _ = invoke(
        tmp_path, "modular", "classify", "--list", "phiH5", "--reference", "phiD5", "--context", "5"
    )
    assert code == 0
    factors = {tuple(f["factor"]) for f in report["result"]["factors"]}
    assert factors == {("1", "3", "4"), ("1", "4", "8"), ("1", "-7", "5", "-4")}
    by_factor = {tuple(f["factor"]): f for f in report["result"]["factors"]}
    assert by_factor[("1", "3", "4")]["root_class"] == "cm"
    assert by_factor[("1", "3", "4")]["j"] == -3375


def test_modular_classify_reference_needs_list(tmp_path):
    code, report, _ = invoke(tmp_path, "modular", "classify", "--op", "0;1", "--reference", "phiD5")
    assert code == 2
    assert "--list" in report["error"]
