import json
import math

import pytest

from src.cli import suite
from src.cli.commands import main
from src.cli.output import jsonable, render_svg, write_csv, write_json
from src.cli.schema import RunConfig, VerificationReport, VerificationResult
from src.settings import settings
from src.utils import IntegrationError


def _files(path):
    return {p.name: p.read_bytes() for p in sorted(path.iterdir())}


def test_trace_writes_all_formats(out_dir, capsys):
    code = main(["trace", "--family", "zero", "--steps", "200", "--out", str(out_dir)])
    assert code == 0
    assert sorted(p.name for p in out_dir.iterdir()) == [
        "driver_zero.csv", "trace_zero.csv", "trace_zero.json", "trace_zero.svg",
    ]
    header = (out_dir / "trace_zero.csv").read_text().splitlines()[0]
    assert header == "t,re,im"
    report = json.loads((out_dir / "trace_zero.json").read_text())
    assert report["schema"] == 1
    assert report["config"]["ode_rtol"] == settings.ode_rtol
    assert report["results"]["tip"]["im"] == pytest.approx(2.0, abs=1e-9)
    assert "γ" in capsys.readouterr().out


def test_trace_output_is_reproducible(tmp_path):
    args = ["trace", "--family", "wang", "--theta", str(math.pi / 3.0), "--steps", "500"]
    assert main(args + ["--out", str(tmp_path / "a")]) == 0
    assert main(args + ["--out", str(tmp_path / "b")]) == 0
    assert _files(tmp_path / "a") == _files(tmp_path / "b")


def test_trace_format_filter(out_dir):
    code = main(["trace", "--family", "arc", "--theta", "1.0", "--steps", "200", "--format", "json",
                 "--out", str(out_dir)])
    assert code == 0
    assert [p.name for p in out_dir.iterdir()] == ["trace_arc.json"]


@pytest.mark.parametrize("args", [
    ["trace", "--family", "wang"],
    ["trace", "--family", "wang", "--theta", "4.0"],
    ["trace", "--family", "emw", "--x0", "1.0", "--y0", "2.0"],
    ["verify", "--deltas", "-0.001"],
    ["verify", "--tol", "0"],
])
def test_invalid_parameters_exit_with_two(args, out_dir):
    assert main(args + ["--out", str(out_dir)]) == 2


def test_argparse_rejects_empty_deltas():
    with pytest.raises(SystemExit) as e:
        main(["verify", "--deltas"])
    assert e.value.code == 2


def test_tol_help_names_integrator_tolerance(capsys):
    with pytest.raises(SystemExit) as e:
        main(["verify", "--help"])
    assert e.value.code == 0
    out = capsys.readouterr().out
    assert "settings.ode_rtol" in out
    assert "допуски" in out


def test_tol_is_restored_after_run(out_dir):
    before = settings.ode_rtol
    assert main(["trace", "--family", "zero", "--steps", "50", "--tol", "1e-9", "--format", "json",
                 "--out", str(out_dir)]) == 0
    assert json.loads((out_dir / "trace_zero.json").read_text())["config"]["ode_rtol"] == 1e-9
    assert settings.ode_rtol == before


def test_verify_group_writes_report(out_dir):
    code = main(["verify", "--only", "arc", "--out", str(out_dir)])
    assert code == 0
    report = json.loads((out_dir / "verify.json").read_text())
    assert report["schema"] == 1
    assert report["passed"] is True
    assert {r["group"] for r in report["results"]} == {"arc"}
    assert all(r["pass"] for r in report["results"])


def test_verify_failure_exits_with_one(out_dir, monkeypatch):
    def broken(steps, deltas):
        raise IntegrationError("интегратор остановился")

    monkeypatch.setitem(suite.GROUPS, "flow", broken)
    code = main(["verify", "--only", "flow", "--out", str(out_dir)])
    assert code == 1
    report = json.loads((out_dir / "verify.json").read_text())
    assert report["passed"] is False
    assert report["results"][0]["check"] == "flow_error"
    assert report["results"][0]["residual"] == "inf"


def test_verification_result_thresholds():
    assert VerificationResult.below("a", "energy", 1e-9, 1e-6).passed
    assert not VerificationResult.below("a", "energy", math.nan, 1e-6).passed
    assert not VerificationResult.below("a", "energy", 1e-6, 1e-6).passed
    assert VerificationResult.above("b", "expansions", 1.5, 1.4).passed
    assert not VerificationResult.above("b", "expansions", math.inf, 1.4).passed
    report = VerificationReport(results=[VerificationResult.below("a", "energy", 0.0, 1.0)])
    assert report.to_json()["results"][0]["pass"] is True


def test_run_config_rejects_unknown_fields():
    with pytest.raises(ValueError):
        RunConfig(command="trace", colour="red")
    assert RunConfig(command="verify").deltas == [1e-3, 1e-4, 1e-5, 1e-6]


def test_jsonable_handles_special_values():
    import numpy as np

    value = jsonable({"a": math.inf, "b": complex(1.0, -2.0), "c": np.array([1.0, math.nan]), 1: np.float64(0.5)})
    assert value == {"a": "inf", "b": {"re": 1.0, "im": -2.0}, "c": [1.0, "nan"], "1": 0.5}


def test_writers_are_byte_stable(tmp_path):
    write_csv(tmp_path / "x.csv", {"p": [0.1, 1.0 / 3.0], "q": [1e-20, 2.0]})
    assert (tmp_path / "x.csv").read_text() == "p,q\n0.1,1e-20\n0.3333333333333333,2.0\n"
    write_json(tmp_path / "x.json", {"b": 1, "a": [math.inf]})
    assert (tmp_path / "x.json").read_text() == '{\n  "a": [\n    "inf"\n  ],\n  "b": 1\n}\n'


def test_csv_floats_round_trip(tmp_path):
    import pandas as pd

    values = [1.0 / 3.0, math.pi, 0.1, 1e-20, -2.5e-300, 1.7976931348623157e308, math.sqrt(2.0) - 1.0]
    write_csv(tmp_path / "r.csv", {"v": values})
    back = pd.read_csv(tmp_path / "r.csv", float_precision="round_trip")["v"].tolist()
    assert [v.hex() for v in back] == [v.hex() for v in values]


def test_svg_rendering():
    svg = render_svg([("curve", [0.0, 1.0], [0.0, 1.0])], unit_circle=True, title="demo")
    assert svg.startswith("<svg")
    assert "<circle" in svg and "<title>demo</title>" in svg
    assert 'points="0.000000,-0.000000 1.000000,-1.000000"' in svg
    with pytest.raises(ValueError):
        render_svg([("empty", [], [])])


@pytest.mark.slow
@pytest.mark.parametrize("group", list(suite.GROUPS))
def test_verification_group_passes(group):
    results = suite.run_suite([group])
    failed = [(r.check, r.params, r.residual, r.tolerance) for r in results if not r.passed]
    assert results and not failed


@pytest.mark.slow
def test_compare_writes_tables(tmp_path):
    args = ["compare", "--deltas", "1e-3", "1e-4", "--steps", "4000"]
    assert main(args + ["--out", str(tmp_path / "a")]) == 0
    names = set(p.name for p in (tmp_path / "a").iterdir())
    assert {"local_curve.csv", "local_weld.csv", "arc.csv", "asymptotic_welding.csv", "asymptotic_tip.csv",
            "same_weld_wang.csv", "same_weld_emw.csv", "compare.json", "local.svg", "asymptotic.svg",
            "same_weld.svg"} <= names
    assert main(args + ["--out", str(tmp_path / "b")]) == 0
    assert _files(tmp_path / "a") == _files(tmp_path / "b")
