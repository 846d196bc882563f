"""
Command line runs end to end: run directories, exit codes and report export
"""
import json

import numpy as np
import pytest
from typer.testing import CliRunner

from src.cli import io
from src.cli.main import app
from src.core.exceptions import EXIT_USAGE
from src.ferrosim import wall_transition_cost

runner = CliRunner()


@pytest.fixture
def points_file(tmp_path, pair_points):
    path = tmp_path / "points.json"
    path.write_text(json.dumps([list(p) for p in pair_points]))
    return path


def summary_of(run_dir):
    return {row["key"]: row["value"] for row in io.read_csv(run_dir / "summary.csv")}


def test_connect_writes_a_run_directory(tmp_path, points_file):
    out = tmp_path / "connect"
    result = runner.invoke(app, ["connect", "--points", str(points_file), "--out", str(out)])
    assert result.exit_code == 0, result.output

    summary = summary_of(out)
    assert float(summary["L_omega"]) == pytest.approx(0.6)
    assert summary["valid"] == "True"

    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["mode"] == "connect"
    assert {"connection.json", "points.json", "summary.csv"} <= set(manifest["files"])


def test_unknown_domain_is_a_usage_error(tmp_path, points_file):
    result = runner.invoke(
        app, ["connect", "--points", str(points_file), "--domain", "triangle", "--out", str(tmp_path / "x")]
    )
    assert result.exit_code == EXIT_USAGE


def test_bad_sigma_list_is_a_usage_error(tmp_path):
    result = runner.invoke(app, ["renorm", "--sigma", "2,four", "--out", str(tmp_path / "r")])
    assert result.exit_code == EXIT_USAGE


def test_report_after_connect(tmp_path, points_file):
    out = tmp_path / "connect"
    runner.invoke(app, ["connect", "--points", str(points_file), "--out", str(out)])
    result = runner.invoke(app, ["report", str(out)])
    assert result.exit_code == 0, result.output

    rows = io.read_csv(out / "plots" / "connection_segments.csv")
    assert len(rows) == 1
    assert float(rows[0]["length"]) == pytest.approx(0.6)
    assert len(io.read_csv(out / "plots" / "points.csv")) == 2


def test_report_needs_a_complete_run(tmp_path):
    result = runner.invoke(app, ["report", str(tmp_path)])
    assert result.exit_code == EXIT_USAGE


def test_lift_and_audit(tmp_path, points_file):
    lifted = tmp_path / "lift"
    result = runner.invoke(app, ["lift", "--points", str(points_file), "--grid", "48", "--out", str(lifted)])
    assert result.exit_code == 0, result.output
    for name in ("q.field", "lifting.field", "jumps.edges", "defects.json"):
        assert (lifted / name).exists()

    q = io.read_field(lifted / "q.field")
    lifting = io.read_field(lifted / "lifting.field")
    assert q.grid.shape == lifting.grid.shape
    assert np.array_equal(q.grid.mask, lifting.grid.mask)

    audited = tmp_path / "audit"
    result = runner.invoke(
        app,
        ["audit-lower-bound", "--points", str(points_file), "--samples", "4", "--grid", "48", "--out", str(audited)],
    )
    assert result.exit_code == 0, result.output
    assert len(io.read_csv(audited / "audit.csv")) == 4


def test_short_simulation_and_report(tmp_path):
    out = tmp_path / "sim"
    result = runner.invoke(
        app,
        ["simulate", "--grid", "20", "--eps", "0.3", "--max-sweeps", "2", "--restarts", "0", "--out", str(out)],
    )
    assert result.exit_code == 0, result.output
    for name in ("Q.field", "M.field", "ledger.csv", "summary.json", "walls.json"):
        assert (out / "level_00" / name).exists()
    summary = io.read_json(out / "level_00" / "summary.json")
    assert summary["kappa_star_fit"] == pytest.approx(summary["kappa_star_closed"], rel=1e-2)

    result = runner.invoke(app, ["report", str(out)])
    assert result.exit_code == 0, result.output
    trend = io.read_csv(out / "plots" / "eps_trend.csv")
    assert [float(r["eps"]) for r in trend] == [0.3]


def test_experiment_file(tmp_path, pair_points):
    out = tmp_path / "from-file"
    spec = tmp_path / "connect.yaml"
    spec.write_text(
        "mode: connect\n"
        f"points: {json.dumps([list(p) for p in pair_points])}\n"
        f"output: {out}\n"
    )
    result = runner.invoke(app, ["run", "--spec", str(spec)])
    assert result.exit_code == 0, result.output
    assert float(summary_of(out)["L_omega"]) == pytest.approx(0.6)


def run_files(run_dir):
    return {p.relative_to(run_dir).as_posix(): p.read_bytes() for p in sorted(run_dir.rglob("*")) if p.is_file()}


def test_renorm_evaluates_given_points(tmp_path, points_file):
    out = tmp_path / "eval"
    result = runner.invoke(app, ["renorm", "--eval", str(points_file), "--grid", "64", "--out", str(out)])
    assert result.exit_code == 0, result.output
    summary = summary_of(out)
    assert float(summary["L_omega"]) == pytest.approx(0.6)
    c_beta, _ = wall_transition_cost(1.0)
    assert float(summary["W_beta"]) == pytest.approx(float(summary["W"]) + c_beta * 0.6, rel=1e-4, abs=1e-4)
    assert len(io.read_csv(out / "w_beta_ledger.csv")) == 1
    assert len(io.read_csv(out / "sigma_window.csv")) == 3


def test_renorm_reruns_are_byte_identical(tmp_path):
    args = ["renorm", "--grid", "40", "--starts", "2", "--seed", "3", "--sigma", "1,1.5,2"]
    runs = []
    for name in ("first", "second"):
        out = tmp_path / name
        result = runner.invoke(app, args + ["--out", str(out)])
        assert result.exit_code == 0, result.output
        runs.append(run_files(out))

    first, second = runs
    assert first.keys() == second.keys()
    for name in first:
        if name == "manifest.json":
            continue
        assert first[name] == second[name], name

    manifests = [json.loads(run["manifest.json"]) for run in runs]
    for manifest in manifests:
        manifest["spec"].pop("output")
    assert manifests[0] == manifests[1]


@pytest.mark.slow
def test_pipeline_writes_the_comparison_table(tmp_path):
    out = tmp_path / "pipeline"
    result = runner.invoke(
        app,
        ["pipeline", "--grid", "32", "--eps", "0.2", "--restarts", "0", "--sigma", "1,1.5,2", "--out", str(out)],
    )
    assert result.exit_code == 0, result.output
    rows = io.read_csv(out / "comparison.csv")
    assert len(rows) == 1
    for column in ("defect_mismatch", "wall_mismatch", "length_at_least_l_omega", "endpoints_within_3h",
                   "divergence_residual"):
        assert column in rows[0]
    assert len(io.read_points(out / "predicted_points.json")) == 2
