"""
Plot-ready export of a finished run directory
"""
import logging
import math
from pathlib import Path
from typing import Dict, List

from src.cli import io
from src.connection.base import Connection
from src.core.exceptions import IncompleteRunError
from src.core.schemas import RunManifest, SimulationSummary

logger = logging.getLogger(__name__)

PLOTS = "plots"


def load_manifest(run_dir: Path) -> RunManifest:
    path = Path(run_dir) / "manifest.json"
    if not path.exists():
        raise IncompleteRunError("manifest.json")
    manifest = RunManifest.model_validate_json(path.read_text())
    missing = [name for name in manifest.files if not (Path(run_dir) / name).exists()]
    if missing:
        raise IncompleteRunError(", ".join(missing))
    if "summary.csv" not in manifest.files:
        raise IncompleteRunError("summary.csv")
    return manifest


def _levels(run_dir: Path) -> List[Path]:
    return sorted(p for p in Path(run_dir).glob("level_*") if p.is_dir())


def energy_ledger(run_dir: Path) -> List[Dict]:
    """Every sweep of every ε-level, tagged with its level"""
    rows = []
    for level in _levels(run_dir):
        for row in io.read_csv(level / "ledger.csv"):
            rows.append({"level": level.name, **row})
    return rows


def eps_trend(run_dir: Path, degree: int) -> List[Dict]:
    rows = []
    for level in _levels(run_dir):
        summary = SimulationSummary.model_validate(io.read_json(level / "summary.json"))
        log_term = 2 * math.pi * abs(degree) * abs(math.log(summary.eps))
        rows.append({
            "eps": summary.eps,
            "F": summary.energy,
            "F_minus_log": summary.energy - log_term,
            "residual": summary.residual,
            "converged": summary.converged,
            "odd_defects": sum(1 for d in summary.defects if d.winding % 2),
            "wall_length": summary.wall_length,
        })
    return rows


def connection_segments(connection: Connection) -> List[Dict]:
    return [
        {
            "x0": s.start.point[0], "y0": s.start.point[1],
            "x1": s.end.point[0], "y1": s.end.point[1],
            "kind": s.kind.value, "length": s.length,
        }
        for s in connection.segments
    ]


def export_report(run_dir: Path) -> List[Path]:
    """Write CSV series and geometry tables under <run>/plots; returns the written paths"""
    run_dir = Path(run_dir)
    manifest = load_manifest(run_dir)
    out = run_dir / PLOTS
    out.mkdir(exist_ok=True)
    written: List[Path] = []

    levels = _levels(run_dir)
    if levels:
        written.append(io.write_csv(out / "energy_ledger.csv", energy_ledger(run_dir)))
        written.append(io.write_csv(out / "eps_trend.csv", eps_trend(run_dir, manifest.spec.get("degree", 1))))
        for level in levels:
            polylines = io.read_json(level / "walls.json")
            rows = [
                {"wall": k, "x": x, "y": y}
                for k, line in enumerate(polylines)
                for x, y in line
            ]
            written.append(io.write_csv(out / f"walls_{level.name}.csv", rows))

    for name in ("sigma_window.csv", "core_energy.csv", "w_beta_ledger.csv", "comparison.csv", "audit.csv"):
        if (run_dir / name).exists():
            written.append(io.write_csv(out / name, io.read_csv(run_dir / name)))

    if (run_dir / "connection.json").exists():
        connection = io.read_connection(run_dir / "connection.json")
        written.append(io.write_csv(out / "connection_segments.csv", connection_segments(connection)))

    for name in ("points.json", "predicted_points.json"):
        if (run_dir / name).exists():
            points = io.read_points(run_dir / name)
            rows = [{"x": x, "y": y} for x, y in points]
            written.append(io.write_csv(out / name.replace(".json", ".csv"), rows))

    logger.info(f"Exported {len(written)} plot files from {run_dir}", extra={"mode": manifest.mode.value})
    return written
