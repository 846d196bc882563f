"""
ferroconnect command line: `python -m src.cli.main <command> ...`
"""
import logging
from pathlib import Path
from typing import List, Optional

import typer
from rich.console import Console
from rich.table import Table

from src.cli import io
from src.cli.exceptions import handle_errors
from src.cli.export import export_report
from src.cli.runner import RunOutcome, run
from src.core.config import settings
from src.core.exceptions import UsageError
from src.core.schemas import ExperimentSpec, FieldFormat, MagnetizationBoundary, RunMode

logging.basicConfig(
    level=logging.INFO if not settings.debug else logging.DEBUG,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

app = typer.Typer(name=settings.app_name, add_completion=False, no_args_is_help=True)
console = Console()

DomainOpt = typer.Option("disk", "--domain", help="disk, kidney, ellipse:a,b, rounded-square or a JSON file")
OutOpt = typer.Option(Path("runs/latest"), "--out", help="Run directory")
SeedOpt = typer.Option(0, "--seed")
GridOpt = typer.Option(128, "--grid", help="Nodes across the domain's longer side")


def parse_floats(text: Optional[str], field: str) -> Optional[List[float]]:
    if not text:
        return None
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated numbers, got {text!r}", field=field) from exc


def show(outcome: RunOutcome) -> None:
    table = Table(title=f"{outcome.mode.value}: {outcome.directory}")
    table.add_column("quantity", style="cyan")
    table.add_column("value", justify="right")
    for key, value in outcome.summary:
        table.add_row(key, value)
    console.print(table)


def execute(**fields) -> None:
    spec = ExperimentSpec.parse({k: v for k, v in fields.items() if v is not None})
    outcome = run(spec)
    show(outcome)
    if outcome.status:
        raise typer.Exit(code=outcome.status)


def points_from(path: Optional[Path]) -> Optional[list]:
    return None if path is None else [list(p) for p in io.read_points(path)]


@app.command()
@handle_errors
def connect(
    points: Path = typer.Option(..., "--points", help="JSON/YAML array of [x, y]"),
    domain: str = DomainOpt,
    out: Path = OutOpt,
):
    """Minimal connection of the points relative to the domain"""
    execute(mode=RunMode.CONNECT.value, domain=domain, points=points_from(points), output=str(out))


@app.command()
@handle_errors
def lift(
    points: Path = typer.Option(..., "--points"),
    domain: str = DomainOpt,
    grid: int = GridOpt,
    field_format: FieldFormat = typer.Option(FieldFormat.TEXT, "--format"),
    out: Path = OutOpt,
):
    """Lift the vortex field of the points through the double cover"""
    execute(
        mode=RunMode.LIFT.value, domain=domain, points=points_from(points), grid=grid,
        field_format=field_format.value, output=str(out),
    )


@app.command("audit-lower-bound")
@handle_errors
def audit_lower_bound(
    points: Path = typer.Option(..., "--points"),
    domain: str = DomainOpt,
    samples: int = typer.Option(1000, "--samples"),
    seed: int = SeedOpt,
    grid: int = GridOpt,
    out: Path = OutOpt,
):
    """Check the jump-length lower bound on random pixel sets"""
    execute(
        mode=RunMode.AUDIT_LOWER_BOUND.value, domain=domain, points=points_from(points), samples=samples,
        seed=seed, grid=grid, output=str(out),
    )


@app.command()
@handle_errors
def simulate(
    domain: str = DomainOpt,
    degree: int = typer.Option(1, "--degree"),
    beta: float = typer.Option(1.0, "--beta"),
    eps: float = typer.Option(0.04, "--eps"),
    continuation: Optional[str] = typer.Option(None, "--continuation", help="e1,e2,... overrides --eps"),
    grid: int = GridOpt,
    restarts: Optional[int] = typer.Option(None, "--restarts"),
    max_sweeps: Optional[int] = typer.Option(None, "--max-sweeps"),
    boundary: MagnetizationBoundary = typer.Option(MagnetizationBoundary.NEUMANN, "--m-boundary"),
    points: Optional[Path] = typer.Option(None, "--points", help="Start from the recovery competitor at these points"),
    field_format: FieldFormat = typer.Option(FieldFormat.TEXT, "--format"),
    seed: int = SeedOpt,
    out: Path = OutOpt,
):
    """Relax the ferronematic energy, optionally over an ε continuation"""
    execute(
        mode=RunMode.SIMULATE.value, domain=domain, degree=degree, beta=beta,
        eps=parse_floats(continuation, "continuation") or [eps], grid=grid, restarts=restarts,
        max_sweeps=max_sweeps, boundary=boundary.value, points=points_from(points),
        field_format=field_format.value, seed=seed, output=str(out),
    )


@app.command()
@handle_errors
def renorm(
    domain: str = DomainOpt,
    degree: int = typer.Option(1, "--degree"),
    beta: float = typer.Option(1.0, "--beta"),
    evaluate: Optional[Path] = typer.Option(None, "--eval", help="Evaluate W_beta at these points instead of minimising"),
    sigma: Optional[str] = typer.Option(None, "--sigma", help="σ-window as multiples of h, e.g. 2,4,8"),
    starts: Optional[int] = typer.Option(None, "--starts"),
    grid: int = GridOpt,
    seed: int = SeedOpt,
    out: Path = OutOpt,
):
    """Renormalized energy W_beta: minimise, or evaluate a given configuration"""
    execute(
        mode=RunMode.RENORM.value, domain=domain, degree=degree, beta=beta, minimize=evaluate is None,
        points=points_from(evaluate), sigma_factors=parse_floats(sigma, "sigma"), starts=starts,
        grid=grid, seed=seed, output=str(out),
    )


@app.command()
@handle_errors
def pipeline(
    domain: str = DomainOpt,
    degree: int = typer.Option(1, "--degree"),
    beta: float = typer.Option(1.0, "--beta"),
    eps: str = typer.Option("0.04", "--eps", help="One ε or a comma-separated continuation"),
    grid: int = GridOpt,
    sigma: Optional[str] = typer.Option(None, "--sigma"),
    restarts: Optional[int] = typer.Option(None, "--restarts"),
    seed: int = SeedOpt,
    out: Path = OutOpt,
):
    """W_beta prediction, simulation and the comparison table"""
    execute(
        mode=RunMode.PIPELINE.value, domain=domain, degree=degree, beta=beta, eps=parse_floats(eps, "eps"),
        grid=grid, sigma_factors=parse_floats(sigma, "sigma"), restarts=restarts, seed=seed, output=str(out),
    )


@app.command("run")
@handle_errors
def run_spec(spec: Path = typer.Option(..., "--spec", help="Flat YAML experiment description")):
    """Run an experiment file"""
    outcome = run(ExperimentSpec.from_yaml(spec))
    show(outcome)
    if outcome.status:
        raise typer.Exit(code=outcome.status)


@app.command()
@handle_errors
def report(run_dir: Path = typer.Argument(..., help="Completed run directory")):
    """Export plot-ready tables from a run directory"""
    written = export_report(run_dir)
    table = Table(title=f"report: {run_dir}")
    table.add_column("file", style="cyan")
    for path in written:
        table.add_row(str(path.relative_to(run_dir)))
    console.print(table)


if __name__ == "__main__":
    app()
