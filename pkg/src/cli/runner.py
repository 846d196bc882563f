"""
Experiment orchestration: one function per run mode, all writing into the run directory
"""
import itertools
import logging
import math
from dataclasses import dataclass, field
from importlib import metadata
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.cli import io
from src.connection import minimality_diagnostics, solve_min_connection, validate_connection
from src.core.config import settings
from src.core.exceptions import FerroconnectError, UsageError
from src.core.schemas import (
    DefectRecord,
    ExperimentSpec,
    PipelineComparison,
    RunManifest,
    RunMode,
    SimulationSummary,
    WallRecord,
)
from src.ferrosim import (
    BoundaryDatum,
    Params,
    RelaxResult,
    RelaxSchedule,
    State,
    boundary_datum,
    decoupled_energy,
    detect_wall,
    recovery_competitor,
    relax_continuation,
)
from src.geom import Domain, Point, domain_factory
from src.lifting import LatticeGrid, GridField, audit_lower_bound, construct_lifting, detect_singularities
from src.renorm import (
    VortexConfig,
    canonical_harmonic_map,
    core_energy_limit,
    minimize_w_beta,
    renormalized_energy,
    w_beta,
)
from src.renorm.harmonic import singular_phase

logger = logging.getLogger(__name__)

VERSIONED_PACKAGES = ("numpy", "scipy", "networkx", "pydantic", "joblib")


@dataclass
class RunOutcome:
    mode: RunMode
    directory: Path
    files: List[str] = field(default_factory=list)
    summary: List[Tuple[str, str]] = field(default_factory=list)
    status: int = 0


class RunContext:
    """Run directory bookkeeping shared by the mode handlers"""

    def __init__(self, spec: ExperimentSpec):
        self.spec = spec
        self.directory = spec.output_dir
        self.directory.mkdir(parents=True, exist_ok=True)
        self.domain: Domain = domain_factory.get_domain(spec.domain)
        self.outcome = RunOutcome(mode=spec.mode, directory=self.directory)

    def path(self, name: str) -> Path:
        target = self.directory / name
        target.parent.mkdir(parents=True, exist_ok=True)
        rel = str(Path(name).as_posix())
        if rel not in self.outcome.files:
            self.outcome.files.append(rel)
        return target

    def note(self, key: str, value) -> None:
        if isinstance(value, float):
            value = f"{value:.6g}"
        self.outcome.summary.append((key, str(value)))

    def grid(self) -> LatticeGrid:
        return LatticeGrid.for_domain(self.domain, n=self.spec.grid)


def package_versions() -> Dict[str, str]:
    versions = {}
    for name in VERSIONED_PACKAGES:
        try:
            versions[name] = metadata.version(name)
        except metadata.PackageNotFoundError:
            versions[name] = "unknown"
    return versions


def write_manifest(ctx: RunContext) -> None:
    manifest = RunManifest(
        mode=ctx.spec.mode,
        seed=ctx.spec.seed,
        spec=ctx.spec.model_dump(mode="json"),
        settings=settings.model_dump(mode="json"),
        versions=package_versions(),
        files=sorted(ctx.outcome.files),
    )
    io.write_json(ctx.directory / "manifest.json", manifest)


def _points(ctx: RunContext, required: bool = True) -> List[Point]:
    points = [tuple(p) for p in ctx.spec.points]
    if required and not points:
        raise UsageError("this mode needs at least one point", field="points")
    return points


# connect

def run_connect(ctx: RunContext) -> None:
    points = _points(ctx, required=False)
    connection = solve_min_connection(ctx.domain, points)
    io.write_connection(ctx.path("connection.json"), connection, ctx.domain.name)
    io.write_points(ctx.path("points.json"), points)

    validation = validate_connection(ctx.domain, points, connection)
    minimality = minimality_diagnostics(ctx.domain, connection)
    ctx.note("points", len(points))
    ctx.note("segments", len(connection.segments))
    ctx.note("L_omega", connection.total_length)
    ctx.note("valid", validation.passed)
    ctx.note("minimality diagnostics", minimality.passed)
    ctx.note("max boundary angle", minimality.max_angle)


# lift

def vortex_field(grid: LatticeGrid, points: Sequence[Point]) -> GridField:
    """Product of unit q-vortices of degree one at the points"""
    centers = np.asarray(points, dtype=float).reshape(-1, 2)

    def unit(X, Y):
        phase = singular_phase(centers, 1, X, Y)
        return np.stack([np.cos(phase), np.sin(phase)], axis=-1)

    return GridField.from_function(grid, unit)


def run_lift(ctx: RunContext) -> None:
    points = _points(ctx)
    grid = ctx.grid()
    connection = solve_min_connection(ctx.domain, points)
    field_ = vortex_field(grid, points)
    result = construct_lifting(field_, connection)

    fmt = ctx.spec.field_format
    io.write_field(ctx.path("q.field"), field_, fmt)
    io.write_field(ctx.path("lifting.field"), result.lifting, fmt)
    io.write_edges(ctx.path("jumps.edges"), result.jumps)
    io.write_edges(ctx.path("band.edges"), result.band)
    io.write_connection(ctx.path("connection.json"), connection, ctx.domain.name)
    io.write_json(
        ctx.path("defects.json"),
        [DefectRecord(x=d.center[0], y=d.center[1], winding=d.winding) for d in result.report.defects],
    )
    ctx.note("defects", len(result.report.defects))
    ctx.note("jump edges", len(result.jumps))
    ctx.note("jump length", result.jumps.length)
    ctx.note("L_omega", connection.total_length)


# audit-lower-bound

def run_audit(ctx: RunContext) -> None:
    points = _points(ctx)
    summary = audit_lower_bound(ctx.domain, points, ctx.spec.samples, ctx.spec.seed, grid_n=ctx.spec.grid)
    io.write_csv(ctx.path("audit.csv"), [r.to_dict() for r in summary.reports])
    ctx.note("lower bound", f"{summary.passed}/{summary.samples} pass")
    ctx.note("min margin", summary.min_margin)
    if summary.failures:
        ctx.note("failing samples", ",".join(str(s) for s in summary.failures[:10]))
        ctx.outcome.status = 3


# simulate

def initial_state(ctx: RunContext, grid: LatticeGrid, params: Params, points: Sequence[Point]) -> State:
    spec = ctx.spec
    datum = boundary_datum(ctx.domain, spec.degree)
    if points and spec.degree != 0:
        connection = solve_min_connection(ctx.domain, list(points))
        return recovery_competitor(ctx.domain, grid, points, connection, params, datum, spec.boundary).state
    return State.from_datum(grid, datum, params, spec.boundary)


def summarize(result: RelaxResult) -> Tuple[SimulationSummary, object]:
    state, params = result.state, result.params
    report = detect_singularities(state.Q)
    walls = detect_wall(state, params)
    decoupled = decoupled_energy(state, params)
    summary = SimulationSummary(
        eps=params.eps,
        beta=params.beta,
        kappa=params.kappa,
        kappa_star_fit=params.kappa_star,
        kappa_star_closed=params.kappa_star_closed,
        energy=result.energy.total,
        residual=result.residual,
        converged=result.converged,
        sweeps=result.sweeps,
        defects=[
            DefectRecord(x=d.center[0], y=d.center[1], winding=d.winding, touches_boundary=d.touches_boundary)
            for d in report.defects + report.flagged
        ],
        walls=[
            WallRecord(
                length=length,
                closed=closed,
                start=None if closed else tuple(line[0]),
                end=None if closed else tuple(line[-1]),
            )
            for line, length, closed in zip(walls.polylines, walls.lengths, walls.closed)
        ],
        wall_length=walls.total_length,
        max_principle=result.audit.as_dict() if result.audit else {},
        decoupling=decoupled.as_dict(),
    )
    return summary, walls


def simulate(ctx: RunContext, points: Sequence[Point]) -> List[Tuple[RelaxResult, SimulationSummary]]:
    spec = ctx.spec
    grid = ctx.grid()
    first = Params.from_eps_beta(spec.eps[0], spec.beta)
    state = initial_state(ctx, grid, first, points)
    schedule = RelaxSchedule(restarts=spec.restarts, max_sweeps=spec.max_sweeps, seed=spec.seed)
    results = relax_continuation(state, spec.eps, spec.beta, schedule)

    out = []
    for k, result in enumerate(results):
        stage = f"level_{k:02d}"
        summary, walls = summarize(result)
        io.write_field(ctx.path(f"{stage}/Q.field"), result.state.Q, spec.field_format)
        io.write_field(ctx.path(f"{stage}/M.field"), result.state.M, spec.field_format)
        io.write_csv(ctx.path(f"{stage}/ledger.csv"), [row.as_dict() for row in result.ledger])
        io.write_json(ctx.path(f"{stage}/summary.json"), summary)
        io.write_polylines(ctx.path(f"{stage}/walls.json"), walls.polylines)
        io.write_edges(ctx.path(f"{stage}/wall.edges"), walls.edges)
        out.append((result, summary))
    return out


def run_simulate(ctx: RunContext) -> None:
    for result, summary in simulate(ctx, _points(ctx, required=False)):
        eps = result.params.eps
        ctx.note(f"eps={eps:g} F", summary.energy)
        ctx.note(f"eps={eps:g} defects", sum(1 for d in summary.defects if d.winding % 2))
        ctx.note(f"eps={eps:g} wall length", summary.wall_length)
        ctx.note(f"eps={eps:g} converged", summary.converged)
        if result.audit is not None:
            ctx.note(f"eps={eps:g} max principle", result.audit.m_passed)


# renorm

def run_renorm(ctx: RunContext) -> None:
    spec = ctx.spec
    grid = ctx.grid()
    datum = boundary_datum(ctx.domain, spec.degree)

    limit = core_energy_limit()
    io.write_csv(ctx.path("core_energy.csv"), limit.table())
    ctx.note("gamma*", limit.gamma_star)

    if spec.minimize:
        optimum = minimize_w_beta(
            ctx.domain, datum, spec.degree, spec.beta, grid=grid, starts=spec.starts, seed=spec.seed,
            sigma_factors=spec.sigma_factors,
        )
        io.write_csv(ctx.path("w_beta_ledger.csv"), optimum.ledger)
        io.write_json(ctx.path("w_beta_optimum.json"), {"best": optimum.best.as_row(),
                                                         "optima": [o.as_row() for o in optimum.optima]})
        best = optimum.best
        ctx.note("optima within tolerance", len(optimum.optima))
    else:
        config = VortexConfig.for_degree(_points(ctx), spec.degree)
        best = w_beta(ctx.domain, grid, config, datum, spec.beta, spec.sigma_factors)
        io.write_csv(ctx.path("w_beta_ledger.csv"), [best.as_row()])

    window = renormalized_energy(ctx.domain, grid, best.config, datum, spec.sigma_factors)
    io.write_csv(ctx.path("sigma_window.csv"), window.table())
    io.write_points(ctx.path("points.json"), best.config.points)
    ctx.note("points", " ".join(f"({x:.4f},{y:.4f})" for x, y in best.config.points))
    ctx.note("W", best.W)
    ctx.note("W spread", best.spread)
    ctx.note("L_omega", best.l_omega)
    ctx.note("W_beta", best.value)


# pipeline

def matching_distance(a: Sequence[Point], b: Sequence[Point]) -> Optional[float]:
    """Smallest over pairings of the largest matched distance; None for unequal counts"""
    if len(a) != len(b):
        return None
    if not a:
        return 0.0
    return min(
        max(math.dist(p, q) for p, q in zip(a, perm))
        for perm in itertools.permutations(b)
    )


def endpoints_near_defects(summary: SimulationSummary, defects: Sequence[Point], tolerance: float) -> Optional[bool]:
    """Every open wall ends within `tolerance` of a detected defect"""
    if not defects:
        return None
    ends = [p for w in summary.walls if not w.closed for p in (w.start, w.end)]
    return all(min(math.dist(p, d) for d in defects) <= tolerance for p in ends)


def defect_divergence_residual(
    domain: Domain, grid: LatticeGrid, datum: BoundaryDatum, defects: Sequence[Point], degree: int
) -> Optional[float]:
    """Divergence residual of the canonical map built on the detected defects"""
    if len(defects) != 2 * abs(degree):
        return None
    try:
        cmap = canonical_harmonic_map(domain, grid, VortexConfig.for_degree(defects, degree), datum)
    except FerroconnectError as exc:
        logger.warning(f"No canonical map on the detected defects: {exc.message}")
        return None
    return cmap.divergence_residual()


def run_pipeline(ctx: RunContext) -> None:
    spec = ctx.spec
    if spec.degree == 0:
        raise UsageError("the pipeline needs a non-zero degree", field="degree")
    grid = ctx.grid()
    datum = boundary_datum(ctx.domain, spec.degree)
    optimum = minimize_w_beta(
        ctx.domain, datum, spec.degree, spec.beta, grid=grid, starts=spec.starts, seed=spec.seed,
        sigma_factors=spec.sigma_factors,
    )
    predicted = list(optimum.config.points)
    io.write_points(ctx.path("predicted_points.json"), predicted)

    rows = []
    for result, summary in simulate(ctx, predicted):
        detected = [(d.x, d.y) for d in summary.defects if d.winding % 2]
        connection = solve_min_connection(ctx.domain, detected) if detected else None
        l_omega = connection.total_length if connection else None
        slack = 3 * grid.h
        comparison = PipelineComparison(
            eps=summary.eps,
            defect_count=len(detected),
            defect_mismatch=matching_distance(detected, predicted),
            l_omega_defects=l_omega,
            wall_length=summary.wall_length,
            wall_mismatch=None if l_omega is None else summary.wall_length - l_omega,
            length_at_least_l_omega=None if l_omega is None else summary.wall_length >= l_omega - slack,
            endpoints_within_3h=endpoints_near_defects(summary, detected, slack),
            divergence_residual=defect_divergence_residual(ctx.domain, grid, datum, detected, spec.degree),
            predicted_points=predicted,
            w_beta=optimum.value,
        )
        rows.append(comparison.model_dump(mode="json", exclude={"predicted_points"}))
        ctx.note(f"eps={summary.eps:g} defects", len(detected))
        ctx.note(f"eps={summary.eps:g} defect mismatch", comparison.defect_mismatch)
        ctx.note(f"eps={summary.eps:g} wall - L_omega", comparison.wall_mismatch)
        ctx.note(f"eps={summary.eps:g} divergence residual", comparison.divergence_residual)
    io.write_csv(ctx.path("comparison.csv"), rows)
    ctx.note("W_beta", optimum.value)


HANDLERS: Dict[RunMode, Callable[[RunContext], None]] = {
    RunMode.CONNECT: run_connect,
    RunMode.LIFT: run_lift,
    RunMode.AUDIT_LOWER_BOUND: run_audit,
    RunMode.SIMULATE: run_simulate,
    RunMode.RENORM: run_renorm,
    RunMode.PIPELINE: run_pipeline,
}


def run(spec: ExperimentSpec) -> RunOutcome:
    """Execute one experiment; the manifest is rewritten once all outputs exist"""
    ctx = RunContext(spec)
    logger.info(f"Starting {spec.mode.value} run in {ctx.directory}", extra={"seed": spec.seed, "mode": spec.mode.value})
    write_manifest(ctx)
    HANDLERS[spec.mode](ctx)
    io.write_csv(ctx.path("summary.csv"), [{"key": k, "value": v} for k, v in ctx.outcome.summary])
    write_manifest(ctx)
    logger.info(f"Finished {spec.mode.value} run: {len(ctx.outcome.files)} files")
    return ctx.outcome
