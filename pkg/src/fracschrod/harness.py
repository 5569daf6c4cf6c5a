"""Experiment drivers on top of the solver.

Each driver takes one ExperimentConfig and returns a frozen report object:

* epsilon_sweep: run every width in the family, tabulate observables, fit
  log-log growth rates of the potential and of the solution.
* uniqueness_experiment: perturb the potential by eps^m times a fixed bump
  and measure how fast the solutions pull together.
* consistency_experiment: smooth a regular potential and compare against the
  unsmoothed reference as the width shrinks.
* emit_figure_data: write the density and energy tables behind the standard
  plots.
* delta_squared_energy_scaling: track the largest energy per width for the
  squared-bump model.

CSV output is byte-deterministic: LF line endings, floats printed with the
shortest round-trip repr.  Run metadata (config digest, timestamp) goes into
manifest.json next to the tables, never into the CSVs themselves.
"""

from __future__ import annotations

import hashlib
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone

import numpy as np

from .grid import ComplexField, Grid, RealField, l2_norm, make_grid
from .mollifier import (
    PotentialSpec,
    RegularizedPotential,
    mollify_samples,
    moderateness_exponent,
    regularize_potential,
    sup_norm,
)
from .observables import composite_norm, count_local_maxima, position_density, window_mass
from .solver import NumericalAbort, SolverConfig, Trajectory, initial_datum, simulate

__all__ = [
    "DEFAULT_EPSILONS",
    "ExperimentConfig",
    "SweepRecord",
    "SweepReport",
    "UniquenessReport",
    "ConsistencyReport",
    "EnergyScalingReport",
    "config_hash",
    "prepared_datum",
    "single_run",
    "epsilon_sweep",
    "default_perturbation",
    "uniqueness_experiment",
    "consistency_experiment",
    "delta_squared_energy_scaling",
    "emit_figure_data",
    "write_csv",
    "write_manifest",
    "write_sweep_csv",
    "write_uniqueness_csv",
    "write_consistency_csv",
    "write_energy_scaling_csv",
    "density_rows",
    "energy_rows",
]

DEFAULT_EPSILONS = (0.8, 0.4, 0.3, 0.15, 0.11, 0.08, 0.05, 0.035)

DENSITY_HEADER = ("x", "re_u", "im_u", "density")
ENERGY_HEADER = ("t", "mass", "energy", "hs_part", "potential_part")
SWEEP_HEADER = (
    "epsilon",
    "sup_norm_p",
    "final_mass",
    "final_energy",
    "final_composite_norm",
    "window_mass",
    "n_maxima",
)

WINDOW_HALF_WIDTH = 0.3
MAXIMA_FLOOR_FRACTION = 0.01

FIGURES = ("fig1", "fig2", "fig3", "fig4", "fig5")
FIG1_TIMES = (0.0, 0.0428, 0.1070, 0.1391, 0.2140, 0.2996)
FIG2_TIMES = (0.0, 0.1070, 0.2140, 0.2996)
FIG3_TIME = 0.2140
FIG3_EPSILONS = (0.035, 0.08, 0.3, 0.8)
FIG4_EPSILONS = (0.05, 0.11, 0.49)
FIG5_TIMES = (0.0, 0.0214, 0.0428, 0.0642)
FIG5_ENERGY_EPSILONS = (0.05, 0.15, 0.25, 0.5)
REGULAR_TAGS = {"zero": "zero", "constant_one": "one", "harmonic_shifted": "harmonic"}


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment: potential family, width list, solver, grid, output."""

    potential: PotentialSpec = PotentialSpec("delta")
    epsilons: tuple[float, ...] = DEFAULT_EPSILONS
    solver: SolverConfig = SolverConfig()
    x_min: float = 0.0
    x_max: float = 10.0
    n: int = 1024
    output_dir: str | None = None
    seed: int = 0
    mollify_data: bool = False

    def __post_init__(self) -> None:
        eps = tuple(float(e) for e in self.epsilons)
        if not eps:
            raise ValueError("need at least one width")
        for e in eps:
            if not (np.isfinite(e) and 0 < e <= 1):
                raise ValueError(f"widths must lie in (0, 1], got {e}")
        if len(set(eps)) != len(eps):
            raise ValueError("widths must be distinct")
        object.__setattr__(self, "epsilons", tuple(sorted(eps, reverse=True)))
        make_grid(self.x_min, self.x_max, self.n)  # fail fast on a bad grid

    @property
    def grid(self) -> Grid:
        return make_grid(self.x_min, self.x_max, self.n)


def config_hash(cfg: ExperimentConfig) -> str:
    """sha256 over canonical key=value lines; stable across processes."""
    items = (
        ("backend", cfg.solver.backend),
        ("boundary", cfg.solver.resolved_boundary),
        ("dt", repr(float(cfg.solver.dt))),
        ("t_end", repr(float(cfg.solver.t_end))),
        ("order_s", repr(float(cfg.solver.order.s))),
        ("record_every", str(cfg.solver.record_every)),
        ("potential", cfg.potential.kind),
        ("site", repr(float(cfg.potential.site))),
        ("weight", repr(float(cfg.potential.weight))),
        ("epsilons", ";".join(repr(float(e)) for e in cfg.epsilons)),
        ("x_min", repr(float(cfg.x_min))),
        ("x_max", repr(float(cfg.x_max))),
        ("n", str(cfg.n)),
        ("seed", str(cfg.seed)),
        ("mollify_data", str(int(cfg.mollify_data))),
    )
    blob = "\n".join(f"{k}={v}" for k, v in items) + "\n"
    return hashlib.sha256(blob.encode("ascii")).hexdigest()


def prepared_datum(cfg: ExperimentConfig, grid: Grid, epsilon: float) -> ComplexField:
    """The standard packet, smoothed at width epsilon when mollify_data is set."""
    u0 = initial_datum(grid)
    if cfg.mollify_data:
        u0 = ComplexField(grid, mollify_samples(u0.values, grid, epsilon))
    return u0


def single_run(cfg: ExperimentConfig, epsilon: float):
    """One solve at one width; returns (trajectory, potential, datum).

    A numerical abort is re-raised tagged with the offending width.
    """
    grid = cfg.grid
    potential = regularize_potential(cfg.potential, grid, epsilon)
    datum = prepared_datum(cfg, grid, epsilon)
    trajectory = _simulate_tagged(datum, potential, cfg.solver, epsilon)
    return trajectory, potential, datum


def _simulate_tagged(datum, potential, solver: SolverConfig, epsilon: float) -> Trajectory:
    try:
        return simulate(datum, potential, solver)
    except NumericalAbort as exc:
        raise NumericalAbort(exc.step, exc.time, exc.worst, epsilon=epsilon) from None


@dataclass(frozen=True)
class SweepRecord:
    epsilon: float
    sup_norm_p: float
    final_mass: float
    final_energy: float
    final_composite_norm: float
    window_mass_at_site: float
    n_maxima: int
    sup_composite_norm: float


@dataclass(frozen=True)
class SweepReport:
    """Per-width records plus fitted growth exponents and run metadata.

    A fit whose RMS residual in log space exceeds 0.1 is flagged rather than
    silently accepted; flagged slopes should not be quoted as rates.
    """

    config: ExperimentConfig
    records: tuple[SweepRecord, ...]
    potential_moderateness_n: float | None
    potential_residual: float | None
    potential_fit_flagged: bool
    solution_moderateness_n: float | None
    solution_residual: float | None
    solution_fit_flagged: bool
    config_digest: str
    created: str


RESIDUAL_FLAG_THRESHOLD = 0.1


def _fit_or_none(epsilons, norms):
    if len(norms) < 3 or any(v <= 0 for v in norms):
        return None, None, False
    slope, residual = moderateness_exponent(epsilons, norms)
    return slope, residual, residual > RESIDUAL_FLAG_THRESHOLD


def epsilon_sweep(cfg: ExperimentConfig, max_workers: int = 1) -> SweepReport:
    """Run every width and fit log-log growth rates.

    The slopes are exponents N with quantity ~ eps^(-N): a bounded family
    fits N close to 0, the scaled bump close to 1, its square close to 2.
    The potential slope is None when the potential vanishes identically.
    """
    order = cfg.solver.order

    def one(epsilon: float) -> SweepRecord:
        trajectory, potential, _ = single_run(cfg, epsilon)
        final = trajectory.states[-1]
        density = position_density(final)
        floor = MAXIMA_FLOOR_FRACTION * float(np.max(density.values))
        site = cfg.potential.site
        return SweepRecord(
            epsilon=epsilon,
            sup_norm_p=sup_norm(potential.field),
            final_mass=float(trajectory.mass[-1]),
            final_energy=float(trajectory.energy[-1]),
            final_composite_norm=composite_norm(final, order),
            window_mass_at_site=window_mass(
                final, site - WINDOW_HALF_WIDTH, site + WINDOW_HALF_WIDTH),
            n_maxima=count_local_maxima(density, floor),
            sup_composite_norm=max(composite_norm(s, order) for s in trajectory.states),
        )

    if max_workers <= 1:
        records = tuple(one(e) for e in cfg.epsilons)
    else:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            records = tuple(pool.map(one, cfg.epsilons))

    p_slope, p_res, p_flag = _fit_or_none(cfg.epsilons, [r.sup_norm_p for r in records])
    u_slope, u_res, u_flag = _fit_or_none(cfg.epsilons, [r.sup_composite_norm for r in records])
    return SweepReport(
        config=cfg,
        records=records,
        potential_moderateness_n=p_slope,
        potential_residual=p_res,
        potential_fit_flagged=p_flag,
        solution_moderateness_n=u_slope,
        solution_residual=u_res,
        solution_fit_flagged=u_flag,
        config_digest=config_hash(cfg),
        created=datetime.now(timezone.utc).isoformat(),
    )


def default_perturbation(grid: Grid, center: float) -> RealField:
    """Unit-height smooth bump supported on (center - 1, center + 1)."""
    y = grid.nodes - center
    values = np.zeros(grid.n)
    inside = np.abs(y) < 1.0
    values[inside] = np.exp(1.0 + 1.0 / (y[inside] ** 2 - 1.0))
    return RealField(grid, values)


@dataclass(frozen=True)
class UniquenessReport:
    config: ExperimentConfig
    m: float
    distances: tuple[float, ...]
    decay_rate: float | None
    residual: float | None


def uniqueness_experiment(cfg: ExperimentConfig, m: float = 2.0,
                          perturbation: RealField | None = None) -> UniquenessReport:
    """Measure how fast an eps^m potential perturbation dies out.

    For each width the potential is shifted by eps^m times a fixed
    nonnegative bump and both runs start from the same datum.  The distance
    is the largest L2 gap over the recorded times; the decay rate is the
    fitted exponent q with distance ~ eps^q, ideally q = m.
    """
    if not (np.isfinite(m) and m >= 1):
        raise ValueError(f"perturbation exponent must be at least 1, got {m}")
    grid = cfg.grid
    if perturbation is None:
        perturbation = default_perturbation(grid, cfg.potential.site)
    if perturbation.grid != grid:
        raise ValueError("perturbation lives on a different grid")
    if np.min(perturbation.values) < 0:
        raise ValueError("perturbation must be nonnegative to keep the potential valid")

    distances = []
    for epsilon in cfg.epsilons:
        base = regularize_potential(cfg.potential, grid, epsilon)
        shifted = RegularizedPotential(
            cfg.potential, epsilon,
            RealField(grid, base.field.values + epsilon**m * perturbation.values),
        )
        datum = prepared_datum(cfg, grid, epsilon)
        t_base = _simulate_tagged(datum, base, cfg.solver, epsilon)
        t_shift = _simulate_tagged(datum, shifted, cfg.solver, epsilon)
        gap = max(
            l2_norm(ComplexField(grid, a.values - b.values))
            for a, b in zip(t_base.states, t_shift.states)
        )
        distances.append(gap)

    if len(distances) >= 3 and all(d > 0 for d in distances):
        slope, residual = moderateness_exponent(cfg.epsilons, distances)
        decay_rate, res = -slope, residual
    else:
        decay_rate, res = None, None
    return UniquenessReport(cfg, float(m), tuple(distances), decay_rate, res)


@dataclass(frozen=True)
class ConsistencyReport:
    config: ExperimentConfig
    reference: str
    errors: tuple[float, ...]
    strictly_decreasing: bool


def consistency_experiment(cfg: ExperimentConfig, reference: str = "fine") -> ConsistencyReport:
    """Final-time L2 gap between smoothed-potential runs and the exact one.

    Only regular potentials have an exact counterpart to compare against.
    reference="fine" solves the exact problem at 4x the resolution and an
    eighth of the step, then restricts to the coarse nodes; "matched" reuses
    the run resolution, isolating the smoothing error from the scheme error.
    """
    if cfg.potential.is_singular:
        raise ValueError(
            "consistency needs a regular potential; the singular kinds have no "
            "unsmoothed counterpart"
        )
    if reference not in ("fine", "matched"):
        raise ValueError(f"reference must be 'fine' or 'matched', got {reference!r}")
    grid = cfg.grid

    if reference == "fine":
        fine_grid = make_grid(cfg.x_min, cfg.x_max, 4 * cfg.n)
        fine_solver = SolverConfig(
            backend=cfg.solver.backend,
            dt=cfg.solver.dt / 8.0,
            t_end=cfg.solver.t_end,
            order=cfg.solver.order,
            record_every=10**9,
            boundary=cfg.solver.boundary,
        )
        fine_potential = regularize_potential(cfg.potential, fine_grid, cfg.epsilons[0])
        fine_final = simulate(initial_datum(fine_grid), fine_potential, fine_solver).states[-1]
        ref_values = fine_final.values[::4]
    else:
        exact = regularize_potential(cfg.potential, grid, cfg.epsilons[0])
        ref_values = simulate(initial_datum(grid), exact, cfg.solver).states[-1].values

    errors = []
    for epsilon in cfg.epsilons:
        smoothed = regularize_potential(cfg.potential, grid, epsilon, mollify_regular=True)
        datum = prepared_datum(cfg, grid, epsilon)
        final = _simulate_tagged(datum, smoothed, cfg.solver, epsilon).states[-1]
        errors.append(l2_norm(ComplexField(grid, final.values - ref_values)))

    decreasing = all(b < a for a, b in zip(errors, errors[1:]))
    return ConsistencyReport(cfg, reference, tuple(errors), decreasing)


@dataclass(frozen=True)
class EnergyScalingReport:
    config: ExperimentConfig
    max_energies: tuple[float, ...]
    ratio: float
    monotone_nondecreasing: bool
    in_band: bool


def delta_squared_energy_scaling(cfg: ExperimentConfig,
                                 band: tuple[float, float] = (50.0, 800.0)) -> EnergyScalingReport:
    """Largest recorded energy per width, meant for the squared-bump model.

    Reports the ratio between the smallest-width and largest-width peaks and
    whether the peaks grow monotonically as the width shrinks.  Nothing is
    asserted here; the report just states what the discrete runs produced.
    Any potential kind is accepted (a width-independent one gives ratio 1).
    """
    peaks = []
    for epsilon in cfg.epsilons:
        trajectory, _, _ = single_run(cfg, epsilon)
        peaks.append(float(np.max(trajectory.energy)))
    ratio = peaks[-1] / peaks[0]  # smallest width over largest width
    monotone = all(b >= a for a, b in zip(peaks, peaks[1:]))
    in_band = band[0] <= ratio <= band[1]
    return EnergyScalingReport(cfg, tuple(peaks), ratio, monotone, in_band)


# ---------------------------------------------------------------------------
# CSV and manifest output


def _cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_csv(path: str, header, rows) -> None:
    """Plain CSV, LF endings, shortest round-trip floats."""
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_cell(v) for v in row) + "\n")


def write_manifest(path: str, payload: dict) -> None:
    with open(path, "w", newline="") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def manifest_payload(cfg: ExperimentConfig, command: str, files, **extra) -> dict:
    payload = {
        "command": command,
        "config_hash": config_hash(cfg),
        "created": datetime.now(timezone.utc).isoformat(),
        "files": sorted(files),
    }
    payload.update(extra)
    return payload


def density_rows(state: ComplexField):
    density = position_density(state).values
    for x, u, d in zip(state.grid.nodes, state.values, density):
        yield (float(x), float(u.real), float(u.imag), float(d))


def energy_rows(trajectory: Trajectory):
    for i, t in enumerate(trajectory.times):
        yield (
            float(t),
            float(trajectory.mass[i]),
            float(trajectory.energy[i]),
            float(trajectory.hs_part[i]),
            float(trajectory.potential_part[i]),
        )


def write_sweep_csv(report: SweepReport, path: str) -> None:
    rows = (
        (r.epsilon, r.sup_norm_p, r.final_mass, r.final_energy,
         r.final_composite_norm, r.window_mass_at_site, r.n_maxima)
        for r in report.records
    )
    write_csv(path, SWEEP_HEADER, rows)


def write_uniqueness_csv(report: UniquenessReport, path: str) -> None:
    rows = zip(report.config.epsilons, report.distances)
    write_csv(path, ("epsilon", "distance"), rows)


def write_consistency_csv(report: ConsistencyReport, path: str) -> None:
    rows = zip(report.config.epsilons, report.errors)
    write_csv(path, ("epsilon", "error"), rows)


def write_energy_scaling_csv(report: EnergyScalingReport, path: str) -> None:
    rows = zip(report.config.epsilons, report.max_energies)
    write_csv(path, ("epsilon", "max_energy"), rows)


# ---------------------------------------------------------------------------
# Figure data


def _with_times(solver: SolverConfig, t_end: float) -> SolverConfig:
    return SolverConfig(
        backend=solver.backend,
        dt=solver.dt,
        t_end=t_end,
        order=solver.order,
        record_every=1,
        boundary=solver.boundary,
    )


def _snapshot(trajectory: Trajectory, t: float, tol: float = 1e-9):
    hits = np.nonzero(np.abs(trajectory.times - t) <= tol)[0]
    return int(hits[0]) if hits.size else None


def _density_snapshots(cfg: ExperimentConfig, spec: PotentialSpec, epsilon: float,
                       times, out: str, name_fn) -> list[str]:
    """Record a run densely and dump one density table per requested time.

    Times that do not land on a recorded step (custom dt) get their own
    dedicated run ending exactly there.
    """
    grid = cfg.grid
    potential = regularize_potential(spec, grid, epsilon)
    datum = prepared_datum(cfg, grid, epsilon)
    trajectory = simulate(datum, potential, _with_times(cfg.solver, max(times)))
    files = []
    for t in times:
        idx = _snapshot(trajectory, t)
        if idx is None:
            state = simulate(datum, potential, _with_times(cfg.solver, t)).states[-1]
        else:
            state = trajectory.states[idx]
        name = name_fn(t)
        write_csv(os.path.join(out, name), DENSITY_HEADER, density_rows(state))
        files.append(name)
    return files


def emit_figure_data(cfg: ExperimentConfig, figure: str, out_dir: str | None = None) -> dict:
    """Write the CSV tables behind one standard figure; returns the manifest.

    The potential family and widths are fixed per figure; the grid, solver
    backend and step come from cfg.
    """
    if figure not in FIGURES:
        raise ValueError(f"unknown figure {figure!r}; expected one of {FIGURES}")
    out = out_dir if out_dir is not None else cfg.output_dir
    if out is None:
        raise ValueError("no output directory given")
    os.makedirs(out, exist_ok=True)
    files: list[str] = []

    if figure == "fig1":
        spec = PotentialSpec("delta")
        files += _density_snapshots(
            cfg, spec, 0.05, FIG1_TIMES, out,
            lambda t: f"density_t{t:.4f}_eps{0.05:g}.csv",
        )
    elif figure == "fig2":
        for kind, tag in REGULAR_TAGS.items():
            files += _density_snapshots(
                cfg, PotentialSpec(kind), 0.05, FIG2_TIMES, out,
                lambda t, tag=tag: f"density_p{tag}_t{t:.4f}.csv",
            )
    elif figure == "fig3":
        spec = PotentialSpec("delta")
        for epsilon in FIG3_EPSILONS:
            files += _density_snapshots(
                cfg, spec, epsilon, (FIG3_TIME,), out,
                lambda t, e=epsilon: f"density_t{t:.4f}_eps{e:g}.csv",
            )
    elif figure == "fig4":
        spec = PotentialSpec("delta")
        for epsilon in FIG4_EPSILONS:
            grid = cfg.grid
            potential = regularize_potential(spec, grid, epsilon)
            datum = prepared_datum(cfg, grid, epsilon)
            trajectory = simulate(datum, potential, _with_times(cfg.solver, cfg.solver.t_end))
            name = f"energy_eps{epsilon:g}.csv"
            write_csv(os.path.join(out, name), ENERGY_HEADER, energy_rows(trajectory))
            files.append(name)
    else:  # fig5
        spec = PotentialSpec("delta_squared")
        files += _density_snapshots(
            cfg, spec, 0.05, FIG5_TIMES, out,
            lambda t: f"density_t{t:.4f}_eps{0.05:g}.csv",
        )
        for epsilon in FIG5_ENERGY_EPSILONS:
            grid = cfg.grid
            potential = regularize_potential(spec, grid, epsilon)
            datum = prepared_datum(cfg, grid, epsilon)
            trajectory = simulate(datum, potential, _with_times(cfg.solver, cfg.solver.t_end))
            name = f"energy_eps{epsilon:g}.csv"
            write_csv(os.path.join(out, name), ENERGY_HEADER, energy_rows(trajectory))
            files.append(name)

    payload = manifest_payload(cfg, f"figures:{figure}", files, figure=figure)
    write_manifest(os.path.join(out, "manifest.json"), payload)
    return payload
