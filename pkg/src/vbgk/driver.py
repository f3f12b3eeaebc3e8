"""Orchestration shared by the CLI commands: validated runs, sweeps, reports.

All CSV output uses 17-significant-digit floats so files round-trip losslessly
and byte-identical reruns can be asserted.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import diagnostics as diag
from . import kinetic, model, navier_stokes, snapshots
from .config import RunConfig
from .errors import (
    BlowupDetected,
    ConfigError,
    ConstraintViolation,
    NonPositiveDensity,
)
from .grid import Grid, sobolev_norm
from .model import ModelParams

RECORDS_HEADER = ("t,e0,es,dev_k,dev_h,dev_m,dev_xi,eta_surrogate,"
                  "rho_min,rho_max,sup_bound_functional")

STUDY_HEADER = ("epsilon,sup_e0,sup_es,sup_dev_k,sup_dev_h,sup_dev_m,sup_dev_xi,"
                "press_err_cos2x,press_err_cos2y,press_err_sinxsiny")

RATE_FUNCTIONALS = ("e0", "es", "dev_k", "dev_h", "dev_m", "dev_xi")


def fmt(x: float) -> str:
    return f"{x:.17g}"


def build_grid(cfg: RunConfig) -> Grid:
    return Grid(cfg.n)


def build_params(cfg: RunConfig) -> ModelParams:
    return model.make_params(cfg.epsilon, cfg.tau, cfg.lam, cfg.nu, cfg.rho_bar)


def solver_config(cfg: RunConfig, debug_checks: bool = False) -> kinetic.SolverConfig:
    return kinetic.SolverConfig(
        t_end=cfg.t_end,
        dt=cfg.dt if cfg.dt_policy == "fixed" else None,
        c_relax=cfg.c_relax,
        c_transp=cfg.c_transp,
        transport_mode=cfg.transport_mode,
        record_every=cfg.record_every,
        debug_checks=debug_checks,
    )


def initial_velocity(cfg: RunConfig, grid: Grid) -> np.ndarray:
    """Initial velocity field (2, n, n) from the configured source."""
    if cfg.initial_data == "taylor_green":
        state, _ = navier_stokes.taylor_green(grid, 0.0, cfg.nu)
        return np.stack([state.u1, state.u2])
    if cfg.initial_data == "zero":
        return np.zeros((2, grid.n, grid.n))
    fields, _ = snapshots.read_snapshot(cfg.initial_data_path)
    if fields.shape != (2, grid.n, grid.n):
        raise ConfigError(
            f"initial data file has shape {fields.shape}, expected (2, {grid.n}, {grid.n})",
            0,
        )
    return fields


@dataclass(frozen=True)
class ValidationReport:
    params: ModelParams
    subchar: model.SubcharacteristicReport
    dt_relax: float
    dt_transp: float
    dt: float
    u0_max: float

    @property
    def passed(self) -> bool:
        return self.subchar.passed

    def lines(self) -> list[str]:
        return [
            f"a = {self.params.a:.6g}  (nu/(2*lambda^2*tau), must lie in (0, 0.25))",
            f"subcharacteristic: {'PASS' if self.subchar.passed else 'FAIL'}"
            f"  speed margin = {self.subchar.speed_margin:.6g}"
            f"  (max characteristic speed {self.subchar.max_char_speed:.6g}"
            f" vs lambda {self.subchar.lam:.6g}, {self.subchar.n_samples} samples)",
            f"m5 coefficient 1-4a = {self.subchar.m5_coefficient:.6g}",
            "min eigenvalue of a*I +/- A'/(2 lambda) = "
            f"{self.subchar.min_maxwellian_jacobian_eig:.6g} (informational)",
            f"dt policy: relaxation bound {self.dt_relax:.6g}, "
            f"transport bound {self.dt_transp:.6g}, dt = {self.dt:.6g}",
        ]


def validate(cfg: RunConfig) -> ValidationReport:
    """Parameter constraints plus the sub-characteristic box check."""
    params = build_params(cfg)
    grid = build_grid(cfg)
    u0 = initial_velocity(cfg, grid)
    u0_max = float(np.max(np.sqrt(u0[0] ** 2 + u0[1] ** 2)))
    box = model.default_state_box(params, u0_max)
    subchar = model.check_subcharacteristic(params, box)
    scfg = solver_config(cfg)
    dt_relax = cfg.c_relax * params.relaxation_time
    dt_transp = cfg.c_transp * params.epsilon * grid.dx / params.lam
    return ValidationReport(
        params=params,
        subchar=subchar,
        dt_relax=dt_relax,
        dt_transp=dt_transp,
        dt=scfg.base_dt(params, grid.dx),
        u0_max=u0_max,
    )


class ReferenceTrajectory:
    """Reference flow evaluated at increasing times.

    Taylor-Green data uses the closed form (zero reference error); file-based
    data advances the pseudo-spectral solver between requested times.
    """

    def __init__(self, cfg: RunConfig, grid: Grid):
        self._analytic = cfg.initial_data in ("taylor_green", "zero")
        self._cfg = cfg
        self._grid = grid
        if not self._analytic:
            u0 = initial_velocity(cfg, grid)
            self._state = navier_stokes.NsState(
                grid=grid, u1=u0[0], u2=u0[1], t=0.0, nu=cfg.nu)
            u_max = max(float(np.max(np.abs(u0))), 1e-8)
            self._dt_max = min(1e-3, 0.25 * grid.dx / u_max)

    def at(self, t: float) -> tuple[navier_stokes.NsState, np.ndarray]:
        if self._analytic:
            if self._cfg.initial_data == "zero":
                zero = np.zeros((self._grid.n, self._grid.n))
                state = navier_stokes.NsState(
                    grid=self._grid, u1=zero, u2=zero.copy(), t=t, nu=self._cfg.nu)
                return state, zero.copy()
            return navier_stokes.taylor_green(self._grid, t, self._cfg.nu)
        self._state = navier_stokes.ns_advance(self._state, t, self._dt_max)
        return self._state, navier_stokes.pressure_from_velocity(self._state)


@dataclass
class SimulationOutput:
    cfg: RunConfig
    params: ModelParams
    records: list[diag.DiagnosticsRecord]
    reports: list[kinetic.StepReport]
    final_state: model.KineticState | None
    error: Exception | None
    u0_norm_s1: float
    snapshots: dict[float, model.KineticState]

    @property
    def completed(self) -> bool:
        return self.error is None

    def sup(self, name: str) -> float:
        return max(getattr(r, name) for r in self.records)

    def mean_pairing_error(self, phi: str) -> float:
        """Time-averaged pairing mismatch |<recovered - p_ref, phi>|."""
        vals = [getattr(r, f"pair_{phi}") - getattr(r, f"ref_pair_{phi}")
                for r in self.records]
        return abs(float(np.mean(vals)))


def run_simulation(cfg: RunConfig, require_valid: bool = True,
                   debug_checks: bool = False) -> SimulationOutput:
    """Validated kinetic run with per-record diagnostics.

    On blow-up the partial records collected so far are kept and the
    exception is stored on the output instead of propagating.  States at the
    first record time at or after each configured snapshot time are captured.
    """
    report = validate(cfg)
    if require_valid and not report.passed:
        raise ConstraintViolation(
            "sub-characteristic check failed: " + "; ".join(report.lines())
        )
    params = report.params
    grid = build_grid(cfg)
    u0 = initial_velocity(cfg, grid)
    state0 = model.initial_kinetic_state(grid, u0, params)
    reference = ReferenceTrajectory(cfg, grid)
    u0_norm_s1 = sobolev_norm(grid, u0, cfg.s + 1.0)

    records: list[diag.DiagnosticsRecord] = []
    captured: dict[float, model.KineticState] = {}
    pending = sorted(cfg.snapshot_times)

    def on_record(t, state, step):
        ref_state, ref_p = reference.at(t)
        records.append(diag.compute_record(state, ref_state, ref_p, cfg.s_prime, t))
        # snapshots keyed by the actual record time reached
        while pending and t >= pending[0] - 1e-12:
            pending.pop(0)
            captured[t] = state

    scfg = solver_config(cfg, debug_checks)
    error = None
    final_state = None
    reports: list[kinetic.StepReport] = []
    try:
        result = kinetic.run(state0, scfg, on_record)
        final_state = result.state
        reports = result.reports
    except (BlowupDetected, NonPositiveDensity) as exc:
        error = exc
        if isinstance(exc, BlowupDetected):
            reports = exc.reports
    return SimulationOutput(
        cfg=cfg,
        params=params,
        records=records,
        reports=reports,
        final_state=final_state,
        error=error,
        u0_norm_s1=u0_norm_s1,
        snapshots=captured,
    )


def write_records_csv(records, path) -> None:
    lines = [RECORDS_HEADER]
    for r in records:
        lines.append(",".join(fmt(v) for v in (
            r.t, r.e0, r.es, r.dev_k, r.dev_h, r.dev_m, r.dev_xi,
            r.eta_surrogate, r.rho_min, r.rho_max, r.sup_bound_functional,
        )))
    Path(path).write_text("\n".join(lines) + "\n")


def run_to_files(cfg: RunConfig, out_dir) -> SimulationOutput:
    """cmd_run body: records.csv plus optional snapshots at requested times."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    output = run_simulation(cfg)
    write_records_csv(output.records, out_dir / "records.csv")
    for i, (t, state) in enumerate(sorted(output.snapshots.items())):
        snapshots.write_snapshot(
            out_dir / f"snapshot_{i:03d}.vbgk",
            state.f.reshape(15, cfg.n, cfg.n),
            t,
        )
    return output


@dataclass
class SweepOutput:
    epsilons: list[float]
    runs: dict[float, SimulationOutput]
    fits: dict[str, diag.ConvergenceStudyResult]
    failures: dict[float, str]

    @property
    def completed(self) -> bool:
        return not self.failures


def _study_row(eps: float, output: SimulationOutput) -> str:
    return ",".join(fmt(v) for v in (
        eps,
        output.sup("e0"), output.sup("es"),
        output.sup("dev_k"), output.sup("dev_h"),
        output.sup("dev_m"), output.sup("dev_xi"),
        output.mean_pairing_error("cos2x"),
        output.mean_pairing_error("cos2y"),
        output.mean_pairing_error("sinxsiny"),
    ))


def worker_count(n_jobs: int) -> int:
    env = os.environ.get("VBGK_THREADS", "").strip()
    if env:
        try:
            cap = max(1, int(env))
        except ValueError:
            raise ConfigError(f"VBGK_THREADS must be an integer, got {env!r}", 0) from None
    else:
        cap = os.cpu_count() or 1
    return max(1, min(cap, n_jobs))


def run_sweep(cfg: RunConfig, epsilons, out_dir) -> SweepOutput:
    """One simulation per epsilon (workers capped by VBGK_THREADS), rate fits.

    Results are assembled in decreasing-epsilon order regardless of worker
    scheduling, so output files do not depend on parallelism.
    """
    epsilons = sorted({float(e) for e in epsilons}, reverse=True)
    if len(epsilons) < 3:
        raise ConfigError(f"sweep needs >= 3 epsilons, got {len(epsilons)}", 0)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    configs = {eps: cfg.with_epsilon(eps) for eps in epsilons}
    for sub in configs.values():
        validate(sub)

    def job(eps: float) -> SimulationOutput:
        return run_simulation(configs[eps])

    runs: dict[float, SimulationOutput] = {}
    failures: dict[float, str] = {}
    with ThreadPoolExecutor(max_workers=worker_count(len(epsilons))) as pool:
        futures = {eps: pool.submit(job, eps) for eps in epsilons}
        for eps in epsilons:
            runs[eps] = futures[eps].result()

    for eps in epsilons:
        sub_dir = out_dir / f"eps_{eps:g}"
        sub_dir.mkdir(parents=True, exist_ok=True)
        write_records_csv(runs[eps].records, sub_dir / "records.csv")
        if not runs[eps].completed:
            failures[eps] = str(runs[eps].error)

    ok = [eps for eps in epsilons if eps not in failures]
    rows = [STUDY_HEADER] + [_study_row(eps, runs[eps]) for eps in ok]
    (out_dir / "study.csv").write_text("\n".join(rows) + "\n")

    fits: dict[str, diag.ConvergenceStudyResult] = {}
    if len(ok) >= 3:
        for name in RATE_FUNCTIONALS:
            fits[name] = diag.fit_rate(ok, [runs[e].sup(name) for e in ok])
    (out_dir / "rates.txt").write_text(rates_report(cfg, fits, runs, ok, failures))
    return SweepOutput(epsilons=epsilons, runs=runs, fits=fits, failures=failures)


def rates_report(cfg: RunConfig, fits, runs, ok_epsilons, failures) -> str:
    lines = [
        "convergence rates: least-squares slope of log(sup_t functional) vs log(epsilon)",
        f"epsilons: {', '.join(f'{e:g}' for e in ok_epsilons)}",
        "",
    ]
    for name, fit in fits.items():
        lines.append(
            f"{name:8s} slope = {fit.slope: .4f}  intercept = {fit.intercept: .4f}"
            f"  max residual = {fit.residual:.3e}"
        )
    delta_stmt = (cfg.s - cfg.s_prime) / (2.0 * cfg.s)
    delta_proof = cfg.s_prime / (2.0 * cfg.s)
    lines += [
        "",
        f"es target readings for s = {cfg.s:g}, s' = {cfg.s_prime:g}:",
        f"  1/2 - (s - s')/(2s) = {0.5 - delta_stmt:.4f}",
        f"  1/2 - s'/(2s)       = {0.5 - delta_proof:.4f}",
        "",
        "pressure pairing mismatch, time-averaged |<recovered - p_ref, phi>|:",
    ]
    for eps in ok_epsilons:
        out = runs[eps]
        lines.append(
            f"  eps = {eps:<8g} cos2x {out.mean_pairing_error('cos2x'):.6e}"
            f"  cos2y {out.mean_pairing_error('cos2y'):.6e}"
            f"  sinxsiny {out.mean_pairing_error('sinxsiny'):.6e}"
        )
    if failures:
        lines.append("")
        for eps, msg in failures.items():
            lines.append(f"FAILED eps = {eps:g}: {msg}")
    lines += [
        "",
        "notes: entropy uses the quadratic surrogate with weight 1/(2 rho_bar);",
        "the eta_surrogate column is that surrogate, not a kinetic entropy.",
    ]
    return "\n".join(lines) + "\n"


def reference_to_files(cfg: RunConfig, out_dir) -> list[float]:
    """cmd_reference body: reference snapshots + energy series at record times."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    params = build_params(cfg)
    grid = build_grid(cfg)
    _, times = kinetic.step_times(solver_config(cfg), params, grid.dx)
    reference = ReferenceTrajectory(cfg, grid)
    rows = ["t,energy"]
    for i, t in enumerate(times):
        state, p = reference.at(t)
        snapshots.write_snapshot(
            out_dir / f"reference_{i:03d}.vbgk",
            np.stack([state.u1, state.u2, p]),
            t,
        )
        rows.append(f"{fmt(t)},{fmt(state.energy())}")
    (out_dir / "reference.csv").write_text("\n".join(rows) + "\n")
    return times
