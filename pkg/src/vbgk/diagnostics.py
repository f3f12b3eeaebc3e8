"""Deviation functionals, error norms against a reference flow, rate fits.

The change of variables

    w = sum_i f_i,  m = (lam/eps)(f_1 - f_3),  xi = (lam/eps)(f_2 - f_4),
    k = f_1 + f_3,  h = f_2 + f_4

turns the kinetic system into relaxation form.  Near the diffusive limit
k and h collapse onto 2*a*w up to O(eps^2) and m, xi onto
A_j(w)/eps - tau*lam^2 * (gradient of k or h); the deviation norms below
measure the distance from that manifold.  The error functionals compare the
macroscopic fields against an incompressible reference solution:

    e0 = ||rho - rho_bar||_0 / eps + ||rho u - rho_bar u_ref||_0
    es = ||rho - rho_bar||_s' / eps + ||u - u_ref||_s'
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import grid as gridmod
from .errors import NonPositiveDensity, NonPositiveError, TooFewPoints
from .model import (
    KineticState,
    ModelParams,
    entropy_density,
    entropy_eta,
    entropy_gradient,
    flux,
)
from .navier_stokes import NsState


@dataclass(frozen=True)
class RelaxationVars:
    """Moment combinations (w, m, xi, k, h), each of shape (3, n, n)."""

    w: np.ndarray
    m: np.ndarray
    xi: np.ndarray
    k: np.ndarray
    h: np.ndarray


def to_relaxation_vars(state: KineticState) -> RelaxationVars:
    f = state.f
    p = state.params
    fac = p.lam / p.epsilon
    return RelaxationVars(
        w=f.sum(axis=0),
        m=fac * (f[0] - f[2]),
        xi=fac * (f[1] - f[3]),
        k=f[0] + f[2],
        h=f[1] + f[3],
    )


def reconstruct_kinetic(rv: RelaxationVars, grid: gridmod.Grid,
                        params: ModelParams) -> KineticState:
    """Invert the change of variables (linear bijection)."""
    half = 0.5 * params.epsilon / params.lam
    f1 = 0.5 * rv.k + half * rv.m
    f3 = 0.5 * rv.k - half * rv.m
    f2 = 0.5 * rv.h + half * rv.xi
    f4 = 0.5 * rv.h - half * rv.xi
    f5 = rv.w - rv.k - rv.h
    return KineticState(grid=grid, params=params, f=np.stack([f1, f2, f3, f4, f5]))


def macro_fields(state: KineticState) -> tuple[np.ndarray, np.ndarray]:
    """Density rho and velocity u = (q1, q2)/(eps*rho) from the moments."""
    w = state.w()
    rho = w[0]
    if np.min(rho) <= 0.0:
        raise NonPositiveDensity(f"projected density min = {np.min(rho):.6g}")
    u = w[1:] / (state.params.epsilon * rho)
    return rho, u


def _hs_difference(grid, field_a, field_b, s):
    return gridmod.sobolev_norm(grid, np.asarray(field_a) - np.asarray(field_b), s)


def error_functionals(state: KineticState, ref: NsState,
                      s_prime: float) -> tuple[float, float]:
    """(e0, es) against a reference velocity field on the same grid."""
    grid = state.grid
    if ref.grid.n != grid.n:
        raise gridmod.DimensionMismatch(
            f"reference grid n={ref.grid.n} does not match state grid n={grid.n}"
        )
    p = state.params
    rho, u = macro_fields(state)
    rho_dev = rho - p.rho_bar
    mom_dev = np.stack([rho * u[0] - p.rho_bar * ref.u1,
                        rho * u[1] - p.rho_bar * ref.u2])
    vel_dev = np.stack([u[0] - ref.u1, u[1] - ref.u2])
    e0 = gridmod.l2_norm(grid, rho_dev) / p.epsilon + gridmod.l2_norm(grid, mom_dev)
    es = (gridmod.sobolev_norm(grid, rho_dev, s_prime) / p.epsilon
          + gridmod.sobolev_norm(grid, vel_dev, s_prime))
    return e0, es


def deviation_norms(rv: RelaxationVars, grid: gridmod.Grid,
                    params: ModelParams) -> tuple[float, float, float, float]:
    """L2 distances from the first-order relaxation manifold.

    Returns (dev_k, dev_h, dev_m, dev_xi) with
    dev_k = ||k - 2aw||, dev_m = ||m - A_1(w)/eps + tau*lam^2*dx(k)||
    and the y-analogues for h and xi.
    """
    a = params.a
    visc = params.tau * params.lam ** 2
    dev_k = gridmod.l2_norm(grid, rv.k - 2.0 * a * rv.w)
    dev_h = gridmod.l2_norm(grid, rv.h - 2.0 * a * rv.w)
    a1 = flux(1, rv.w, params) / params.epsilon
    a2 = flux(2, rv.w, params) / params.epsilon
    dkx = np.stack([gridmod.spectral_derivative(grid, rv.k[c], "x") for c in range(3)])
    dhy = np.stack([gridmod.spectral_derivative(grid, rv.h[c], "y") for c in range(3)])
    dev_m = gridmod.l2_norm(grid, rv.m - a1 + visc * dkx)
    dev_xi = gridmod.l2_norm(grid, rv.xi - a2 + visc * dhy)
    return dev_k, dev_h, dev_m, dev_xi


def pressure_recovery(state: KineticState) -> np.ndarray:
    """Mean-zero (rho^2 - rho_bar^2) / (2*rho_bar*eps^2)."""
    p = state.params
    rho = state.w()[0]
    if np.min(rho) <= 0.0:
        raise NonPositiveDensity(f"density min = {np.min(rho):.6g}")
    field = (rho ** 2 - p.rho_bar ** 2) / (2.0 * p.rho_bar * p.epsilon ** 2)
    return field - np.mean(field)


def pairing(f: np.ndarray, phi: np.ndarray) -> float:
    """Normalized-measure inner product of two fields."""
    return float(np.mean(np.asarray(f) * np.asarray(phi)))


def pressure_test_functions(grid: gridmod.Grid) -> dict[str, np.ndarray]:
    """Fixed smooth test functions for the weak-star pressure proxy."""
    x, y = grid.x, grid.y
    return {
        "cos2x": np.cos(2 * x),
        "cos2y": np.cos(2 * y),
        "sinxsiny": np.sin(x) * np.sin(y),
    }


def relative_entropy_surrogate(w: np.ndarray, w_ref: np.ndarray,
                               params: ModelParams) -> float:
    """Quadratic relative entropy eta(w) - eta(w_ref) - grad eta(w_ref).(w - w_ref).

    A macroscopic surrogate for the kinetic relative entropy, whose exact
    form is not available in closed form; labeled as such in all outputs.
    """
    dens = (entropy_density(w, params) - entropy_density(w_ref, params)
            - np.sum(entropy_gradient(w_ref, params) * (w - w_ref), axis=0))
    return float(np.mean(dens))


def bound_functional(state: KineticState) -> float:
    """|rho - rho_bar|_inf / eps + |rho u|_inf, the quantity kept below M."""
    p = state.params
    w = state.w()
    rho_dev = gridmod.linf_norm(w[0] - p.rho_bar) / p.epsilon
    mom = gridmod.linf_norm(np.sqrt((w[1] / p.epsilon) ** 2 + (w[2] / p.epsilon) ** 2))
    return rho_dev + mom


@dataclass(frozen=True)
class DiagnosticsRecord:
    """One row of the per-run time series."""

    t: float
    e0: float
    es: float
    dev_k: float
    dev_h: float
    dev_m: float
    dev_xi: float
    eta: float
    eta_surrogate: float
    rho_min: float
    rho_max: float
    sup_bound_functional: float
    pair_cos2x: float
    pair_cos2y: float
    pair_sinxsiny: float
    ref_pair_cos2x: float
    ref_pair_cos2y: float
    ref_pair_sinxsiny: float

    def finite(self) -> bool:
        return all(np.isfinite(v) for v in (
            self.e0, self.es, self.dev_k, self.dev_h, self.dev_m, self.dev_xi,
            self.eta, self.eta_surrogate, self.rho_min, self.rho_max,
            self.sup_bound_functional,
        ))


def compute_record(state: KineticState, ref: NsState, ref_pressure: np.ndarray,
                   s_prime: float, t: float) -> DiagnosticsRecord:
    grid = state.grid
    p = state.params
    rv = to_relaxation_vars(state)
    e0, es = error_functionals(state, ref, s_prime)
    dev_k, dev_h, dev_m, dev_xi = deviation_norms(rv, grid, p)
    rho = rv.w[0]
    w_ref = np.stack([
        np.full((grid.n, grid.n), p.rho_bar),
        p.epsilon * p.rho_bar * ref.u1,
        p.epsilon * p.rho_bar * ref.u2,
    ])
    recovered = pressure_recovery(state)
    phis = pressure_test_functions(grid)
    return DiagnosticsRecord(
        t=t,
        e0=e0,
        es=es,
        dev_k=dev_k,
        dev_h=dev_h,
        dev_m=dev_m,
        dev_xi=dev_xi,
        eta=entropy_eta(rv.w, p),
        eta_surrogate=relative_entropy_surrogate(rv.w, w_ref, p),
        rho_min=float(np.min(rho)),
        rho_max=float(np.max(rho)),
        sup_bound_functional=bound_functional(state),
        pair_cos2x=pairing(recovered, phis["cos2x"]),
        pair_cos2y=pairing(recovered, phis["cos2y"]),
        pair_sinxsiny=pairing(recovered, phis["sinxsiny"]),
        ref_pair_cos2x=pairing(ref_pressure, phis["cos2x"]),
        ref_pair_cos2y=pairing(ref_pressure, phis["cos2y"]),
        ref_pair_sinxsiny=pairing(ref_pressure, phis["sinxsiny"]),
    )


@dataclass(frozen=True)
class ConvergenceStudyResult:
    """Least-squares power-law fit through (log eps, log error)."""

    epsilons: tuple[float, ...]
    errors: tuple[float, ...]
    slope: float
    intercept: float
    residual: float


def fit_rate(epsilons, errors) -> ConvergenceStudyResult:
    """Fit error ~ C * eps^slope; residual is the max |log error - fit|."""
    eps = np.asarray(list(epsilons), dtype=float)
    err = np.asarray(list(errors), dtype=float)
    if eps.size < 3:
        raise TooFewPoints(f"need >= 3 data points, got {eps.size}")
    if eps.size != err.size:
        raise ValueError("epsilons and errors must have equal length")
    if np.any(eps <= 0):
        raise NonPositiveError("epsilons must be positive")
    if np.any(err <= 0):
        raise NonPositiveError("errors must be positive for a log-log fit")
    order = np.argsort(-eps)
    eps, err = eps[order], err[order]
    log_e, log_err = np.log(eps), np.log(err)
    slope, intercept = np.polyfit(log_e, log_err, 1)
    residual = float(np.max(np.abs(log_err - (slope * log_e + intercept))))
    return ConvergenceStudyResult(
        epsilons=tuple(eps),
        errors=tuple(err),
        slope=float(slope),
        intercept=float(intercept),
        residual=residual,
    )


@dataclass(frozen=True)
class BoundednessReport:
    """Time series of the sup bound functional against a threshold M."""

    threshold: float
    supremum: float
    sup_time: float
    first_crossing: float | None
    series: tuple[tuple[float, float], ...]

    @property
    def crossed(self) -> bool:
        return self.first_crossing is not None


def boundedness_report(records, threshold: float) -> BoundednessReport:
    if not records:
        raise ValueError("boundedness report needs at least one record")
    series = tuple((r.t, r.sup_bound_functional) for r in records)
    values = np.array([v for _, v in series])
    i_max = int(np.argmax(values))
    crossing = None
    for t, v in series:
        if v > threshold:
            crossing = t
            break
    return BoundednessReport(
        threshold=threshold,
        supremum=float(values[i_max]),
        sup_time=series[i_max][0],
        first_crossing=crossing,
        series=series,
    )
