"""Model parameters, Maxwellians, fluxes, entropy and structural validators.

The kinetic model evolves five vector densities f_i (i = 1..5), each with
three components, attached to the velocities

    c_1 = (lam, 0), c_2 = (0, lam), c_3 = (-lam, 0), c_4 = (0, -lam), c_5 = 0,

scaled by 1/epsilon in the transport and 1/(tau*epsilon^2) in the relaxation.
The macroscopic state is w = sum_i f_i = (rho, q1, q2) with q = eps*rho*u.

Local equilibria (Maxwellians):

    M_{1,3}(w) = a*w +/- A_1(w)/(2*lam),
    M_{2,4}(w) = a*w +/- A_2(w)/(2*lam),
    M_5(w)     = (1 - 4a)*w,

with fluxes

    A_1(w) = (q1, q1^2/rho + P(rho), q1*q2/rho),
    A_2(w) = (q2, q1*q2/rho, q2^2/rho + P(rho)),

quadratic pressure P(rho) = (rho^2 - rho_bar^2) / (2*rho_bar), and the weight
a = nu / (2*lam^2*tau) which must lie in (0, 1/4).  These choices make
sum_i M_i = w and sum_i c_{ij} M_i = A_j identically, so w is conserved by
the relaxation and the diffusive limit is the 2D incompressible
Navier-Stokes system with viscosity nu.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import grid as gridmod
from .errors import (
    ConstraintViolation,
    NonPositiveDensity,
    NonPositiveInput,
    NotDivergenceFree,
)

#: discrete velocity directions, row i gives (c_i1, c_i2) in units of lam
VELOCITY_DIRECTIONS = np.array(
    [[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0], [0.0, 0.0]]
)


@dataclass(frozen=True)
class ModelParams:
    """Validated parameter set; `a` is always recomputed from the others."""

    epsilon: float
    tau: float
    lam: float
    nu: float
    rho_bar: float
    a: float = field(init=False)

    def __post_init__(self):
        for name in ("epsilon", "tau", "lam", "nu", "rho_bar"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise NonPositiveInput(f"{name} must be positive, got {value}")
        if self.epsilon > 1.0:
            raise ConstraintViolation(f"epsilon must be <= 1, got {self.epsilon}")
        a = self.nu / (2.0 * self.lam ** 2 * self.tau)
        if not 0.0 < a < 0.25:
            raise ConstraintViolation(
                f"a = nu/(2*lam^2*tau) = {a:.6g} outside (0, 1/4)"
            )
        object.__setattr__(self, "a", a)

    @property
    def relaxation_time(self) -> float:
        """Time scale tau*eps^2 of the stiff relaxation."""
        return self.tau * self.epsilon ** 2


def make_params(epsilon, tau, lam, nu, rho_bar) -> ModelParams:
    """Build a ModelParams, validating positivity and the range of a."""
    return ModelParams(epsilon=float(epsilon), tau=float(tau), lam=float(lam),
                       nu=float(nu), rho_bar=float(rho_bar))


def _check_density(rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=float)
    if not np.all(np.isfinite(rho)):
        raise NonPositiveDensity("density contains non-finite values")
    if np.min(rho) <= 0.0:
        raise NonPositiveDensity(f"density must be positive, min = {np.min(rho):.6g}")
    return rho


def pressure(rho, params: ModelParams):
    """P(rho) = (rho^2 - rho_bar^2) / (2*rho_bar); rejects rho <= 0."""
    rho = _check_density(rho)
    out = (rho ** 2 - params.rho_bar ** 2) / (2.0 * params.rho_bar)
    return float(out) if np.ndim(out) == 0 else out


def flux(j: int, w: np.ndarray, params: ModelParams) -> np.ndarray:
    """Flux A_j(w), j in {1, 2}; w has shape (3, ...)."""
    if j not in (1, 2):
        raise ValueError(f"flux index must be 1 or 2, got {j}")
    w = np.asarray(w, dtype=float)
    rho, q1, q2 = w[0], w[1], w[2]
    p = pressure(rho, params)
    if j == 1:
        return np.stack([q1, q1 * q1 / rho + p, q1 * q2 / rho])
    return np.stack([q2, q1 * q2 / rho, q2 * q2 / rho + p])


def maxwellians(w: np.ndarray, params: ModelParams) -> np.ndarray:
    """All five Maxwellians, shape (5, 3, ...) for w of shape (3, ...)."""
    w = np.asarray(w, dtype=float)
    a = params.a
    half = 1.0 / (2.0 * params.lam)
    a1 = flux(1, w, params) * half
    a2 = flux(2, w, params) * half
    aw = a * w
    return np.stack([aw + a1, aw + a2, aw - a1, aw - a2, (1.0 - 4.0 * a) * w])


def perturbed_maxwellians(grid: gridmod.Grid, w: np.ndarray,
                          params: ModelParams) -> np.ndarray:
    """Maxwellians corrected by -/+ a*eps*lam*tau * (spectral gradient of w).

    The corrections on the pairs (1, 3) and (2, 4) cancel, so the projection
    sum_i of the result reproduces w exactly.  Used to prepare initial data
    that sits on the diffusive-limit manifold and avoids a kinetic initial
    layer (the fifth density is left at its plain Maxwellian).
    """
    w = grid.check_field(np.asarray(w, dtype=float))
    m = maxwellians(w, params)
    coeff = params.a * params.epsilon * params.lam * params.tau
    dwx = np.stack([gridmod.spectral_derivative(grid, w[c], "x") for c in range(3)])
    dwy = np.stack([gridmod.spectral_derivative(grid, w[c], "y") for c in range(3)])
    m[0] -= coeff * dwx
    m[1] -= coeff * dwy
    m[2] += coeff * dwx
    m[3] += coeff * dwy
    return m


@dataclass(frozen=True)
class KineticState:
    """Five vector densities on a grid: f has shape (5, 3, n, n)."""

    grid: gridmod.Grid
    params: ModelParams
    f: np.ndarray

    def __post_init__(self):
        f = np.asarray(self.f, dtype=float)
        if f.shape != (5, 3, self.grid.n, self.grid.n):
            raise ValueError(
                f"kinetic state must have shape (5, 3, n, n), got {f.shape}"
            )
        object.__setattr__(self, "f", f)

    def w(self) -> np.ndarray:
        """Macroscopic moments (rho, q1, q2) = sum_i f_i, shape (3, n, n)."""
        return self.f.sum(axis=0)


def initial_kinetic_state(grid: gridmod.Grid, u0: np.ndarray,
                          params: ModelParams) -> KineticState:
    """Well-prepared kinetic data from a divergence-free velocity field.

    Builds w0 = (rho_bar, eps*rho_bar*u0) and places every density on the
    perturbed Maxwellians of w0.
    """
    u0 = grid.check_field(np.asarray(u0, dtype=float))
    if u0.shape != (2, grid.n, grid.n):
        raise ValueError(f"u0 must have shape (2, n, n), got {u0.shape}")
    div = gridmod.spectral_divergence(grid, u0[0], u0[1])
    div_max = gridmod.linf_norm(div)
    if div_max > 1e-10:
        raise NotDivergenceFree(
            f"initial velocity has spectral divergence {div_max:.3e} > 1e-10"
        )
    scale = params.epsilon * params.rho_bar
    w0 = np.stack([
        np.full((grid.n, grid.n), params.rho_bar),
        scale * u0[0],
        scale * u0[1],
    ])
    return KineticState(grid=grid, params=params, f=perturbed_maxwellians(grid, w0, params))


# ---------------------------------------------------------------------------
# entropy of the limiting first-order system
# ---------------------------------------------------------------------------

def entropy_weight(params: ModelParams) -> float:
    """Coefficient of rho^2 in the entropy; 1/(2*rho_bar) matches P."""
    return 1.0 / (2.0 * params.rho_bar)


def entropy_density(w: np.ndarray, params: ModelParams) -> np.ndarray:
    """Pointwise 0.5*|q|^2/rho + rho^2/(2*rho_bar)."""
    w = np.asarray(w, dtype=float)
    rho = _check_density(w[0])
    return 0.5 * (w[1] ** 2 + w[2] ** 2) / rho + entropy_weight(params) * rho ** 2


def entropy_eta(w: np.ndarray, params: ModelParams) -> float:
    """Normalized-measure integral (grid mean) of the entropy density."""
    return float(np.mean(entropy_density(w, params)))


def entropy_gradient(w: np.ndarray, params: ModelParams) -> np.ndarray:
    """d(entropy density)/dw, same shape as w."""
    w = np.asarray(w, dtype=float)
    rho = _check_density(w[0])
    g_rho = -0.5 * (w[1] ** 2 + w[2] ** 2) / rho ** 2 + 2.0 * entropy_weight(params) * rho
    return np.stack([g_rho, w[1] / rho, w[2] / rho])


# ---------------------------------------------------------------------------
# structural validator: sub-characteristic condition over a state box
# ---------------------------------------------------------------------------

def flux_jacobian(j: int, w_points: np.ndarray, params: ModelParams) -> np.ndarray:
    """Jacobian dA_j/dw at a batch of states, shape (N, 3) -> (N, 3, 3)."""
    if j not in (1, 2):
        raise ValueError(f"flux index must be 1 or 2, got {j}")
    w_points = np.asarray(w_points, dtype=float).reshape(-1, 3)
    rho, q1, q2 = w_points[:, 0], w_points[:, 1], w_points[:, 2]
    _check_density(rho)
    dp = rho / params.rho_bar
    n = w_points.shape[0]
    jac = np.zeros((n, 3, 3))
    if j == 1:
        jac[:, 0, 1] = 1.0
        jac[:, 1, 0] = dp - q1 ** 2 / rho ** 2
        jac[:, 1, 1] = 2.0 * q1 / rho
        jac[:, 2, 0] = -q1 * q2 / rho ** 2
        jac[:, 2, 1] = q2 / rho
        jac[:, 2, 2] = q1 / rho
    else:
        jac[:, 0, 2] = 1.0
        jac[:, 1, 0] = -q1 * q2 / rho ** 2
        jac[:, 1, 1] = q2 / rho
        jac[:, 1, 2] = q1 / rho
        jac[:, 2, 0] = dp - q2 ** 2 / rho ** 2
        jac[:, 2, 2] = 2.0 * q2 / rho
    return jac


@dataclass(frozen=True)
class StateBox:
    """Ranges of (rho, u1, u2) over which the validator samples."""

    rho: tuple[float, float]
    u1: tuple[float, float]
    u2: tuple[float, float]

    def __post_init__(self):
        if self.rho[0] <= 0 or self.rho[1] < self.rho[0]:
            raise ConstraintViolation(f"state box density range invalid: {self.rho}")


def default_state_box(params: ModelParams, u_max: float) -> StateBox:
    """Density within rho_bar*(1 +/- eps/2), velocities within 2*u_max."""
    half = 0.5 * params.epsilon
    u = 2.0 * abs(u_max)
    return StateBox(
        rho=(params.rho_bar * (1.0 - half), params.rho_bar * (1.0 + half)),
        u1=(-u, u),
        u2=(-u, u),
    )


@dataclass(frozen=True)
class SubcharacteristicReport:
    """Outcome of sampling the state box.

    passed requires every characteristic speed of A_1', A_2' to stay below
    lam (so the kinetic speeds dominate the macroscopic ones) and 1-4a > 0.
    The minimum eigenvalue of the raw Maxwellian Jacobians
    a*I +/- A_j'/(2*lam) is reported as well; it is negative by construction
    for any a < 1/4 near equilibrium (the +/- flux part has spectral radius
    ~ sqrt(P'(rho)) / (2*lam) > a), so it is informational only and not part
    of the pass criterion.
    """

    passed: bool
    speed_margin: float
    max_char_speed: float
    lam: float
    m5_coefficient: float
    min_maxwellian_jacobian_eig: float
    n_samples: int
    worst_state: tuple[float, float, float]


def check_subcharacteristic(params: ModelParams, box: StateBox,
                            samples_per_axis: int = 11) -> SubcharacteristicReport:
    """Sample the box on a lattice and compare characteristic speeds to lam."""
    rho = np.linspace(box.rho[0], box.rho[1], samples_per_axis)
    u1 = np.linspace(box.u1[0], box.u1[1], samples_per_axis)
    u2 = np.linspace(box.u2[0], box.u2[1], samples_per_axis)
    r, v1, v2 = np.meshgrid(rho, u1, u2, indexing="ij")
    pts = np.stack([
        r.ravel(),
        params.epsilon * r.ravel() * v1.ravel(),
        params.epsilon * r.ravel() * v2.ravel(),
    ], axis=1)

    max_speed = 0.0
    min_jac_eig = np.inf
    worst = pts[0]
    for j in (1, 2):
        jac = flux_jacobian(j, pts, params)
        eigs = np.linalg.eigvals(jac)
        speeds = np.max(np.abs(eigs), axis=1)
        i = int(np.argmax(speeds))
        if speeds[i] > max_speed:
            max_speed = float(speeds[i])
            worst = pts[i]
        half = jac / (2.0 * params.lam)
        eye = params.a * np.eye(3)
        for signed in (eye + half, eye - half):
            min_jac_eig = min(min_jac_eig, float(np.min(np.linalg.eigvals(signed).real)))

    m5 = 1.0 - 4.0 * params.a
    min_jac_eig = min(min_jac_eig, m5)
    margin = params.lam - max_speed
    rho_w, q1_w, q2_w = worst
    worst_state = (
        float(rho_w),
        float(q1_w / (params.epsilon * rho_w)),
        float(q2_w / (params.epsilon * rho_w)),
    )
    return SubcharacteristicReport(
        passed=bool(margin > 0.0 and m5 > 0.0),
        speed_margin=float(margin),
        max_char_speed=float(max_speed),
        lam=params.lam,
        m5_coefficient=float(m5),
        min_maxwellian_jacobian_eig=float(min_jac_eig),
        n_samples=pts.shape[0],
        worst_state=worst_state,
    )
