"""The four control laws: passive, recursive prescribed-performance control,
fuzzy-adaptive control (FAC), and FAC with a prescribed-performance envelope.

All controllers act on the plant state plus the reference-model state and
emit an actuator force.  The recursive controller is memoryless; the two
fuzzy variants carry an explicit weight vector that the caller integrates
alongside the plant (the adaptive law is an ODE coupled to the tracking
error).  The mass parameter used by the force laws is the NOMINAL sprung
mass: the controller is designed for the uncertain-mass setting and must
not read the true plant mass during sweeps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bioref import ReferenceState
from .plant import PlantState, relative_state
from .ppf import (AnyPpf, PpfSpec, TransformBounds, clamp_xi, normalized_error,
                  rho, rho_dot, transform, validate_initial)

__all__ = [
    "PassiveConfig",
    "ApproxFreeConfig",
    "FlsConfig",
    "FacConfig",
    "ControlDiagnostics",
    "approx_free_control",
    "fls_eval",
    "fac_control",
    "fac_ppf_control",
    "lyapunov_eps",
    "lyapunov_errors",
    "DEFAULT_THETA",
]

# nominal 1/ms for the Table-1 plant
DEFAULT_THETA = 1.0 / 240.0


@dataclass(frozen=True)
class PassiveConfig:
    """No actuation; the suspension runs on its spring/damper forces only."""


@dataclass(frozen=True)
class ApproxFreeConfig:
    """Three-step recursive prescribed-performance controller.

    Channel 1 shapes the relative-displacement tracking error, channel 2 the
    relative-velocity error around the first virtual control, channel 3 the
    absolute body velocity around the second virtual control; the final
    force is -(k3/theta) * eps3.
    """

    k1: float
    k2: float
    k3: float
    ppf1: AnyPpf
    ppf2: PpfSpec
    ppf3: PpfSpec
    bounds1: TransformBounds = TransformBounds()
    bounds2: TransformBounds = TransformBounds()
    bounds3: TransformBounds = TransformBounds()
    theta_nominal: float = DEFAULT_THETA

    def __post_init__(self):
        if min(self.k1, self.k2, self.k3) <= 0.0:
            raise ValueError("control gains must be positive")
        if self.theta_nominal <= 0.0:
            raise ValueError("theta_nominal must be positive")


@dataclass(frozen=True)
class FlsConfig:
    """Product-rule Gaussian fuzzy basis over a 2-input center grid."""

    centers1: tuple[float, ...] = (-1.0, -0.5, 0.0, 0.5, 1.0)
    centers2: tuple[float, ...] = (-1.0, -0.5, 0.0, 0.5, 1.0)
    width: float = 0.5
    input_scales: tuple[float, float] = (0.05, 0.5)

    def __post_init__(self):
        if len(self.centers1) < 2 or len(self.centers2) < 2:
            raise ValueError("need at least 2 centers per input")
        if self.width <= 0.0:
            raise ValueError("membership width must be positive")
        if min(self.input_scales) <= 0.0:
            raise ValueError("input scales must be positive")

    @property
    def n_rules(self) -> int:
        return len(self.centers1) * len(self.centers2)


@dataclass(frozen=True)
class FacConfig:
    """Fuzzy-adaptive baseline; optionally wrapped in a PPF envelope.

    With ``ppf`` unset this is the plain backstepping law with an FLS
    estimating the lumped nonlinearity (gains lambda1/lambda2).  With
    ``ppf`` set the tracking coordinate is transformed through the
    log-ratio map first (gains gamma1/gamma2, bounds a/b).
    """

    lambda1: float
    lambda2: float
    fls: FlsConfig = FlsConfig()
    theta_nominal: float = DEFAULT_THETA
    ppf: PpfSpec | None = None
    bounds: TransformBounds = TransformBounds()
    gamma1: float = 1.0
    gamma2: float = 1.0

    def __post_init__(self):
        if min(self.lambda1, self.lambda2, self.gamma1, self.gamma2) <= 0.0:
            raise ValueError("gains must be positive")
        if self.theta_nominal <= 0.0:
            raise ValueError("theta_nominal must be positive")

    @property
    def with_ppf(self) -> bool:
        return self.ppf is not None


@dataclass(frozen=True)
class ControlDiagnostics:
    """Per-evaluation record of every controller-internal signal."""

    e1: float = 0.0
    e2: float = 0.0
    e3: float = 0.0
    xi1: float = 0.0
    xi2: float = 0.0
    xi3: float = 0.0
    eps1: float = 0.0
    eps2: float = 0.0
    eps3: float = 0.0
    u1: float = 0.0
    u2: float = 0.0
    u: float = 0.0
    clamped: tuple[int, ...] = ()
    magnitude_condition_ok: bool = True


def approx_free_control(cfg: ApproxFreeConfig, t: float, plant: PlantState,
                        ref: ReferenceState) -> tuple[float, ControlDiagnostics]:
    """Evaluate the recursive controller at one instant.

    Pure function of (t, plant, ref): replaying the same inputs gives the
    same force.  Normalized errors that leave their transform bounds are
    clamped just inside (the log would otherwise be singular) and the
    affected channels are reported in ``diag.clamped``.
    """
    z1, z2 = relative_state(plant)
    clamped: list[int] = []

    e1 = z1 - ref.y1
    xi1 = normalized_error(e1, cfg.ppf1, t)
    x1c, c1 = clamp_xi(xi1, cfg.bounds1)
    if c1:
        clamped.append(1)
    eps1 = transform(x1c, cfg.bounds1)
    u1 = -cfg.k1 * eps1

    e2 = z2 - ref.y2 - u1
    xi2 = e2 / rho(cfg.ppf2, t)
    x2c, c2 = clamp_xi(xi2, cfg.bounds2)
    if c2:
        clamped.append(2)
    eps2 = transform(x2c, cfg.bounds2)
    u2 = -cfg.k2 * eps2 / cfg.theta_nominal

    e3 = plant.x2 - u2
    xi3 = e3 / rho(cfg.ppf3, t)
    x3c, c3 = clamp_xi(xi3, cfg.bounds3)
    if c3:
        clamped.append(3)
    eps3 = transform(x3c, cfg.bounds3)
    u = -cfg.k3 * eps3 / cfg.theta_nominal

    if not math.isfinite(u):
        raise FloatingPointError(f"controller force non-finite at t={t}")

    diag = ControlDiagnostics(
        e1=e1, e2=e2, e3=e3,
        xi1=xi1, xi2=xi2, xi3=xi3,
        eps1=eps1, eps2=eps2, eps3=eps3,
        u1=u1, u2=u2, u=u,
        clamped=tuple(clamped),
        magnitude_condition_ok=abs(u) > abs(u1 + u2),
    )
    return u, diag


def validate_initial_channels(cfg: ApproxFreeConfig, plant: PlantState,
                              ref: ReferenceState):
    """Initial-envelope checks for all three channels at t = 0.

    Channels 2 and 3 depend on the virtual controls, so the checks chain
    through the controller evaluated at the initial state.
    """
    z1, z2 = relative_state(plant)
    e1 = z1 - ref.y1
    checks = [validate_initial(e1, cfg.ppf1, cfg.bounds1)]

    xi1 = normalized_error(e1, cfg.ppf1, 0.0)
    x1c, _ = clamp_xi(xi1, cfg.bounds1)
    u1 = -cfg.k1 * transform(x1c, cfg.bounds1)
    e2 = z2 - ref.y2 - u1
    checks.append(validate_initial(e2, cfg.ppf2, cfg.bounds2))

    xi2 = e2 / rho(cfg.ppf2, 0.0)
    x2c, _ = clamp_xi(xi2, cfg.bounds2)
    u2 = -cfg.k2 * transform(x2c, cfg.bounds2) / cfg.theta_nominal
    e3 = plant.x2 - u2
    checks.append(validate_initial(e3, cfg.ppf3, cfg.bounds3))
    return checks


def fls_eval(fls: FlsConfig, inputs: tuple[float, float],
             w_hat: np.ndarray | None = None):
    """Normalized fuzzy basis vector and (optionally) the weighted estimate.

    Gaussian memberships per scaled input, product-rule firing strengths
    over the center grid, normalized so the basis sums to one.  If every
    firing strength underflows, the basis falls back to uniform and the
    returned flag marks the event.
    """
    s1 = inputs[0] / fls.input_scales[0]
    s2 = inputs[1] / fls.input_scales[1]
    m1 = np.exp(-(((s1 - np.asarray(fls.centers1)) / fls.width) ** 2))
    m2 = np.exp(-(((s2 - np.asarray(fls.centers2)) / fls.width) ** 2))
    phi = np.outer(m1, m2).ravel()
    total = phi.sum()
    degenerate = not (total > 1e-290)
    if degenerate:
        phi = np.full(phi.size, 1.0 / phi.size)
    else:
        phi = phi / total
    estimate = float(w_hat @ phi) if w_hat is not None else 0.0
    return phi, estimate, degenerate


@dataclass(frozen=True)
class FacDiagnostics:
    e1: float = 0.0
    e2: float = 0.0
    u: float = 0.0
    estimate: float = 0.0
    xi: float = 0.0
    clamped: tuple[int, ...] = ()
    fls_degenerate: bool = False


def fac_control(cfg: FacConfig, w_hat: np.ndarray, plant: PlantState,
                ref: ReferenceState):
    """Plain fuzzy-adaptive law.

    Tracking states are the relative errors against the reference model;
    the FLS estimates the lumped suspension nonlinearity and adapts by the
    gradient law w_dot = -e2 * phi.  Returns (u, w_hat_dot, diagnostics).
    """
    z1, z2 = relative_state(plant)
    xs1 = z1 - ref.y1
    xs2 = z2 - ref.y2
    e1 = xs1
    alpha1 = -cfg.lambda1 * e1
    alpha1_dot = -cfg.lambda1 * xs2
    e2 = xs2 - alpha1
    phi, estimate, degen = fls_eval(cfg.fls, (xs1, xs2), w_hat)
    u = (-cfg.lambda2 * e2 - e1 - estimate + alpha1_dot) / cfg.theta_nominal
    if not math.isfinite(u):
        raise FloatingPointError("FAC force non-finite")
    w_hat_dot = -e2 * phi
    return u, w_hat_dot, FacDiagnostics(e1, e2, u, estimate, 0.0, (), degen)


def fac_ppf_control(cfg: FacConfig, w_hat: np.ndarray, t: float,
                    plant: PlantState, ref: ReferenceState):
    """Fuzzy-adaptive law on the envelope-transformed tracking coordinate.

    The relative displacement error is normalized by the envelope and
    mapped through the log-ratio transform; its analytic derivative defines
    the second coordinate.  The virtual-control rate uses the chain
    identity s1_dot = eps_s2, so no numerical differentiation appears.
    """
    if cfg.ppf is None:
        raise ValueError("fac_ppf_control requires cfg.ppf")
    z1, z2 = relative_state(plant)
    xs1 = z1 - ref.y1
    xs2 = z2 - ref.y2

    r_val = rho(cfg.ppf, t)
    rd_val = rho_dot(cfg.ppf, t)
    xi = xs1 / r_val
    xic, was_clamped = clamp_xi(xi, cfg.bounds)
    eps_s1 = transform(xic, cfg.bounds)
    a, b = cfg.bounds.delta_l, cfg.bounds.delta_u
    r = (a + b) / ((a + xic) * (b - xic) * r_val)
    eps_s2 = r * (xs2 - xs1 * rd_val / r_val)

    s1 = eps_s1
    alpha2 = -cfg.gamma1 * s1
    s2 = eps_s2 - alpha2
    alpha2_dot = -cfg.gamma1 * eps_s2
    phi, estimate, degen = fls_eval(cfg.fls, (xs1, xs2), w_hat)
    u = (-cfg.gamma2 * s2 - s1 - estimate + alpha2_dot) / (r * cfg.theta_nominal)
    if not math.isfinite(u):
        raise FloatingPointError("FAC-PPF force non-finite")
    w_hat_dot = -s2 * phi
    diag = FacDiagnostics(s1, s2, u, estimate, xi,
                          (1,) if was_clamped else (), degen)
    return u, w_hat_dot, diag


def lyapunov_eps(eps1, eps2, eps3) -> np.ndarray:
    """Transformed-error Lyapunov series 0.5*(eps1^2 + eps2^2 + eps3^2)."""
    e1 = np.asarray(eps1, dtype=float)
    e2 = np.asarray(eps2, dtype=float)
    e3 = np.asarray(eps3, dtype=float)
    return 0.5 * (e1 * e1 + e2 * e2 + e3 * e3)


def lyapunov_errors(e1, e2) -> np.ndarray:
    """Tracking-error Lyapunov series 0.5*(e1^2 + e2^2).

    The adaptive variants' full function also carries the weight-estimate
    error term, but the ideal weights are unobservable, so only the
    tracking part is reported.
    """
    a = np.asarray(e1, dtype=float)
    b = np.asarray(e2, dtype=float)
    return 0.5 * (a * a + b * b)
