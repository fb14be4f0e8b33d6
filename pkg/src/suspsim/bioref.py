"""Bioinspired X-shape isolator used as the tracking reference model.

Two rod pairs (lengths L1 < L2) hinged into an X, with a horizontal spring
across the mid joints and a vertical spring under the isolated mass.  The
geometry turns the linear springs into a hardening restoring force h1 and a
displacement-dependent friction gain h2; both follow from the closure
v(y1) = L1*sin(theta1) + y1/2 and sigma_i = sqrt(Li^2 - v^2).

The model is a 2-state ODE in the relative coordinate y1 = yr and its rate,
driven by the excitation acceleration of its base.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "BioParams",
    "ReferenceState",
    "BioDomainError",
    "theta2",
    "h1",
    "h2",
    "f_restoring",
    "g_damping",
    "bio_deriv",
    "lemma1_bound",
    "state_domain_limit",
]


class BioDomainError(ValueError):
    """Displacement outside the geometric domain (a rod pair would fold)."""

    def __init__(self, y1: float, limit: float):
        super().__init__(
            f"y1 = {y1:.6g} m puts v(y1) outside the rod radius (|v| >= L1, "
            f"valid range is ({-limit:.6g}, {limit:.6g}) around closure)")
        self.y1 = y1


@dataclass(frozen=True)
class BioParams:
    """X-shape isolator geometry, stiffness, and friction constants."""

    M: float = 240.0               # isolated mass [kg]
    L1: float = 0.1                # short rod length [m]
    L2: float = 0.2                # long rod length [m]
    theta1: float = math.pi / 6    # short-rod base angle [rad]
    kh: float = 500.0              # horizontal spring stiffness [N/m]
    kv: float = 250.0              # vertical spring stiffness [N/m]
    mu1: float = 1.0               # air damping [N*s/m]
    mu2: float = 0.155             # rotational friction [N*s/m]
    nx: int = 3                    # number of friction-loaded joints

    def __post_init__(self):
        if not (0.0 < self.L1 < self.L2):
            raise ValueError("rod lengths must satisfy 0 < L1 < L2")
        if not (0.0 < self.theta1 < math.pi / 2):
            raise ValueError("theta1 must lie in (0, pi/2)")
        if self.L1 * math.sin(self.theta1) > self.L2:
            raise ValueError("geometry infeasible: L1*sin(theta1) > L2")
        if min(self.kh, self.kv, self.mu1, self.mu2) < 0:
            raise ValueError("stiffness and damping constants must be >= 0")
        if self.M <= 0:
            raise ValueError("isolated mass must be positive")
        if self.nx < 1 or self.nx != int(self.nx):
            raise ValueError("nx must be a positive integer")


@dataclass(frozen=True)
class ReferenceState:
    """Reference trajectory state [y1, y2] = [yr, yr_dot]."""

    y1: float = 0.0  # relative displacement [m]
    y2: float = 0.0  # relative velocity [m/s]


def theta2(p: BioParams) -> float:
    """Long-rod base angle closing the linkage, asin(L1*sin(theta1)/L2).

    Chosen so both rod pairs meet at the mid joint in the rest position,
    which makes h1(0) vanish exactly (no horizontal-spring preload at rest).
    """
    return math.asin(p.L1 * math.sin(p.theta1) / p.L2)


def state_domain_limit(p: BioParams) -> float:
    """Boundedness-domain half width min(L1*sin(theta1), L1*(1 - sin(theta1)))."""
    s = math.sin(p.theta1)
    return min(p.L1 * s, p.L1 * (1.0 - s))


def _sigmas(p: BioParams, y1: float) -> tuple[float, float, float]:
    v = p.L1 * math.sin(p.theta1) + 0.5 * y1
    d1 = p.L1 * p.L1 - v * v
    d2 = p.L2 * p.L2 - v * v
    if d1 <= 0.0 or d2 <= 0.0:
        raise BioDomainError(y1, 2.0 * p.L1 * (1.0 - math.sin(p.theta1)))
    return v, math.sqrt(d1), math.sqrt(d2)


def h1(p: BioParams, y1: float) -> float:
    """Geometric restoring force of the horizontal spring [N]."""
    v, s1, s2 = _sigmas(p, y1)
    rest = p.L1 * math.cos(p.theta1) + p.L2 * math.cos(theta2(p))
    return 0.5 * p.kh * (rest - s1 - s2) * (v / s1 + v / s2)


def h2(p: BioParams, y1: float) -> float:
    """Joint-friction geometry gain 1/(2*sigma1) + 1/(2*sigma2) [1/m]."""
    _, s1, s2 = _sigmas(p, y1)
    return 0.5 / s1 + 0.5 / s2


def f_restoring(p: BioParams, y1: float) -> float:
    """Total restoring force f(y1) = h1(y1) + kv*y1 [N]."""
    return h1(p, y1) + p.kv * y1


def g_damping(p: BioParams, y1: float, y2: float) -> float:
    """Total damping force g(y1, y2) = mu1*y2 + mu2*nx*h2(y1)*y2 [N]."""
    return (p.mu1 + p.mu2 * p.nx * h2(p, y1)) * y2


def bio_deriv(p: BioParams, s: ReferenceState, zu_ddot: float) -> ReferenceState:
    """State derivative: y1_dot = y2, y2_dot = -(f + g)/M - zu_ddot."""
    return ReferenceState(
        s.y2,
        -(f_restoring(p, s.y1) + g_damping(p, s.y1, s.y2)) / p.M - zu_ddot,
    )


def lemma1_bound(p: BioParams) -> dict[str, float]:
    """Ultimate-boundedness constants of the reference model.

    Returns vartheta = (L1+L2)/(2*L1*L2), the decay coefficient
    zeta = min{(mu1/M^2)*kv, (1/M)*(mu1/M + 2*mu2*nx*vartheta)}, and the
    admissible-disturbance slope delta_max / ||y||_2 = zeta / sqrt((mu1/M)^2 + 4).
    """
    vartheta = (p.L1 + p.L2) / (2.0 * p.L1 * p.L2)
    zeta = min(
        (p.mu1 / (p.M * p.M)) * p.kv,
        (1.0 / p.M) * (p.mu1 / p.M + 2.0 * p.mu2 * p.nx * vartheta),
    )
    return {
        "vartheta": vartheta,
        "zeta": zeta,
        "delta_slope": zeta / math.sqrt((p.mu1 / p.M) ** 2 + 4.0),
    }
