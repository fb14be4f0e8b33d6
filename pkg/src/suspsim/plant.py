"""Nonlinear quarter-car suspension plant.

Two coupled masses (sprung body, unsprung wheel) connected by a polynomial
spring / quadratic damper pair, riding on a linear tire spring and damper.
The sprung-mass row optionally takes an additive acceleration disturbance.
All functions are pure over value types; a single :class:`SuspensionParams`
instance can be shared freely between concurrent runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "SuspensionParams",
    "PlantState",
    "PlantInput",
    "PlantFault",
    "spring_force",
    "damper_force",
    "tire_forces",
    "plant_deriv",
    "relative_state",
]

GRAVITY = 9.81  # m/s^2, used only in the tire-load ratio


class PlantFault(RuntimeError):
    """Raised when a state/input channel goes non-finite."""

    def __init__(self, channel: str, value: float):
        super().__init__(f"non-finite value in channel '{channel}': {value!r}")
        self.channel = channel
        self.value = value


@dataclass(frozen=True)
class SuspensionParams:
    """Physical constants of the quarter-car plant plus safety limits.

    Notes on the default values: the source table prints the unsprung mass
    and tire stiffness with swapped units ("mu 15394 N/m", "kt 23.61 kg");
    units dictate the pairing, so the defaults below resolve them as
    mu = 23.61 kg and kt = 15394 N/m.  The linear spring coefficient ks1 is
    negative in the source table and is kept as printed; the plant then has
    a stable rest point near z1 = +0.023 m and an unstable one at z1 = 0
    (see the safety monitors in :mod:`suspsim.metrics`).
    """

    ms: float = 240.0        # sprung mass [kg]
    mu: float = 23.61        # unsprung mass [kg]
    ks1: float = -73696.0    # linear spring coefficient [N/m]
    ks2: float = 3170400.0   # quadratic spring coefficient [N/m^2]
    ks3: float = 181818.88   # cubic spring coefficient [N/m^3]
    cs1: float = 524.28      # linear damper coefficient [N*s/m]
    cs2: float = 13.8        # quadratic damper coefficient [N*s^2/m^2]
    kt: float = 15394.0      # tire stiffness [N/m]
    ct: float = 1385.4       # tire damping [N*s/m]
    zmax: float = 0.1        # maximum suspension stroke [m]
    g: float = GRAVITY       # gravitational acceleration [m/s^2]

    def __post_init__(self):
        if self.ms <= 0 or self.mu <= 0:
            raise ValueError("masses must be positive")
        if self.kt <= 0:
            raise ValueError("tire stiffness must be positive")
        if self.ct < 0:
            raise ValueError("tire damping must be nonnegative")
        if self.zmax <= 0:
            raise ValueError("zmax must be positive")

    def static_weight(self) -> float:
        """Total static weight (ms + mu) * g, the tire-load safety bound."""
        return (self.ms + self.mu) * self.g


@dataclass(frozen=True)
class PlantState:
    """Absolute plant state [x1, x2, x3, x4] = [zs, zs_dot, zu, zu_dot]."""

    x1: float = 0.0  # sprung displacement [m]
    x2: float = 0.0  # sprung velocity [m/s]
    x3: float = 0.0  # unsprung displacement [m]
    x4: float = 0.0  # unsprung velocity [m/s]

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.x1, self.x2, self.x3, self.x4)


@dataclass(frozen=True)
class PlantInput:
    """Actuator force, road kinematics, and sprung-mass disturbance.

    ``w`` is an acceleration-equivalent disturbance applied directly to the
    sprung-mass acceleration row (x2_dot gains +w); the equivalent force is
    ms * w.  See the force-pair identity in the tests.
    """

    u: float = 0.0        # actuator force [N]
    zr: float = 0.0       # road displacement [m]
    zr_dot: float = 0.0   # road velocity [m/s]
    w: float = 0.0        # sprung-mass disturbance acceleration [m/s^2]


def spring_force(p: SuspensionParams, dz: float) -> float:
    """Polynomial suspension spring force ks1*dz + ks2*dz^2 + ks3*dz^3."""
    return dz * (p.ks1 + dz * (p.ks2 + dz * p.ks3))


def damper_force(p: SuspensionParams, dv: float) -> float:
    """Suspension damper force cs1*dv + cs2*dv^2."""
    return dv * (p.cs1 + dv * p.cs2)


def tire_forces(p: SuspensionParams, x3: float, x4: float,
                zr: float, zr_dot: float) -> tuple[float, float]:
    """Tire elastic and damping forces (Ft, Fb)."""
    return p.kt * (x3 - zr), p.ct * (x4 - zr_dot)


def relative_state(s: PlantState) -> tuple[float, float]:
    """Suspension deflection and its rate, (z1, z2) = (x1 - x3, x2 - x4)."""
    return s.x1 - s.x3, s.x2 - s.x4


def _check_finite(name: str, value: float) -> None:
    if not math.isfinite(value):
        raise PlantFault(name, value)


def plant_deriv(p: SuspensionParams, s: PlantState, inp: PlantInput) -> PlantState:
    """Time derivative of the absolute plant state.

    Raises :class:`PlantFault` naming the offending channel if any input or
    resulting derivative is non-finite, so a degenerate step aborts with a
    diagnostic instead of propagating NaNs.
    """
    for name, value in (("x1", s.x1), ("x2", s.x2), ("x3", s.x3), ("x4", s.x4),
                        ("u", inp.u), ("zr", inp.zr), ("zr_dot", inp.zr_dot),
                        ("w", inp.w)):
        _check_finite(name, value)

    z1 = s.x1 - s.x3
    z2 = s.x2 - s.x4
    fs = spring_force(p, z1)
    fd = damper_force(p, z2)
    ft, fb = tire_forces(p, s.x3, s.x4, inp.zr, inp.zr_dot)

    d2 = (-fd - fs + inp.u) / p.ms + inp.w
    d4 = (fd + fs - ft - fb - inp.u) / p.mu

    _check_finite("x2_dot", d2)
    _check_finite("x4_dot", d4)
    return PlantState(s.x2, d2, s.x4, d4)
