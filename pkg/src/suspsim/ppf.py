"""Prescribed performance envelopes and the log-ratio error transform.

A performance function rho(t) = (rho0 - rho_inf)*exp(-l*t) + rho_inf bounds a
tracking error e(t) inside (-delta_L*rho, delta_U*rho).  The normalized error
xi = e/rho is mapped to an unconstrained variable through
eps = ln((delta_L + xi)/(delta_U - xi)); driving eps with ordinary feedback
then keeps e inside the shrinking envelope.  An asymmetric envelope replaces
rho with an upper/lower function pair and renormalizes xi accordingly.

Also hosts the static feasibility checker for the convergence-rate
comparison conditions between the prescribed-performance controllers and the
fuzzy-adaptive baseline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

__all__ = [
    "PpfSpec",
    "AsymmetricPpf",
    "TransformBounds",
    "InitialCheck",
    "ConditionResult",
    "rho",
    "rho_dot",
    "envelope_edges",
    "normalized_error",
    "clamp_xi",
    "transform",
    "inverse_transform",
    "validate_initial",
    "convergence_conditions",
    "CLAMP_MARGIN",
]

# Keep-alive margin for the log argument when xi touches an envelope edge.
CLAMP_MARGIN = 1e-9


@dataclass(frozen=True)
class PpfSpec:
    """Exponential performance envelope (rho0 -> rho_inf at rate l)."""

    rho0: float
    rho_inf: float
    l: float

    def __post_init__(self):
        if not (self.rho0 > self.rho_inf > 0.0):
            raise ValueError(f"need rho0 > rho_inf > 0, got {self.rho0}, {self.rho_inf}")
        if self.l <= 0.0:
            raise ValueError("decay rate l must be positive")


# A lower envelope may be a full exponential spec or a positive constant.
LowerBound = Union[PpfSpec, float]


@dataclass(frozen=True)
class AsymmetricPpf:
    """Upper/lower envelope pair; the lower side may be a constant."""

    upper: PpfSpec
    lower: LowerBound

    def __post_init__(self):
        if isinstance(self.lower, float) and self.lower <= 0.0:
            raise ValueError("constant lower bound must be positive")


AnyPpf = Union[PpfSpec, AsymmetricPpf]


@dataclass(frozen=True)
class TransformBounds:
    """Positive limits (delta_L, delta_U) of the normalized error."""

    delta_l: float = 1.0
    delta_u: float = 1.0

    def __post_init__(self):
        if self.delta_l <= 0.0 or self.delta_u <= 0.0:
            raise ValueError("transform bounds must be strictly positive")


def rho(spec: LowerBound, t: float) -> float:
    """Envelope value at time t; a float spec is a constant envelope."""
    if isinstance(spec, PpfSpec):
        return (spec.rho0 - spec.rho_inf) * math.exp(-spec.l * t) + spec.rho_inf
    return spec


def rho_dot(spec: LowerBound, t: float) -> float:
    """Analytic envelope rate, -l*(rho0 - rho_inf)*exp(-l*t)."""
    if isinstance(spec, PpfSpec):
        return -spec.l * (spec.rho0 - spec.rho_inf) * math.exp(-spec.l * t)
    return 0.0


def envelope_edges(spec: AnyPpf, b: TransformBounds, t: float) -> tuple[float, float]:
    """Admissible error band (lower, upper) at time t.

    Symmetric: (-delta_L*rho, +delta_U*rho).  Asymmetric: the band whose
    normalized image is (-delta_L, delta_U) under :func:`normalized_error`.
    """
    if isinstance(spec, AsymmetricPpf):
        ru = rho(spec.upper, t)
        rl = rho(spec.lower, t)
        mid = 0.5 * (ru - rl)
        half = 0.5 * (ru + rl)
        return mid - b.delta_l * half, mid + b.delta_u * half
    r = rho(spec, t)
    return -b.delta_l * r, b.delta_u * r


def normalized_error(e: float, spec: AnyPpf, t: float) -> float:
    """Normalized tracking error xi.

    Symmetric envelopes give e/rho(t); an asymmetric pair gives
    (e - (rho_U - rho_L)/2) / ((rho_U + rho_L)/2), which collapses to
    e/rho_U when both sides coincide.
    """
    if isinstance(spec, AsymmetricPpf):
        ru = rho(spec.upper, t)
        rl = rho(spec.lower, t)
        half = 0.5 * (ru + rl)
        if half <= 0.0:
            raise ValueError("asymmetric envelope collapsed to a nonpositive width")
        return (e - 0.5 * (ru - rl)) / half
    r = rho(spec, t)
    if r <= 0.0:
        raise ValueError(f"performance function must stay positive, got {r}")
    return e / r


def clamp_xi(xi: float, b: TransformBounds) -> tuple[float, bool]:
    """Pull xi strictly inside (-delta_L, delta_U); flag if it was outside."""
    lo = -b.delta_l + CLAMP_MARGIN
    hi = b.delta_u - CLAMP_MARGIN
    if xi < lo:
        return lo, True
    if xi > hi:
        return hi, True
    return xi, False


def transform(xi: float, b: TransformBounds) -> float:
    """Log-ratio map eps = ln((delta_L + xi)/(delta_U - xi)).

    xi at or beyond an envelope edge is clamped just inside before the log;
    callers that need to log the violation should use :func:`clamp_xi` first.
    """
    x, _ = clamp_xi(xi, b)
    return math.log((b.delta_l + x) / (b.delta_u - x))


def inverse_transform(eps: float, b: TransformBounds) -> float:
    """Exact inverse of :func:`transform`.

    xi = (delta_U*exp(eps) - delta_L) / (exp(eps) + 1); tends to delta_U as
    eps -> +inf and to -delta_L as eps -> -inf.  Evaluated branch-wise so
    that large |eps| cannot overflow.
    """
    if eps >= 0.0:
        em = math.exp(-eps)
        return (b.delta_u - b.delta_l * em) / (1.0 + em)
    ep = math.exp(eps)
    return (b.delta_u * ep - b.delta_l) / (ep + 1.0)


@dataclass(frozen=True)
class InitialCheck:
    """Outcome of the initial-envelope condition for one error channel."""

    ok: bool
    margin: float  # distance from e(0) to the nearest envelope edge
    e0: float
    lower: float
    upper: float


def validate_initial(e0: float, spec: AnyPpf, b: TransformBounds) -> InitialCheck:
    """Check min{delta_L, delta_U}*rho(0) > |e(0)| (band membership at t=0).

    For a symmetric envelope the margin is min(delta)*rho0 - |e0|; for an
    asymmetric pair it is the distance to the nearest band edge at t = 0.
    """
    lower, upper = envelope_edges(spec, b, 0.0)
    if isinstance(spec, AsymmetricPpf):
        margin = min(upper - e0, e0 - lower)
    else:
        margin = min(b.delta_l, b.delta_u) * rho(spec, 0.0) - abs(e0)
    return InitialCheck(margin > 0.0, margin, e0, lower, upper)


@dataclass(frozen=True)
class ConditionResult:
    name: str
    ok: bool
    value: float
    note: str = ""


@dataclass(frozen=True)
class FeasibilityReport:
    conditions: list[ConditionResult] = field(default_factory=list)

    @property
    def all_ok(self) -> bool:
        return all(c.ok for c in self.conditions)

    def lines(self) -> list[str]:
        out = []
        for c in self.conditions:
            status = "PASS" if c.ok else "FAIL"
            note = f"  ({c.note})" if c.note else ""
            out.append(f"[{status}] {c.name}: {c.value:.6g}{note}")
        return out


def convergence_conditions(gamma1: float, gamma2: float,
                           lambda1: float, lambda2: float,
                           a: float, b: float,
                           ppf_specs: Sequence[PpfSpec],
                           initial_xi: Sequence[float],
                           k1: float | None = None,
                           k2: float | None = None) -> FeasibilityReport:
    """Static checker for the rate-comparison feasibility conditions.

    Conditions 1-4 compare the prescribed-performance fuzzy controller
    (gains gamma1/gamma2, bounds a/b, envelope ppf_specs[0]) against the
    plain fuzzy-adaptive law (gains lambda1/lambda2).  Conditions 5-6 are
    the initial-time conditions for the recursive controller's gains k1/k2
    with envelopes ppf_specs[0..1]; r_i0 comes from the initial normalized
    errors.  All quantities are evaluated at t = 0 only; the exponential
    decay of rho preserves them afterwards.
    """
    if any(g <= 0 for g in (gamma1, gamma2, lambda1, lambda2, a, b)):
        raise ValueError("all gains and bounds must be positive")
    if k1 is None:
        k1 = gamma1
    if k2 is None:
        k2 = gamma2

    p1 = ppf_specs[0]
    rho0 = p1.rho0
    rhod0 = rho_dot(p1, 0.0)
    c = 4.0 / (a + b)
    conds: list[ConditionResult] = []

    v1 = 16.0 * gamma1 / (a + b) ** 2 - lambda1 * rho0 ** 2
    conds.append(ConditionResult("16*gamma1/(a+b)^2 - lambda1*rho0^2 >= 0", v1 >= 0.0, v1))

    v2 = 16.0 * gamma2 / (a + b) ** 2 - lambda2 * rho0 ** 2
    conds.append(ConditionResult("16*gamma2/(a+b)^2 - lambda2*rho0^2 >= 0", v2 >= 0.0, v2))

    # third quadratic-form coefficient at t = 0, with e = lambda1*rho + rho_dot
    e0 = lambda1 * rho0 + rhod0
    denom = gamma2 * c * c - lambda2 * rho0 ** 2
    if denom <= 0.0:
        conds.append(ConditionResult(
            "third coefficient at t=0 >= 0", False, float("nan"),
            "undefined: gamma2*c^2 - lambda2*rho0^2 <= 0"))
    else:
        v3 = (gamma2 * gamma1 ** 2 * c * c - lambda2 * e0 * e0
              - (gamma1 * gamma2 * c * c - lambda2 * e0 * rho0) ** 2 / denom)
        conds.append(ConditionResult("third coefficient at t=0 >= 0", v3 >= 0.0, v3))

    sym = math.isclose(a, b, rel_tol=1e-12, abs_tol=0.0)
    conds.append(ConditionResult("a = b (d = 0)", sym, 0.5 * (b - a)))

    def r_at(spec: PpfSpec, xi0: float) -> float:
        return (a + b) / ((a + xi0) * (b - xi0) * spec.rho0)

    if len(ppf_specs) >= 2 and len(initial_xi) >= 2:
        p2 = ppf_specs[1]
        r10 = r_at(p1, initial_xi[0])
        r20 = r_at(p2, initial_xi[1])
        v5 = (4.0 * r10 * k1 / (a * a)
              - lambda1 ** 2 * lambda2 * p1.rho0 ** 2 - lambda1 * p1.rho0 ** 2)
        conds.append(ConditionResult(
            "4*r10*k1/a^2 - lambda1^2*lambda2*rho10^2 - lambda1*rho10^2 >= 0",
            v5 >= 0.0, v5))
        mu_den = a * a * v5
        if mu_den <= 0.0:
            conds.append(ConditionResult(
                "4*r20*k2/a^2 - lambda2*rho20^2 - mu >= 0", False, float("nan"),
                "undefined: mu denominator <= 0"))
        else:
            mu = (lambda1 ** 2 * lambda2 ** 2 * p1.rho0 ** 2 * p2.rho0 ** 2
                  * a * a) / mu_den
            v6 = 4.0 * r20 * k2 / (a * a) - lambda2 * p2.rho0 ** 2 - mu
            conds.append(ConditionResult(
                "4*r20*k2/a^2 - lambda2*rho20^2 - mu >= 0", v6 >= 0.0, v6))

    return FeasibilityReport(conds)
