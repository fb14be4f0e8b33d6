"""Evaluation criteria over completed trajectories.

RMS comfort metric, percentage reductions against the passive baseline, the
two ride-safety monitors (dynamic tire load vs static weight, suspension
stroke vs limit), envelope-violation accounting, and controller-evaluation
timing statistics.  Everything here is pure post-processing: re-evaluating a
report over the same trajectory gives identical results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .plant import SuspensionParams
from .ppf import AnyPpf, TransformBounds, envelope_edges

__all__ = [
    "rms",
    "reduction_vs_passive",
    "SafetyReport",
    "safety_report",
    "EnvelopeReport",
    "envelope_report",
    "TimingStats",
    "timing_stats",
    "lyapunov_decay_slope",
    "settle_time",
]


def rms(series, dt: float) -> float:
    """Root-mean-square sqrt((1/T) * integral of x^2 dt).

    The squared signal is integrated with the trapezoidal rule, which
    matches the continuous definition more closely than a plain mean when
    the series is decimated.
    """
    x = np.asarray(series, dtype=float)
    if x.size == 0:
        raise ValueError("rms of an empty series")
    if x.size == 1:
        return abs(float(x[0]))
    sq = x * x
    total = np.trapz(sq, dx=dt)
    return math.sqrt(total / (dt * (x.size - 1)))


def reduction_vs_passive(value: float, passive_value: float) -> float:
    """Percentage reduction (1 - value/passive) * 100."""
    if passive_value == 0.0:
        raise ValueError("passive reference value is zero")
    return (1.0 - value / passive_value) * 100.0


@dataclass(frozen=True)
class SafetyReport:
    max_load_ratio: float
    max_deflection: float
    load_ok: bool
    deflection_ok: bool

    @property
    def ok(self) -> bool:
        return self.load_ok and self.deflection_ok


def safety_report(ft, fb, z1, p: SuspensionParams) -> SafetyReport:
    """Ride-safety monitors over force and deflection histories.

    Load ratio is (Ft + Fb) / ((ms + mu) * g); the run passes when its
    maximum stays below 1 and max |z1| stays below the stroke limit.
    """
    ft = np.asarray(ft, dtype=float)
    fb = np.asarray(fb, dtype=float)
    z1 = np.asarray(z1, dtype=float)
    if ft.size == 0:
        raise ValueError("safety report over an empty trajectory")
    ratio = np.abs(ft + fb) / p.static_weight()
    max_ratio = float(ratio.max())
    max_defl = float(np.abs(z1).max())
    return SafetyReport(max_ratio, max_defl,
                        max_ratio < 1.0, max_defl < p.zmax)


@dataclass(frozen=True)
class EnvelopeReport:
    violations: int
    first_violation_time: float | None


def envelope_report(t, e, spec: AnyPpf, bounds: TransformBounds) -> EnvelopeReport:
    """Count samples where the error leaves its (possibly asymmetric) band."""
    t = np.asarray(t, dtype=float)
    e = np.asarray(e, dtype=float)
    count = 0
    first = None
    for ti, ei in zip(t, e):
        lo, hi = envelope_edges(spec, bounds, float(ti))
        if not (lo < ei < hi):
            count += 1
            if first is None:
                first = float(ti)
    return EnvelopeReport(count, first)


@dataclass(frozen=True)
class TimingStats:
    count: int
    mean_ns: float
    median_ns: float
    p99_ns: float


def timing_stats(durations_ns) -> TimingStats:
    """Monotonic-clock statistics of per-call controller evaluation cost."""
    d = np.asarray(durations_ns, dtype=float)
    if d.size == 0:
        raise ValueError("no timing samples recorded")
    return TimingStats(
        count=int(d.size),
        mean_ns=float(d.mean()),
        median_ns=float(np.median(d)),
        p99_ns=float(np.percentile(d, 99.0)),
    )


def lyapunov_decay_slope(t, v_series) -> float:
    """Slope of a least-squares linear fit to a Lyapunov-value series [1/s].

    A negative slope indicates a decaying transient trend; used on bump
    transients where per-step monotonicity is not expected.
    """
    t = np.asarray(t, dtype=float)
    v = np.asarray(v_series, dtype=float)
    if t.size < 2:
        raise ValueError("need at least two samples for a trend")
    coeffs = np.polyfit(t, v, 1)
    return float(coeffs[0])


def settle_time(t, x, threshold: float) -> float:
    """First time after which |x| stays below threshold; inf if never."""
    t = np.asarray(t, dtype=float)
    x = np.abs(np.asarray(x, dtype=float))
    outside = x >= threshold
    if not outside.any():
        return float(t[0])
    last_out = int(np.nonzero(outside)[0][-1])
    if last_out == x.size - 1:
        return math.inf
    return float(t[last_out + 1])
