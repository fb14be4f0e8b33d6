"""Fixed-step closed-loop integration of plant + reference + controller.

The coupled state is integrated with classical RK4 at a fixed step; the
controller is evaluated at every integrator stage (a zero-order-hold mode
is available for realism studies).  The random road's noise sample is held
constant within each macro step so all four stages see one consistent road
value; deterministic roads are sampled analytically at stage times.

Reference-model excitation
--------------------------
The X-shape reference model is driven by an estimate of the base excitation
acceleration.  Three routings are available:

``estimator`` (default)
    Road displacement passed through a band-limited double differentiator
    ws_lp^2 * s^4 / ((s^2 + 2*zeta*ws_hp*s + ws_hp^2) * (s^2 + 2*zeta*ws_lp*s + ws_lp^2)).
    The high-pass corner keeps broadband excitation away from the reference
    model's lightly damped resonance (its admissible-disturbance bound is
    tiny; see lemma1_bound), and the low-pass corner bounds the noise
    feedthrough.  Corners default to (2.5, 40) rad/s, bracketing the
    passive suspension's dominant transmission band.

``road_accel``
    The road generator's raw acceleration estimate.

``unsprung_accel``
    The plant's instantaneous unsprung acceleration.  Feeds the control
    force back into the reference; useful only for sensitivity studies.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

import numpy as np

from .bioref import BioParams, BioDomainError, ReferenceState, bio_deriv, state_domain_limit
from .controllers import (ApproxFreeConfig, FacConfig, PassiveConfig,
                          approx_free_control, fac_control, fac_ppf_control,
                          lyapunov_eps, lyapunov_errors, validate_initial_channels)
from .plant import PlantFault, PlantInput, PlantState, SuspensionParams, plant_deriv, tire_forces
from .roads import RoadGenerator, RoadSample, RoadSpec, sprung_disturbance

__all__ = [
    "SimConfig",
    "Trajectory",
    "FaultRecord",
    "InitialConditionError",
    "rk4_step",
    "run_closed_loop",
    "mass_sweep",
    "TRAJECTORY_COLUMNS",
]

ControllerConfig = PassiveConfig | ApproxFreeConfig | FacConfig

EXCITATION_MODES = ("estimator", "road_accel", "unsprung_accel")
VALIDATION_MODES = ("strict", "warn", "off")


class InitialConditionError(ValueError):
    """Raised when an initial tracking error sits outside its envelope."""


@dataclass(frozen=True)
class SimConfig:
    dt: float = 1e-4            # integrator step [s]
    t_final: float = 50.0       # horizon [s]
    seed: int = 0               # road noise seed
    decimation: int = 10        # log every n-th step
    excitation: str = "estimator"
    estimator_hp: float = 2.5   # estimator high-pass corner [rad/s]
    estimator_lp: float = 40.0  # estimator low-pass corner [rad/s]
    estimator_zeta: float = 0.7
    disturbance: bool = False   # body disturbance acceleration on/off
    timing: bool = True         # record per-evaluation controller cost
    hold_controller: bool = False  # ZOH: one evaluation per macro step
    initial_validation: str = "strict"
    initial_plant: tuple[float, float, float, float] = (0.0, 0.0, 0.0, 0.0)
    initial_ref: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if self.dt <= 0.0 or self.t_final < self.dt:
            raise ValueError("need dt > 0 and t_final >= dt")
        if self.decimation < 1:
            raise ValueError("decimation must be >= 1")
        if self.excitation not in EXCITATION_MODES:
            raise ValueError(f"excitation must be one of {EXCITATION_MODES}")
        if self.initial_validation not in VALIDATION_MODES:
            raise ValueError(f"initial_validation must be one of {VALIDATION_MODES}")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_final / self.dt))


@dataclass(frozen=True)
class FaultRecord:
    t: float
    reason: str


# Column order of the trajectory log (and of the CSV emitted by the CLI).
TRAJECTORY_COLUMNS = (
    "t", "zr", "zr_dot", "x1", "x2", "x3", "x4", "y1", "y2", "z1", "z2",
    "e1", "e2", "e3", "xi1", "xi2", "xi3", "eps1", "eps2", "eps3",
    "u", "u1", "u2", "ft", "fb", "load_ratio", "sprung_accel",
    "v_eps", "v_e", "w_hat_norm",
)


@dataclass
class Trajectory:
    """Time-indexed log of all plant, reference, and controller signals."""

    data: dict[str, np.ndarray]
    seed: int
    dt: float
    decimation: int
    fault: Optional[FaultRecord] = None
    envelope_clamps: dict[int, int] = field(default_factory=dict)
    ref_domain_exits: int = 0
    ctrl_eval_ns: Optional[np.ndarray] = None
    initial_check_warnings: list[str] = field(default_factory=list)
    fls_fallbacks: int = 0

    def __getitem__(self, column: str) -> np.ndarray:
        return self.data[column]

    @property
    def t(self) -> np.ndarray:
        return self.data["t"]

    @property
    def n_samples(self) -> int:
        return self.data["t"].size

    @property
    def log_dt(self) -> float:
        return self.dt * self.decimation

    @property
    def faulted(self) -> bool:
        return self.fault is not None


def rk4_step(deriv: Callable, state, t: float, dt: float):
    """Classical 4th-order Runge-Kutta update for array-like states."""
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    y = np.asarray(state, dtype=float)
    k1 = np.asarray(deriv(t, y))
    k2 = np.asarray(deriv(t + 0.5 * dt, y + 0.5 * dt * k1))
    k3 = np.asarray(deriv(t + 0.5 * dt, y + 0.5 * dt * k2))
    k4 = np.asarray(deriv(t + dt, y + dt * k3))
    for idx, k in enumerate((k1, k2, k3, k4), start=1):
        if not np.all(np.isfinite(k)):
            raise FloatingPointError(f"non-finite derivative at RK4 stage {idx}")
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


class _System:
    """Closed-loop right-hand side over the packed scalar state.

    Packed layout: [x1, x2, x3, x4, y1, y2, p1, p1d, p2, p2d] where p* are
    the excitation-estimator filter states (zeros and inert unless the
    estimator routing is active).  FAC weight vectors ride separately.
    """

    NS = 10

    def __init__(self, plant: SuspensionParams, bio: BioParams,
                 ctrl: ControllerConfig, sim: SimConfig):
        self.pl = plant
        self.bio = bio
        self.ctrl = ctrl
        self.sim = sim
        self.kind = ("passive" if isinstance(ctrl, PassiveConfig)
                     else "approx_free" if isinstance(ctrl, ApproxFreeConfig)
                     else "fac_ppf" if ctrl.with_ppf else "fac")
        self.timing_log: list[int] = []
        self.clamp_counts: dict[int, int] = {}
        self.fls_fallbacks = 0

    def controller(self, t: float, ps: PlantState, rs: ReferenceState,
                   w_hat: Optional[np.ndarray]):
        """Evaluate the configured control law; returns (u, w_dot, diag)."""
        if self.kind == "passive":
            return 0.0, None, None
        timed = self.sim.timing
        t0 = time.perf_counter_ns() if timed else 0
        if self.kind == "approx_free":
            u, diag = approx_free_control(self.ctrl, t, ps, rs)
            w_dot = None
        elif self.kind == "fac":
            u, w_dot, diag = fac_control(self.ctrl, w_hat, ps, rs)
        else:
            u, w_dot, diag = fac_ppf_control(self.ctrl, w_hat, t, ps, rs)
        if timed:
            self.timing_log.append(time.perf_counter_ns() - t0)
        for ch in getattr(diag, "clamped", ()):
            self.clamp_counts[ch] = self.clamp_counts.get(ch, 0) + 1
        if getattr(diag, "fls_degenerate", False):
            self.fls_fallbacks += 1
        return u, w_dot, diag

    def deriv(self, t: float, s, w_hat: Optional[np.ndarray],
              road: RoadSample, held_u: Optional[float] = None):
        """Full coupled derivative at one stage.

        Returns (ds list, w_dot, diag, u, plant_deriv_state).
        """
        ps = PlantState(s[0], s[1], s[2], s[3])
        rs = ReferenceState(s[4], s[5])

        if held_u is None:
            u, w_dot, diag = self.controller(t, ps, rs, w_hat)
        else:
            u, w_dot, diag = held_u, None, None
            if self.kind in ("fac", "fac_ppf"):
                # adaptive law still integrates while the force is held
                _, w_dot, _ = self.controller(t, ps, rs, w_hat)

        w = sprung_disturbance(t) if self.sim.disturbance else 0.0
        pd = plant_deriv(self.pl, ps, PlantInput(u, road.zr, road.zr_dot, w))

        sim = self.sim
        zh, zl, zeta = sim.estimator_hp, sim.estimator_lp, sim.estimator_zeta
        p1, p1d, p2, p2d = s[6], s[7], s[8], s[9]
        v = road.zr - 2.0 * zeta * zh * p1d - zh * zh * p1
        dp2d = v - 2.0 * zeta * zl * p2d - zl * zl * p2

        if sim.excitation == "estimator":
            exc = zl * zl * dp2d
        elif sim.excitation == "road_accel":
            exc = road.zr_ddot
        else:
            exc = pd.x4  # unsprung acceleration

        rd = bio_deriv(self.bio, rs, exc)
        ds = [pd.x1, pd.x2, pd.x3, pd.x4, rd.y1, rd.y2, p1d, v, p2d, dp2d]
        return ds, w_dot, diag, u, pd


def _zero_diag_fields():
    return dict(e1=0.0, e2=0.0, e3=0.0, xi1=0.0, xi2=0.0, xi3=0.0,
                eps1=0.0, eps2=0.0, eps3=0.0, u1=0.0, u2=0.0)


def _diag_fields(diag) -> dict[str, float]:
    if diag is None:
        return _zero_diag_fields()
    out = _zero_diag_fields()
    for name in out:
        out[name] = float(getattr(diag, name, 0.0))
    # FAC diagnostics expose e1/e2/u only; leave the rest zero
    return out


def run_closed_loop(plant: SuspensionParams, bio: BioParams,
                    ctrl: ControllerConfig, road_spec: RoadSpec,
                    sim: SimConfig) -> Trajectory:
    """Integrate the coupled system and log the trajectory.

    A mid-run non-finite state or a reference-model geometry violation
    truncates the trajectory and attaches a fault record instead of
    raising.  Envelope clamps never abort a run; they are counted per
    channel.  With ``initial_validation='strict'`` the run refuses to start
    when an initial tracking error violates min(delta)*rho0 > |e(0)|.
    """
    system = _System(plant, bio, ctrl, sim)
    warnings: list[str] = []

    if isinstance(ctrl, ApproxFreeConfig) and sim.initial_validation != "off":
        checks = validate_initial_channels(
            ctrl, PlantState(*sim.initial_plant), ReferenceState(*sim.initial_ref))
        for ch, c in enumerate(checks, start=1):
            if not c.ok:
                msg = (f"channel {ch}: initial error {c.e0:.6g} outside envelope "
                       f"({c.lower:.6g}, {c.upper:.6g}), margin {c.margin:.6g}")
                if sim.initial_validation == "strict":
                    raise InitialConditionError(msg)
                warnings.append(msg)

    road = RoadGenerator(road_spec, sim.seed)
    n = sim.n_steps
    dec = sim.decimation
    n_log = n // dec + 1
    cols = {name: np.zeros(n_log) for name in TRAJECTORY_COLUMNS}

    state = list(sim.initial_plant) + list(sim.initial_ref) + [0.0, 0.0, 0.0, 0.0]
    w_hat = np.zeros(system.ctrl.fls.n_rules) if system.kind in ("fac", "fac_ppf") else None

    dt = sim.dt
    half = 0.5 * dt
    sixth = dt / 6.0
    static_weight = plant.static_weight()
    y_limit = state_domain_limit(bio)
    domain_exits = 0
    fault: Optional[FaultRecord] = None
    log_i = 0
    t = 0.0

    def log_record(i: int, t: float, s, diag, u: float, pd: PlantState,
                   road_s: RoadSample):
        cols["t"][i] = t
        cols["zr"][i] = road_s.zr
        cols["zr_dot"][i] = road_s.zr_dot
        cols["x1"][i], cols["x2"][i], cols["x3"][i], cols["x4"][i] = s[0], s[1], s[2], s[3]
        cols["y1"][i], cols["y2"][i] = s[4], s[5]
        cols["z1"][i] = s[0] - s[2]
        cols["z2"][i] = s[1] - s[3]
        d = _diag_fields(diag)
        for name, value in d.items():
            cols[name][i] = value
        cols["u"][i] = u
        ft, fb = tire_forces(plant, s[2], s[3], road_s.zr, road_s.zr_dot)
        cols["ft"][i] = ft
        cols["fb"][i] = fb
        cols["load_ratio"][i] = abs(ft + fb) / static_weight
        cols["sprung_accel"][i] = pd.x2
        cols["w_hat_norm"][i] = float(np.abs(w_hat).max()) if w_hat is not None else 0.0

    try:
        for k in range(n):
            road_s = road.step(dt) if road.is_random else road.sample_at(t)

            def stage(tt: float, s, wh, held_u=None):
                if not road.is_random:
                    rs = road.sample_at(tt)
                else:
                    rs = road_s
                return system.deriv(tt, s, wh, rs, held_u)

            d1, wd1, diag, u0, pd0 = stage(t, state, w_hat)
            if abs(state[4]) >= y_limit:
                domain_exits += 1
            if k % dec == 0:
                log_record(log_i, t, state, diag, u0, pd0, road_s)
                log_i += 1

            held = u0 if sim.hold_controller else None
            s2 = [a + half * b for a, b in zip(state, d1)]
            w2 = w_hat + half * wd1 if wd1 is not None else None
            d2, wd2, _, _, _ = stage(t + half, s2, w2, held)
            s3 = [a + half * b for a, b in zip(state, d2)]
            w3 = w_hat + half * wd2 if wd2 is not None else None
            d3, wd3, _, _, _ = stage(t + half, s3, w3, held)
            s4 = [a + dt * b for a, b in zip(state, d3)]
            w4 = w_hat + dt * wd3 if wd3 is not None else None
            d4, wd4, _, _, _ = stage(t + dt, s4, w4, held)

            state = [a + sixth * (b1 + 2.0 * (b2 + b3) + b4)
                     for a, b1, b2, b3, b4 in zip(state, d1, d2, d3, d4)]
            if w_hat is not None:
                w_hat = w_hat + sixth * (wd1 + 2.0 * (wd2 + wd3) + wd4)
            t += dt

            if not math.isfinite(sum(state)):
                raise FloatingPointError("non-finite state")

        # final record at t = T
        road_final = road_s if road.is_random else road.sample_at(t)
        _, _, diag, u0, pd0 = system.deriv(t, state, w_hat, road_final)
        if sim.n_steps % dec == 0:
            log_record(log_i, t, state, diag, u0, pd0, road_final)
            log_i += 1
    except (PlantFault, BioDomainError, FloatingPointError, OverflowError) as exc:
        fault = FaultRecord(t, f"{type(exc).__name__}: {exc}")

    if log_i < n_log:
        cols = {name: arr[:log_i] for name, arr in cols.items()}

    # Lyapunov series from the logged transformed/tracking errors
    cols["v_eps"] = lyapunov_eps(cols["eps1"], cols["eps2"], cols["eps3"])
    cols["v_e"] = lyapunov_errors(cols["e1"], cols["e2"])

    return Trajectory(
        data=cols,
        seed=sim.seed,
        dt=sim.dt,
        decimation=sim.decimation,
        fault=fault,
        envelope_clamps=dict(system.clamp_counts),
        ref_domain_exits=domain_exits,
        ctrl_eval_ns=(np.asarray(system.timing_log, dtype=np.int64)
                      if sim.timing else None),
        initial_check_warnings=warnings,
        fls_fallbacks=system.fls_fallbacks,
    )


def mass_sweep(plant: SuspensionParams, bio: BioParams,
               controllers: dict[str, ControllerConfig], road_spec: RoadSpec,
               sim: SimConfig, ms_values: Sequence[float]):
    """Sprung-mass robustness sweep.

    Each mass value perturbs the true plant while every controller keeps
    its nominal mass parameter.  Returns
    {ms: {name: rms or None on fault}}; faults are collected, not fatal.
    """
    from .metrics import rms  # local import to keep module load light

    if not ms_values:
        raise ValueError("empty mass list")
    out: dict[float, dict[str, float | None]] = {}
    for ms in ms_values:
        swept = replace(plant, ms=float(ms))
        row: dict[str, float | None] = {}
        for name, ctrl in controllers.items():
            traj = run_closed_loop(swept, bio, ctrl, road_spec, sim)
            if traj.faulted:
                row[name] = None
            else:
                row[name] = rms(traj["sprung_accel"], traj.log_dt)
        out[float(ms)] = row
    return out
