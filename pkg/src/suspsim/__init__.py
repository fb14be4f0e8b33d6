"""Quarter-car active-suspension simulation with a bioinspired reference model.

A nonlinear two-mass suspension plant is driven over random, bump, or
sinusoidal roads while a controller makes the suspension deflection track
the response of an X-shape isolator reference model.  Four control laws
are provided (passive, recursive prescribed-performance control, fuzzy
adaptive control, and fuzzy adaptive control with a performance envelope),
plus the evaluation metrics, safety monitors, feasibility checkers, and a
batch CLI that reproduce the standard comparison experiments.
"""

from .bioref import (BioDomainError, BioParams, ReferenceState, bio_deriv,
                     f_restoring, g_damping, h1, h2, lemma1_bound, theta2)
from .controllers import (ApproxFreeConfig, ControlDiagnostics, FacConfig,
                          FlsConfig, PassiveConfig, approx_free_control,
                          fac_control, fac_ppf_control, fls_eval)
from .engine import (InitialConditionError, SimConfig, Trajectory, mass_sweep,
                     rk4_step, run_closed_loop)
from .metrics import (envelope_report, reduction_vs_passive, rms,
                      safety_report, settle_time, timing_stats)
from .plant import (PlantFault, PlantInput, PlantState, SuspensionParams,
                    damper_force, plant_deriv, relative_state, spring_force,
                    tire_forces)
from .ppf import (AsymmetricPpf, PpfSpec, TransformBounds, convergence_conditions,
                  inverse_transform, normalized_error, rho, rho_dot, transform,
                  validate_initial)
from .roads import (BumpRoadSpec, FlatRoadSpec, RandomRoadSpec, RoadSample,
                    SineRoadSpec, make_road, sprung_disturbance)

__version__ = "0.1.0"
