"""Detrended OLG capital/asset economy: dynamics, steady states, shooting.

The hot per-period kernels run compiled when the Cython extension built
(`olgbubbles.kernel.BACKEND` says which backend is active); everything else
is plain numpy/stdlib.
"""

from .core import (CustomSavings, DomainError, EconomyConfig,
                   ExplicitDividends, GeometricDividends, LogUtility,
                   ProductionTech, StateVector, ZeroDividends, eval_f,
                   eval_savings, solve_g, wage)
from .counterexample import (CounterexamplePath, InvalidSpec, XSequenceSpec,
                             asymptotic_rates, build_perturbed, build_x_path,
                             closed_form_k, verify_counterexample_premises)
from .dynamics import (Trajectory, TrajectoryRecord, check_feasibility_bound,
                       fundamental_value, iterate, with_fundamental_values)
from .kernel import BACKEND
from .shooting import (OmegaProbe, ShootResult, ShotOutcome, classify_longrun,
                       monotonicity_check, probe_omega, shoot)
from .steady_state import (SpectralReport, SteadyStateReport,
                           bubbleless_steady_states, bubbly_steady_state,
                           spectral_analysis, steady_state_report)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CounterexamplePath",
    "CustomSavings",
    "DomainError",
    "EconomyConfig",
    "ExplicitDividends",
    "GeometricDividends",
    "InvalidSpec",
    "LogUtility",
    "OmegaProbe",
    "ProductionTech",
    "ShootResult",
    "ShotOutcome",
    "SpectralReport",
    "StateVector",
    "SteadyStateReport",
    "Trajectory",
    "TrajectoryRecord",
    "XSequenceSpec",
    "ZeroDividends",
    "asymptotic_rates",
    "build_perturbed",
    "build_x_path",
    "bubbleless_steady_states",
    "bubbly_steady_state",
    "check_feasibility_bound",
    "classify_longrun",
    "closed_form_k",
    "eval_f",
    "eval_savings",
    "fundamental_value",
    "iterate",
    "monotonicity_check",
    "probe_omega",
    "shoot",
    "solve_g",
    "spectral_analysis",
    "steady_state_report",
    "verify_counterexample_premises",
    "wage",
    "with_fundamental_values",
    "__version__",
]
