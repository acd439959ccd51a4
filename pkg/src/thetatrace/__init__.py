"""Heat traces on the cycle, their theta-function limits and the transforms built from them."""

__version__ = "0.1.0"

from .errors import (BoundaryTooClose, BudgetExceeded, ConfigError, DomainError, FitError, MonotonicityError,
                     NoBracket, NonConvergence, PoleError, PreconditionError, SelfDualRequired, SizeError,
                     StepTooLarge, ThetaTraceError, UnwrapFailure)
from .numerics import DEFAULT_BUDGET, QuadratureSpec, Rule, TruncationBudget, integrate, theta_terms_needed
from .params import KernelParams
from .report import AuditReport

__all__ = [
    "__version__",
    "KernelParams",
    "QuadratureSpec",
    "Rule",
    "TruncationBudget",
    "DEFAULT_BUDGET",
    "integrate",
    "theta_terms_needed",
    "AuditReport",
    "ThetaTraceError",
    "PoleError",
    "NonConvergence",
    "BudgetExceeded",
    "PreconditionError",
    "DomainError",
    "StepTooLarge",
    "SelfDualRequired",
    "MonotonicityError",
    "SizeError",
    "NoBracket",
    "FitError",
    "BoundaryTooClose",
    "UnwrapFailure",
    "ConfigError",
]
