"""Non-Gaussian entanglement witnesses for truncated two-mode bosonic states."""
from .errors import LeakageError, NgentError, NumericalError, OptimizationError, ValidationError
from .fock import MixedState, PureState, TruncationPolicy
from .witnesses import OptimizerConfig, witness_E, witness_ENG

__all__ = [
    "LeakageError",
    "MixedState",
    "NgentError",
    "NumericalError",
    "OptimizationError",
    "OptimizerConfig",
    "PureState",
    "TruncationPolicy",
    "ValidationError",
    "witness_E",
    "witness_ENG",
]
