"""Exact GIT stability data for decorated vector bundles on curves.

Modules: ``linalg`` and ``flags`` (rational subspaces, weighted flags),
``tensor`` (the representations V_{a,b,c} and Hilbert-Mumford weights),
``swamp`` (the stability functional, walls, admissible deformation),
``gieseker`` (linearization and flag transports), ``parabolic`` and
``level`` (the two specializations), ``document`` and ``cli``.
"""
from .errors import DomainError
from .flags import Subspace, WeightedFlag, make_weighted_flag
from .swamp import NumericFlag, SwampConfig, StabilityReport, make_numeric_flag
from .tensor import DecorationForm, TensorRepSpec

__all__ = [
    "DecorationForm",
    "DomainError",
    "NumericFlag",
    "StabilityReport",
    "Subspace",
    "SwampConfig",
    "TensorRepSpec",
    "WeightedFlag",
    "make_numeric_flag",
    "make_weighted_flag",
]

__version__ = "0.1.0"
