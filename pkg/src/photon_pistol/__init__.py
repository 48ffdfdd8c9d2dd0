"""Polarization of single photons emitted by vacuum-STIRAP in degenerate Lambda atoms."""

from .angular import SphericalComponents, spherical_components, wigner_3j
from .coupling import (
    BasisIndex,
    CouplingOperators,
    Geometry,
    LevelScheme,
    build_g_a,
    build_g_b,
    build_interaction,
    coupling_operators,
)
from .exceptions import AccuracyError, ConsistencyError, DomainError
from .spectral import eigh, rank_split, restricted_inverse
from .stirap import (
    AtomicState,
    ClassificationReport,
    DarkSpace,
    EmissionResult,
    bright_states,
    classify,
    dark_ab_space,
    dark_ab_state,
    emission,
    sweep_psi,
)

__version__ = "0.1.0"
