"""
Dipole coupling operators and the interaction matrix of a degenerate Lambda atom
in a two-mode cavity, restricted to the single-excitation subspace.

Basis layout (``BasisIndex``)::

    [ a : |J_a m_a>|0,0> | b1 : |J_b m_b>|1,0> | b2 : |J_b m_b>|0,1> | c : |J_c m_c>|0,0> ]

with ``m`` ascending from ``-J`` inside every block. The lower-level operators
are ``(2J_lower+1) x (2J_c+1)`` matrices mapping excited-level amplitudes onto
lower-level amplitudes; the stacked ``g_b`` puts the mode-1 block above the
mode-2 block, exactly like the b-part of the state vector.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .angular import Momentum, as_half_integer, projections, spherical_components, wigner_3j
from .exceptions import DomainError

__all__ = [
    "BasisIndex",
    "CavityOperators",
    "CouplingOperators",
    "Geometry",
    "LevelScheme",
    "build_g_a",
    "build_g_b",
    "build_interaction",
    "coupling_operators",
]

_UNIT_TOL = 1e-12
E_X = np.array([1.0, 0.0, 0.0], dtype=complex)
E_Y = np.array([0.0, 1.0, 0.0], dtype=complex)
E_Z = np.array([0.0, 0.0, 1.0], dtype=complex)


@dataclass(frozen=True)
class LevelScheme:
    """Angular momenta ``(J_a, J_b, J_c)`` of a Lambda system with both lower
    levels dipole-coupled to the excited level ``c``."""

    J_a: Fraction
    J_b: Fraction
    J_c: Fraction

    def __init__(self, J_a: Momentum, J_b: Momentum, J_c: Momentum):
        object.__setattr__(self, "J_a", as_half_integer(J_a))
        object.__setattr__(self, "J_b", as_half_integer(J_b))
        object.__setattr__(self, "J_c", as_half_integer(J_c))
        for name, lower in (("J_a", self.J_a), ("J_b", self.J_b)):
            if lower < 0:
                raise DomainError(f"{name} must be non-negative")
            if not (abs(lower - self.J_c) <= 1 <= lower + self.J_c):
                raise DomainError(f"{name}={lower} -> J_c={self.J_c} is not a dipole transition")
            if (lower - self.J_c).denominator != 1:
                raise DomainError(f"{name}={lower} and J_c={self.J_c} mix integer and half-integer")

    def __repr__(self) -> str:
        return f"LevelScheme({self.J_a}, {self.J_b}, {self.J_c})"

    @property
    def n_a(self) -> int:
        return int(2 * self.J_a + 1)

    @property
    def n_b(self) -> int:
        return int(2 * self.J_b + 1)

    @property
    def n_c(self) -> int:
        return int(2 * self.J_c + 1)

    @property
    def dimension(self) -> int:
        """Size ``N = 2(J_a + 2 J_b + J_c + 2)`` of the single-excitation space."""
        return int(2 * (self.J_a + 2 * self.J_b + self.J_c + 2))


@dataclass(frozen=True)
class BasisIndex:
    """Slices of the four blocks ``a | b1 | b2 | c`` in the flat basis."""

    a: slice
    b1: slice
    b2: slice
    c: slice
    size: int

    @classmethod
    def for_scheme(cls, scheme: LevelScheme) -> "BasisIndex":
        na, nb, nc = scheme.n_a, scheme.n_b, scheme.n_c
        a = slice(0, na)
        b1 = slice(na, na + nb)
        b2 = slice(na + nb, na + 2 * nb)
        c = slice(na + 2 * nb, na + 2 * nb + nc)
        return cls(a=a, b1=b1, b2=b2, c=c, size=na + 2 * nb + nc)

    @property
    def b(self) -> slice:
        """Both cavity-mode blocks together."""
        return slice(self.b1.start, self.b2.stop)

    @property
    def lower(self) -> slice:
        """The lower-level subspace ``a + b1 + b2``."""
        return slice(self.a.start, self.b2.stop)

    def embed(self, block: slice, vectors: np.ndarray) -> np.ndarray:
        """Place vectors (1-D or column stack) living in ``block`` into the full space."""
        vectors = np.asarray(vectors, dtype=complex)
        out = np.zeros((self.size,) + vectors.shape[1:], dtype=complex)
        out[block] = vectors
        return out


def _as_unit_vector(v, name: str) -> np.ndarray:
    arr = np.array(v, dtype=complex)
    if arr.shape != (3,):
        raise DomainError(f"{name} must be a complex 3-vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} has non-finite components")
    if abs(np.linalg.norm(arr) - 1.0) > _UNIT_TOL:
        raise DomainError(f"{name} is not unit-norm (|{name}| = {np.linalg.norm(arr):.15g})")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Geometry:
    """Polarizations of the drive (``l_c``) and of the two cavity modes (``l_1``, ``l_2``).

    The default cavity modes are ``e_x`` and ``e_y`` with the cavity axis along
    the quantization axis ``z``.
    """

    l_c: np.ndarray
    l_1: np.ndarray = field(default_factory=lambda: E_X.copy())
    l_2: np.ndarray = field(default_factory=lambda: E_Y.copy())

    def __post_init__(self):
        for name in ("l_c", "l_1", "l_2"):
            object.__setattr__(self, name, _as_unit_vector(getattr(self, name), name))
        overlap = np.vdot(self.l_1, self.l_2)
        if abs(overlap) > _UNIT_TOL:
            raise DomainError(f"cavity modes are not orthogonal (<l_1|l_2> = {overlap:.3g})")

    @classmethod
    def from_psi(cls, psi: float) -> "Geometry":
        """Linear drive in the XZ plane at angle ``psi`` (radians) from the cavity axis."""
        l_c = np.array([np.sin(psi), 0.0, np.cos(psi)], dtype=complex)
        return cls(l_c=l_c)

    def with_phase(self, phi: float) -> "Geometry":
        """Same geometry with the drive polarization multiplied by ``exp(i phi)``."""
        return Geometry(l_c=self.l_c * np.exp(1j * phi), l_1=self.l_1, l_2=self.l_2)


class CavityOperators(NamedTuple):
    g_b1: np.ndarray
    g_b2: np.ndarray
    g_b: np.ndarray


@dataclass(frozen=True)
class CouplingOperators:
    g_a: np.ndarray
    g_b1: np.ndarray
    g_b2: np.ndarray

    @property
    def g_b(self) -> np.ndarray:
        return np.vstack([self.g_b1, self.g_b2])


def _dipole_matrix(J_lower: Fraction, J_c: Fraction, polarization: np.ndarray) -> np.ndarray:
    # entry (m_lower, m_c) = sum_q (-1)^(J_lower - m_lower) conj(l_q) 3j(J_lower 1 J_c; -m_lower q m_c)
    comps = spherical_components(polarization)
    m_lower = projections(J_lower)
    m_upper = projections(J_c)
    g = np.zeros((len(m_lower), len(m_upper)), dtype=complex)
    for i, ml in enumerate(m_lower):
        phase = -1.0 if (J_lower - ml) % 2 else 1.0
        for k, mc in enumerate(m_upper):
            q = ml - mc  # the only q allowed by the 3j projection rule
            if abs(q) > 1:
                continue
            lq = comps.get(int(q))
            if lq == 0:
                continue
            g[i, k] = phase * np.conj(lq) * wigner_3j(J_lower, 1, J_c, -ml, q, mc)
    return g


def build_g_a(scheme: LevelScheme, l_c) -> np.ndarray:
    """Drive-branch operator ``g_a``, shape ``(2J_a+1, 2J_c+1)``."""
    return _dipole_matrix(scheme.J_a, scheme.J_c, _as_unit_vector(l_c, "l_c"))


def build_g_b(scheme: LevelScheme, l_1, l_2) -> CavityOperators:
    """Cavity-branch operators ``g_b1``, ``g_b2`` and their vertical stack ``g_b``."""
    l_1 = _as_unit_vector(l_1, "l_1")
    l_2 = _as_unit_vector(l_2, "l_2")
    if abs(np.vdot(l_1, l_2)) > _UNIT_TOL:
        raise DomainError("cavity modes are not orthogonal")
    g_b1 = _dipole_matrix(scheme.J_b, scheme.J_c, l_1)
    g_b2 = _dipole_matrix(scheme.J_b, scheme.J_c, l_2)
    return CavityOperators(g_b1, g_b2, np.vstack([g_b1, g_b2]))


def coupling_operators(scheme: LevelScheme, geometry: Geometry) -> CouplingOperators:
    b = build_g_b(scheme, geometry.l_1, geometry.l_2)
    return CouplingOperators(g_a=build_g_a(scheme, geometry.l_c), g_b1=b.g_b1, g_b2=b.g_b2)


def build_interaction(
    scheme: LevelScheme,
    geometry: Geometry,
    omega_a: float,
    omega_b: float,
    detuning: float,
    ops: CouplingOperators | None = None,
) -> np.ndarray:
    """Interaction matrix ``V = -2 Delta P_c + G + G^dagger`` with
    ``G = omega_a g_a + omega_b g_b``, Hermitian by construction.

    ``ops`` may be passed to reuse already-built coupling operators.
    """
    if omega_a < 0 or omega_b < 0:
        raise DomainError(f"Rabi frequencies must be non-negative, got ({omega_a}, {omega_b})")
    if ops is None:
        ops = coupling_operators(scheme, geometry)
    idx = BasisIndex.for_scheme(scheme)
    V = np.zeros((idx.size, idx.size), dtype=complex)
    V[idx.c, idx.c] = -2.0 * detuning * np.eye(scheme.n_c)
    V[idx.a, idx.c] = omega_a * ops.g_a
    V[idx.b, idx.c] = omega_b * ops.g_b
    V[idx.c, idx.a] = V[idx.a, idx.c].conj().T
    V[idx.c, idx.b] = V[idx.b, idx.c].conj().T
    return V
