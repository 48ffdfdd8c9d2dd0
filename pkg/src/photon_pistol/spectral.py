"""
Dense Hermitian eigen-decomposition, kernel/range splitting and restricted inverses.

All splitting is done against a *relative* threshold ``tol_rel * scale`` where
``scale`` defaults to the largest eigenvalue of the matrix being split. The
default ``tol_rel`` is ``1e-10`` and can be overridden process-wide with the
``PHOTON_PISTOL_TOL_REL`` environment variable.
"""

from __future__ import annotations

import os
from typing import NamedTuple

import numpy as np

from .exceptions import DomainError

__all__ = [
    "DEFAULT_TOL_REL",
    "EigenSystem",
    "RankSplit",
    "default_tol_rel",
    "eigh",
    "rank_split",
    "restricted_inverse",
]

DEFAULT_TOL_REL = 1e-10
TOL_ENV_VAR = "PHOTON_PISTOL_TOL_REL"

_HERMITIAN_TOL = 1e-12
_PSD_TOL = 1e-12


def default_tol_rel() -> float:
    """Rank tolerance from the environment, falling back to ``DEFAULT_TOL_REL``."""
    raw = os.environ.get(TOL_ENV_VAR)
    if raw is None or raw.strip() == "":
        return DEFAULT_TOL_REL
    try:
        value = float(raw)
    except ValueError as exc:
        raise DomainError(f"{TOL_ENV_VAR}={raw!r} is not a number") from exc
    if not (0.0 < value < 1.0):
        raise DomainError(f"{TOL_ENV_VAR} must lie in (0, 1), got {value}")
    return value


class EigenSystem(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


class RankSplit(NamedTuple):
    null_basis: np.ndarray
    range_basis: np.ndarray
    range_eigenvalues: np.ndarray
    threshold: float


def _fix_phases(vectors: np.ndarray) -> np.ndarray:
    # largest-modulus component of each column made real and positive
    if vectors.size == 0:
        return vectors
    pivot = np.argmax(np.abs(vectors), axis=0)
    ref = vectors[pivot, np.arange(vectors.shape[1])]
    return vectors * (np.abs(ref) / ref)[np.newaxis, :]


def eigh(H) -> EigenSystem:
    """Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.

    The input is symmetrized before decomposition. Eigenvector phases are fixed
    so that each column's largest-modulus entry is real and positive.
    """
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {H.shape}")
    if not np.all(np.isfinite(H)):
        raise DomainError("matrix has non-finite entries")
    if H.shape[0] == 0:
        return EigenSystem(np.zeros(0), np.zeros((0, 0), dtype=complex))
    scale = np.max(np.abs(H))
    asym = np.max(np.abs(H - H.conj().T))
    if asym > _HERMITIAN_TOL * max(scale, 1e-300):
        raise DomainError(f"matrix is not Hermitian (max |H - H^+| = {asym:.3g})")
    vals, vecs = np.linalg.eigh(0.5 * (H + H.conj().T))
    return EigenSystem(vals, _fix_phases(vecs))


def rank_split(M, tol_rel: float | None = None, scale: float | None = None) -> RankSplit:
    """Split the space into the numerical kernel and range of a PSD matrix.

    Eigenvalues below ``tol_rel * scale`` go to the kernel, where ``scale``
    defaults to the largest eigenvalue of ``M``. Pass an explicit ``scale``
    when ``M`` may be numerically zero relative to some other operator (its own
    largest eigenvalue would then be rounding noise).

    Raises
    ------
    DomainError
        If ``M`` has an eigenvalue below ``-1e-12 * scale``.
    """
    if tol_rel is None:
        tol_rel = default_tol_rel()
    vals, vecs = eigh(M)
    n = vals.shape[0]
    lam_max = float(vals[-1]) if n else 0.0
    ref = lam_max if scale is None else float(scale)
    if n and vals[0] < -_PSD_TOL * max(ref, lam_max, 0.0):
        raise DomainError(f"matrix is not positive semidefinite (eigenvalue {vals[0]:.3g})")
    threshold = tol_rel * ref
    if ref <= 0:
        keep = np.zeros(n, dtype=bool)
    else:
        keep = vals >= threshold
    return RankSplit(
        null_basis=vecs[:, ~keep],
        range_basis=vecs[:, keep],
        range_eigenvalues=vals[keep],
        threshold=threshold,
    )


def restricted_inverse(M, tol_rel: float | None = None, scale: float | None = None) -> np.ndarray:
    """Inverse of a PSD matrix on its range, zero on its kernel."""
    split = rank_split(M, tol_rel, scale)
    V = split.range_basis
    return (V / split.range_eigenvalues) @ V.conj().T
