"""
Adiabatic single-photon emission from a degenerate Lambda atom.

The pipeline, for a given level scheme and geometry:

1. classify the excited-level and lower-level eigenvector families
   (:func:`classify`, :func:`bright_states`);
2. build the dark-ab transfer data: ``D_b`` (restricted inverse of
   ``g_b g_b^+``), ``D_ba = D_b g_b g_a^+``, the eigenpairs ``(a_dk^2, A_k)`` of
   ``D_ba^+ D_ba`` and ``P_a^d = sum_k |A_k><A_k| / a_dk`` (:func:`dark_ab_space`);
3. map the initial lower-level density matrix through ``U = D_ba P_a^d`` and
   trace out the atom to get the 2x2 photon matrix (:func:`emission`).

Nothing here depends on Rabi amplitudes or pulse shapes: in the adiabatic limit
only the time-independent dark-ab data survive.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .angular import as_half_integer
from .coupling import BasisIndex, Geometry, LevelScheme, build_interaction, coupling_operators
from .exceptions import ConsistencyError, DomainError
from .spectral import default_tol_rel, eigh, rank_split

__all__ = [
    "AtomicState",
    "BrightStates",
    "ClassificationReport",
    "DarkSpace",
    "EmissionResult",
    "SweepRow",
    "W_UNDEFINED",
    "bright_states",
    "classify",
    "dark_ab_space",
    "dark_ab_state",
    "emission",
    "field_matrix_from_lower",
    "stokes_parameters",
    "sweep_psi",
]

# below this emission probability the photon polarization is left undefined
W_UNDEFINED = 1e-12
_STATE_TOL = 1e-12
# relative spacing under which two eigenvalues are treated as one degenerate block
_DEGENERACY_TOL = 1e-8
# (omega_a, omega_b, detuning) used to sample the time-dependent families
_SAMPLES = ((1.0, 1.0, 0.37), (0.3, 1.7, 0.37), (2.1, 0.4, -0.81))


@dataclass(frozen=True)
class AtomicState:
    """Initial density matrix on the ground level ``a`` (field in vacuum)."""

    rho_a: np.ndarray

    def __post_init__(self):
        rho = np.array(self.rho_a, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.shape[0] == 0:
            raise DomainError(f"density matrix must be square, got shape {rho.shape}")
        if np.max(np.abs(rho - rho.conj().T)) > _STATE_TOL:
            raise DomainError("density matrix is not Hermitian")
        if abs(np.trace(rho) - 1.0) > _STATE_TOL:
            raise DomainError(f"density matrix trace is {np.trace(rho).real:.15g}, not 1")
        if np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0] < -_STATE_TOL:
            raise DomainError("density matrix is not positive semidefinite")
        rho.setflags(write=False)
        object.__setattr__(self, "rho_a", rho)

    @property
    def dimension(self) -> int:
        return self.rho_a.shape[0]

    @classmethod
    def equilibrium(cls, scheme: LevelScheme) -> "AtomicState":
        """Uniform mixture over the ``2J_a+1`` ground sublevels."""
        n = scheme.n_a
        return cls(np.eye(n, dtype=complex) / n)

    @classmethod
    def pure(cls, scheme: LevelScheme, m) -> "AtomicState":
        """Pure Zeeman sublevel ``|J_a, m>``."""
        m = as_half_integer(m)
        if abs(m) > scheme.J_a or (scheme.J_a - m).denominator != 1:
            raise DomainError(f"m={m} is not a projection of J_a={scheme.J_a}")
        idx = int(m + scheme.J_a)
        rho = np.zeros((scheme.n_a, scheme.n_a), dtype=complex)
        rho[idx, idx] = 1.0
        return cls(rho)

    @classmethod
    def from_vector(cls, amplitudes) -> "AtomicState":
        psi = np.asarray(amplitudes, dtype=complex)
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()))


@dataclass(frozen=True)
class ClassificationReport:
    """Sizes of the eigenvector families of the interaction operator.

    ``N_c_d, N_c_a, N_c_b, N_c`` split the excited level into states uncoupled,
    coupled only to ``a``, only to ``b``, and to both. ``N_a_d, N_b_d, N_ab_d``
    count dark states living on ``a`` only, ``b`` only, and on both.
    ``N_f`` is counted directly from the spectrum of ``V`` (Raman detuning
    nonzero); ``N_d`` is the sum of the three dark families.
    """

    N_c_d: int
    N_c_a: int
    N_c_b: int
    N_c: int
    N_a_d: int
    N_b_d: int
    N_ab_d: int
    N_a: int
    N_b: int
    N: int
    N_f: int
    N_d: int
    n_a: int
    n_b: int
    n_c: int
    time_independent: bool = True

    def identities(self) -> dict[str, bool]:
        return {
            "excited_level_complete": self.N_c_d + self.N_c_a + self.N_c_b + self.N_c == self.n_c,
            "nonzero_eigenvalue_count": self.N_f == 2 * self.n_c - self.N_c_d,
            "dark_count": self.N_d == self.N - self.N_f,
            "lower_level_ranks": self.N_a == self.n_a - self.N_a_d and self.N_b == 2 * self.n_b - self.N_b_d,
            "time_independent": self.time_independent,
        }

    @property
    def ok(self) -> bool:
        return all(self.identities().values())

    @property
    def ground_level_resolved(self) -> bool:
        """True when every ground sublevel is dark-a, dark-ab or bright-a.

        Only then is :func:`emission` the complete adiabatic-limit answer;
        otherwise part of level ``a`` follows the mixed bright family, whose
        gap closes at the pulse edges.
        """
        return self.N_a_d + self.N_ab_d + self.N_c_a == self.n_a

    def as_dict(self) -> dict:
        keys = ("N_c_d", "N_c_a", "N_c_b", "N_c", "N_a_d", "N_b_d", "N_ab_d", "N_a", "N_b", "N", "N_f", "N_d")
        return {k: getattr(self, k) for k in keys}


@dataclass(frozen=True)
class DarkSpace:
    """Time-independent data of the dark states shared by both lower levels.

    ``A_d`` holds the orthonormal ground-level vectors ``A_k`` as columns and
    ``a_dk`` the matching positive singular values of the transfer ``D_ba``.
    """

    scheme: LevelScheme
    D_b: np.ndarray
    D_ba: np.ndarray
    a_dk: np.ndarray
    A_d: np.ndarray
    P_a_d: np.ndarray
    basis: BasisIndex = field(repr=False)

    @property
    def size(self) -> int:
        return self.a_dk.shape[0]

    @property
    def transfer(self) -> np.ndarray:
        """``U = D_ba P_a^d``, mapping ground amplitudes to emitted-photon amplitudes."""
        return self.D_ba @ self.P_a_d


class BrightStates(NamedTuple):
    """Orthonormal bright families as columns in the full basis.

    ``F_a``/``F_b`` couple the excited level to one lower level only; ``F_ab``
    are the mixed states at the sampled ``(omega_a, omega_b)``. The ``C_*``
    arrays are the matching excited-level partners and ``c_*`` the coupling
    strengths used for normalization.
    """

    F_a: np.ndarray
    F_b: np.ndarray
    F_ab: np.ndarray
    C_a: np.ndarray
    C_b: np.ndarray
    C_ab: np.ndarray
    c_a: np.ndarray
    c_b: np.ndarray
    c_ab: np.ndarray


@dataclass(frozen=True)
class EmissionResult:
    """Emission probability and photon polarization.

    ``field_matrix`` is the unnormalized 2x2 photon matrix (mode 1 = ``l_1``,
    mode 2 = ``l_2``). When ``w <= W_UNDEFINED`` the polarization is undefined:
    ``defined`` is False and ``sigma``, ``stokes`` and ``P`` are None.
    """

    w: float
    field_matrix: np.ndarray
    sigma: np.ndarray | None
    stokes: tuple[float, float, float] | None
    P: float | None
    defined: bool

    @classmethod
    def from_field_matrix(cls, rho_f: np.ndarray) -> "EmissionResult":
        rho_f = 0.5 * (rho_f + rho_f.conj().T)
        w = float(np.trace(rho_f).real)
        if w <= W_UNDEFINED:
            return cls(w=w, field_matrix=rho_f, sigma=None, stokes=None, P=None, defined=False)
        sigma = rho_f / w
        stokes = stokes_parameters(sigma)
        return cls(w=w, field_matrix=rho_f, sigma=sigma, stokes=stokes, P=float(np.linalg.norm(stokes)), defined=True)


class SweepRow(NamedTuple):
    psi: float
    w: float
    xi1: float
    xi2: float
    xi3: float
    P: float
    defined: bool


def stokes_parameters(sigma: np.ndarray) -> tuple[float, float, float]:
    """``(xi1, xi2, xi3)`` with ``sigma = [[1+xi3, xi1-i xi2], [xi1+i xi2, 1-xi3]] / 2``."""
    s12 = sigma[0, 1]
    return (float(2.0 * s12.real), float(-2.0 * s12.imag), float((sigma[0, 0] - sigma[1, 1]).real))


def field_matrix_from_lower(rho_b: np.ndarray, n_b: int) -> np.ndarray:
    """Trace a ``2n_b x 2n_b`` b-level density block over the atom, leaving the 2x2 photon matrix."""
    blocks = rho_b.reshape(2, n_b, 2, n_b)
    return np.einsum("imjm->ij", blocks)


def _resolve_tol(tol_rel: float | None) -> float:
    return default_tol_rel() if tol_rel is None else tol_rel


def _largest(M: np.ndarray) -> float:
    if M.size == 0:
        return 0.0
    return float(max(np.linalg.eigvalsh(0.5 * (M + M.conj().T))[-1], 0.0))


def _exclusive_family(M_on: np.ndarray, M_off: np.ndarray, tol: float) -> tuple[np.ndarray, np.ndarray]:
    """Common eigenvectors with nonzero ``M_on`` and zero ``M_off`` eigenvalue."""
    n = M_on.shape[0]
    on = rank_split(M_on, tol)
    off_scale = _largest(M_off)
    vecs, vals = [], []
    lam = on.range_eigenvalues
    if lam.size:
        # group the nonzero spectrum of M_on into degenerate blocks
        gap = _DEGENERACY_TOL * lam[-1]
        starts = [0] + [i for i in range(1, lam.size) if lam[i] - lam[i - 1] > gap]
        bounds = starts + [lam.size]
        for lo, hi in zip(bounds[:-1], bounds[1:]):
            E = on.range_basis[:, lo:hi]
            if off_scale == 0.0:
                inside = E
            else:
                restricted = E.conj().T @ M_off @ E
                inside = E @ rank_split(restricted, tol, scale=off_scale).null_basis
            if inside.shape[1]:
                vecs.append(inside)
                vals.append(np.full(inside.shape[1], lam[lo:hi].mean()))
    if not vecs:
        return np.zeros((n, 0), dtype=complex), np.zeros(0)
    return np.hstack(vecs), np.concatenate(vals)


def classify(scheme: LevelScheme, geometry: Geometry, tol_rel: float | None = None) -> ClassificationReport:
    """Count the eigenvector families of the interaction operator.

    The time-dependent quantities (rank of ``G^+ G``, nonzero spectrum of
    ``V``) are evaluated at several ``(omega_a, omega_b, detuning)`` samples;
    ``time_independent`` records whether all samples agree.
    """
    tol = _resolve_tol(tol_rel)
    ops = coupling_operators(scheme, geometry)
    g_a, g_b = ops.g_a, ops.g_b
    M_a = g_a.conj().T @ g_a
    M_b = g_b.conj().T @ g_b
    n_a, n_b, n_c = scheme.n_a, scheme.n_b, scheme.n_c

    N_c_d = rank_split(M_a + M_b, tol).null_basis.shape[1]
    N_c_a = _exclusive_family(M_a, M_b, tol)[0].shape[1]
    N_c_b = _exclusive_family(M_b, M_a, tol)[0].shape[1]

    a_split = rank_split(g_a @ g_a.conj().T, tol)
    b_split = rank_split(g_b @ g_b.conj().T, tol)
    dark = dark_ab_space(scheme, geometry, tol)

    coupled_ranks, nonzero_counts = set(), set()
    for omega_a, omega_b, detuning in _SAMPLES:
        GG = omega_a**2 * M_a + omega_b**2 * M_b
        coupled_ranks.add(rank_split(GG, tol).range_basis.shape[1])
        V = build_interaction(scheme, geometry, omega_a, omega_b, detuning, ops=ops)
        lam = np.linalg.eigvalsh(V)
        nonzero_counts.add(int(np.sum(np.abs(lam) > tol * np.max(np.abs(lam)))))
    rank_gg = min(coupled_ranks)

    N_a_d = a_split.null_basis.shape[1]
    N_b_d = b_split.null_basis.shape[1]
    return ClassificationReport(
        N_c_d=N_c_d,
        N_c_a=N_c_a,
        N_c_b=N_c_b,
        N_c=rank_gg - N_c_a - N_c_b,
        N_a_d=N_a_d,
        N_b_d=N_b_d,
        N_ab_d=dark.size,
        N_a=a_split.range_basis.shape[1],
        N_b=b_split.range_basis.shape[1],
        N=scheme.dimension,
        N_f=min(nonzero_counts),
        N_d=N_a_d + N_b_d + dark.size,
        n_a=n_a,
        n_b=n_b,
        n_c=n_c,
        time_independent=len(coupled_ranks) == 1 and len(nonzero_counts) == 1,
    )


def bright_states(
    scheme: LevelScheme,
    geometry: Geometry,
    omega_a: float,
    omega_b: float,
    tol_rel: float | None = None,
) -> BrightStates:
    """Bright states ``F = g C / c`` for the three excited-level families."""
    if omega_a < 0 or omega_b < 0 or (omega_a == 0 and omega_b == 0):
        raise DomainError("need non-negative Rabi frequencies, not both zero")
    tol = _resolve_tol(tol_rel)
    ops = coupling_operators(scheme, geometry)
    idx = BasisIndex.for_scheme(scheme)
    g_a, g_b = ops.g_a, ops.g_b
    M_a = g_a.conj().T @ g_a
    M_b = g_b.conj().T @ g_b

    C_a, ca2 = _exclusive_family(M_a, M_b, tol)
    C_b, cb2 = _exclusive_family(M_b, M_a, tol)
    dark_c = rank_split(M_a + M_b, tol).null_basis

    # the mixed family lives on the orthogonal complement of the other three
    taken = np.hstack([dark_c, C_a, C_b])
    complement = rank_split(np.eye(scheme.n_c) - taken @ taken.conj().T, tol).range_basis
    GG = omega_a**2 * M_a + omega_b**2 * M_b
    restricted = complement.conj().T @ GG @ complement
    if complement.shape[1]:
        vals, u = eigh(restricted)
    else:
        vals, u = np.zeros(0), np.zeros((0, 0), dtype=complex)
    scale = max(_largest(GG), 1e-300)
    if np.any(vals <= tol * scale):
        raise ConsistencyError("mixed excited-level family contains an uncoupled state")
    C_ab = complement @ u

    c_a, c_b, c_ab = np.sqrt(ca2), np.sqrt(cb2), np.sqrt(vals)
    F_a = idx.embed(idx.a, (g_a @ C_a) / c_a if c_a.size else np.zeros((scheme.n_a, 0)))
    F_b = idx.embed(idx.b, (g_b @ C_b) / c_b if c_b.size else np.zeros((2 * scheme.n_b, 0)))
    lower = np.vstack([omega_a * g_a, omega_b * g_b])
    F_ab = idx.embed(idx.lower, (lower @ C_ab) / c_ab if c_ab.size else np.zeros((idx.lower.stop, 0)))
    return BrightStates(
        F_a=F_a,
        F_b=F_b,
        F_ab=F_ab,
        C_a=idx.embed(idx.c, C_a),
        C_b=idx.embed(idx.c, C_b),
        C_ab=idx.embed(idx.c, C_ab),
        c_a=c_a,
        c_b=c_b,
        c_ab=c_ab,
    )


def dark_ab_space(scheme: LevelScheme, geometry: Geometry, tol_rel: float | None = None) -> DarkSpace:
    """Transfer operator and orthonormal ground vectors of the dark-ab family.

    Ground vectors are taken from the subspace whose drive coupling ``g_a^+ A``
    can be cancelled by the cavity branch, i.e. lies in the range of ``g_b^+``.
    When the cavity branch reaches every excited sublevel (all schemes with
    transverse ``e_x``/``e_y`` modes and ``J_b >= 1/2``) that subspace is the whole
    ground level and the ``A_k`` are simply the eigenvectors of ``D_ba^+ D_ba``
    with nonzero eigenvalue.
    """
    tol = _resolve_tol(tol_rel)
    ops = coupling_operators(scheme, geometry)
    g_a, g_b = ops.g_a, ops.g_b
    idx = BasisIndex.for_scheme(scheme)
    n_a = scheme.n_a

    b_split = rank_split(g_b @ g_b.conj().T, tol)
    D_b = (b_split.range_basis / b_split.range_eigenvalues) @ b_split.range_basis.conj().T
    D_ba = D_b @ g_b @ g_a.conj().T

    # drive couplings the cavity branch cannot cancel
    range_b = g_b.conj().T @ D_b @ g_b
    residual = (np.eye(scheme.n_c) - range_b) @ g_a.conj().T
    scale_a = _largest(g_a @ g_a.conj().T)
    if scale_a > 0.0:
        cancellable = rank_split(residual.conj().T @ residual, tol, scale=scale_a).null_basis
    else:
        cancellable = np.eye(n_a, dtype=complex)

    DD = D_ba.conj().T @ D_ba
    scale_d = _largest(DD)
    if scale_d > 0.0 and cancellable.shape[1]:
        restricted = cancellable.conj().T @ DD @ cancellable
        split = rank_split(restricted, tol, scale=scale_d)
        A_d = cancellable @ split.range_basis
        a_dk = np.sqrt(split.range_eigenvalues)
    else:
        A_d = np.zeros((n_a, 0), dtype=complex)
        a_dk = np.zeros(0)

    P_a_d = (A_d / a_dk) @ A_d.conj().T
    return DarkSpace(scheme=scheme, D_b=D_b, D_ba=D_ba, a_dk=a_dk, A_d=A_d, P_a_d=P_a_d, basis=idx)


def dark_ab_state(dark: DarkSpace, k: int, omega_a: float, omega_b: float) -> np.ndarray:
    """Normalized dark state ``(omega_a D_ba A_k - omega_b A_k)`` in the full basis.

    ``k`` is zero-based.
    """
    if not 0 <= k < dark.size:
        raise IndexError(f"dark-ab index {k} out of range for {dark.size} states")
    if omega_a < 0 or omega_b < 0 or (omega_a == 0 and omega_b == 0):
        raise DomainError("need non-negative Rabi frequencies, not both zero")
    A = dark.A_d[:, k]
    a = dark.a_dk[k]
    idx = dark.basis
    out = np.zeros(idx.size, dtype=complex)
    out[idx.a] = -omega_b * A
    out[idx.b] = omega_a * (dark.D_ba @ A)
    return out / np.hypot(omega_b, a * omega_a)


def emission(
    scheme: LevelScheme,
    geometry: Geometry,
    initial: AtomicState,
    tol_rel: float | None = None,
    dark: DarkSpace | None = None,
) -> EmissionResult:
    """Emission probability and polarization of the photon in the adiabatic limit.

    A precomputed ``dark`` space for the same scheme and geometry may be passed
    to skip its construction.
    """
    if initial.dimension != scheme.n_a:
        raise DomainError(f"initial state has dimension {initial.dimension}, ground level has {scheme.n_a}")
    if dark is None:
        dark = dark_ab_space(scheme, geometry, tol_rel)
    U = dark.transfer
    rho_b = U @ initial.rho_a @ U.conj().T
    return EmissionResult.from_field_matrix(field_matrix_from_lower(rho_b, scheme.n_b))


def sweep_psi(
    scheme: LevelScheme,
    initial: AtomicState,
    psi_grid: Sequence[float],
    tol_rel: float | None = None,
) -> list[SweepRow]:
    """Emission versus the drive angle ``psi`` (linear drive in the XZ plane).

    Undefined polarizations are reported as NaN with ``defined=False``.
    """
    rows = []
    for psi in psi_grid:
        res = emission(scheme, Geometry.from_psi(float(psi)), initial, tol_rel)
        if res.defined:
            xi1, xi2, xi3 = res.stokes
            rows.append(SweepRow(float(psi), res.w, xi1, xi2, xi3, res.P, True))
        else:
            nan = float("nan")
            rows.append(SweepRow(float(psi), res.w, nan, nan, nan, nan, False))
    return rows
