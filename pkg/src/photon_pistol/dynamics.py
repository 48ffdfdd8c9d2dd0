"""
Time-domain reference: integrate ``d rho/dt = (i/2) [V(t), rho]`` on the full
single-excitation space with fixed-step RK4 and read the photon statistics off
the final density matrix.

This module deliberately shares nothing with the dark-state construction in
:mod:`photon_pistol.stirap` except the interaction matrix itself, so that the
adiabatic-limit formulas can be checked against brute-force dynamics.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, NamedTuple, Sequence

import numpy as np

from .coupling import BasisIndex, Geometry, LevelScheme, build_interaction, coupling_operators
from .exceptions import AccuracyError, DomainError
from .stirap import AtomicState, EmissionResult, emission

__all__ = [
    "ConvergenceRow",
    "PulseSchedule",
    "TrajectoryResult",
    "convergence_study",
    "integrate",
]

DEFAULT_STEPS = 10_000
TRACE_DRIFT_LIMIT = 1e-6
_CHECK_EVERY = 100

Shape = Literal["sine", "smoothstep"]


@dataclass(frozen=True)
class PulseSchedule:
    """Counterintuitive pulse pair on ``[0, duration]``.

    The cavity coupling starts at ``omega_b0`` and falls to zero while the
    drive rises from zero to ``omega_a0``. ``shape="sine"`` uses
    ``omega_a0 sin(pi t / 2T)`` and ``omega_b0 cos(pi t / 2T)``; ``"smoothstep"``
    uses ``s = 3x^2 - 2x^3`` and ``1 - s``.
    """

    omega_a0: float
    omega_b0: float
    duration: float
    detuning: float = 0.0
    shape: Shape = "sine"

    def __post_init__(self):
        if self.omega_a0 < 0 or self.omega_b0 <= 0:
            raise DomainError("need omega_a0 >= 0 and omega_b0 > 0")
        if self.duration <= 0:
            raise DomainError("duration must be positive")
        if self.shape not in ("sine", "smoothstep"):
            raise DomainError(f"unknown pulse shape {self.shape!r}")

    def rabi(self, t: float) -> tuple[float, float]:
        """``(omega_a(t), omega_b(t))``."""
        x = min(max(t / self.duration, 0.0), 1.0)
        if self.shape == "sine":
            rise, fall = np.sin(0.5 * np.pi * x), np.cos(0.5 * np.pi * x)
            # exact endpoints rather than cos(pi/2) ~ 6e-17
            if x == 1.0:
                rise, fall = 1.0, 0.0
        else:
            rise = x * x * (3.0 - 2.0 * x)
            fall = 1.0 - rise
        return self.omega_a0 * rise, self.omega_b0 * fall

    def scaled(self, factor: float) -> "PulseSchedule":
        """Same amplitudes, ``duration`` multiplied by ``factor``."""
        return PulseSchedule(self.omega_a0, self.omega_b0, self.duration * factor, self.detuning, self.shape)


@dataclass(frozen=True)
class TrajectoryResult:
    rho_final: np.ndarray
    w_num: float
    sigma_num: np.ndarray | None
    stokes_num: tuple[float, float, float] | None
    P_num: float | None
    leakage: float
    max_trace_drift: float
    max_hermiticity_error: float


class ConvergenceRow(NamedTuple):
    omega_T: float
    deviation: float
    leakage: float


def _photon_matrix(rho: np.ndarray, idx: BasisIndex) -> np.ndarray:
    # <n1,n2| tr_atom rho |n1',n2'> restricted to the one-photon states |1,0>, |0,1>
    blocks = (idx.b1, idx.b2)
    out = np.empty((2, 2), dtype=complex)
    for i, bi in enumerate(blocks):
        for j, bj in enumerate(blocks):
            out[i, j] = np.trace(rho[bi, bj])
    return out


def integrate(
    scheme: LevelScheme,
    geometry: Geometry,
    initial: AtomicState,
    schedule: PulseSchedule,
    steps: int = DEFAULT_STEPS,
) -> TrajectoryResult:
    """Propagate the atom+cavity density matrix through the pulse pair.

    The atom starts on level ``a`` in ``initial`` with the cavity empty.
    Trace and Hermiticity are monitored every 100 steps.

    Raises
    ------
    AccuracyError
        If the trace drifts by more than ``1e-6``; increase ``steps``.
    """
    if steps < 1:
        raise DomainError("steps must be positive")
    if initial.dimension != scheme.n_a:
        raise DomainError("initial state does not match the ground level")
    idx = BasisIndex.for_scheme(scheme)
    ops = coupling_operators(scheme, geometry)
    # V(t) = omega_a(t) V_a + omega_b(t) V_b + V_0
    V_0 = build_interaction(scheme, geometry, 0.0, 0.0, schedule.detuning, ops=ops)
    V_a = build_interaction(scheme, geometry, 1.0, 0.0, 0.0, ops=ops)
    V_b = build_interaction(scheme, geometry, 0.0, 1.0, 0.0, ops=ops)

    def generator(t: float) -> np.ndarray:
        wa, wb = schedule.rabi(t)
        return 0.5j * (V_0 + wa * V_a + wb * V_b)

    def rhs(K: np.ndarray, rho: np.ndarray) -> np.ndarray:
        return K @ rho - rho @ K

    rho = np.zeros((idx.size, idx.size), dtype=complex)
    rho[idx.a, idx.a] = initial.rho_a
    trace0 = np.trace(rho).real
    dt = schedule.duration / steps
    max_drift = max_herm = 0.0
    with np.errstate(over="ignore", invalid="ignore"):
        for n in range(steps):
            t = n * dt
            K1 = generator(t)
            K2 = generator(t + 0.5 * dt)
            K4 = generator(t + dt)
            k1 = rhs(K1, rho)
            k2 = rhs(K2, rho + 0.5 * dt * k1)
            k3 = rhs(K2, rho + 0.5 * dt * k2)
            k4 = rhs(K4, rho + dt * k3)
            rho = rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            if (n + 1) % _CHECK_EVERY == 0 or n + 1 == steps:
                drift = abs(np.trace(rho).real - trace0)
                max_drift = max(max_drift, drift)
                max_herm = max(max_herm, float(np.max(np.abs(rho - rho.conj().T))))
                # NaN after an overflow must also trip the check
                if not drift <= TRACE_DRIFT_LIMIT:
                    raise AccuracyError(f"trace drifted by {drift:.2e} after {n + 1} steps; use more steps")

    photon = EmissionResult.from_field_matrix(_photon_matrix(rho, idx))
    return TrajectoryResult(
        rho_final=rho,
        w_num=photon.w,
        sigma_num=photon.sigma,
        stokes_num=photon.stokes,
        P_num=photon.P,
        leakage=float(np.trace(rho[idx.c, idx.c]).real),
        max_trace_drift=max_drift,
        max_hermiticity_error=max_herm,
    )


def convergence_study(
    scheme: LevelScheme,
    geometry: Geometry,
    initial: AtomicState,
    base_schedule: PulseSchedule,
    scale_factors: Sequence[float],
    w_closed: float | None = None,
    base_steps: int = DEFAULT_STEPS,
) -> list[ConvergenceRow]:
    """Re-run :func:`integrate` with the pulse duration stretched by each factor.

    The time step is held fixed, so the step count grows with the factor.
    ``omega_T`` is ``max(omega_a0, omega_b0) * duration`` of each run.
    ``w_closed`` defaults to the adiabatic-limit result of :func:`~photon_pistol.stirap.emission`.
    """
    if w_closed is None:
        w_closed = emission(scheme, geometry, initial).w
    factors = list(scale_factors)
    if any(f < 1 for f in factors) or factors != sorted(factors):
        raise DomainError("scale factors must be ascending and >= 1")
    rows = []
    for f in factors:
        sched = base_schedule.scaled(f)
        res = integrate(scheme, geometry, initial, sched, steps=int(round(base_steps * f)))
        omega_T = max(sched.omega_a0, sched.omega_b0) * sched.duration
        rows.append(ConvergenceRow(omega_T, abs(res.w_num - w_closed), res.leakage))
    return rows
