"""
Angular-momentum algebra: exact Wigner 3j symbols and spherical vector components.

Momenta and projections may be integers or half-integers. They are accepted as
``int``, ``float``, :class:`fractions.Fraction` or strings such as ``"3/2"`` and
are stored internally as doubled integers, so no half-integer is ever rounded.

Spherical basis convention (Condon-Shortley)::

    e_{+1} = -(e_x + i e_y)/sqrt(2),   e_0 = e_z,   e_{-1} = (e_x - i e_y)/sqrt(2)

and the components of a vector ``v`` are ``v_q = e_q . v`` (no conjugation), so that
``v = sum_q (-1)^q v_q e_{-q}``. Emission
probabilities and degrees of polarization do not depend on this choice, but
individual coupling-matrix entries do.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Union

import numpy as np

from .exceptions import DomainError

Momentum = Union[int, float, Fraction, str]

__all__ = [
    "Momentum",
    "SphericalComponents",
    "as_half_integer",
    "doubled",
    "projections",
    "spherical_components",
    "wigner_3j",
]

_SQRT2 = math.sqrt(2.0)


def doubled(x: Momentum) -> int:
    """Return ``2*x`` as an exact integer, or raise DomainError if ``x`` is not a half-integer."""
    if isinstance(x, str):
        try:
            x = Fraction(x.strip())
        except ValueError as exc:
            raise DomainError(f"cannot parse angular momentum {x!r}") from exc
    if isinstance(x, (bool, np.bool_)):
        raise DomainError("angular momentum must be numeric, got a boolean")
    if isinstance(x, (int, np.integer)):
        return 2 * int(x)
    if isinstance(x, float) or isinstance(x, np.floating):
        two_x = 2.0 * float(x)
        if not math.isfinite(two_x) or two_x != round(two_x):
            raise DomainError(f"{x!r} is not an integer or half-integer")
        return int(round(two_x))
    frac = Fraction(x)
    two_x = 2 * frac
    if two_x.denominator != 1:
        raise DomainError(f"{x!r} is not an integer or half-integer")
    return int(two_x)


def as_half_integer(x: Momentum) -> Fraction:
    """Exact value of an integer or half-integer momentum."""
    return Fraction(doubled(x), 2)


def projections(j: Momentum) -> list[Fraction]:
    """Projections ``-j, -j+1, ..., j`` in ascending order."""
    dj = doubled(j)
    if dj < 0:
        raise DomainError(f"angular momentum must be non-negative, got {j!r}")
    return [Fraction(dm, 2) for dm in range(-dj, dj + 1, 2)]


def _check_pair(dj: int, dm: int) -> None:
    if dj < 0:
        raise DomainError(f"angular momentum must be non-negative, got {dj / 2}")
    if abs(dm) > dj:
        raise DomainError(f"|m| = {abs(dm) / 2} exceeds j = {dj / 2}")
    if (dj + dm) % 2:
        raise DomainError(f"j = {dj / 2} and m = {dm / 2} differ by a non-integer")


@lru_cache(maxsize=None)
def _wigner_3j_doubled(dj1: int, dj2: int, dj3: int, dm1: int, dm2: int, dm3: int) -> float:
    if dm1 + dm2 + dm3 != 0:
        return 0.0
    if (dj1 + dj2 + dj3) % 2 or dj3 < abs(dj1 - dj2) or dj3 > dj1 + dj2:
        return 0.0

    # every combination below is an integer once the checks above have passed
    j1j2_j3 = (dj1 + dj2 - dj3) // 2
    j1_j2j3 = (dj1 - dj2 + dj3) // 2
    _j1j2j3 = (-dj1 + dj2 + dj3) // 2
    jsum1 = (dj1 + dj2 + dj3) // 2 + 1
    j1pm, j1mm = (dj1 + dm1) // 2, (dj1 - dm1) // 2
    j2pm, j2mm = (dj2 + dm2) // 2, (dj2 - dm2) // 2
    j3pm, j3mm = (dj3 + dm3) // 2, (dj3 - dm3) // 2

    f = math.factorial
    radicand = Fraction(
        f(j1j2_j3) * f(j1_j2j3) * f(_j1j2j3) * f(j1pm) * f(j1mm) * f(j2pm) * f(j2mm) * f(j3pm) * f(j3mm),
        f(jsum1),
    )

    # Racah single sum; the t-range keeps every factorial argument non-negative
    a1 = (dj3 - dj2 + dm1) // 2
    a2 = (dj3 - dj1 - dm2) // 2
    t_min = max(0, -a1, -a2)
    t_max = min(j1j2_j3, j1mm, j2pm)
    series = Fraction(0)
    for t in range(t_min, t_max + 1):
        denom = f(t) * f(a1 + t) * f(a2 + t) * f(j1j2_j3 - t) * f(j1mm - t) * f(j2pm - t)
        series += Fraction((-1) ** t, denom)
    if series == 0:
        return 0.0

    phase_exp = (dj1 - dj2 - dm3) // 2
    sign = (-1) ** (phase_exp % 2) * (1 if series > 0 else -1)
    return sign * math.sqrt(radicand * series * series)


def wigner_3j(j1: Momentum, j2: Momentum, j3: Momentum, m1: Momentum, m2: Momentum, m3: Momentum) -> float:
    """Wigner 3j symbol ``(j1 j2 j3; m1 m2 m3)``.

    The Racah sum is accumulated in exact rational arithmetic and converted to
    floating point once at the end. Returns exactly ``0.0`` when the
    projections do not sum to zero or the triangle rule fails.

    Raises
    ------
    DomainError
        If some ``|m_i| > j_i`` or ``j_i + m_i`` is not an integer.

    Examples
    --------
    >>> round(wigner_3j(1, 1, 0, 1, -1, 0), 7)
    0.5773503
    """
    d = [doubled(x) for x in (j1, j2, j3, m1, m2, m3)]
    for dj, dm in zip(d[:3], d[3:]):
        _check_pair(dj, dm)
    return _wigner_3j_doubled(*d)


class SphericalComponents(NamedTuple):
    """Circular components ``(q=-1, q=0, q=+1)`` of a complex 3-vector."""

    minus: complex
    zero: complex
    plus: complex

    def get(self, q: int) -> complex:
        """Component with index ``q`` in ``{-1, 0, +1}``."""
        if q == -1:
            return self.minus
        if q == 0:
            return self.zero
        if q == 1:
            return self.plus
        raise DomainError(f"spherical index must be -1, 0 or +1, got {q!r}")

    def as_array(self) -> np.ndarray:
        return np.array([self.minus, self.zero, self.plus], dtype=complex)


def spherical_components(cartesian) -> SphericalComponents:
    """Circular components of a Cartesian complex 3-vector (Condon-Shortley).

    >>> spherical_components([0, 0, 1])
    SphericalComponents(minus=0j, zero=(1+0j), plus=0j)
    """
    v = np.asarray(cartesian, dtype=complex)
    if v.shape != (3,):
        raise DomainError(f"expected a 3-vector, got shape {v.shape}")
    x, y, z = v
    return SphericalComponents(
        minus=complex((x - 1j * y) / _SQRT2),
        zero=complex(z),
        plus=complex(-(x + 1j * y) / _SQRT2),
    )
