"""Closed-form evaluators for the elementary kernels.

Every function is vectorized: points are anything array-like whose last axis
has length two (a :class:`Point2` works), times and scalars broadcast.
"""

from __future__ import annotations

import math
from typing import TYPE_CHECKING, NamedTuple

import numpy as np

from halfplane_vorticity.exceptions import (
    InvalidParameterError,
    InvalidTimeError,
    SingularityError,
)

if TYPE_CHECKING:
    from numpy.typing import ArrayLike, NDArray

    FloatArray = NDArray[np.float64]

EPS_SINGULAR = 1e-12


class Point2(NamedTuple):
    """A point of the closed half plane (or its reflection)."""

    x1: float
    x2: float

    def star(self) -> Point2:
        """Reflection ``(x1, -x2)`` across the boundary."""
        return Point2(self.x1, -self.x2)


def components(x: ArrayLike) -> tuple[FloatArray, FloatArray]:
    arr = np.asarray(x, dtype=np.float64)
    if arr.shape[-1] != 2:
        raise InvalidParameterError(f"Points need a trailing axis of length 2, got {arr.shape}")
    return arr[..., 0], arr[..., 1]


def scalar_or_array(values: FloatArray) -> float | FloatArray:
    return float(values) if np.ndim(values) == 0 else values


def check_time(t: ArrayLike, *, allow_zero: bool = False) -> None:
    """Raise :class:`InvalidTimeError` unless every ``t`` is admissible."""
    arr = np.asarray(t, dtype=np.float64)
    bad = arr < 0 if allow_zero else arr <= 0
    if np.any(bad) or not np.all(np.isfinite(arr)):
        raise InvalidTimeError(float(np.min(arr)), allow_zero=allow_zero)


def _check_regular(r2: FloatArray, what: str) -> None:
    if np.any(r2 < EPS_SINGULAR**2):
        raise SingularityError(
            f"{what} evaluated within {EPS_SINGULAR:g} of its singularity",
            distance=float(np.sqrt(np.min(r2))),
        )


# ---------------------------------------------------------------------------
# Heat kernels
# ---------------------------------------------------------------------------


def gauss2d(x: ArrayLike, t: ArrayLike) -> float | FloatArray:
    """Whole-plane heat kernel ``(4 pi t)^-1 exp(-|x|^2 / 4t)``."""
    check_time(t)
    x1, x2 = components(x)
    t = np.asarray(t, dtype=np.float64)
    return scalar_or_array(np.exp(-(x1**2 + x2**2) / (4 * t)) / (4 * math.pi * t))


def gauss1d(r: ArrayLike, t: ArrayLike) -> float | FloatArray:
    """Line heat kernel ``(4 pi t)^-1/2 exp(-r^2 / 4t)``."""
    check_time(t)
    r = np.asarray(r, dtype=np.float64)
    t = np.asarray(t, dtype=np.float64)
    return scalar_or_array(np.exp(-(r**2) / (4 * t)) / np.sqrt(4 * math.pi * t))


def gauss1d_dr(r: ArrayLike, t: ArrayLike) -> float | FloatArray:
    """Derivative of :func:`gauss1d` in ``r``."""
    r = np.asarray(r, dtype=np.float64)
    t = np.asarray(t, dtype=np.float64)
    return scalar_or_array(-r / (2 * t) * np.asarray(gauss1d(r, t)))


# ---------------------------------------------------------------------------
# Logarithmic potential
# ---------------------------------------------------------------------------


def log_potential(x: ArrayLike) -> float | FloatArray:
    """Fundamental solution ``E(x) = -(1/2 pi) log|x|``."""
    x1, x2 = components(x)
    r2 = x1**2 + x2**2
    _check_regular(r2, "log_potential")
    return scalar_or_array(-np.log(r2) / (4 * math.pi))


def grad_E(x: ArrayLike) -> tuple[float | FloatArray, float | FloatArray]:
    """Gradient ``-x / (2 pi |x|^2)``."""
    x1, x2 = components(x)
    r2 = x1**2 + x2**2
    _check_regular(r2, "grad_E")
    c = -1.0 / (2 * math.pi * r2)
    return scalar_or_array(c * x1), scalar_or_array(c * x2)


def hess_E(
    x: ArrayLike,
) -> tuple[float | FloatArray, float | FloatArray, float | FloatArray]:
    """Second derivatives ``(d11 E, d12 E, d22 E)``."""
    x1, x2 = components(x)
    r2 = x1**2 + x2**2
    _check_regular(r2, "hess_E")
    r4 = r2**2
    d11 = -(x2**2 - x1**2) / (2 * math.pi * r4)
    d12 = x1 * x2 / (math.pi * r4)
    return scalar_or_array(d11), scalar_or_array(d12), scalar_or_array(-d11)


def log_cell_average(h1: float, h2: float) -> float:
    """Mean of ``E`` over the cell ``[-h1/2, h1/2] x [-h2/2, h2/2]``.

    Uses the closed form of the integral of ``log(x^2 + y^2)`` over a rectangle
    with a corner at the origin.
    """
    a, b = 0.5 * h1, 0.5 * h2
    corner = (
        a * b * (math.log(a * a + b * b) - 3.0)
        + a * a * math.atan(b / a)
        + b * b * math.atan(a / b)
    )
    mean_log_r2 = corner / (a * b)
    return -mean_log_r2 / (4 * math.pi)


# ---------------------------------------------------------------------------
# Poisson kernels on the boundary line
# ---------------------------------------------------------------------------


def _check_s(s: ArrayLike) -> FloatArray:
    arr = np.asarray(s, dtype=np.float64)
    if np.any(arr <= 0):
        raise InvalidParameterError(f"Poisson parameter s must be positive, got {np.min(arr)}")
    return arr


def poisson_P(x1: ArrayLike, s: ArrayLike) -> float | FloatArray:
    """Poisson kernel ``s / (pi (x1^2 + s^2))``."""
    s = _check_s(s)
    x1 = np.asarray(x1, dtype=np.float64)
    return scalar_or_array(s / (math.pi * (x1**2 + s**2)))


def conj_poisson_Q(x1: ArrayLike, s: ArrayLike) -> float | FloatArray:
    """Conjugate Poisson kernel ``x1 / (pi (x1^2 + s^2))``."""
    s = _check_s(s)
    x1 = np.asarray(x1, dtype=np.float64)
    return scalar_or_array(x1 / (math.pi * (x1**2 + s**2)))


# ---------------------------------------------------------------------------
# Green functions of the half plane
# ---------------------------------------------------------------------------


def _pair(x: ArrayLike, y: ArrayLike) -> tuple[FloatArray, FloatArray, FloatArray]:
    """Offsets ``x1 - y1``, ``x2 - y2`` and ``x2 + y2``."""
    x1, x2 = components(x)
    y1, y2 = components(y)
    return x1 - y1, x2 - y2, x2 + y2


def dirichlet_green(x: ArrayLike, y: ArrayLike) -> float | FloatArray:
    """``D(x, y) = E(x - y) - E(x - y*)``."""
    d1, dm, dp = _pair(x, y)
    r2 = d1**2 + dm**2
    _check_regular(r2, "dirichlet_green")
    rs2 = d1**2 + dp**2
    return scalar_or_array((np.log(rs2) - np.log(r2)) / (4 * math.pi))


def neumann_green(x: ArrayLike, y: ArrayLike) -> float | FloatArray:
    """``E(x - y) + E(x - y*)``."""
    d1, dm, dp = _pair(x, y)
    r2 = d1**2 + dm**2
    _check_regular(r2, "neumann_green")
    rs2 = np.maximum(d1**2 + dp**2, EPS_SINGULAR**2)
    return scalar_or_array(-(np.log(r2) + np.log(rs2)) / (4 * math.pi))


def biot_savart_kernel(
    x: ArrayLike, y: ArrayLike
) -> tuple[float | FloatArray, float | FloatArray]:
    """Perpendicular gradient in ``x`` of the Dirichlet Green function.

    ``(1/2 pi) [(x - y)^perp / |x - y|^2 - (x - y*)^perp / |x - y*|^2]`` with
    ``v^perp = (-v2, v1)``; identically zero when ``y2 = 0``.
    """
    d1, dm, dp = _pair(x, y)
    r2 = d1**2 + dm**2
    _check_regular(r2, "biot_savart_kernel")
    rs2 = d1**2 + dp**2
    k1 = (-dm / r2 + dp / rs2) / (2 * math.pi)
    k2 = (d1 / r2 - d1 / rs2) / (2 * math.pi)
    return scalar_or_array(k1), scalar_or_array(k2)
