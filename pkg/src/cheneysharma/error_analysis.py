"""Error analysis for the curved-triangle operators.

Covers the second-moment gaps, brute-force and analytic moduli of continuity,
the modulus-of-continuity bounds for ``Qx``/``Qy``, ``P1`` and ``S1``, and the
Peano-kernel representation of the directional remainders.

The second-moment gap at ``(x, y)`` in the x-direction is

    gap_x = (Qx e20)(x, y) - x^2 = g(y)^2 E2(x / g(y)) - x^2,

with ``E2`` the univariate closed form of ``Q_m e_2``. The directional bound
reads ``|Rx F| <= (1 + sqrt(gap_x) / delta) * omega(F(., y); delta)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy import ndimage

from .basis import direct_moment, second_moment
from .domain import Axis, CurvedTriangle
from .exceptions import DegenerateInputError, NegativeGapError
from .fields import ScalarField
from .operators import BivariateParams, _check_point, _chord_weights, axis_params

Modulus1D = Callable[[float], float]
Modulus2D = Callable[[float, float], float]

#: Gaps below this are treated as rounding noise around zero.
GAP_TOLERANCE = 1e-12
#: Gauss-Legendre points per smooth piece of the Peano integrand.
PEANO_GAUSS_POINTS = 32
DEFAULT_MODULUS_RESOLUTION = 2001


@dataclass(frozen=True)
class ModulusEstimate:
    """Brute-force modulus of continuity on a finite grid (a lower estimate)."""

    delta: float | tuple[float, float]
    value: float
    resolution: int


# Moment gaps


def _chord(tri: CurvedTriangle, x: float, y: float, axis: Axis) -> tuple[float, float]:
    """Offset along the chord and chord length through ``(x, y)``."""
    if axis is Axis.X:
        return x, tri.g(y)
    return y, tri.f(x)


def _moment_gap(tri: CurvedTriangle, params: BivariateParams, x: float, y: float, axis: Axis) -> float:
    x, y = _check_point(tri, x, y)
    u, length = _chord(tri, x, y, axis)
    if length == 0.0:
        return 0.0
    cs = axis_params(params, axis)
    t = min(max(u / length, 0.0), 1.0)
    moment = second_moment(cs, t) if cs.m >= 2 else direct_moment(cs, t)
    gap = length**2 * moment - u**2
    if gap < -GAP_TOLERANCE * max(1.0, length**2):
        raise NegativeGapError(f"negative second-moment gap {gap!r} at ({x!r}, {y!r})")
    return max(gap, 0.0)


def moment_gap_x(tri: CurvedTriangle, params: BivariateParams, x: float, y: float) -> float:
    """``(Qx e20)(x, y) - x^2``; zero on ``Gamma1`` and ``Gamma3``."""
    return _moment_gap(tri, params, x, y, Axis.X)


def moment_gap_y(tri: CurvedTriangle, params: BivariateParams, x: float, y: float) -> float:
    """``(Qy e02)(x, y) - y^2``; zero on ``Gamma2`` and ``Gamma3``."""
    return _moment_gap(tri, params, x, y, Axis.Y)


def moment_gap(tri: CurvedTriangle, params: BivariateParams, x: float, y: float, axis: Axis) -> float:
    return _moment_gap(tri, params, x, y, axis)


# Moduli of continuity


def modulus_1d(
    tri: CurvedTriangle,
    F: ScalarField,
    fixed: float,
    axis: Axis,
    delta: float,
    resolution: int = DEFAULT_MODULUS_RESOLUTION,
) -> ModulusEstimate:
    """Largest ``|F(u1) - F(u2)|`` over grid pairs on one chord with ``|u1 - u2| <= delta``.

    The chord is ``[0, g(fixed)]`` at height ``fixed`` for ``Axis.X`` and
    ``[0, f(fixed)]`` at abscissa ``fixed`` for ``Axis.Y``.
    """
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    if delta <= 0:
        raise ValueError("delta must be positive")
    length = tri.g(fixed) if axis is Axis.X else tri.f(fixed)
    u = np.linspace(0.0, length, resolution)
    vals = F.values(u, fixed) if axis is Axis.X else F.values(fixed, u)
    if length == 0.0:
        return ModulusEstimate(delta, 0.0, resolution)
    step = length / (resolution - 1)
    half = min(int(math.floor(delta / step * (1 + 1e-12))), resolution - 1)
    if half == 0:
        return ModulusEstimate(delta, 0.0, resolution)
    size = 2 * half + 1
    hi = ndimage.maximum_filter1d(vals, size, mode="nearest")
    lo = ndimage.minimum_filter1d(vals, size, mode="nearest")
    value = float(np.max(np.maximum(hi - vals, vals - lo)))
    return ModulusEstimate(delta, value, resolution)


def modulus_2d(
    tri: CurvedTriangle,
    F: ScalarField,
    delta1: float,
    delta2: float,
    resolution: int = 401,
) -> ModulusEstimate:
    """Bivariate modulus over lattice points of the triangle.

    Largest ``|F(p) - F(q)|`` for lattice points ``p, q`` inside the triangle
    with ``|p_x - q_x| <= delta1`` and ``|p_y - q_y| <= delta2``, found with
    separable sliding max/min filters.
    """
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    if delta1 < 0 or delta2 < 0:
        raise ValueError("deltas must be nonnegative")
    grid = np.linspace(0.0, tri.h, resolution)
    xx, yy = np.meshgrid(grid, grid, indexing="ij")
    inside = _lattice_mask(tri, grid)
    vals = np.where(inside, F.values(xx, yy), 0.0)
    step = tri.h / (resolution - 1)
    hx = min(int(math.floor(delta1 / step * (1 + 1e-12))), resolution - 1)
    hy = min(int(math.floor(delta2 / step * (1 + 1e-12))), resolution - 1)
    size = (2 * hx + 1, 2 * hy + 1)
    hi = ndimage.maximum_filter(np.where(inside, vals, -np.inf), size=size, mode="constant", cval=-np.inf)
    lo = ndimage.minimum_filter(np.where(inside, vals, np.inf), size=size, mode="constant", cval=np.inf)
    spread = np.maximum(hi - vals, vals - lo)
    value = float(np.max(spread[inside]))
    return ModulusEstimate((delta1, delta2), value, resolution)


def _lattice_mask(tri: CurvedTriangle, grid: np.ndarray) -> np.ndarray:
    heights = np.array([tri.f(x) for x in grid])
    return grid[None, :] <= heights[:, None]


def lipschitz_modulus_1d(F: ScalarField, tri: CurvedTriangle, axis: Axis) -> Modulus1D:
    """Analytic upper modulus ``omega(delta) = L * delta`` along one axis."""
    lx, ly = F.lipschitz_constants(tri.h)
    lip = lx if axis is Axis.X else ly
    return lambda delta: lip * delta


def lipschitz_modulus_2d(F: ScalarField, tri: CurvedTriangle) -> Modulus2D:
    """Analytic upper modulus ``omega(d1, d2) = L_x d1 + L_y d2``."""
    lx, ly = F.lipschitz_constants(tri.h)
    return lambda d1, d2: lx * d1 + ly * d2


# Bounds


def _fixed_coord(x: float, y: float, axis: Axis) -> float:
    return y if axis is Axis.X else x


def bound_directional(
    tri: CurvedTriangle,
    params: BivariateParams,
    F: ScalarField,
    x: float,
    y: float,
    delta: float,
    axis: Axis = Axis.X,
    modulus: Optional[Modulus1D] = None,
    resolution: int = DEFAULT_MODULUS_RESOLUTION,
) -> float:
    """``(1 + sqrt(gap) / delta) * omega(delta)`` for ``Qx`` (or ``Qy``).

    With ``modulus=None`` the modulus is a brute-force grid estimate, so the
    result is an estimate; pass an analytic upper modulus to get a certified
    bound.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    gap = moment_gap(tri, params, x, y, axis)
    if modulus is None:
        omega = modulus_1d(tri, F, _fixed_coord(x, y, axis), axis, delta, resolution).value
    else:
        omega = modulus(delta)
    return (1.0 + math.sqrt(gap) / delta) * omega


def _inverse_root(gap: float) -> float:
    # a vanishing gap kills the matching term of the bound; its delta is irrelevant
    return 1.0 / math.sqrt(gap) if gap > 0 else 0.0


def bound_product(
    tri: CurvedTriangle,
    params: BivariateParams,
    F: ScalarField,
    x: float,
    y: float,
    modulus: Optional[Modulus2D] = None,
    resolution: int = 401,
) -> float:
    """``(gap_x + gap_y + 1) * omega(F; 1/sqrt(gap_x), 1/sqrt(gap_y))`` for ``P1``."""
    gx = moment_gap_x(tri, params, x, y)
    gy = moment_gap_y(tri, params, x, y)
    if gx == 0.0 and gy == 0.0:
        # only the vertices, where P1 interpolates
        return 0.0
    d1, d2 = _inverse_root(gx), _inverse_root(gy)
    if modulus is None:
        omega = modulus_2d(tri, F, d1, d2, resolution).value
    else:
        omega = modulus(d1, d2)
    return (gx + gy + 1.0) * omega


def bound_boolean(
    tri: CurvedTriangle,
    params: BivariateParams,
    F: ScalarField,
    x: float,
    y: float,
    modulus_x: Optional[Modulus1D] = None,
    modulus_y: Optional[Modulus1D] = None,
    modulus_xy: Optional[Modulus2D] = None,
    resolution_1d: int = DEFAULT_MODULUS_RESOLUTION,
    resolution_2d: int = 401,
) -> float:
    """Bound for ``S1`` from ``|R_S1| <= |Rx| + |Ry| + |R_P1|``.

    Each directional term is ``(1 + gap) * omega(1/sqrt(gap))``, which is the
    directional bound at ``delta = 1/sqrt(gap)``; it vanishes with the gap.
    """
    total = 0.0
    for axis, modulus in ((Axis.X, modulus_x), (Axis.Y, modulus_y)):
        gap = moment_gap(tri, params, x, y, axis)
        if gap == 0.0:
            continue
        delta = 1.0 / math.sqrt(gap)
        if modulus is None:
            omega = modulus_1d(tri, F, _fixed_coord(x, y, axis), axis, delta, resolution_1d).value
        else:
            omega = modulus(delta)
        total += (1.0 + gap) * omega
    total += bound_product(tri, params, F, x, y, modulus_xy, resolution_2d)
    return total


# Peano kernel


def _kernel_data(tri: CurvedTriangle, params: BivariateParams, x: float, y: float, axis: Axis):
    x, y = _check_point(tri, x, y)
    u, length = _chord(tri, x, y, axis)
    w, nodes = _chord_weights(axis_params(params, axis), u, length)
    return min(u, length), length, w, nodes


def _kernel_values(u: float, w: np.ndarray, nodes: np.ndarray, s: np.ndarray) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    trunc = np.maximum(nodes[:, None] - s[None, :], 0.0)
    return np.maximum(u - s, 0.0) - w @ trunc


def peano_kernel(
    tri: CurvedTriangle,
    params: BivariateParams,
    x: float,
    y: float,
    s,
    axis: Axis = Axis.X,
):
    """Peano kernel ``K(s) = (u - s)_+ - sum_i w_i (u_i - s)_+`` of the directional remainder.

    ``u`` is ``x`` (``Axis.X``, chord ``[0, g(y)]``) or ``y`` (``Axis.Y``,
    chord ``[0, f(x)]``). The kernel is nonpositive on the chord.
    Accepts a scalar or an array of ``s``.
    """
    u, length, w, nodes = _kernel_data(tri, params, x, y, axis)
    s_arr = np.atleast_1d(np.asarray(s, dtype=float))
    if np.any(s_arr < -1e-12) or np.any(s_arr > length + 1e-12):
        raise DegenerateInputError(f"s outside [0, {length}]")
    vals = _kernel_values(u, w, nodes, s_arr)
    return float(vals[0]) if np.ndim(s) == 0 else vals


def peano_remainder(
    tri: CurvedTriangle,
    params: BivariateParams,
    F: ScalarField,
    x: float,
    y: float,
    axis: Axis = Axis.X,
    points: int = PEANO_GAUSS_POINTS,
) -> float:
    """Directional remainder as ``integral K(s) F''(s) ds`` over the chord.

    The integrand is split at every node and at the evaluation abscissa and
    each piece is integrated with a Gauss-Legendre rule.
    """
    if axis is Axis.X:
        d2 = F.second_derivative("x")
    else:
        d2 = F.second_derivative("y")
    u, length, w, nodes = _kernel_data(tri, params, x, y, axis)
    if length == 0.0:
        return 0.0
    breaks = np.unique(np.clip(np.concatenate([nodes, [0.0, u, length]]), 0.0, length))
    gx, gw = np.polynomial.legendre.leggauss(points)
    total = 0.0
    for a, b in zip(breaks[:-1], breaks[1:]):
        if b <= a:
            continue
        s = 0.5 * (b - a) * gx + 0.5 * (a + b)
        if axis is Axis.X:
            second = np.asarray(d2(s, y + 0.0 * s), dtype=float)
        else:
            second = np.asarray(d2(x + 0.0 * s, s), dtype=float)
        total += 0.5 * (b - a) * float(np.dot(gw, _kernel_values(u, w, nodes, s) * second))
    return total


def peano_mean_value_factor(tri: CurvedTriangle, params: BivariateParams, x: float, y: float, axis: Axis = Axis.X) -> float:
    """``integral K(s) ds = -gap / 2``, the factor multiplying ``F''(xi)``."""
    return -0.5 * moment_gap(tri, params, x, y, axis)

