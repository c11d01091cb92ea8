"""The triangle with legs on the coordinate axes and one curved side.

Vertices are ``V1 = (0, h)``, ``V2 = (h, 0)`` and ``V3 = (0, 0)``. The side
``Gamma1`` lies on the y-axis, ``Gamma2`` on the x-axis, and ``Gamma3`` joins
``V1`` to ``V2`` along ``y = f(x)``, equivalently ``x = g(y)`` with ``g`` the
inverse of ``f``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np
from scipy import optimize

from .exceptions import ConvergenceError, CurveInvariantError, OutOfDomainError

#: Slack on coordinates handed to the curve functions.
COORD_TOLERANCE = 1e-12
#: Absolute tolerance of the bisection inverse; well below 1e-12 so that
#: nodes on the curved side pass a 1e-12 containment check.
BISECT_XTOL = 1e-15
BISECT_MAXITER = 200
#: Grid size of the monotonicity check for polynomial curves.
MONOTONE_CHECK_POINTS = 1001


class Axis(enum.Enum):
    """Direction along which an operator or a partition acts."""

    X = "x"
    Y = "y"


class Edge(enum.Enum):
    GAMMA1 = "gamma1"  # x = 0
    GAMMA2 = "gamma2"  # y = 0
    GAMMA3 = "gamma3"  # y = f(x)


@dataclass(frozen=True)
class StraightLine:
    """``f(x) = h - x``."""


@dataclass(frozen=True)
class SuperellipseArc:
    """``f(x) = h (1 - (x/h)^p)^(1/p)``; ``p = 2`` is the quarter circle."""

    p: float = 2.0

    def __post_init__(self) -> None:
        if not math.isfinite(self.p) or self.p < 1:
            raise CurveInvariantError(f"superellipse exponent must be >= 1, got {self.p!r}")


@dataclass(frozen=True)
class MonotonePolynomial:
    """``f(x) = sum_k coeffs[k] x^k``, checked to be decreasing from h to 0."""

    coeffs: tuple[float, ...]

    def __init__(self, coeffs: Sequence[float]) -> None:
        object.__setattr__(self, "coeffs", tuple(float(c) for c in coeffs))
        if not self.coeffs:
            raise CurveInvariantError("polynomial curve needs at least one coefficient")


CurveSpec = Union[StraightLine, SuperellipseArc, MonotonePolynomial]


def parse_curve(text: str) -> CurveSpec:
    """Parse ``line``, ``superellipse:p``, ``circle`` or ``poly:c0,c1,...``."""
    kind, _, arg = text.strip().partition(":")
    kind = kind.lower()
    try:
        if kind == "line":
            return StraightLine()
        if kind == "circle":
            return SuperellipseArc(2.0)
        if kind == "superellipse":
            return SuperellipseArc(float(arg) if arg else 2.0)
        if kind == "poly":
            return MonotonePolynomial([float(c) for c in arg.split(",") if c.strip()])
    except ValueError as exc:
        if isinstance(exc, CurveInvariantError):
            raise
        raise CurveInvariantError(f"cannot parse curve {text!r}: {exc}") from exc
    raise CurveInvariantError(f"unknown curve kind {kind!r}")


class CurvedTriangle:
    """Curved-side triangle ``T_h``; immutable after construction.

    Parameters
    ----------
    h : float
        Leg length, ``f(0) = g(0) = h``.
    curve : CurveSpec
        Description of the hypotenuse ``Gamma3``.

    Raises
    ------
    CurveInvariantError
        If the curve does not run monotonically from ``V1`` to ``V2`` inside
        the square ``[0, h]^2``.
    """

    def __init__(self, h: float = 1.0, curve: CurveSpec | None = None) -> None:
        if not math.isfinite(h) or h <= 0:
            raise CurveInvariantError(f"h must be positive, got {h!r}")
        self.h = float(h)
        self.curve = StraightLine() if curve is None else curve
        if isinstance(self.curve, MonotonePolynomial):
            self._poly = np.polynomial.Polynomial(self.curve.coeffs)
            self._check_polynomial()

    def __repr__(self) -> str:
        return f"CurvedTriangle(h={self.h!r}, curve={self.curve!r})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CurvedTriangle):
            return NotImplemented
        return self.h == other.h and self.curve == other.curve

    def __hash__(self) -> int:
        return hash((self.h, self.curve))

    def _check_polynomial(self) -> None:
        h = self.h
        if abs(self._poly(0.0) - h) > COORD_TOLERANCE * max(1.0, h):
            raise CurveInvariantError(f"polynomial curve has f(0)={self._poly(0.0)!r}, expected {h}")
        if abs(self._poly(h)) > COORD_TOLERANCE * max(1.0, h):
            raise CurveInvariantError(f"polynomial curve has f(h)={self._poly(h)!r}, expected 0")
        xs = np.linspace(0.0, h, MONOTONE_CHECK_POINTS)
        ys = self._poly(xs)
        if np.any(np.diff(ys) >= 0):
            raise CurveInvariantError("polynomial curve is not strictly decreasing on [0, h]")
        if ys.max() > h * (1 + 1e-12) or ys.min() < -COORD_TOLERANCE * h:
            raise CurveInvariantError("polynomial curve leaves [0, h]")

    @property
    def vertices(self) -> tuple[tuple[float, float], ...]:
        """``(V1, V2, V3)``."""
        return ((0.0, self.h), (self.h, 0.0), (0.0, 0.0))

    def _clamp(self, u: float, what: str) -> float:
        u = float(u)
        if not (-COORD_TOLERANCE <= u <= self.h + COORD_TOLERANCE):
            raise OutOfDomainError(f"{what}={u!r} is outside [0, {self.h}]")
        return min(max(u, 0.0), self.h)

    def f(self, x: float) -> float:
        """Height of the curved side above ``x``."""
        x = self._clamp(x, "x")
        curve, h = self.curve, self.h
        if isinstance(curve, StraightLine):
            y = h - x
        elif isinstance(curve, SuperellipseArc):
            y = h * (1.0 - (x / h) ** curve.p) ** (1.0 / curve.p)
        else:
            y = float(self._poly(x))
        return min(max(y, 0.0), h)

    def g(self, y: float) -> float:
        """Inverse of :meth:`f`: the abscissa of the curved side at height ``y``."""
        y = self._clamp(y, "y")
        curve, h = self.curve, self.h
        if isinstance(curve, (StraightLine, SuperellipseArc)):
            # both families are symmetric in x and y
            return self.f(y)
        if y == h:
            return 0.0
        if y == 0.0:
            return h
        try:
            x, info = optimize.bisect(
                lambda u: self._poly(u) - y,
                0.0,
                h,
                xtol=BISECT_XTOL,
                rtol=4 * np.finfo(float).eps,
                maxiter=BISECT_MAXITER,
                full_output=True,
                disp=False,
            )
        except ValueError as exc:
            raise ConvergenceError(f"no bracket for g({y!r}): {exc}") from exc
        if not info.converged:
            raise ConvergenceError(f"bisection for g({y!r}) did not converge")
        return min(max(float(x), 0.0), h)

    def contains(self, x: float, y: float, tol: float = 0.0) -> bool:
        """Whether ``(x, y)`` lies in the closed triangle, up to ``tol``."""
        if x < -tol or y < -tol or x > self.h + tol:
            return False
        return y <= self.f(min(max(x, 0.0), self.h)) + tol

    def contains_many(self, xs: np.ndarray, ys: np.ndarray, tol: float = 0.0) -> np.ndarray:
        """Vectorized :meth:`contains`."""
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        return np.vectorize(lambda a, b: self.contains(a, b, tol), otypes=[bool])(xs, ys)

    def nodes_along(self, count: int, fixed_coord: float, axis: Axis) -> np.ndarray:
        """Uniform partition of one chord of the triangle.

        For ``Axis.X`` the chord is ``[0, g(y)]`` at ``y = fixed_coord``; for
        ``Axis.Y`` it is ``[0, f(x)]`` at ``x = fixed_coord``. Returns the
        ``count + 1`` points ``k * length / count``.
        """
        if count < 1:
            raise ValueError(f"count must be positive, got {count}")
        length = self.g(fixed_coord) if axis is Axis.X else self.f(fixed_coord)
        return np.arange(count + 1) * length / count

    def boundary_sample(self, edge: Edge, count: int) -> list[tuple[float, float]]:
        """``count`` equispaced points on one side, endpoints included."""
        if count < 2:
            raise ValueError("boundary_sample needs count >= 2")
        params = np.linspace(0.0, self.h, count)
        if edge is Edge.GAMMA1:
            return [(0.0, float(u)) for u in params]
        if edge is Edge.GAMMA2:
            return [(float(u), 0.0) for u in params]
        return [(float(u), self.f(u)) for u in params]

    def boundary_points(self, count: int) -> list[tuple[float, float]]:
        """About ``count`` points spread over the whole boundary."""
        per_edge = max(2, -(-count // 3))
        points: list[tuple[float, float]] = []
        for edge in Edge:
            points.extend(self.boundary_sample(edge, per_edge))
        return points
