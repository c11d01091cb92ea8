"""Cheney-Sharma operators on the curved triangle.

``Qx`` blends values on the horizontal chord ``[0, g(y)]`` through ``(x, y)``
and ``Qy`` blends values on the vertical chord ``[0, f(x)]``. The products are
``P1 = Qx Qy`` and ``P2 = Qy Qx``; the Boolean sums are
``S1 = Qx + Qy - P1`` and ``S2 = Qy + Qx - P2``.

A chord of zero length (``y = h`` for ``Qx``, ``x = h`` for ``Qy``) contains a
single point, and the operator returns the field value there.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .basis import CheneySharmaParams, basis_weights
from .domain import Axis, CurvedTriangle
from .exceptions import OutOfDomainError
from .fields import ScalarField

#: Membership slack for evaluation points.
DOMAIN_TOLERANCE = 1e-9


class OperatorKind(enum.Enum):
    QX = "qx"
    QY = "qy"
    P1 = "p1"
    P2 = "p2"
    S1 = "s1"
    S2 = "s2"


@dataclass(frozen=True)
class BivariateParams:
    """``(m, beta)`` for the x-direction and ``(n, b)`` for the y-direction."""

    x_params: CheneySharmaParams
    y_params: CheneySharmaParams

    @classmethod
    def from_values(cls, m: int, n: int, beta: float, b: float) -> "BivariateParams":
        return cls(CheneySharmaParams(m, beta), CheneySharmaParams(n, b))

    @property
    def m(self) -> int:
        return self.x_params.m

    @property
    def n(self) -> int:
        return self.y_params.m


def _check_point(tri: CurvedTriangle, x: float, y: float) -> tuple[float, float]:
    if not tri.contains(x, y, DOMAIN_TOLERANCE):
        raise OutOfDomainError(f"point ({x!r}, {y!r}) is outside {tri!r}")
    return min(max(float(x), 0.0), tri.h), min(max(float(y), 0.0), tri.h)


def _ratio(u: float, length: float) -> float:
    return min(max(u / length, 0.0), 1.0)


def _field_at(F: ScalarField, xs, ys) -> np.ndarray:
    return F.values(xs, ys)


def _chord_weights(params: CheneySharmaParams, u: float, length: float) -> tuple[np.ndarray, np.ndarray]:
    """Weights and node offsets of one chord of given length at offset ``u``."""
    if length == 0.0:
        return np.array([1.0]), np.array([0.0])
    w = basis_weights(params, _ratio(u, length)).w
    nodes = np.arange(params.m + 1) * length / params.m
    return w, nodes


def apply_qx(tri: CurvedTriangle, params: BivariateParams, F: ScalarField, x: float, y: float) -> float:
    """``(Qx F)(x, y) = sum_i q_{m,i}(x/g(y)) F(i g(y)/m, y)``."""
    x, y = _check_point(tri, x, y)
    w, xs = _chord_weights(params.x_params, x, tri.g(y))
    return float(np.dot(w, _field_at(F, xs, y)))


def apply_qy(tri: CurvedTriangle, params: BivariateParams, F: ScalarField, x: float, y: float) -> float:
    """``(Qy F)(x, y) = sum_j q_{n,j}(y/f(x)) F(x, j f(x)/n)``."""
    x, y = _check_point(tri, x, y)
    w, ys = _chord_weights(params.y_params, y, tri.f(x))
    return float(np.dot(w, _field_at(F, x, ys)))


def apply_p1(tri: CurvedTriangle, params: BivariateParams, F: ScalarField, x: float, y: float) -> float:
    """Product ``Qx Qy`` as the explicit double sum over the node lattice.

    The nodes are ``(x_i, j f(x_i)/n)`` with ``x_i = i g(y)/m``.
    """
    x, y = _check_point(tri, x, y)
    wx, xs = _chord_weights(params.x_params, x, tri.g(y))
    total = 0.0
    for wi, xi in zip(wx, xs):
        if wi == 0.0:
            continue
        wy, ys = _chord_weights(params.y_params, y, tri.f(xi))
        total += wi * float(np.dot(wy, _field_at(F, xi, ys)))
    return total


def apply_p2(tri: CurvedTriangle, params: BivariateParams, F: ScalarField, x: float, y: float) -> float:
    """Product ``Qy Qx`` over the nodes ``(i g(y_j)/m, y_j)``, ``y_j = j f(x)/n``."""
    x, y = _check_point(tri, x, y)
    wy, ys = _chord_weights(params.y_params, y, tri.f(x))
    total = 0.0
    for wj, yj in zip(wy, ys):
        if wj == 0.0:
            continue
        wx, xs = _chord_weights(params.x_params, x, tri.g(yj))
        total += wj * float(np.dot(wx, _field_at(F, xs, yj)))
    return total


def apply_s1(tri: CurvedTriangle, params: BivariateParams, F: ScalarField, x: float, y: float) -> float:
    """Boolean sum ``Qx + Qy - Qx Qy``."""
    return apply_qx(tri, params, F, x, y) + apply_qy(tri, params, F, x, y) - apply_p1(tri, params, F, x, y)


def apply_s2(tri: CurvedTriangle, params: BivariateParams, F: ScalarField, x: float, y: float) -> float:
    """Boolean sum ``Qy + Qx - Qy Qx``."""
    return apply_qy(tri, params, F, x, y) + apply_qx(tri, params, F, x, y) - apply_p2(tri, params, F, x, y)


OPERATORS = {
    OperatorKind.QX: apply_qx,
    OperatorKind.QY: apply_qy,
    OperatorKind.P1: apply_p1,
    OperatorKind.P2: apply_p2,
    OperatorKind.S1: apply_s1,
    OperatorKind.S2: apply_s2,
}


def apply(kind: OperatorKind, tri: CurvedTriangle, params: BivariateParams, F: ScalarField, x: float, y: float) -> float:
    return OPERATORS[kind](tri, params, F, x, y)


def remainder(kind: OperatorKind, tri: CurvedTriangle, params: BivariateParams, F: ScalarField, x: float, y: float) -> float:
    """``F(x, y) - (op F)(x, y)``."""
    value = apply(kind, tri, params, F, x, y)
    return float(F.values(x, y)) - value


def axis_params(params: BivariateParams, axis: Axis) -> CheneySharmaParams:
    return params.x_params if axis is Axis.X else params.y_params
