"""Scalar fields on the curved triangle and the built-in test functions."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .exceptions import MissingDerivativeError

Func2 = Callable[[np.ndarray, np.ndarray], np.ndarray]
#: Lipschitz constants ``(L_x, L_y)`` of a field over ``[0, h]^2``, as a function of ``h``.
LipschitzFn = Callable[[float], "tuple[float, float]"]


@dataclass(frozen=True)
class ScalarField:
    """A real-valued function of ``(x, y)``.

    ``func`` must accept numpy arrays unless ``vectorized`` is false, in which
    case it is called point by point. ``d2x`` and ``d2y`` are the analytic
    second partials used by the Peano-kernel routines.
    """

    name: str
    func: Func2
    d2x: Optional[Func2] = None
    d2y: Optional[Func2] = None
    lipschitz: Optional[LipschitzFn] = None
    vectorized: bool = True

    def __call__(self, x, y):
        if self.vectorized:
            return self.func(x, y)
        if np.ndim(x) == 0 and np.ndim(y) == 0:
            return float(self.func(float(x), float(y)))
        xb, yb = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
        out = np.empty(xb.shape)
        for idx in np.ndindex(xb.shape):
            out[idx] = self.func(float(xb[idx]), float(yb[idx]))
        return out

    def values(self, x, y) -> np.ndarray:
        xb, yb = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
        return np.asarray(self(xb, yb), dtype=float) * np.ones(xb.shape)

    def second_derivative(self, axis: str) -> Func2:
        d2 = self.d2x if axis == "x" else self.d2y
        if d2 is None:
            raise MissingDerivativeError(f"field {self.name!r} has no analytic second derivative in {axis}")
        return d2

    def lipschitz_constants(self, h: float) -> tuple[float, float]:
        if self.lipschitz is None:
            raise MissingDerivativeError(f"field {self.name!r} has no registered Lipschitz constants")
        return self.lipschitz(h)


def monomial(i: int, j: int) -> ScalarField:
    """``e_ij(x, y) = x^i y^j``."""

    def func(x, y):
        return np.power(x, i) * np.power(y, j)

    def d2x(x, y):
        return i * (i - 1) * np.power(x, max(i - 2, 0)) * np.power(y, j) if i >= 2 else 0.0 * x * y

    def d2y(x, y):
        return j * (j - 1) * np.power(x, i) * np.power(y, max(j - 2, 0)) if j >= 2 else 0.0 * x * y

    def lipschitz(h: float) -> tuple[float, float]:
        lx = i * h ** (i - 1) * h**j if i else 0.0
        ly = j * h**i * h ** (j - 1) if j else 0.0
        return lx, ly

    return ScalarField(f"e{i}{j}", func, d2x, d2y, lipschitz)


def polynomial(terms: dict[tuple[int, int], float], name: str | None = None) -> ScalarField:
    """Sum of ``c * x^i * y^j`` over ``terms[(i, j)] = c``."""
    items = sorted(terms.items())

    def func(x, y):
        return sum(c * np.power(x, i) * np.power(y, j) for (i, j), c in items) + 0.0 * x * y

    def d2x(x, y):
        return sum(c * i * (i - 1) * np.power(x, max(i - 2, 0)) * np.power(y, j) for (i, j), c in items) + 0.0 * x * y

    def d2y(x, y):
        return sum(c * j * (j - 1) * np.power(x, i) * np.power(y, max(j - 2, 0)) for (i, j), c in items) + 0.0 * x * y

    def lipschitz(h: float) -> tuple[float, float]:
        lx = sum(abs(c) * i * h ** (i + j - 1) for (i, j), c in items if i)
        ly = sum(abs(c) * j * h ** (i + j - 1) for (i, j), c in items if j)
        return lx, ly

    label = name or "poly:" + ";".join(f"{i},{j},{c!r}" for (i, j), c in items)
    return ScalarField(label, func, d2x, d2y, lipschitz)


GENTLE_SCALE = 81.0 / 16.0


def _gentle(x, y):
    return np.exp(-GENTLE_SCALE * ((x - 0.5) ** 2 + (y - 0.5) ** 2)) / 3.0


def _gentle_d2(u_of):
    def d2(x, y):
        u = u_of(x, y) - 0.5
        return _gentle(x, y) * (4 * GENTLE_SCALE**2 * u**2 - 2 * GENTLE_SCALE)

    return d2


# sup over the plane of |d/du (1/3) exp(-c u^2)|, attained at u = 1/sqrt(2c)
_GENTLE_LIP = math.sqrt(2 * GENTLE_SCALE) * math.exp(-0.5) / 3.0

GENTLE = ScalarField(
    "gentle",
    _gentle,
    d2x=_gentle_d2(lambda x, y: x),
    d2y=_gentle_d2(lambda x, y: y),
    lipschitz=lambda h: (_GENTLE_LIP, _GENTLE_LIP),
)

SIN_PI_X = ScalarField(
    "sinpix",
    lambda x, y: np.sin(np.pi * x) + 0.0 * y,
    d2x=lambda x, y: -np.pi**2 * np.sin(np.pi * x) + 0.0 * y,
    d2y=lambda x, y: 0.0 * x * y,
    lipschitz=lambda h: (math.pi, 0.0),
)

SIN_PI_Y = ScalarField(
    "sinpiy",
    lambda x, y: np.sin(np.pi * y) + 0.0 * x,
    d2x=lambda x, y: 0.0 * x * y,
    d2y=lambda x, y: -np.pi**2 * np.sin(np.pi * y) + 0.0 * x,
    lipschitz=lambda h: (0.0, math.pi),
)

SIN_COS = ScalarField(
    "sincos",
    lambda x, y: np.sin(np.pi * x) * np.cos(np.pi * y),
    d2x=lambda x, y: -np.pi**2 * np.sin(np.pi * x) * np.cos(np.pi * y),
    d2y=lambda x, y: -np.pi**2 * np.sin(np.pi * x) * np.cos(np.pi * y),
    lipschitz=lambda h: (math.pi, math.pi),
)


def constant(c: float) -> ScalarField:
    return ScalarField(
        f"const:{c!r}",
        lambda x, y: c + 0.0 * np.asarray(x) * np.asarray(y),
        d2x=lambda x, y: 0.0 * np.asarray(x) * np.asarray(y),
        d2y=lambda x, y: 0.0 * np.asarray(x) * np.asarray(y),
        lipschitz=lambda h: (0.0, 0.0),
    )


def _build_registry() -> dict[str, ScalarField]:
    reg = {fld.name: fld for fld in (GENTLE, SIN_PI_X, SIN_PI_Y, SIN_COS)}
    for i in range(5):
        for j in range(5):
            reg[f"e{i}{j}"] = monomial(i, j)
    return reg


REGISTRY: dict[str, ScalarField] = _build_registry()

_POLY_TERM = re.compile(r"^\s*(\d+)\s*,\s*(\d+)\s*,\s*([^,;]+)\s*$")


def get_field(spec: str) -> ScalarField:
    """Resolve a registry name, ``const:c``, or an inline ``poly:i,j,c;i,j,c`` polynomial."""
    spec = spec.strip()
    if spec in REGISTRY:
        return REGISTRY[spec]
    if spec.startswith("const:"):
        return constant(float(spec[len("const:"):]))
    if spec.startswith("poly:"):
        terms: dict[tuple[int, int], float] = {}
        for chunk in spec[len("poly:"):].split(";"):
            if not chunk.strip():
                continue
            match = _POLY_TERM.match(chunk)
            if match is None:
                raise KeyError(f"bad polynomial term {chunk!r} in {spec!r}")
            key = (int(match.group(1)), int(match.group(2)))
            terms[key] = terms.get(key, 0.0) + float(match.group(3))
        if not terms:
            raise KeyError(f"empty polynomial {spec!r}")
        return polynomial(terms, name=spec)
    raise KeyError(f"unknown field {spec!r}; known: {', '.join(sorted(REGISTRY))}")
