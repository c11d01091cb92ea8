"""Univariate Cheney-Sharma operators of the second kind.

The basis functions on ``[0, 1]`` are

    q_{m,i}(t) = C(m,i) t (t + i beta)^(i-1) (1-t) (1 - t + (m-i) beta)^(m-i-1)
                 / (1 + m beta)^(m-1)

and the operator maps ``f`` to ``sum_i q_{m,i}(t) f(i/m)``. For ``beta = 0`` it
is the Bernstein operator.

Interior weights are assembled as sums of logarithms and exponentiated once,
so nothing overflows for the degrees used in practice (``m <= 60``,
``beta <= 4``). The two end weights use the grouped form

    q_{m,0}(t) = (1-t) ((1 - t + m beta) / (1 + m beta))^(m-1)
    q_{m,m}(t) = t ((t + m beta) / (1 + m beta))^(m-1)

which is finite everywhere and makes ``t = 0`` and ``t = 1`` reproduce the end
values exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp

from .exceptions import DegenerateInputError, InvalidParameterError, UndefinedSumError

#: Slack allowed on the normalized abscissa before it is rejected.
T_TOLERANCE = 1e-12


@dataclass(frozen=True)
class CheneySharmaParams:
    """Degree ``m`` and Abel parameter ``beta`` of a univariate operator."""

    m: int
    beta: float = 0.0

    def __post_init__(self) -> None:
        if isinstance(self.m, bool) or int(self.m) != self.m or self.m < 1:
            raise InvalidParameterError(f"degree m must be a positive integer, got {self.m!r}")
        if not math.isfinite(self.beta) or self.beta < 0:
            raise InvalidParameterError(f"beta must be a finite nonnegative real, got {self.beta!r}")
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "beta", float(self.beta))


@dataclass(frozen=True)
class BasisWeights:
    """The ``m + 1`` basis values ``q_{m,i}(t)`` at one abscissa."""

    params: CheneySharmaParams
    t: float
    w: np.ndarray = field(repr=False)

    @property
    def nodes(self) -> np.ndarray:
        """Nodes ``i/m`` on the unit interval matching ``w``."""
        return np.arange(self.params.m + 1) / self.params.m


def _check_t(t: float) -> float:
    t = float(t)
    if not (-T_TOLERANCE <= t <= 1.0 + T_TOLERANCE):
        raise DegenerateInputError(f"abscissa t={t!r} is outside [0, 1]")
    return min(max(t, 0.0), 1.0)


def _log_pow(base: float, exponent: int) -> float:
    """``log(base**exponent)`` for ``base >= 0`` with ``0**0 = 1``."""
    if exponent == 0:
        return 0.0
    if base > 0.0:
        return exponent * math.log(base)
    if exponent > 0:
        return -math.inf
    raise UndefinedSumError("zero raised to a negative power")


def _log_binom(n: int, k: int) -> float:
    return math.log(math.comb(n, k))


def basis_weights(params: CheneySharmaParams, t: float) -> BasisWeights:
    """Evaluate all ``m + 1`` basis functions at ``t``.

    Parameters
    ----------
    params : CheneySharmaParams
        Degree and Abel parameter.
    t : float
        Normalized abscissa in ``[0, 1]``; values within ``1e-12`` outside the
        interval are clamped.

    Returns
    -------
    BasisWeights
        Nonnegative weights summing to one.

    Raises
    ------
    DegenerateInputError
        If ``t`` lies outside ``[0, 1]`` beyond the tolerance.
    """
    t = _check_t(t)
    m, beta = params.m, params.beta
    s = 1.0 - t
    w = np.zeros(m + 1)
    scale = 1.0 + m * beta
    w[0] = s * ((s + m * beta) / scale) ** (m - 1)
    w[m] = t * ((t + m * beta) / scale) ** (m - 1)
    if 0.0 < t < 1.0 and m > 1:
        log_scale = (m - 1) * math.log(scale)
        log_t, log_s = math.log(t), math.log(s)
        for i in range(1, m):
            log_w = (
                _log_binom(m, i)
                + log_t
                + (i - 1) * math.log(t + i * beta)
                + log_s
                + (m - i - 1) * math.log(s + (m - i) * beta)
                - log_scale
            )
            w[i] = math.exp(log_w)
    return BasisWeights(params, t, w)


def _log_abel_terms(j: int, M: int, x: float, y: float, beta: float) -> list[float]:
    terms = []
    for k in range(M + 1):
        terms.append(
            _log_binom(M, k)
            + _log_pow(x + k * beta, k + j - 1)
            + _log_pow(y + (M - k) * beta, M - k)
        )
    return terms


def log_abel_sum(j: int, M: int, x: float, y: float, beta: float) -> float:
    """Natural logarithm of :func:`abel_sum` (``-inf`` for an empty or zero sum)."""
    if j < 0:
        raise InvalidParameterError(f"j must be nonnegative, got {j}")
    if x < 0 or y < 0 or beta < 0:
        raise InvalidParameterError("abel_sum needs nonnegative x, y and beta")
    if M < 0:
        return -math.inf
    return float(logsumexp(_log_abel_terms(j, M, x, y, beta)))


def abel_sum(j: int, M: int, x: float, y: float, beta: float) -> float:
    """Abel-Jensen sum ``S(j, M, x, y)``.

    ``sum_{k=0}^{M} C(M,k) (x + k beta)^(k+j-1) (y + (M-k) beta)^(M-k)``,
    with ``0**0 = 1`` and an empty sum (``M < 0``) equal to zero. Arguments
    may exceed one; only nonnegativity is required.
    """
    return math.exp(log_abel_sum(j, M, x, y, beta))


def factorial_second_moment(params: CheneySharmaParams, t: float) -> float:
    """Closed form of ``sum_i q_{m,i}(t) i(i-1) / (m(m-1))``.

    Equals ``t (1+m beta)^(1-m) [S(2, m-2, t+2beta, 1-t)
    - (m-2) beta S(2, m-3, t+2beta, 1-t+beta)]``. Requires ``m >= 2``.
    """
    m, beta = params.m, params.beta
    if m < 2:
        raise InvalidParameterError("the closed-form second moment needs m >= 2")
    t = _check_t(t)
    if t == 0.0:
        return 0.0
    log_scale = (m - 1) * math.log1p(m * beta)
    first = math.exp(log_abel_sum(2, m - 2, t + 2 * beta, 1.0 - t, beta) - log_scale)
    second = 0.0
    if m > 2 and beta > 0:
        second = (m - 2) * beta * math.exp(
            log_abel_sum(2, m - 3, t + 2 * beta, 1.0 - t + beta, beta) - log_scale
        )
    return t * (first - second)


def second_moment(params: CheneySharmaParams, t: float) -> float:
    """``(Q_m e_2)(t)`` in closed form through Abel-Jensen sums.

    Uses ``Q_m e_2 = t/m + (m-1)/m * E(t)`` where ``E`` is
    :func:`factorial_second_moment`; the ``i(i-1)`` moment is what the Abel
    identities give directly, and the ``i`` moment is ``m t`` by linear
    reproduction.

    Raises
    ------
    InvalidParameterError
        For ``m < 2``; use :func:`direct_moment` there.
    """
    t = _check_t(t)
    m = params.m
    if m < 2:
        raise InvalidParameterError("the closed-form second moment needs m >= 2")
    return t / m + (m - 1) / m * factorial_second_moment(params, t)


def direct_moment(params: CheneySharmaParams, t: float, power: int = 2) -> float:
    """``sum_i q_{m,i}(t) (i/m)**power`` by explicit summation."""
    bw = basis_weights(params, t)
    return float(np.dot(bw.w, bw.nodes**power))


def apply_univariate(params: CheneySharmaParams, nodal_values, t: float) -> float:
    """Apply ``Q_m`` to the values ``f(i/m)``, ``i = 0..m``, at ``t``."""
    values = np.asarray(nodal_values, dtype=float)
    if values.shape != (params.m + 1,):
        raise ValueError(
            f"expected {params.m + 1} nodal values for m={params.m}, got shape {values.shape}"
        )
    return float(np.dot(basis_weights(params, t).w, values))


def bernstein_weights(m: int, t: float) -> np.ndarray:
    """Plain Bernstein basis ``C(m,i) t^i (1-t)^(m-i)``, for comparisons."""
    i = np.arange(m + 1)
    binom = np.array([math.comb(m, k) for k in range(m + 1)], dtype=float)
    return binom * t**i * (1.0 - t) ** (m - i)
