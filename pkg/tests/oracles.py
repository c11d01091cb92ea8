"""Exact rational reference computations, independent of the package code paths."""

from fractions import Fraction
from math import comb


def exact_weights(m, beta, t):
    """Cheney-Sharma weights straight from the defining product, in rationals.

    Only valid for 0 < t < 1 (the raw product has 0 * 0**-1 at the ends).
    """
    beta, t = Fraction(beta), Fraction(t)
    scale = (1 + m * beta) ** (m - 1)
    return [
        comb(m, i) * t * (t + i * beta) ** (i - 1) * (1 - t) * (1 - t + (m - i) * beta) ** (m - i - 1) / scale
        for i in range(m + 1)
    ]


def exact_moment(m, beta, t, power):
    w = exact_weights(m, beta, t)
    return sum(wi * Fraction(i, m) ** power for i, wi in enumerate(w))


def exact_abel_sum(j, M, x, y, beta):
    x, y, beta = Fraction(x), Fraction(y), Fraction(beta)
    return sum(comb(M, k) * (x + k * beta) ** (k + j - 1) * (y + (M - k) * beta) ** (M - k) for k in range(M + 1))
