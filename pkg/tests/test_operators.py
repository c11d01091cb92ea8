from fractions import Fraction

import numpy as np
import pytest

from cheneysharma.domain import CurvedTriangle, Edge, MonotonePolynomial, StraightLine, SuperellipseArc
from cheneysharma.exceptions import OutOfDomainError
from cheneysharma.fields import GENTLE, SIN_COS, ScalarField, constant, monomial
from cheneysharma.operators import (
    BivariateParams,
    OperatorKind,
    apply_p1,
    apply_p2,
    apply_qx,
    apply_qy,
    apply_s1,
    apply_s2,
    remainder,
)
from cheneysharma.verification import interior_points

from oracles import exact_moment

LINE = CurvedTriangle(1.0, StraightLine())
TRIANGLES = [
    LINE,
    CurvedTriangle(1.0, SuperellipseArc(2.0)),
    CurvedTriangle(1.0, SuperellipseArc(3.0)),
    CurvedTriangle(1.0, MonotonePolynomial([1.0, 0.0, -1.0])),
    CurvedTriangle(1.7, SuperellipseArc(2.5)),
]
BASE = BivariateParams.from_values(5, 6, 1.0, 1.0)
FIELDS = [GENTLE, monomial(2, 1), SIN_COS]


def nested(tri, params, outer, inner, F):
    """``outer`` applied to the field ``(x, y) -> inner(F)(x, y)``."""
    G = ScalarField("inner", lambda x, y: inner(tri, params, F, x, y), vectorized=False)
    return lambda x, y: outer(tri, params, G, x, y)


class TestQx:
    def test_gamma1(self):
        tri = TRIANGLES[1]
        assert apply_qx(tri, BASE, GENTLE, 0.0, 0.4) == GENTLE(0.0, 0.4)

    def test_gamma3(self):
        for tri in TRIANGLES:
            y = 0.4
            x = tri.g(y)
            assert apply_qx(tri, BASE, GENTLE, x, y) == pytest.approx(float(GENTLE(x, y)), abs=1e-15)

    def test_exactness_example(self):
        assert apply_qx(LINE, BASE, monomial(1, 3), 0.3, 0.2) == pytest.approx(0.0024, abs=1e-15)

    def test_degenerate_row(self):
        tri = TRIANGLES[2]
        assert apply_qx(tri, BASE, GENTLE, 0.0, 1.0) == GENTLE(0.0, 1.0)

    def test_outside(self):
        with pytest.raises(OutOfDomainError):
            apply_qx(LINE, BASE, GENTLE, 0.8, 0.8)

    def test_against_exact_rational_sum(self):
        # Qx e20 at (1/2, 1/4) on the line triangle: g = 3/4, t = 2/3
        expected = Fraction(3, 4) ** 2 * exact_moment(5, 1, Fraction(2, 3), 2)
        assert apply_qx(LINE, BASE, monomial(2, 0), 0.5, 0.25) == pytest.approx(float(expected), rel=1e-14)


class TestQy:
    def test_gamma2(self):
        assert apply_qy(LINE, BASE, GENTLE, 0.4, 0.0) == GENTLE(0.4, 0.0)

    def test_gamma3(self):
        for tri in TRIANGLES:
            x = 0.4
            y = tri.f(x)
            assert apply_qy(tri, BASE, GENTLE, x, y) == pytest.approx(float(GENTLE(x, y)), abs=1e-15)

    def test_exactness_example(self):
        for tri in TRIANGLES:
            assert apply_qy(tri, BASE, monomial(3, 1), 0.3, 0.2) == pytest.approx(0.0054, abs=1e-15)

    def test_degenerate_column(self):
        assert apply_qy(LINE, BASE, GENTLE, 1.0, 0.0) == GENTLE(1.0, 0.0)


@pytest.mark.parametrize("tri", TRIANGLES, ids=repr)
@pytest.mark.parametrize("F", FIELDS, ids=lambda f: f.name)
class TestBoundaryInterpolation:
    def test_qx(self, tri, F):
        for x, y in tri.boundary_sample(Edge.GAMMA1, 21) + tri.boundary_sample(Edge.GAMMA3, 21):
            assert abs(apply_qx(tri, BASE, F, x, y) - F(x, y)) <= 1e-9

    def test_qy(self, tri, F):
        for x, y in tri.boundary_sample(Edge.GAMMA2, 21) + tri.boundary_sample(Edge.GAMMA3, 21):
            assert abs(apply_qy(tri, BASE, F, x, y) - F(x, y)) <= 1e-9

    @pytest.mark.parametrize("op", [apply_p1, apply_p2])
    def test_products(self, tri, F, op):
        for x, y in tri.boundary_sample(Edge.GAMMA3, 21) + list(tri.vertices):
            assert abs(op(tri, BASE, F, x, y) - F(x, y)) <= 1e-9

    @pytest.mark.parametrize("op", [apply_s1, apply_s2])
    def test_boolean_sums(self, tri, F, op):
        for x, y in tri.boundary_points(60):
            assert abs(op(tri, BASE, F, x, y) - F(x, y)) <= 1e-9


@pytest.mark.parametrize("tri", TRIANGLES, ids=repr)
def test_exactness(tri):
    pts = interior_points(tri, 50, seed=7)
    for i in (0, 1):
        for j in range(4):
            for x, y in pts:
                assert abs(apply_qx(tri, BASE, monomial(i, j), x, y) - x**i * y**j) <= 1e-10
                assert abs(apply_qy(tri, BASE, monomial(j, i), x, y) - x**j * y**i) <= 1e-10


class TestProducts:
    def test_vertex_v3(self):
        for tri in TRIANGLES:
            assert apply_p1(tri, BASE, GENTLE, 0.0, 0.0) == pytest.approx(float(GENTLE(0.0, 0.0)), abs=1e-15)

    def test_vertex_v2(self):
        for tri in TRIANGLES:
            assert apply_p2(tri, BASE, GENTLE, tri.h, 0.0) == pytest.approx(float(GENTLE(tri.h, 0.0)), abs=1e-15)

    def test_p2_on_curve_via_g(self):
        tri = TRIANGLES[3]
        y = 0.35
        x = tri.g(y)
        assert apply_p2(tri, BASE, GENTLE, x, y) == pytest.approx(float(GENTLE(x, y)), abs=1e-10)

    def test_p1_equals_nested_composition(self):
        oracle = nested(LINE, BASE, apply_qx, apply_qy, GENTLE)
        assert abs(apply_p1(LINE, BASE, GENTLE, 0.25, 0.25) - oracle(0.25, 0.25)) <= 1e-12

    @pytest.mark.parametrize("tri", TRIANGLES, ids=repr)
    def test_factorization(self, tri):
        o1 = nested(tri, BASE, apply_qx, apply_qy, SIN_COS)
        o2 = nested(tri, BASE, apply_qy, apply_qx, SIN_COS)
        for x, y in interior_points(tri, 15, seed=3):
            assert abs(apply_p1(tri, BASE, SIN_COS, x, y) - o1(x, y)) <= 1e-12
            assert abs(apply_p2(tri, BASE, SIN_COS, x, y) - o2(x, y)) <= 1e-12

    def test_p2_linear_in_x(self):
        for x, y in interior_points(LINE, 10, seed=5):
            assert apply_p2(LINE, BASE, monomial(1, 0), x, y) == pytest.approx(x, abs=1e-14)

    @pytest.mark.parametrize("tri", TRIANGLES, ids=repr)
    def test_restriction_to_legs(self, tri):
        for u in np.linspace(0.0, tri.h, 13):
            assert abs(apply_p1(tri, BASE, GENTLE, u, 0.0) - apply_qx(tri, BASE, GENTLE, u, 0.0)) <= 1e-10
            assert abs(apply_p1(tri, BASE, GENTLE, 0.0, u) - apply_qy(tri, BASE, GENTLE, 0.0, u)) <= 1e-10
            assert abs(apply_p2(tri, BASE, GENTLE, u, 0.0) - apply_qx(tri, BASE, GENTLE, u, 0.0)) <= 1e-10
            assert abs(apply_p2(tri, BASE, GENTLE, 0.0, u) - apply_qy(tri, BASE, GENTLE, 0.0, u)) <= 1e-10


class TestBooleanSums:
    def test_constant(self):
        c = constant(-1.25)
        for op in (apply_s1, apply_s2):
            assert op(TRIANGLES[1], BASE, c, 0.3, 0.3) == pytest.approx(-1.25, abs=1e-14)

    def test_recombination(self):
        x, y = 0.3, 0.3
        expected = apply_qx(LINE, BASE, GENTLE, x, y) + apply_qy(LINE, BASE, GENTLE, x, y) - apply_p1(LINE, BASE, GENTLE, x, y)
        assert apply_s1(LINE, BASE, GENTLE, x, y) == expected

    @pytest.mark.parametrize("tri", TRIANGLES, ids=repr)
    def test_boolean_identity(self, tri):
        for x, y in interior_points(tri, 20, seed=11):
            s1 = apply_s1(tri, BASE, GENTLE, x, y)
            p1 = apply_p1(tri, BASE, GENTLE, x, y)
            qsum = apply_qx(tri, BASE, GENTLE, x, y) + apply_qy(tri, BASE, GENTLE, x, y)
            assert abs((s1 + p1) - qsum) <= 1e-13


class TestRemainder:
    def test_linear_exact(self):
        for x, y in interior_points(TRIANGLES[1], 10):
            assert remainder(OperatorKind.QX, TRIANGLES[1], BASE, monomial(1, 0), x, y) == pytest.approx(0.0, abs=1e-14)

    def test_s1_boundary(self):
        for tri in TRIANGLES:
            for x, y in tri.boundary_points(30):
                assert abs(remainder(OperatorKind.S1, tri, BASE, SIN_COS, x, y)) <= 1e-9

    def test_e20_value(self):
        # x^2 - g^2 * sum q_i (i/m)^2, exact rationals: -209/2160
        got = remainder(OperatorKind.QX, LINE, BASE, monomial(2, 0), 0.5, 0.25)
        assert got == pytest.approx(-209 / 2160, rel=1e-13)

    def test_all_kinds_are_defined(self):
        for kind in OperatorKind:
            assert np.isfinite(remainder(kind, LINE, BASE, GENTLE, 0.2, 0.3))
