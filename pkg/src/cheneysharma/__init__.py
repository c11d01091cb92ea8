"""Cheney-Sharma operators of the second kind on a triangle with one curved side."""

from .basis import (
    BasisWeights,
    CheneySharmaParams,
    abel_sum,
    apply_univariate,
    basis_weights,
    second_moment,
)
from .domain import Axis, CurvedTriangle, Edge, MonotonePolynomial, StraightLine, SuperellipseArc
from .fields import GENTLE, REGISTRY, ScalarField, get_field, monomial
from .operators import (
    BivariateParams,
    OperatorKind,
    apply,
    apply_p1,
    apply_p2,
    apply_qx,
    apply_qy,
    apply_s1,
    apply_s2,
    remainder,
)

__version__ = "0.1.0"
