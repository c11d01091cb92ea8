"""Property checks run by ``cheneysharma verify``.

Each check returns a :class:`CheckResult` carrying the largest defect seen and
the tolerance it was held to.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from . import error_analysis as ea
from .basis import CheneySharmaParams, basis_weights, bernstein_weights, direct_moment, second_moment
from .domain import Axis, CurvedTriangle, Edge
from .exceptions import MissingDerivativeError
from .fields import ScalarField, monomial
from .operators import BivariateParams, OperatorKind, apply, apply_qx, apply_qy, remainder

SEED = 20240917


@dataclass(frozen=True)
class CheckResult:
    name: str
    defect: float
    tolerance: float
    note: str = ""

    @property
    def passed(self) -> bool:
        return bool(self.defect <= self.tolerance)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"  ({self.note})" if self.note else ""
        return f"{status}  {self.name:<44} max defect {self.defect:.3e}  tol {self.tolerance:.0e}{extra}"


def interior_points(tri: CurvedTriangle, count: int, seed: int = SEED, margin: float = 1e-3) -> list[tuple[float, float]]:
    """``count`` reproducible points strictly inside the triangle."""
    rng = np.random.default_rng(seed)
    points: list[tuple[float, float]] = []
    while len(points) < count:
        x, y = rng.uniform(margin, tri.h - margin, size=2)
        if y < tri.f(x) - margin:
            points.append((float(x), float(y)))
    return points


def _sweep_t(count: int) -> np.ndarray:
    return np.linspace(0.0, 1.0, count)


def _basis_checks(cs: CheneySharmaParams, label: str) -> Iterator[CheckResult]:
    ts = _sweep_t(101)
    unity = linear = neg = 0.0
    for t in ts:
        bw = basis_weights(cs, t)
        unity = max(unity, abs(bw.w.sum() - 1.0))
        linear = max(linear, abs(np.dot(bw.w, bw.nodes) - t))
        neg = max(neg, -bw.w.min())
    yield CheckResult(f"{label}: partition of unity", unity, 1e-10)
    yield CheckResult(f"{label}: linear reproduction", linear, 1e-10)
    yield CheckResult(f"{label}: nonnegative weights", neg, 1e-15)
    bern = CheneySharmaParams(cs.m, 0.0)
    diff = max(float(np.max(np.abs(basis_weights(bern, t).w - bernstein_weights(cs.m, t)))) for t in ts)
    yield CheckResult(f"{label}: Bernstein reduction at beta=0", diff, 1e-12)
    if cs.m >= 2:
        rel = 0.0
        for t in _sweep_t(51):
            direct = direct_moment(cs, t)
            if direct > 0:
                rel = max(rel, abs(second_moment(cs, t) - direct) / direct)
        yield CheckResult(f"{label}: closed-form second moment", rel, 1e-10)


def _domain_checks(tri: CurvedTriangle, params: BivariateParams) -> Iterator[CheckResult]:
    grid = np.linspace(0.0, tri.h, 101)
    inv = max(max(abs(tri.g(tri.f(u)) - u), abs(tri.f(tri.g(u)) - u)) for u in grid)
    yield CheckResult("domain: f and g mutually inverse", inv, 1e-10)
    outside = 0.0
    gaps = 0.0
    for u in grid:
        for axis, count in ((Axis.X, params.m), (Axis.Y, params.n)):
            nodes = tri.nodes_along(count, u, axis)
            for v in nodes:
                pt = (v, u) if axis is Axis.X else (u, v)
                if not tri.contains(*pt, tol=1e-12):
                    outside = max(outside, 1.0)
            if len(nodes) > 2:
                gaps = max(gaps, float(np.ptp(np.diff(nodes))))
    yield CheckResult("domain: partition nodes inside triangle", outside, 0.0)
    yield CheckResult("domain: partition nodes uniform", gaps, 1e-12)


_BOUNDARY_SETS = {
    OperatorKind.QX: (Edge.GAMMA1, Edge.GAMMA3),
    OperatorKind.QY: (Edge.GAMMA2, Edge.GAMMA3),
    OperatorKind.P1: (Edge.GAMMA3,),
    OperatorKind.P2: (Edge.GAMMA3,),
    OperatorKind.S1: (Edge.GAMMA1, Edge.GAMMA2, Edge.GAMMA3),
    OperatorKind.S2: (Edge.GAMMA1, Edge.GAMMA2, Edge.GAMMA3),
}


def _operator_checks(tri: CurvedTriangle, params: BivariateParams, F: ScalarField) -> Iterator[CheckResult]:
    for kind, edges in _BOUNDARY_SETS.items():
        pts = [p for e in edges for p in tri.boundary_sample(e, 21)]
        if kind in (OperatorKind.P1, OperatorKind.P2):
            pts += list(tri.vertices)
        defect = max(abs(apply(kind, tri, params, F, x, y) - float(F(x, y))) for x, y in pts)
        where = "+".join(e.value for e in edges)
        yield CheckResult(f"{kind.value}: interpolates {F.name} on {where}", defect, 1e-9)

    pts = interior_points(tri, 50)
    ex_x = ex_y = 0.0
    for i in (0, 1):
        for j in range(4):
            e_x, e_y = monomial(i, j), monomial(j, i)
            for x, y in pts:
                ex_x = max(ex_x, abs(apply_qx(tri, params, e_x, x, y) - x**i * y**j))
                ex_y = max(ex_y, abs(apply_qy(tri, params, e_y, x, y) - x**j * y**i))
    yield CheckResult("qx: reproduces e_ij, i<=1", ex_x, 1e-10)
    yield CheckResult("qy: reproduces e_ij, j<=1", ex_y, 1e-10)

    few = pts[:10]
    inner_y = ScalarField("qy-of-F", lambda x, y: apply_qy(tri, params, F, x, y), vectorized=False)
    inner_x = ScalarField("qx-of-F", lambda x, y: apply_qx(tri, params, F, x, y), vectorized=False)
    p1 = max(abs(apply(OperatorKind.P1, tri, params, F, x, y) - apply_qx(tri, params, inner_y, x, y)) for x, y in few)
    p2 = max(abs(apply(OperatorKind.P2, tri, params, F, x, y) - apply_qy(tri, params, inner_x, x, y)) for x, y in few)
    yield CheckResult("p1: equals nested qx(qy F)", p1, 1e-12)
    yield CheckResult("p2: equals nested qy(qx F)", p2, 1e-12)

    boolean = 0.0
    for x, y in few:
        s1 = apply(OperatorKind.S1, tri, params, F, x, y)
        p1v = apply(OperatorKind.P1, tri, params, F, x, y)
        boolean = max(boolean, abs((s1 + p1v) - (apply_qx(tri, params, F, x, y) + apply_qy(tri, params, F, x, y))))
    yield CheckResult("s1: s1 + p1 = qx + qy", boolean, 1e-13)

    restr = 0.0
    for u in np.linspace(0.0, tri.h, 11):
        restr = max(
            restr,
            abs(apply(OperatorKind.P1, tri, params, F, u, 0.0) - apply_qx(tri, params, F, u, 0.0)),
            abs(apply(OperatorKind.P1, tri, params, F, 0.0, u) - apply_qy(tri, params, F, 0.0, u)),
        )
    yield CheckResult("p1: restrictions to the legs", restr, 1e-10)


def _error_checks(tri: CurvedTriangle, params: BivariateParams, F: ScalarField) -> Iterator[CheckResult]:
    pts = interior_points(tri, 25, seed=SEED + 1)
    for axis in Axis:
        sign = 0.0
        for x, y in pts:
            length = tri.g(y) if axis is Axis.X else tri.f(x)
            ks = ea.peano_kernel(tri, params, x, y, np.linspace(0.0, length, 101), axis)
            sign = max(sign, float(ks.max()))
        yield CheckResult(f"peano {axis.value}: kernel nonpositive", max(sign, 0.0), 1e-12)

        e2 = monomial(2, 0) if axis is Axis.X else monomial(0, 2)
        kind = OperatorKind.QX if axis is Axis.X else OperatorKind.QY
        mv = max(abs(remainder(kind, tri, params, e2, x, y) + ea.moment_gap(tri, params, x, y, axis)) for x, y in pts)
        yield CheckResult(f"peano {axis.value}: remainder of e2 = -gap", mv, 1e-10)

        try:
            pr = max(
                abs(ea.peano_remainder(tri, params, F, x, y, axis) - remainder(kind, tri, params, F, x, y))
                for x, y in pts
            )
            yield CheckResult(f"peano {axis.value}: integral form of remainder", pr, 1e-8)
        except MissingDerivativeError:
            pass

    try:
        mod_x = ea.lipschitz_modulus_1d(F, tri, Axis.X)
        mod_y = ea.lipschitz_modulus_1d(F, tri, Axis.Y)
        mod_xy = ea.lipschitz_modulus_2d(F, tri)
    except MissingDerivativeError:
        return
    viol = {"qx": 0, "p1": 0, "s1": 0}
    for x, y in interior_points(tri, 40, seed=SEED + 2):
        gap = ea.moment_gap_x(tri, params, x, y)
        r = abs(remainder(OperatorKind.QX, tri, params, F, x, y))
        if gap > 0 and r > ea.bound_directional(tri, params, F, x, y, math.sqrt(gap), Axis.X, mod_x):
            viol["qx"] += 1
        if abs(remainder(OperatorKind.P1, tri, params, F, x, y)) > ea.bound_product(tri, params, F, x, y, mod_xy):
            viol["p1"] += 1
        r = abs(remainder(OperatorKind.S1, tri, params, F, x, y))
        if r > ea.bound_boolean(tri, params, F, x, y, mod_x, mod_y, mod_xy):
            viol["s1"] += 1
    for key, count in viol.items():
        yield CheckResult(f"bound {key}: certified, violations", float(count), 0.0)


def run_all(tri_factory: Callable[[], CurvedTriangle], params: BivariateParams, F: ScalarField) -> list[CheckResult]:
    """Run every property suite; the triangle is built lazily so rejections surface here."""
    tri = tri_factory()
    results: list[CheckResult] = []
    results += _basis_checks(params.x_params, f"basis x (m={params.m}, beta={params.x_params.beta:g})")
    results += _basis_checks(params.y_params, f"basis y (n={params.n}, b={params.y_params.beta:g})")
    results += _domain_checks(tri, params)
    results += _operator_checks(tri, params, F)
    results += _error_checks(tri, params, F)
    for r in results:
        if math.isnan(r.defect):
            raise ArithmeticError(f"NaN defect in check {r.name!r}")
    return results
