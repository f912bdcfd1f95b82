"""BV integrals over parametrized surfaces.

The integral of a polyvector over the (parity-shifted) conormal of a surface
is realized through its defining form-side expression: contract with the
volume form, pull back through each chart, and integrate numerically with
tensor-product Gauss-Legendre quadrature. Chart Jacobian minors are computed
symbolically (exact differentiation); only the point evaluation is numeric.

Accumulation order is fixed (charts in order, cells and nodes in sorted
index order), so results are reproducible bit-for-bit for a given spec.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ContractViolation
from .forms import DifferentialForm, PolyvectorField, contract, delta_geometric, volume_form
from .scalar import ScalarExpr


@dataclass(frozen=True)
class QuadratureSpec:
    """Tensor-product Gauss-Legendre rule: points per axis, uniform
    subdivisions per axis."""

    points_per_axis: int = 32
    subdivisions: int = 1

    def __post_init__(self):
        if self.points_per_axis < 2:
            raise ContractViolation("points_per_axis must be >= 2")
        if self.subdivisions < 1:
            raise ContractViolation("subdivisions must be >= 1")

    def refined(self) -> "QuadratureSpec":
        return QuadratureSpec(self.points_per_axis * 2, self.subdivisions)


class Chart:
    """One parametrized patch: N component expressions in parameters u1..uk
    over a rational box, with an orientation sign."""

    def __init__(self, dim: int, params: int, exprs, box, sign: int = 1):
        if len(exprs) != dim:
            raise ContractViolation(f"chart needs {dim} component expressions")
        if len(box) != params:
            raise ContractViolation(f"chart box needs {params} intervals")
        for e in exprs:
            if e.nvars != params:
                raise ContractViolation("chart component has wrong parameter count")
        if sign not in (1, -1):
            raise ContractViolation("chart sign must be +1 or -1")
        self.dim = dim
        self.params = params
        self.exprs = list(exprs)
        self.box = [(Fraction(lo), Fraction(hi)) for lo, hi in box]
        for lo, hi in self.box:
            if not lo < hi:
                raise ContractViolation("chart box intervals must satisfy lo < hi")
        self.sign = sign
        # symbolic Jacobian, row i = d(chart_i)/du_j
        self.jacobian = [[e.diff(j) for j in range(params)] for e in self.exprs]

    def minor_determinant(self, rows) -> ScalarExpr:
        """Symbolic determinant of the k x k Jacobian minor on the given rows
        (rows are 1-based ambient indices)."""
        k = self.params
        mat = [[self.jacobian[i - 1][j] for j in range(k)] for i in rows]
        return _det(mat, self.params)


def _det(mat, nvars: int) -> ScalarExpr:
    n = len(mat)
    if n == 0:
        return ScalarExpr.const(nvars, 1)
    if n == 1:
        return mat[0][0]
    if n == 2:
        return mat[0][0] * mat[1][1] - mat[0][1] * mat[1][0]
    total = ScalarExpr.const(nvars, 0)
    for j in range(n):
        sub = [row[:j] + row[j + 1 :] for row in mat[1:]]
        term = mat[0][j] * _det(sub, nvars)
        total = total + (term if j % 2 == 0 else -term)
    return total


class Surface:
    """A k-dimensional parametrized submanifold of R^N.

    boundary = None means the boundary is unspecified (Stokes checks refuse
    to run); an empty tuple asserts the surface is closed. Boundary charts,
    when present, must parametrize the boundary with its induced orientation.
    """

    def __init__(self, dim: int, params: int, charts, boundary=None, name: str = "surface"):
        if not charts:
            raise ContractViolation("surface needs at least one chart")
        for ch in charts:
            if ch.dim != dim or ch.params != params:
                raise ContractViolation("chart shape does not match surface")
        if boundary is not None:
            for ch in boundary:
                if ch.dim != dim or ch.params != params - 1:
                    raise ContractViolation("boundary chart must have k-1 parameters")
        self.dim = dim
        self.params = params
        self.charts = list(charts)
        self.boundary = None if boundary is None else list(boundary)
        self.name = name

    @property
    def is_closed(self) -> bool:
        return self.boundary is not None and len(self.boundary) == 0

    def boundary_surface(self) -> "Surface":
        if self.boundary is None:
            raise ContractViolation(f"surface {self.name!r} has no boundary parametrization")
        if not self.boundary:
            raise ContractViolation(f"surface {self.name!r} is closed")
        return Surface(self.dim, self.params - 1, self.boundary, boundary=None,
                       name=f"boundary of {self.name}")


def _axis_rule(lo: Fraction, hi: Fraction, quad: QuadratureSpec):
    """Nodes and weights covering [lo, hi] with the subdivided Gauss rule."""
    base_nodes, base_weights = np.polynomial.legendre.leggauss(quad.points_per_axis)
    nodes = []
    weights = []
    width = (hi - lo) / quad.subdivisions
    for cell in range(quad.subdivisions):
        a = float(lo + width * cell)
        b = float(lo + width * (cell + 1))
        half = (b - a) / 2.0
        mid = (a + b) / 2.0
        for t, w in zip(base_nodes, base_weights):
            nodes.append(float(mid + half * t))
            weights.append(float(w * half))
    return nodes, weights


def integrate_form(omega: DifferentialForm, surface: Surface, quad: QuadratureSpec) -> float:
    """Pull the k-form back through each chart and integrate numerically."""
    if omega.degree != surface.params:
        raise ContractViolation(
            f"form degree {omega.degree} does not match surface dimension {surface.params}"
        )
    total = 0.0
    for chart in surface.charts:
        components = [
            (idx, expr, chart.minor_determinant(idx))
            for idx, expr in sorted(omega.comps.items())
        ]
        if not components:
            continue
        rules = [_axis_rule(lo, hi, quad) for lo, hi in chart.box]
        chart_sum = 0.0
        for combo in itertools.product(*[range(len(r[0])) for r in rules]):
            u = [rules[ax][0][i] for ax, i in enumerate(combo)]
            w = 1.0
            for ax, i in enumerate(combo):
                w *= rules[ax][1][i]
            x = [e.eval(u) for e in chart.exprs]
            value = 0.0
            for _, expr, minor in components:
                m = minor.eval(u)
                if m:
                    value += expr.eval(x) * m
            chart_sum += w * value
        total += chart.sign * chart_sum
    return total


def bv_integral(
    alpha: PolyvectorField,
    surface: Surface,
    f: ScalarExpr | None = None,
    quad: QuadratureSpec = QuadratureSpec(),
) -> tuple[float, float]:
    """Integral of alpha over the shifted conormal of the surface, computed
    as the surface integral of alpha _| (e^f dx1^...^dxN).

    Returns (value, error_estimate) where the estimate compares the rule
    against one with doubled points per axis.
    """
    if alpha.dim != surface.dim:
        raise ContractViolation("polyvector and surface dimensions differ")
    if alpha.degree != surface.dim - surface.params:
        raise ContractViolation(
            f"degree mismatch: need degree {surface.dim - surface.params} "
            f"(= N - k), got {alpha.degree}"
        )
    omega = contract(alpha, volume_form(surface.dim, f))
    value = integrate_form(omega, surface, quad)
    refined = integrate_form(omega, surface, quad.refined())
    return value, abs(value - refined)


@dataclass
class StokesReport:
    boundary_value: float
    interior_value: float

    @property
    def residual(self) -> float:
        return abs(self.boundary_value - self.interior_value)

    def structured_lines(self) -> list[str]:
        return [
            f"stokes.boundary_side={self.boundary_value!r}",
            f"stokes.interior_side={self.interior_value!r}",
            f"stokes.residual={self.residual!r}",
        ]

    def human_lines(self) -> list[str]:
        return [
            f"  boundary side : {self.boundary_value:.12g}",
            f"  interior side : {self.interior_value:.12g}",
            f"  residual      : {self.residual:.3e}",
        ]


def stokes_report(
    alpha: PolyvectorField,
    surface: Surface,
    f: ScalarExpr | None = None,
    quad: QuadratureSpec = QuadratureSpec(),
) -> StokesReport:
    """Both sides of the boundary/Laplacian identity: the integral of alpha
    over the conormal of the boundary against the integral of the Laplacian
    of alpha over the conormal of the surface."""
    if surface.boundary is None:
        raise ContractViolation(
            f"surface {surface.name!r} has no boundary parametrization"
        )
    if surface.is_closed:
        lhs = 0.0
    else:
        lhs, _ = bv_integral(alpha, surface.boundary_surface(), f, quad)
    rhs, _ = bv_integral(delta_geometric(alpha, f), surface, f, quad)
    return StokesReport(lhs, rhs)


def stokes_residual(
    alpha: PolyvectorField,
    surface: Surface,
    f: ScalarExpr | None = None,
    quad: QuadratureSpec = QuadratureSpec(),
) -> float:
    return stokes_report(alpha, surface, f, quad).residual


@dataclass
class HomologyReport:
    value1: float
    value2: float
    tolerance: float
    surface1: str = "surface1"
    surface2: str = "surface2"

    @property
    def difference(self) -> float:
        return abs(self.value1 - self.value2)

    @property
    def passed(self) -> bool:
        return self.difference < self.tolerance

    def structured_lines(self) -> list[str]:
        return [
            f"homology.surface1={self.surface1}",
            f"homology.surface2={self.surface2}",
            f"homology.value1={self.value1!r}",
            f"homology.value2={self.value2!r}",
            f"homology.difference={self.difference!r}",
            f"homology.tolerance={self.tolerance!r}",
            f"homology.status={'pass' if self.passed else 'FAIL'}",
        ]

    def human_lines(self) -> list[str]:
        return [
            f"  {self.surface1}: {self.value1:.12g}",
            f"  {self.surface2}: {self.value2:.12g}",
            f"  difference  : {self.difference:.3e} "
            f"({'PASS' if self.passed else 'FAIL'} at {self.tolerance:.1e})",
        ]


def homology_invariance_check(
    alpha: PolyvectorField,
    surface1: Surface,
    surface2: Surface,
    f: ScalarExpr | None = None,
    quad: QuadratureSpec = QuadratureSpec(),
    tolerance: float = 1e-6,
) -> HomologyReport:
    """Integrals of a closed polyvector over two surfaces in the same
    homology class agree; the closedness precondition is verified
    symbolically first."""
    residual = delta_geometric(alpha, f)
    if not residual.is_zero():
        bad = {idx: e.text() for idx, e in residual.comps.items() if not e.is_zero()}
        raise ContractViolation(
            f"polyvector is not closed under the twisted Laplacian; residual {bad}"
        )
    v1, _ = bv_integral(alpha, surface1, f, quad)
    v2, _ = bv_integral(alpha, surface2, f, quad)
    return HomologyReport(v1, v2, tolerance, surface1.name, surface2.name)
