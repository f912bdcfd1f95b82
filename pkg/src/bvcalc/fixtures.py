"""Built-in geometric fixtures and the fixture file format.

Closed curves are parametrized rationally (the expression language has no
trigonometry): the ellipse x^2/A + y^2 = 1 with rational A is covered by two
charts obtained from the pencil of lines through (0, 1) and through (0, -1),

    chart 1:  x = -2As/(1+As^2),  y =  (1-As^2)/(1+As^2),  s in [-1, 1]
    chart 2:  x =  2As/(1+As^2),  y = -(1-As^2)/(1+As^2),  s in [-1/A, 1/A]

which meet exactly at their endpoints and traverse the curve once
counterclockwise. Disks are swept radially from the same charts.

The level-set family interpolating the ellipse (2,1) and the unit circle,
Psi_t = t(x^2+y^2-1) + (1-t)(x^2/4+y^2-1), has zero locus x^2/A_t + y^2 = 1
with A_t = 4/(1+3t), so every rational t gives rational charts.

Fixture files are line-oriented; see parse_fixture for the grammar.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .errors import ContractViolation, ParseError
from .forms import PolyvectorField
from .integrate import Chart, QuadratureSpec, Surface
from .scalar import Poly, ScalarExpr, parse_scalar_expr


def _ellipse_xy(A: Fraction, nvars: int, param_index: int, chart_id: int,
                scale: Fraction = Fraction(1)):
    """Component expressions for the two rational ellipse charts, written in
    the given parameter variable of an nvars-parameter chart."""
    s = ScalarExpr.var(nvars, param_index)
    denom = (ScalarExpr.const(nvars, 1) + s * s * A).intpow(-1)
    x = s * denom * (-2 * A)
    y = (ScalarExpr.const(nvars, 1) - s * s * A) * denom
    if chart_id == 2:
        x, y = -x, -y
    return x * scale, y * scale


def ellipse_boxes(A: Fraction):
    return [
        (Fraction(-1), Fraction(1)),
        (Fraction(-1) / A, Fraction(1) / A),
    ]


def ellipse_surface(A, name: str | None = None) -> Surface:
    """The closed curve x^2/A + y^2 = 1, counterclockwise."""
    A = Fraction(A)
    if A <= 0:
        raise ContractViolation("ellipse parameter A must be positive")
    boxes = ellipse_boxes(A)
    charts = []
    for chart_id in (1, 2):
        x, y = _ellipse_xy(A, 1, 0, chart_id)
        charts.append(Chart(2, 1, [x, y], [boxes[chart_id - 1]]))
    return Surface(2, 1, charts, boundary=(), name=name or f"ellipse(A={A})")


def unit_circle_surface() -> Surface:
    return ellipse_surface(1, name="unit circle")


def levelset_ellipse_parameter(t) -> Fraction:
    """Semiaxis parameter A_t of the level set of Psi_t (see module docstring)."""
    t = Fraction(t)
    return Fraction(4) / (1 + 3 * t)


def levelset_surface(t) -> Surface:
    return ellipse_surface(levelset_ellipse_parameter(t), name=f"levelset(t={Fraction(t)})")


def disk_surface(radius=1, name: str | None = None) -> Surface:
    """The disk of the given radius, oriented by dx1 ^ dx2, swept radially
    from the two circle charts; boundary charts carry the induced
    (counterclockwise) orientation."""
    R = Fraction(radius)
    if R <= 0:
        raise ContractViolation("disk radius must be positive")
    A = Fraction(1)
    boxes = ellipse_boxes(A)
    charts = []
    for chart_id in (1, 2):
        cx, cy = _ellipse_xy(A, 2, 1, chart_id, scale=R)
        u = ScalarExpr.var(2, 0)
        charts.append(
            Chart(2, 2, [u * cx, u * cy], [(Fraction(0), Fraction(1)), boxes[chart_id - 1]])
        )
    boundary = []
    for chart_id in (1, 2):
        bx, by = _ellipse_xy(A, 1, 0, chart_id, scale=R)
        boundary.append(Chart(2, 1, [bx, by], [boxes[chart_id - 1]]))
    return Surface(2, 2, charts, boundary=boundary, name=name or f"disk(r={R})")


# -- built-in integrands -------------------------------------------------------


def area_polyvector() -> PolyvectorField:
    """The constant 0-polyvector 1: its integral over a 2-surface is the
    e^f-weighted area."""
    return PolyvectorField.function(2, ScalarExpr.const(2, 1))


def circulation_polyvector() -> PolyvectorField:
    """x d1 + y d2; contracting with dx^dy gives x dy - y dx."""
    return PolyvectorField(
        2, 1, {(1,): ScalarExpr.var(2, 0), (2,): ScalarExpr.var(2, 1)}
    )


def angular_polyvector() -> PolyvectorField:
    """(x d1 + y d2)/r^2; contraction gives the closed angular form
    (x dy - y dx)/r^2 on the punctured plane."""
    r2inv = (
        ScalarExpr.var(2, 0) * ScalarExpr.var(2, 0)
        + ScalarExpr.var(2, 1) * ScalarExpr.var(2, 1)
    ).intpow(-1)
    return PolyvectorField(
        2,
        1,
        {(1,): ScalarExpr.var(2, 0) * r2inv, (2,): ScalarExpr.var(2, 1) * r2inv},
    )


def gaussian_polyvector() -> PolyvectorField:
    """exp(-x^2-y^2) d1."""
    damp = ScalarExpr.exp_poly(
        Poly(2, {(2, 0): Fraction(-1), (0, 2): Fraction(-1)})
    )
    return PolyvectorField(2, 1, {(1,): damp})


def stokes_disk_polyvector() -> PolyvectorField:
    """x d1: both Stokes sides over the unit disk equal pi."""
    return PolyvectorField(2, 1, {(1,): ScalarExpr.var(2, 0)})


def exact_polyvector() -> PolyvectorField:
    """The Laplacian of x^2 y d1^d2: exact, so closed-cycle integrals vanish."""
    from .forms import delta_geometric

    g = ScalarExpr.from_poly(Poly(2, {(2, 1): Fraction(1)}))
    beta = PolyvectorField(2, 2, {(1, 2): g})
    return delta_geometric(beta, None)


# -- fixture file format --------------------------------------------------------
#
# Line-oriented, '#' starts a comment. Scalar expressions are prefix
# s-expressions over x1..xN (integrand, f) or u1..uk (chart components):
#
#   dim <N>
#   f <expr>                        optional volume twist (default 0)
#   alpha <degree>                  integrand block
#   component <i1,i2|-> <expr>      one line per component; '-' for degree 0
#   surface <k>                     surface block
#   chart [sign <1|-1>] box <lo> <hi> [...]
#   comp <expr>                     N lines, ambient coordinate order
#   end
#   boundary                        following charts parametrize the boundary
#   closed                          assert an empty boundary
#   quadrature <points> <subdiv>    recommended rule (integrands whose chart
#                                   pullbacks have nearby complex poles need
#                                   subdivisions for full Gauss accuracy)
#
# A fixture may hold an integrand, a surface, or both.


@dataclass
class Fixture:
    dim: int
    f: ScalarExpr | None
    alpha: PolyvectorField | None
    surface: Surface | None
    name: str = "fixture"
    quad: "QuadratureSpec | None" = None

    def require_alpha(self) -> PolyvectorField:
        if self.alpha is None:
            raise ContractViolation(f"fixture {self.name!r} has no integrand")
        return self.alpha

    def require_surface(self) -> Surface:
        if self.surface is None:
            raise ContractViolation(f"fixture {self.name!r} has no surface")
        return self.surface


class _FixtureParser:
    def __init__(self, text: str, name: str):
        self.lines = text.splitlines()
        self.pos = 0
        self.name = name
        self.dim = None
        self.f = None
        self.alpha_degree = None
        self.alpha_comps = {}
        self.k = None
        self.charts = []
        self.boundary = None
        self.in_boundary = False
        self.quad = None

    def error(self, message):
        raise ParseError(message, line=self.pos)

    def next_line(self):
        while self.pos < len(self.lines):
            raw = self.lines[self.pos]
            self.pos += 1
            line = raw.split("#", 1)[0].strip()
            if line:
                return line
        return None

    def parse(self) -> Fixture:
        while True:
            line = self.next_line()
            if line is None:
                break
            key, _, rest = line.partition(" ")
            rest = rest.strip()
            if key == "dim":
                self.dim = int(rest)
            elif key == "f":
                self._need_dim()
                self.f = parse_scalar_expr(rest, self.dim, "x")
            elif key == "alpha":
                self._need_dim()
                self.alpha_degree = int(rest)
            elif key == "component":
                self._component(rest)
            elif key == "surface":
                self._need_dim()
                self.k = int(rest)
            elif key == "chart":
                self._chart(rest)
            elif key == "boundary":
                self.in_boundary = True
                if self.boundary is None:
                    self.boundary = []
            elif key == "closed":
                self.boundary = []
                self.in_boundary = False
            elif key == "quadrature":
                parts = rest.split()
                if len(parts) != 2:
                    self.error("quadrature expects: points subdivisions")
                self.quad = QuadratureSpec(int(parts[0]), int(parts[1]))
            else:
                self.error(f"unknown fixture key {key!r}")
        return self._build()

    def _need_dim(self):
        if self.dim is None:
            self.error("dim must come first")

    def _component(self, rest):
        if self.alpha_degree is None:
            self.error("component line before an alpha block")
        idx_text, _, expr_text = rest.partition(" ")
        if idx_text == "-":
            idx = ()
        else:
            try:
                idx = tuple(int(v) for v in idx_text.split(","))
            except ValueError:
                self.error(f"bad component indices {idx_text!r}")
        if len(idx) != self.alpha_degree:
            self.error(f"component {idx_text} does not match degree {self.alpha_degree}")
        self.alpha_comps[idx] = parse_scalar_expr(expr_text, self.dim, "x")

    def _chart(self, rest):
        if self.k is None:
            self.error("chart line before a surface block")
        params = self.k - 1 if self.in_boundary else self.k
        tokens = rest.split()
        sign = 1
        box = []
        i = 0
        while i < len(tokens):
            if tokens[i] == "sign":
                sign = int(tokens[i + 1])
                i += 2
            elif tokens[i] == "box":
                vals = tokens[i + 1 :]
                if len(vals) != 2 * params:
                    self.error(f"box needs {2 * params} bounds for a {params}-parameter chart")
                box = [
                    (Fraction(vals[2 * j]), Fraction(vals[2 * j + 1]))
                    for j in range(params)
                ]
                i = len(tokens)
            else:
                self.error(f"unknown chart option {tokens[i]!r}")
        if len(box) != params:
            self.error("chart is missing its box")
        exprs = []
        while True:
            line = self.next_line()
            if line is None:
                self.error("chart block not terminated by 'end'")
            if line == "end":
                break
            key, _, rest2 = line.partition(" ")
            if key != "comp":
                self.error(f"expected 'comp', found {key!r}")
            exprs.append(parse_scalar_expr(rest2.strip(), params, "u"))
        if len(exprs) != self.dim:
            self.error(f"chart needs {self.dim} comp lines, found {len(exprs)}")
        chart = Chart(self.dim, params, exprs, box, sign)
        if self.in_boundary:
            self.boundary.append(chart)
        else:
            self.charts.append(chart)

    def _build(self) -> Fixture:
        if self.dim is None:
            raise ParseError("fixture is missing 'dim'")
        alpha = None
        if self.alpha_degree is not None:
            alpha = PolyvectorField(self.dim, self.alpha_degree, self.alpha_comps)
        surface = None
        if self.k is not None:
            if not self.charts:
                raise ParseError("surface block has no charts")
            surface = Surface(self.dim, self.k, self.charts, self.boundary, name=self.name)
        return Fixture(self.dim, self.f, alpha, surface, name=self.name, quad=self.quad)


def parse_fixture(text: str, name: str = "fixture") -> Fixture:
    return _FixtureParser(text, name).parse()


def load_fixture(path) -> Fixture:
    p = Path(path)
    return parse_fixture(p.read_text(), name=p.stem)
