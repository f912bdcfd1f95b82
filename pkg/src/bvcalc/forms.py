"""Differential forms and polyvector fields on an open box in R^N, with
contraction, the exterior derivative, the geometric BV Laplacian and the
shift isomorphism onto superfunctions.

Components are indexed by strictly increasing index tuples (1-based, matching
the x1..xN variable names); antisymmetry is canonical because only sorted
tuples are stored.
"""

from __future__ import annotations

from fractions import Fraction

from .coefficients import Coefficient
from .context import Context
from .errors import ContractViolation
from .scalar import Poly, ScalarExpr
from .superfunction import Superfunction


def _merge_sorted(i1, i2):
    """Merge two strictly increasing index tuples; (None, 0) on a repeat."""
    if not i1:
        return i2, 1
    if not i2:
        return i1, 1
    merged = []
    i = j = 0
    inversions = 0
    while i < len(i1) and j < len(i2):
        if i1[i] == i2[j]:
            return None, 0
        if i1[i] < i2[j]:
            merged.append(i1[i])
            i += 1
        else:
            inversions += len(i1) - i
            merged.append(i2[j])
            j += 1
    merged.extend(i1[i:])
    merged.extend(i2[j:])
    return tuple(merged), (-1 if inversions % 2 else 1)


class _GradedComponents:
    """Shared container logic for forms and polyvectors."""

    kind = "graded object"

    def __init__(self, dim: int, degree: int, comps=None):
        if not 0 <= degree <= dim:
            raise ContractViolation(
                f"{self.kind} degree {degree} out of range for dimension {dim}"
            )
        self.dim = dim
        self.degree = degree
        self.comps = {}
        for idx, expr in (comps or {}).items():
            idx = tuple(idx)
            if len(idx) != degree:
                raise ContractViolation(
                    f"component index {idx} does not match degree {degree}"
                )
            if list(idx) != sorted(set(idx)):
                raise ContractViolation(f"component index {idx} must be strictly increasing")
            if any(not 1 <= i <= dim for i in idx):
                raise ContractViolation(f"component index {idx} out of range")
            if expr.nvars != dim:
                raise ContractViolation("component expression has wrong variable count")
            if not expr.is_zero():
                self.comps[idx] = expr

    def component(self, idx) -> ScalarExpr:
        return self.comps.get(tuple(idx), ScalarExpr.const(self.dim, 0))

    def is_zero(self) -> bool:
        return all(e.is_zero() for e in self.comps.values())

    def _same_shape(self, other):
        if self.dim != other.dim or self.degree != other.degree:
            raise ContractViolation(f"{self.kind} shape mismatch")

    def __add__(self, other):
        self._same_shape(other)
        comps = dict(self.comps)
        for idx, e in other.comps.items():
            comps[idx] = comps[idx] + e if idx in comps else e
        return type(self)(self.dim, self.degree, comps)

    def __neg__(self):
        return type(self)(self.dim, self.degree, {i: -e for i, e in self.comps.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, factor):
        return type(self)(
            self.dim, self.degree, {i: e * factor for i, e in self.comps.items()}
        )

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        if self.dim != other.dim or self.degree != other.degree:
            return False
        return (self - other).is_zero()

    def __repr__(self):
        body = ", ".join(f"{idx}: {e.text()}" for idx, e in sorted(self.comps.items()))
        return f"<{type(self).__name__} deg {self.degree} {{{body}}}>"

    def _wedge(self, other):
        self._same_shape_dim(other)
        comps = {}
        for i1, e1 in self.comps.items():
            for i2, e2 in other.comps.items():
                idx, sign = _merge_sorted(i1, i2)
                if idx is None:
                    continue
                term = e1 * e2 * Fraction(sign)
                comps[idx] = comps[idx] + term if idx in comps else term
        return type(self)(self.dim, self.degree + other.degree, comps)

    def _same_shape_dim(self, other):
        if self.dim != other.dim:
            raise ContractViolation(f"{self.kind} dimension mismatch")
        if type(other) is not type(self):
            raise ContractViolation(f"cannot wedge {self.kind} with {type(other).__name__}")


class DifferentialForm(_GradedComponents):
    kind = "differential form"

    @staticmethod
    def zero(dim: int, degree: int) -> "DifferentialForm":
        return DifferentialForm(dim, degree)

    def wedge(self, other: "DifferentialForm") -> "DifferentialForm":
        return self._wedge(other)


class PolyvectorField(_GradedComponents):
    kind = "polyvector field"

    @staticmethod
    def zero(dim: int, degree: int) -> "PolyvectorField":
        return PolyvectorField(dim, degree)

    @staticmethod
    def function(dim: int, expr: ScalarExpr) -> "PolyvectorField":
        return PolyvectorField(dim, 0, {(): expr})

    def wedge(self, other: "PolyvectorField") -> "PolyvectorField":
        return self._wedge(other)


def volume_form(dim: int, f: ScalarExpr | None = None) -> DifferentialForm:
    """Omega = e^f dx1 ^ ... ^ dxN (nowhere vanishing by construction)."""
    if f is None:
        weight = ScalarExpr.const(dim, 1)
    else:
        p = f.as_poly()
        if p is None:
            raise ContractViolation("volume twist f must be a polynomial expression")
        weight = ScalarExpr.exp_poly(p)
    return DifferentialForm(dim, dim, {tuple(range(1, dim + 1)): weight})


def interior_product(index: int, omega: DifferentialForm) -> DifferentialForm:
    """d_index contracted into omega (degree drops by one)."""
    comps = {}
    for idx, expr in omega.comps.items():
        for t, j in enumerate(idx):
            if j == index:
                new_idx = idx[:t] + idx[t + 1 :]
                term = expr if t % 2 == 0 else -expr
                comps[new_idx] = comps[new_idx] + term if new_idx in comps else term
                break
    return DifferentialForm(omega.dim, omega.degree - 1, comps)


def contract(alpha: PolyvectorField, omega: DifferentialForm) -> DifferentialForm:
    """alpha _| omega, iterated so the rightmost wedge factor contracts first:
    (a ^ b) _| w = a _| (b _| w)."""
    if alpha.dim != omega.dim:
        raise ContractViolation("contraction dimension mismatch")
    if alpha.degree > omega.degree:
        raise ContractViolation(
            f"cannot contract degree {alpha.degree} into degree {omega.degree}"
        )
    result = DifferentialForm.zero(omega.dim, omega.degree - alpha.degree)
    for idx, coeff in alpha.comps.items():
        partial = omega
        for index in reversed(idx):
            partial = interior_product(index, partial)
        result = result + partial.scale(coeff)
    return result


def exterior_derivative(omega: DifferentialForm) -> DifferentialForm:
    """The de Rham differential; a top-degree input returns the zero form."""
    dim = omega.dim
    if omega.degree == dim:
        return DifferentialForm.zero(dim, dim)
    comps = {}
    for idx, expr in omega.comps.items():
        for i in range(1, dim + 1):
            if i in idx:
                continue
            d = expr.diff(i - 1)
            if d.is_zero():
                continue
            new_idx, sign = _merge_sorted((i,), idx)
            term = d * Fraction(sign)
            comps[new_idx] = comps[new_idx] + term if new_idx in comps else term
    return DifferentialForm(dim, omega.degree + 1, comps)


_SIGN_CACHE: dict = {}


def _basis_contraction_sign(dim: int, idx: tuple) -> int:
    """Sign and complement of d_idx contracted into dx1^...^dxN:
    d_idx _| (dx1..dxN) = sign * dx^complement."""
    key = (dim, idx)
    if key not in _SIGN_CACHE:
        top = DifferentialForm(
            dim, dim, {tuple(range(1, dim + 1)): ScalarExpr.const(dim, 1)}
        )
        alpha = PolyvectorField(dim, len(idx), {idx: ScalarExpr.const(dim, 1)})
        result = contract(alpha, top)
        comp = tuple(i for i in range(1, dim + 1) if i not in idx)
        expr = result.component(comp).as_poly()
        value = expr.const_value()
        assert value in (1, -1)
        _SIGN_CACHE[key] = int(value)
    return _SIGN_CACHE[key]


def delta_geometric(alpha: PolyvectorField, f: ScalarExpr | None = None) -> PolyvectorField:
    """The volume-form Laplacian: the unique beta with beta _| Omega = d(alpha _| Omega),
    for Omega = e^f dx1^...^dxN."""
    dim = alpha.dim
    if alpha.degree == 0:
        return PolyvectorField.zero(dim, 0)
    omega = volume_form(dim, f)
    d_image = exterior_derivative(contract(alpha, omega))
    if f is None:
        weight_inv = ScalarExpr.const(dim, 1)
    else:
        p = f.as_poly()
        if p is None:
            raise ContractViolation("volume twist f must be a polynomial expression")
        weight_inv = ScalarExpr.exp_poly(-p)
    comps = {}
    for comp_idx, expr in d_image.comps.items():
        idx = tuple(i for i in range(1, dim + 1) if i not in comp_idx)
        sign = _basis_contraction_sign(dim, idx)
        comps[idx] = expr * weight_inv * Fraction(sign)
    return PolyvectorField(dim, alpha.degree - 1, comps)


# -- shift isomorphism ---------------------------------------------------------


def poly_to_superfunction(p: Poly, ctx: Context) -> Superfunction:
    if p.nvars != ctx.n_fields:
        raise ContractViolation("polynomial variable count does not match context")
    terms = []
    for exps, c in p.terms.items():
        evens = tuple(
            (("x", i + 1), k) for i, k in enumerate(exps) if k
        )
        terms.append(((evens, ()), Coefficient.rational(c)))
    return Superfunction.from_terms(ctx, terms)


def superfunction_to_poly(F: Superfunction, nvars: int) -> Poly:
    total = Poly(nvars)
    for (evens, odds), coeff in F.terms():
        if odds:
            raise ContractViolation("expected a fields-only superfunction")
        items = list(coeff.items())
        if not items:
            continue
        if len(items) != 1 or items[0][0] != 0 or items[0][1][1] != 0:
            raise ContractViolation("expected plain rational coefficients")
        exps = [0] * nvars
        for (kind, idx), k in evens:
            if kind != "x":
                raise ContractViolation("expected a fields-only superfunction")
            exps[idx - 1] = k
        total = total + Poly(nvars, {tuple(exps): items[0][1][0]})
    return total


def shift_to_superfunction(alpha: PolyvectorField) -> Superfunction:
    """d_{i1} ^ ... ^ d_{ip} with polynomial coefficients maps to the
    superfunction xs_{i1} * ... * xs_{ip} (plain factor order).

    Only polynomial coefficients embed into the exact polynomial algebra;
    rational or exponential coefficients stay on the geometric side.
    """
    ctx = Context(alpha.dim, 0)
    out = Superfunction.zero(ctx)
    for idx, expr in alpha.comps.items():
        p = expr.as_poly()
        if p is None:
            raise ContractViolation(
                "shift to a superfunction needs polynomial coefficients"
            )
        term = poly_to_superfunction(p, ctx)
        for i in idx:
            term = term * Superfunction.generator(ctx, ctx.antifield(i))
        out = out + term
    return out


def superfunction_to_polyvector(F: Superfunction, dim: int) -> PolyvectorField:
    """Inverse of the shift on the fields/antifields sector."""
    if F.ctx.n_ghosts != 0 or F.ctx.n_fields != dim:
        raise ContractViolation("expected a ghost-free superfunction over dim fields")
    grouped: dict = {}
    for (evens, odds), coeff in F.terms():
        idx = tuple(sorted(i for kind, i in odds))
        if any(kind != "xs" for kind, _ in odds):
            raise ContractViolation("unexpected ghost generators under the shift")
        items = list(coeff.items())
        if len(items) != 1 or items[0][0] != 0 or items[0][1][1] != 0:
            raise ContractViolation("expected plain rational coefficients")
        exps = [0] * dim
        for (kind, i), k in evens:
            exps[i - 1] = k
        p = Poly(dim, {tuple(exps): items[0][1][0]})
        grouped[idx] = grouped.get(idx, Poly(dim)) + p
    degree = {len(i) for i in grouped} or {0}
    if len(degree) > 1:
        raise ContractViolation("mixed polyvector degrees under the shift")
    deg = degree.pop()
    comps = {idx: ScalarExpr.from_poly(p) for idx, p in grouped.items() if not p.is_zero()}
    return PolyvectorField(dim, deg, comps)
