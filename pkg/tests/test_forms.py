"""Forms, polyvectors, contraction, exterior derivative, geometric Laplacian,
and the shift isomorphism."""

import random
from fractions import Fraction

import pytest

from bvcalc.crosscheck import random_poly, random_polyvector
from bvcalc.errors import ContractViolation
from bvcalc.forms import (
    DifferentialForm,
    PolyvectorField,
    contract,
    delta_geometric,
    exterior_derivative,
    poly_to_superfunction,
    shift_to_superfunction,
    superfunction_to_polyvector,
    volume_form,
)
from bvcalc.scalar import Poly, ScalarExpr, parse_scalar_expr
from bvcalc.superfunction import Superfunction
from bvcalc.textio import format_superfunction, parse_superfunction


def const2(v=1):
    return ScalarExpr.const(2, v)


def test_interior_product_examples():
    omega = DifferentialForm(2, 2, {(1, 2): const2()})
    d1 = PolyvectorField(2, 1, {(1,): const2()})
    assert contract(d1, omega) == DifferentialForm(2, 1, {(2,): const2()})
    # index mismatch annihilates
    dx2 = DifferentialForm(2, 1, {(2,): const2()})
    f_d1 = PolyvectorField(2, 1, {(1,): ScalarExpr.var(2, 0)})
    assert contract(f_d1, dx2).is_zero()


def test_contraction_rightmost_first():
    omega = DifferentialForm(2, 2, {(1, 2): const2()})
    d12 = PolyvectorField(2, 2, {(1, 2): const2()})
    # (d1 ^ d2) _| (dx1 ^ dx2) = d1 _| (d2 _| (dx1 ^ dx2)) = d1 _| (-dx1) = -1
    assert contract(d12, omega) == DifferentialForm(2, 0, {(): const2(-1)})


def test_contraction_wedge_extension_rule():
    rng = random.Random(9)
    dim = 3
    top = volume_form(dim)
    for _ in range(60):
        p = rng.randint(0, 2)
        q = rng.randint(0, dim - p)
        a = random_polyvector(dim, rng, 2, degree=p)
        b = random_polyvector(dim, rng, 2, degree=q)
        lhs = contract(a.wedge(b), top)
        rhs = contract(a, contract(b, top))
        assert lhs == rhs


def test_contraction_degree_error():
    omega = DifferentialForm(2, 1, {(1,): const2()})
    d12 = PolyvectorField(2, 2, {(1, 2): const2()})
    with pytest.raises(ContractViolation):
        contract(d12, omega)


def test_exterior_derivative_examples():
    # d(x1 dx2) = dx1 ^ dx2
    omega = DifferentialForm(2, 1, {(2,): ScalarExpr.var(2, 0)})
    assert exterior_derivative(omega) == DifferentialForm(2, 2, {(1, 2): const2()})
    # top degree maps to the zero form
    gauss = ScalarExpr.exp_poly(Poly(1, {(2,): Fraction(-1)}))
    top = DifferentialForm(1, 1, {(1,): gauss})
    assert exterior_derivative(top).is_zero()


def test_d_squared_zero():
    rng = random.Random(21)
    for _ in range(40):
        dim = rng.randint(1, 4)
        q = rng.randint(0, dim - 1) if dim > 1 else 0
        comps = {}
        import itertools

        for idx in itertools.combinations(range(1, dim + 1), q):
            if rng.random() < 0.7:
                comps[idx] = ScalarExpr.from_poly(random_poly(dim, rng, 3))
        omega = DifferentialForm(dim, q, comps)
        assert exterior_derivative(exterior_derivative(omega)).is_zero()
    # also with rational and exponential coefficients
    r2inv = parse_scalar_expr("(^ (+ (^ x1 2) (^ x2 2)) -1)", 2)
    gauss = parse_scalar_expr("(exp (- 0 (^ x1 2) (^ x2 2)))", 2)
    omega = DifferentialForm(2, 1, {(1,): r2inv * gauss, (2,): r2inv})
    assert exterior_derivative(exterior_derivative(omega)).is_zero()


def test_delta_geometric_examples():
    # divergence: delta(x1 d1) = 1 in R^2
    a = PolyvectorField(2, 1, {(1,): ScalarExpr.var(2, 0)})
    assert delta_geometric(a) == PolyvectorField(2, 0, {(): const2()})
    # constant bivector is closed
    d12 = PolyvectorField(2, 2, {(1, 2): const2()})
    assert delta_geometric(d12).is_zero()


def test_delta_geometric_squares_to_zero():
    rng = random.Random(33)
    for _ in range(30):
        dim = rng.randint(1, 4)
        alpha = random_polyvector(dim, rng, 3)
        f = ScalarExpr.from_poly(random_poly(dim, rng, 2))
        assert delta_geometric(delta_geometric(alpha, f), f).is_zero()


def test_delta_geometric_angular_closed():
    r2inv = parse_scalar_expr("(^ (+ (^ x1 2) (^ x2 2)) -1)", 2)
    ang = PolyvectorField(
        2,
        1,
        {(1,): ScalarExpr.var(2, 0) * r2inv, (2,): ScalarExpr.var(2, 1) * r2inv},
    )
    assert delta_geometric(ang).is_zero()


def test_shift_examples():
    d12 = PolyvectorField(2, 2, {(1, 2): const2()})
    assert format_superfunction(shift_to_superfunction(d12)) == "xs1*xs2"
    # degree 0 is fixed
    f = PolyvectorField.function(2, ScalarExpr.from_poly(Poly(2, {(1, 1): Fraction(2)})))
    assert format_superfunction(shift_to_superfunction(f)) == "(2)*x1*x2"


def test_shift_roundtrip_and_multiplicativity():
    rng = random.Random(45)
    for _ in range(60):
        dim = rng.randint(1, 4)
        alpha = random_polyvector(dim, rng, 2)
        back = superfunction_to_polyvector(shift_to_superfunction(alpha), dim)
        assert back == alpha
        p = rng.randint(0, dim)
        q = rng.randint(0, dim - p)
        a = random_polyvector(dim, rng, 2, degree=p)
        b = random_polyvector(dim, rng, 2, degree=q)
        # plain-order shift intertwines wedge and product exactly
        assert shift_to_superfunction(a.wedge(b)) == shift_to_superfunction(
            a
        ) * shift_to_superfunction(b)


def test_shift_parity_preserving():
    rng = random.Random(57)
    for _ in range(40):
        dim = rng.randint(1, 4)
        p = rng.randint(0, dim)
        alpha = random_polyvector(dim, rng, 2, degree=p)
        F = shift_to_superfunction(alpha)
        if not F.is_zero():
            assert F.parity() == p % 2


def test_shift_rejects_nonpolynomial_coefficients():
    r2inv = parse_scalar_expr("(^ (+ (^ x1 2) (^ x2 2)) -1)", 2)
    alpha = PolyvectorField(2, 1, {(1,): r2inv})
    with pytest.raises(ContractViolation):
        shift_to_superfunction(alpha)


def test_poly_superfunction_bridge():
    from bvcalc.context import Context

    ctx = Context(2, 0)
    p = Poly(2, {(2, 1): Fraction(3), (0, 0): Fraction(-1, 2)})
    F = poly_to_superfunction(p, ctx)
    assert F == parse_superfunction("(3)*x1^2*x2 - 1/2", ctx)
