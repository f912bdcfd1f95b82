"""Core graded-algebra engine tests."""

import random
from fractions import Fraction

import pytest

from bvcalc.coefficients import Coefficient
from bvcalc.context import Context
from bvcalc.errors import ContractViolation
from bvcalc.operators import random_superfunction
from bvcalc.superfunction import (
    Superfunction,
    ghost_degree,
    left_derivative,
    multiply,
    right_derivative,
    substitute,
)

CTX = Context(3, 2)


def gen(name):
    kind = name.rstrip("0123456789")
    idx = int(name[len(kind):])
    return {"x": CTX.field, "c": CTX.ghost, "xs": CTX.antifield, "cs": CTX.antighost}[
        kind
    ](idx)


def sf(name):
    return Superfunction.generator(CTX, gen(name))


def test_odd_square_vanishes():
    xs1 = sf("xs1")
    assert multiply(xs1, xs1).is_zero()
    c1 = sf("c1")
    assert (c1 * c1).is_zero()


def test_graded_commutativity_on_odd_swap():
    xs1, xs2 = sf("xs1"), sf("xs2")
    assert xs1 * xs2 == -(xs2 * xs1)


def test_even_generators_commute_with_exact_coefficients():
    coeff = Coefficient.rational(2) + Coefficient.imaginary_unit() * Coefficient.h_power(1)
    cs1, x1 = sf("cs1"), sf("x1")
    left = (cs1 * x1).scaled(coeff)
    right = (x1 * cs1).scaled(coeff)
    assert left == right
    assert not left.is_zero()


def test_context_mismatch_rejected():
    other = Context(1, 0)
    with pytest.raises(ContractViolation):
        multiply(sf("x1"), Superfunction.generator(other, other.field(1)))


def test_right_derivative_examples():
    # d/dxs1 (x1 xs1) = x1
    assert right_derivative(sf("x1") * sf("xs1"), gen("xs1")) == sf("x1")
    # d/dx1 (x1^3) = 3 x1^2
    cube = sf("x1") * sf("x1") * sf("x1")
    assert right_derivative(cube, gen("x1")) == (sf("x1") * sf("x1")).scaled(3)
    # d/dxs1 (xs1 xs2) = -xs2: one transposition to move xs1 rightmost
    assert right_derivative(sf("xs1") * sf("xs2"), gen("xs1")) == -sf("xs2")


def test_left_derivative_examples():
    one = Superfunction.constant(CTX, 1)
    # odd F, odd g: sign (-1)^(1*(1+1)) = +1
    assert left_derivative(sf("x1") * sf("xs1"), gen("xs1")) == sf("x1")
    # even generator: left equals right for any F
    rng = random.Random(5)
    for _ in range(50):
        F = random_superfunction(CTX, rng, 4)
        assert left_derivative(F, gen("x2")) == right_derivative(F, gen("x2"))
    # left derivative of c1 by c1 is 1
    assert left_derivative(sf("c1"), gen("c1")) == one


def test_double_odd_derivative_is_zero():
    rng = random.Random(17)
    for _ in range(200):
        F = random_superfunction(CTX, rng, 4)
        for name in ("xs1", "xs3", "c2"):
            g = gen(name)
            assert right_derivative(right_derivative(F, g), g).is_zero()


def test_mixed_second_right_derivatives_graded_commute():
    rng = random.Random(23)
    odd_pairs = [("xs1", "xs2"), ("c1", "xs2"), ("c1", "c2")]
    even_pairs = [("x1", "x2"), ("cs1", "x3"), ("cs1", "cs2")]
    for _ in range(150):
        F = random_superfunction(CTX, rng, 4)
        for a, b in odd_pairs:
            ga, gb = gen(a), gen(b)
            assert right_derivative(right_derivative(F, gb), ga) == -right_derivative(
                right_derivative(F, ga), gb
            )
        for a, b in even_pairs:
            ga, gb = gen(a), gen(b)
            assert right_derivative(right_derivative(F, gb), ga) == right_derivative(
                right_derivative(F, ga), gb
            )


def test_ghost_degree_examples():
    assert ghost_degree(sf("c1") * sf("cs1")) == -1
    assert ghost_degree(Superfunction.constant(CTX, 1)) == 0
    assert ghost_degree(sf("xs1") + sf("c1")) is None


def test_ghost_degree_additive_under_product():
    rng = random.Random(31)
    done = 0
    while done < 200:
        F = random_superfunction(CTX, rng, 3)
        G = random_superfunction(CTX, rng, 3)
        dF, dG = ghost_degree(F), ghost_degree(G)
        if dF is None or dG is None:
            continue
        P = F * G
        if P.is_zero():
            continue
        assert ghost_degree(P) == dF + dG
        done += 1


def test_ring_axioms_randomized():
    # graded commutativity, associativity, distributivity: >= 1000 seeded trials
    rng = random.Random(1)
    for _ in range(1000):
        F = random_superfunction(CTX, rng, 4)
        G = random_superfunction(CTX, rng, 4)
        H = random_superfunction(CTX, rng, 4)
        assert (F * G) * H == F * (G * H)
        assert F * (G + H) == F * G + F * H
        pF, pG = F.parity(), G.parity()
        if pF is not None and pG is not None:
            sign = -1 if (pF * pG) % 2 else 1
            assert F * G == (G * F).scaled(sign)


def test_canonicalization_idempotent():
    rng = random.Random(41)
    for _ in range(100):
        F = random_superfunction(CTX, rng, 4)
        rebuilt = Superfunction.from_terms(CTX, list(F.terms()))
        assert rebuilt == F


def test_substitute_examples():
    zero = Superfunction.zero(CTX)
    one = Superfunction.constant(CTX, 1)
    # substituting xs1 -> 0 kills terms containing xs1
    F = sf("x1") * sf("xs1")
    assert substitute(F, {gen("xs1"): zero}) == zero
    # x1 -> x1 + 1
    assert substitute(sf("x1"), {gen("x1"): sf("x1") + one}) == sf("x1") + one
    # odd image squared vanishes
    F = sf("xs1") * sf("xs2")
    assert substitute(F, {gen("xs1"): sf("xs2")}).is_zero()


def test_substitute_is_homomorphism():
    rng = random.Random(53)
    assignment = {
        gen("x1"): sf("x2") * sf("x2") + Superfunction.constant(CTX, Fraction(1, 2)),
        gen("xs2"): sf("xs1") + sf("c1"),
        gen("cs1"): sf("cs2"),
    }
    for _ in range(100):
        F = random_superfunction(CTX, rng, 3)
        G = random_superfunction(CTX, rng, 3)
        assert substitute(F * G, assignment) == substitute(F, assignment) * substitute(
            G, assignment
        )
    # identity assignment is the identity
    ident = {gen("x1"): sf("x1"), gen("c2"): sf("c2")}
    F = random_superfunction(CTX, rng, 4)
    assert substitute(F, ident) == F


def test_substitute_parity_violation_rejected():
    with pytest.raises(ContractViolation):
        substitute(sf("xs1"), {gen("xs1"): sf("x1")})
    with pytest.raises(ContractViolation):
        substitute(sf("x1"), {gen("x1"): sf("c1")})
