"""Gauge model tests: BV action, master equations, hypotheses, observables."""

import pathlib
import random
from fractions import Fraction

import pytest

from bvcalc.coefficients import Coefficient
from bvcalc.context import Context
from bvcalc.errors import ContractViolation, ParseError
from bvcalc.models import (
    DIAG_JACOBI,
    DIAG_NOT_HOMOMORPHISM,
    DIAG_NOT_INVARIANT,
    DIAG_NOT_MEASURE_PRESERVING,
    DIAG_NOT_UNIMODULAR,
    GaugeModel,
    abelian_model,
    build_bv_action,
    build_s_e,
    build_s_r,
    check_cme,
    check_observable,
    check_qme,
    check_theorem_hypotheses,
    exp_check,
    load_model,
    model_catalog,
    noninvariant_model,
    nonunimodular_model,
    parse_model,
    quantum_differential,
    su2_model,
)
from bvcalc.operators import bv_delta, random_superfunction, schouten_bracket
from bvcalc.superfunction import Superfunction, monomial_ghost_degree
from bvcalc.textio import format_superfunction, parse_superfunction

from oracle_grassmann import OExpr, left_deriv, right_deriv

MODELS_DIR = pathlib.Path(__file__).parent.parent / "models"


# -- independent oracle expansion of the su(2) master equation -----------


def oracle_ops(nf, ng):
    pairs = [(f"x{i}", f"xs{i}") for i in range(1, nf + 1)]
    pairs += [(f"c{a}", f"cs{a}") for a in range(1, ng + 1)]

    def delta(e):
        out = OExpr()
        for i in range(1, nf + 1):
            out = out + right_deriv(left_deriv(e, f"xs{i}"), f"x{i}")
        for a in range(1, ng + 1):
            out = out - left_deriv(right_deriv(e, f"cs{a}"), f"c{a}")
        return out

    def br(F, G):
        out = OExpr()
        for base, fiber in pairs:
            out = out + right_deriv(F, base) * left_deriv(G, fiber)
            out = out - right_deriv(F, fiber) * left_deriv(G, base)
        return out

    return delta, br


def to_oracle(F):
    terms = []
    for (evens, odds), coeff in F.terms():
        items = list(coeff.items())
        if not items:
            continue
        assert len(items) == 1
        k, (re, im) = items[0]
        assert k == 0 and im == 0
        seq = []
        for (kind, idx), e in evens:
            seq.extend([f"{kind}{idx}"] * e)
        seq.extend(f"{kind}{idx}" for kind, idx in odds)
        terms.append((re, tuple(seq)))
    return OExpr(terms)


def test_su2_master_equation_against_oracle():
    model = su2_model()
    S = build_bv_action(model)
    delta, br = oracle_ops(3, 3)
    S_oracle = to_oracle(S)
    assert br(S_oracle, S_oracle).is_zero()
    assert delta(S_oracle).is_zero()
    # and the engine agrees with the oracle on the residuals
    assert to_oracle(schouten_bracket(S, S)) == br(S_oracle, S_oracle)
    assert to_oracle(bv_delta(S)) == delta(S_oracle)


# -- construction ----------------------------------------------------------


def test_abelian_action_is_s0():
    model = abelian_model()
    assert build_bv_action(model) == model.S0


def test_su2_action_structure():
    model = su2_model()
    S = build_bv_action(model)
    assert S.parity() == 0
    # every monomial individually has ghost degree 0
    for mono, _ in S.terms():
        assert monomial_ghost_degree(mono) == 0
    assert S == model.S0 + build_s_e(model) + build_s_r(model)
    assert not build_s_e(model).is_zero()
    assert not build_s_r(model).is_zero()


def test_malformed_model_rejected():
    ctx = Context(2, 1)
    S0 = Superfunction.generator(ctx, ctx.field(1))
    S0 = S0 * S0
    with pytest.raises(ContractViolation):
        GaugeModel(2, 1, {}, [], S0)  # missing rho matrix
    with pytest.raises(ContractViolation):
        GaugeModel(2, 1, {(1, 1, 1): 1}, [[[0, 0], [0, 0]]], S0)  # C not antisym
    bad_s0 = Superfunction.generator(ctx, ctx.ghost(1))
    with pytest.raises(ContractViolation):
        GaugeModel(2, 1, {}, [[[0, 0], [0, 0]]], bad_s0)


# -- classical master equation ----------------------------------------------


def test_cme_s0_only():
    model = abelian_model()
    report = check_cme(model.S0, model)
    assert report.verdicts["cme"]
    assert report.diagnoses == []


def test_cme_su2_exact():
    model = su2_model()
    report = check_cme(build_bv_action(model), model)
    assert report.verdicts["cme"]


def test_cme_broken_representation_diagnosed():
    model = su2_model()
    # flip the sign of rho_1: no longer a representation by vector fields
    broken_rho = [[[-v for v in row] for row in model.rho[0]]] + model.rho[1:]
    broken = GaugeModel(3, 3, model.C, broken_rho, model.S0, name="broken")
    S = build_bv_action(broken)
    report = check_cme(S, broken)
    assert not report.verdicts["cme"]
    assert DIAG_NOT_HOMOMORPHISM in report.diagnoses


def test_cme_noninvariant_diagnosed():
    model = noninvariant_model()
    report = check_cme(build_bv_action(model), model)
    assert not report.verdicts["cme"]
    assert DIAG_NOT_INVARIANT in report.diagnoses


def test_cme_jacobi_failure_diagnosed():
    # [e1,e2] = e2, [e1,e3] = e3, [e2,e3] = e1 violates Jacobi:
    # the (e1,e2,e3) Jacobiator is -2 e1
    C = {}
    for (a, b, g), v in ((1, 2, 2), 1), ((1, 3, 3), 1), ((2, 3, 1), 1):
        C[(a, b, g)] = v
        C[(b, a, g)] = -v
    zero3 = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    ctx = Context(3, 3)
    model = GaugeModel(3, 3, C, zero3, Superfunction.zero(ctx), name="nonjacobi")
    hyp = check_theorem_hypotheses(model)
    assert not hyp.verdicts["jacobi"]
    report = check_cme(build_bv_action(model), model)
    assert not report.verdicts["cme"]
    assert DIAG_JACOBI in report.diagnoses


# -- quantum master equation -------------------------------------------------


def test_qme_su2_holds_exactly():
    model = su2_model()
    S = build_bv_action(model)
    report = check_qme(S, model)
    assert report.verdicts["cme"]
    assert report.verdicts["delta"]
    assert report.verdicts["qme"]
    assert report.verdicts["qme_exp_convention"]
    assert report.passed
    assert report.diagnoses == []


def test_qme_abelian_holds():
    model = abelian_model()
    report = check_qme(build_bv_action(model), model)
    assert report.passed


def test_qme_nonunimodular_fails_with_diagnosis():
    model = nonunimodular_model()
    S = build_bv_action(model)
    report = check_qme(S, model)
    assert not report.passed
    assert DIAG_NOT_UNIMODULAR in report.diagnoses
    # Delta S is exactly -2 * C^b_ab c^a = -2 c1 for this algebra
    ctx = model.ctx
    expected = Superfunction.generator(ctx, ctx.ghost(1)).scaled(-2)
    assert report.residuals["delta"] == expected
    # and Delta S_E alone is -c1 (the unimodularity trace)
    assert bv_delta(build_s_e(model)) == Superfunction.generator(ctx, ctx.ghost(1)).scaled(-1)


# -- theorem hypotheses --------------------------------------------------------


def test_hypotheses_su2_all_pass():
    report = check_theorem_hypotheses(su2_model())
    assert report.passed
    assert list(report.verdicts) == [
        "measure_preservation",
        "unimodularity",
        "invariance",
        "homomorphism",
        "jacobi",
    ]


def test_hypotheses_nonunimodular():
    report = check_theorem_hypotheses(nonunimodular_model())
    assert not report.verdicts["unimodularity"]
    # residual is C^b_{1b} c^1 = c1
    ctx = nonunimodular_model().ctx
    assert report.residuals["unimodularity"] == Superfunction.generator(ctx, ctx.ghost(1))
    # the adjoint representation also fails measure preservation (tr ad != 0)
    assert not report.verdicts["measure_preservation"]
    assert DIAG_NOT_UNIMODULAR in report.diagnoses


def test_hypotheses_trivial_rho():
    ctx = Context(2, 1)
    S0 = parse_superfunction("x1^2 + (3)*x2^2", ctx)
    model = GaugeModel(2, 1, {}, [[[0, 0], [0, 0]]], S0, name="trivial")
    report = check_theorem_hypotheses(model)
    assert report.verdicts["measure_preservation"]
    assert report.verdicts["invariance"]
    assert report.verdicts["homomorphism"]


def test_catalog_equivalences():
    # {S,S} = 0 <=> invariance, homomorphism and Jacobi all hold;
    # Delta S = 0 <=> measure preservation and unimodularity both hold
    for model in model_catalog():
        S = build_bv_action(model)
        hyp = check_theorem_hypotheses(model)
        cme_zero = schouten_bracket(S, S).is_zero()
        assert cme_zero == (
            hyp.verdicts["invariance"]
            and hyp.verdicts["homomorphism"]
            and hyp.verdicts["jacobi"]
        ), model.name
        delta_zero = bv_delta(S).is_zero()
        assert delta_zero == (
            hyp.verdicts["measure_preservation"] and hyp.verdicts["unimodularity"]
        ), model.name


# -- exponential expansion ------------------------------------------------------


def test_exp_check_simple_action_against_oracle():
    # an even, c-free test action; check n = 2 by independent expansion
    # (x1*xs1 alone is odd, and the power-rule identity needs an even S)
    ctx = Context(2, 1)
    S = parse_superfunction("x1*xs1*x2*xs2 + x1^2", ctx)
    delta, br = oracle_ops(2, 1)
    S_o = to_oracle(S)
    S2_o = S_o * S_o
    lhs = delta(S2_o)
    rhs = 2 * (S_o * delta(S_o)) + br(S_o, S_o)
    assert (lhs - rhs).is_zero()
    report = exp_check(S, 4)
    assert report.passed


def test_exp_check_su2():
    S = build_bv_action(su2_model())
    report = exp_check(S, 6)
    assert report.passed
    assert [n for n, ok in report.power_verdicts if ok] == [1, 2, 3, 4, 5, 6]


def test_exp_check_random_even_actions():
    rng = random.Random(77)
    ctx = Context(2, 2)
    for _ in range(25):
        S = random_superfunction(ctx, rng, 3, parity=0)
        assert exp_check(S, 4).passed


def test_exp_check_preconditions():
    ctx = Context(1, 0)
    S = parse_superfunction("x1^2", ctx)
    with pytest.raises(ContractViolation):
        exp_check(S, 1)
    odd = parse_superfunction("xs1", ctx)
    with pytest.raises(ContractViolation):
        exp_check(odd, 3)


# -- observables ------------------------------------------------------------------


def test_constants_are_observables():
    S = build_bv_action(su2_model())
    one = Superfunction.constant(S.ctx, 1)
    assert quantum_differential(S, one).is_zero()


def test_su2_radial_invariant_is_observable():
    model = su2_model()
    S = build_bv_action(model)
    ctx = model.ctx
    F = Superfunction.zero(ctx)
    for i in (1, 2, 3):
        xi = Superfunction.generator(ctx, ctx.field(i))
        F = F + xi * xi
    assert bv_delta(F).is_zero()
    assert check_observable(S, F)


def test_su2_coordinate_is_not_observable():
    model = su2_model()
    S = build_bv_action(model)
    F = Superfunction.generator(model.ctx, model.ctx.field(1))
    assert not check_observable(S, F)
    assert not quantum_differential(S, F).is_zero()


def test_quantum_differential_squares_to_zero_on_strong_solution():
    model = su2_model()
    S = build_bv_action(model)
    assert bv_delta(S).is_zero() and schouten_bracket(S, S).is_zero()
    rng = random.Random(101)
    for _ in range(60):
        F = random_superfunction(model.ctx, rng, 3)
        assert quantum_differential(S, quantum_differential(S, F)).is_zero()


# -- model files -------------------------------------------------------------------


def test_model_files_match_catalog():
    for model in model_catalog():
        loaded = load_model(MODELS_DIR / f"{model.name}.model")
        assert loaded.n == model.n and loaded.m == model.m
        assert loaded.C == model.C
        assert loaded.rho == model.rho
        assert loaded.S0 == model.S0
        assert build_bv_action(loaded) == build_bv_action(model)


def test_parse_model_rejects_non_antisymmetric_c():
    text = "n 2\nm 2\nC 1 2 2 1\nS0 x1^2\n"
    with pytest.raises(ParseError) as err:
        parse_model(text)
    assert "antisymmetric" in str(err.value)


def test_parse_model_diagnostics_carry_line_numbers():
    text = "n 2\nm 1\nC 1 1 oops 1\n"
    with pytest.raises(ParseError) as err:
        parse_model(text)
    assert "line 3" in str(err.value)
