"""The coordinate BV Laplacian, the Schouten-Nijenhuis bracket, the twisted
Laplacian, and randomized verifiers for the odd-Poisson/BV-algebra identities.

Sign conventions (frozen; see the generated sign-convention appendix):

  * the Laplacian differentiates from the left in every conjugate pair and
    carries a minus sign on the ghost sector,
        Delta = sum_i dL/dx_i dL/dxs_i - sum_a dL/dc_a dL/dcs_a,
    so Delta(x1*xs1) = +1 and Delta(c1*cs1) = -1;
  * the bracket applies the right derivative to its first argument and the
    left derivative to its second,
        {F,G} = sum (dR F/du)(dL G/dus) - (dR F/dus)(dL G/du),
    summed over both field and ghost conjugate pairs, so {x1,xs1} = +1.

This is the unique side/sign assignment (verified by exhaustive enumeration
against a brute-force oracle) under which the product rule

    Delta(fg) = (Delta f) g + (-1)^|f| f (Delta g) + (-1)^|f| {f,g}

holds exactly together with Delta(x1*xs1) = +1.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .coefficients import Coefficient
from .context import Context, Generator
from .errors import ContractViolation
from .superfunction import (
    Superfunction,
    left_derivative,
    monomial_parity,
    right_derivative,
)
from .textio import format_superfunction


def bv_delta(F: Superfunction) -> Superfunction:
    """Coordinate BV Laplacian: field pairs minus ghost pairs."""
    ctx = F.ctx
    out = Superfunction.zero(ctx)
    for i in range(1, ctx.n_fields + 1):
        out = out + right_derivative(
            left_derivative(F, ctx.antifield(i)), ctx.field(i)
        )
    for a in range(1, ctx.n_ghosts + 1):
        out = out - left_derivative(
            right_derivative(F, ctx.antighost(a)), ctx.ghost(a)
        )
    return out


def schouten_bracket(F: Superfunction, G: Superfunction) -> Superfunction:
    """Odd Poisson bracket {F,G} over all conjugate pairs."""
    if F.ctx != G.ctx:
        raise ContractViolation("bracket arguments built over different contexts")
    ctx = F.ctx
    out = Superfunction.zero(ctx)
    for base, fiber in ctx.conjugate_pairs():
        dF_base = right_derivative(F, base)
        if not dF_base.is_zero():
            dG_fiber = left_derivative(G, fiber)
            if not dG_fiber.is_zero():
                out = out + dF_base * dG_fiber
        dF_fiber = right_derivative(F, fiber)
        if not dF_fiber.is_zero():
            dG_base = left_derivative(G, base)
            if not dG_base.is_zero():
                out = out - dF_fiber * dG_base
    return out


def bv_delta_omega(F: Superfunction, f: Superfunction) -> Superfunction:
    """Twisted Laplacian for the volume form e^f Omega_0: Delta F + {f, F}.

    f must be even and depend on the base coordinates only.
    """
    if F.ctx != f.ctx:
        raise ContractViolation("twist function built over a different context")
    if not f.is_zero():
        if f.parity() != 0:
            raise ContractViolation("twist function must be even")
        if f.contains_kind("xs") or f.contains_kind("cs") or f.contains_kind("c"):
            raise ContractViolation(
                "twist function must depend on the base coordinates only"
            )
    return bv_delta(F) + schouten_bracket(f, F)


# -- randomized identity verification ---------------------------------

_COEFF_POOL = (
    Coefficient.rational(1),
    Coefficient.rational(-1),
    Coefficient.rational(2),
    Coefficient.rational(Fraction(1, 2)),
    Coefficient.rational(-3),
    Coefficient.gauss(0, 1),
    Coefficient.gauss(1, 1),
    Coefficient.gauss(0, Fraction(-1, 2)),
)


def random_superfunction(
    ctx: Context,
    rng: random.Random,
    degree_bound: int = 4,
    max_terms: int = 3,
    parity=None,
    coeff_pool=_COEFF_POOL,
) -> Superfunction:
    """Seeded random superfunction: monomials of total degree <= degree_bound,
    odd generators included with probability 1/2, small exact coefficients.

    With parity=0 or 1 the result is projected onto that parity (and is
    resampled until nonzero).
    """
    evens = [g for g in ctx.generators() if g.parity == 0]
    odds = [g for g in ctx.generators() if g.parity == 1]
    while True:
        total = Superfunction.zero(ctx)
        for _ in range(rng.randint(1, max_terms)):
            picked = []
            for g in odds:
                if rng.random() < 0.5:
                    picked.append(g)
            degree = len(picked)
            factors = list(picked)
            for g in evens:
                k = rng.choice((0, 0, 0, 1, 1, 2))
                k = min(k, max(0, degree_bound - degree))
                degree += k
                factors.extend([g] * k)
            while degree > degree_bound and factors:
                factors.pop(rng.randrange(len(factors)))
                degree -= 1
            term = Superfunction.constant(ctx, rng.choice(coeff_pool))
            for g in factors:
                term = term * Superfunction.generator(ctx, g)
            total = total + term
        if parity is not None:
            total = total.parity_component(parity)
        if not total.is_zero():
            return total
        # resample on the (rare) exact cancellation or empty projection


@dataclass
class IdentityReport:
    """Result of one randomized identity check."""

    name: str
    trials: int
    seed: int
    counterexamples: list = field(default_factory=list)
    residual_text: str = "0"

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    @property
    def residual(self) -> str:
        return "zero" if self.passed else "nonzero"

    def structured_lines(self) -> list[str]:
        lines = [
            f"identity={self.name}",
            f"status={'pass' if self.passed else 'FAIL'}",
            f"trials={self.trials}",
            f"seed={self.seed}",
            f"residual={self.residual}",
        ]
        for inputs in self.counterexamples:
            for label, text in inputs:
                lines.append(f"counterexample.{label}={text}")
        if not self.passed:
            lines.append(f"counterexample.residual={self.residual_text}")
        return lines

    def human_lines(self) -> list[str]:
        status = "pass" if self.passed else "FAIL"
        lines = [f"{self.name}: {status} ({self.trials} trials, seed {self.seed})"]
        for inputs in self.counterexamples:
            pieces = ", ".join(f"{label} = {text}" for label, text in inputs)
            lines.append(f"  counterexample: {pieces}")
        if not self.passed:
            lines.append(f"  residual: {self.residual_text}")
        return lines


def _sign(p: int) -> int:
    return -1 if p % 2 else 1


def verify_identities(
    seed: int,
    trials: int,
    degree_bound: int = 4,
    ctx: Context | None = None,
    delta_op=None,
    max_counterexamples: int = 3,
) -> list[IdentityReport]:
    """Exact randomized checks of the six BV-algebra identities.

    (a) Delta^2 = 0
    (b) product rule with the bracket correction term
    (c) graded antisymmetry of the bracket
    (d) graded Jacobi identity
    (e) graded Leibniz rule of {F,-} over the product
    (f) Delta-bracket compatibility

    delta_op replaces the Laplacian (used by mutation tests); trials must
    be >= 1.
    """
    if trials < 1:
        raise ContractViolation("trials must be >= 1")
    if ctx is None:
        ctx = Context(2, 1)
    delta = delta_op or bv_delta

    reports = {
        key: IdentityReport(name, trials, seed)
        for key, name in (
            ("a", "delta_nilpotency"),
            ("b", "delta_product_rule"),
            ("c", "bracket_antisymmetry"),
            ("d", "bracket_jacobi"),
            ("e", "bracket_leibniz"),
            ("f", "delta_bracket_compatibility"),
        )
    }

    def record(key, residual, inputs):
        rep = reports[key]
        if len(rep.counterexamples) < max_counterexamples:
            rep.counterexamples.append(
                [(label, format_superfunction(v)) for label, v in inputs]
            )
            if len(rep.counterexamples) == 1:
                rep.residual_text = format_superfunction(residual)

    rng = random.Random(seed)
    for _ in range(trials):
        F = random_superfunction(ctx, rng, degree_bound)
        G = random_superfunction(ctx, rng, degree_bound)
        H = random_superfunction(ctx, rng, degree_bound)
        f = random_superfunction(ctx, rng, degree_bound, parity=rng.getrandbits(1))
        g = random_superfunction(ctx, rng, degree_bound, parity=rng.getrandbits(1))
        h = random_superfunction(ctx, rng, degree_bound, parity=rng.getrandbits(1))
        pf, pg, ph = f.parity(), g.parity(), h.parity()

        # (a) nilpotency
        r = delta(delta(F))
        if not r.is_zero():
            record("a", r, [("F", F)])

        # (b) product rule on parity-homogeneous f
        r = (
            delta(f * g)
            - delta(f) * g
            - _sign(pf) * (f * delta(g))
            - _sign(pf) * schouten_bracket(f, g)
        )
        if not r.is_zero():
            record("b", r, [("f", f), ("g", g)])

        # (c) antisymmetry {f,g} = -(-1)^((|f|+1)(|g|+1)) {g,f}
        r = schouten_bracket(f, g) + _sign((pf + 1) * (pg + 1)) * schouten_bracket(g, f)
        if not r.is_zero():
            record("c", r, [("f", f), ("g", g)])

        # (d) Jacobi: (-1)^((|f|+1)(|h|+1)) {f,{g,h}} + cyclic = 0
        r = (
            _sign((pf + 1) * (ph + 1))
            * schouten_bracket(f, schouten_bracket(g, h))
            + _sign((pg + 1) * (pf + 1))
            * schouten_bracket(g, schouten_bracket(h, f))
            + _sign((ph + 1) * (pg + 1))
            * schouten_bracket(h, schouten_bracket(f, g))
        )
        if not r.is_zero():
            record("d", r, [("f", f), ("g", g), ("h", h)])

        # (e) Leibniz: {f, gh} = {f,g} h + (-1)^((|f|+1)|g|) g {f,h}
        r = (
            schouten_bracket(f, g * h)
            - schouten_bracket(f, g) * h
            - _sign((pf + 1) * pg) * (g * schouten_bracket(f, h))
        )
        if not r.is_zero():
            record("e", r, [("f", f), ("g", g), ("h", h)])

        # (f) compatibility: Delta{f,g} = {Delta f, g} + (-1)^(|f|+1) {f, Delta g}
        r = (
            delta(schouten_bracket(f, g))
            - schouten_bracket(delta(f), g)
            - _sign(pf + 1) * schouten_bracket(f, delta(g))
        )
        if not r.is_zero():
            record("f", r, [("f", f), ("g", g)])

    return [reports[k] for k in "abcdef"]


# -- perturbed Laplacians for the uniqueness (negative) checks ---------


def perturbed_delta_b(ctx: Context, i: int = 1):
    """Delta plus a first-order term d/dxs_i (breaks the product rule)."""

    def op(F: Superfunction) -> Superfunction:
        return bv_delta(F) + right_derivative(F, ctx.antifield(i))

    return op


def perturbed_delta_c(ctx: Context, i: int = 1, j: int = 2, k: int = 1):
    """Delta plus a term xs_k d/dxs_i d/dxs_j (breaks the product rule)."""

    def op(F: Superfunction) -> Superfunction:
        extra = right_derivative(right_derivative(F, ctx.antifield(i)), ctx.antifield(j))
        return bv_delta(F) + Superfunction.generator(ctx, ctx.antifield(k)) * extra

    return op


def mutated_delta_sign_flip(F: Superfunction) -> Superfunction:
    """Deliberately wrong Laplacian (ghost sector sign flipped); used by the
    mutation tests to show the product-rule check catches it."""
    ctx = F.ctx
    out = Superfunction.zero(ctx)
    for i in range(1, ctx.n_fields + 1):
        out = out + right_derivative(
            left_derivative(F, ctx.antifield(i)), ctx.field(i)
        )
    for a in range(1, ctx.n_ghosts + 1):
        out = out + left_derivative(
            right_derivative(F, ctx.antighost(a)), ctx.ghost(a)
        )
    return out


# -- the sign-convention appendix --------------------------------------


def sign_convention_appendix() -> str:
    """Render the resolved primitive signs as a reproducible text block.

    Everything here is computed by the engine itself, so the appendix stays
    true by construction; the frozen copy lives under tests/data/.
    """
    ctx = Context(2, 1)
    x1 = Superfunction.generator(ctx, ctx.field(1))
    xs1 = Superfunction.generator(ctx, ctx.antifield(1))
    xs2 = Superfunction.generator(ctx, ctx.antifield(2))
    c1 = Superfunction.generator(ctx, ctx.ghost(1))
    cs1 = Superfunction.generator(ctx, ctx.antighost(1))
    lines = [
        "sign-convention appendix (computed by bvcalc)",
        "",
        "derivatives:",
        "  right derivative strips its generator from the rightmost position;",
        "  left derivative = (-1)^(|g|(|F|+1)) * right derivative.",
        "",
        "laplacian: left derivatives, minus sign on the ghost sector",
        f"  delta(x1*xs1) = {format_superfunction(bv_delta(x1 * xs1))}",
        f"  delta(c1*cs1) = {format_superfunction(bv_delta(c1 * cs1))}",
        "",
        "bracket: right derivative on the first slot, left on the second",
        f"  {{x1,xs1}} = {format_superfunction(schouten_bracket(x1, xs1))}",
        f"  {{xs1,x1}} = {format_superfunction(schouten_bracket(xs1, x1))}",
        f"  {{c1,cs1}} = {format_superfunction(schouten_bracket(c1, cs1))}",
        f"  {{cs1,c1}} = {format_superfunction(schouten_bracket(cs1, c1))}",
        f"  {{xs1,xs2}} = {format_superfunction(schouten_bracket(xs1, xs2))}",
        "",
        "bv action: S = S0 - 1/2 c^a c^b C^g_ab cs_g + rho^i_aj x^j c^a xs_i",
        "  (the -1/2 on the structure-constant term is forced by {S,S} = 0",
        "   for a representation by linear vector fields)",
        "",
        "shift isomorphism: d_i1 ^ ... ^ d_ip  ->  xs_i1 * ... * xs_ip",
        "  (plain order; intertwines the wedge with the product exactly and",
        "   the geometric with the coordinate laplacian exactly)",
        "",
        "contraction: rightmost wedge factor contracts first, so",
        "  (d1 ^ d2) _| (dx1 ^ dx2) = -1",
    ]
    return "\n".join(lines) + "\n"
