"""Gauge models: BV action construction, master-equation checks, theorem
hypothesis checks, the exponential-expansion check, and the observable
differential.

A model is a linear gauge theory: a Lie algebra given by structure constants
C^g_ab acting on the bosonic field space through matrices rho_a, read as the
linear vector fields rho(e_a) = rho^i_aj x^j d/dx^i, plus an invariant action
S0(x). The BV action is

    S = S0 - 1/2 c^a c^b C^g_ab cs_g + rho^i_aj x^j c^a xs_i.

The -1/2 normalization of the structure-constant term is forced by the exact
classical master equation for a representation by vector fields (commutators
of linear vector fields reverse the matrix commutator, so the homomorphism
condition reads [rho_a, rho_b] = -C^g_ab rho_g on matrices).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .coefficients import Coefficient
from .context import Context
from .errors import ContractViolation, ParseError
from .operators import bv_delta, schouten_bracket
from .superfunction import Superfunction, right_derivative
from .textio import format_superfunction, parse_superfunction

DIAG_NOT_INVARIANT = "S0 not invariant"
DIAG_NOT_HOMOMORPHISM = "rho not a homomorphism"
DIAG_JACOBI = "Jacobi fails for C"
DIAG_NOT_UNIMODULAR = "not unimodular"
DIAG_NOT_MEASURE_PRESERVING = "not measure-preserving"
DIAG_OPEN_ALGEBRA = "open gauge algebra"


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class GaugeModel:
    """Structure constants, representation matrices and invariant action."""

    def __init__(self, n: int, m: int, structure_constants, rho, S0: Superfunction,
                 name: str = "model"):
        self.n = n
        self.m = m
        self.name = name
        # structure_constants: mapping (alpha, beta, gamma) -> Fraction, sparse
        self.C = {}
        for (a, b, g), v in dict(structure_constants).items():
            v = _frac(v)
            if v:
                self.C[(a, b, g)] = v
        # rho: list of m matrices, each n x n nested lists (rho[a][i][j])
        self.rho = [
            [[_frac(v) for v in row] for row in mat] for mat in rho
        ]
        self.S0 = S0
        self._validate()

    @property
    def ctx(self) -> Context:
        return self.S0.ctx

    def _validate(self):
        if self.n < 0 or self.m < 0:
            raise ContractViolation("model dimensions must be non-negative")
        if len(self.rho) != self.m:
            raise ContractViolation(
                f"expected {self.m} representation matrices, got {len(self.rho)}"
            )
        for a, mat in enumerate(self.rho, start=1):
            if len(mat) != self.n or any(len(row) != self.n for row in mat):
                raise ContractViolation(f"rho[{a}] is not {self.n}x{self.n}")
        for (a, b, g), v in self.C.items():
            for idx in (a, b):
                if not 1 <= idx <= self.m:
                    raise ContractViolation(f"structure constant index {idx} out of range")
            if not 1 <= g <= self.m:
                raise ContractViolation(f"structure constant index {g} out of range")
            if self.C.get((b, a, g), Fraction(0)) != -v:
                raise ContractViolation(
                    f"structure constants not antisymmetric: C[{a},{b},{g}] = {v} "
                    f"but C[{b},{a},{g}] = {self.C.get((b, a, g), Fraction(0))}"
                )
        ctx = self.S0.ctx
        if ctx.n_fields != self.n or ctx.n_ghosts != self.m:
            raise ContractViolation(
                f"S0 context {ctx} does not match model dimensions "
                f"(n={self.n}, m={self.m})"
            )
        if not self.S0.is_zero():
            if (
                self.S0.contains_kind("c")
                or self.S0.contains_kind("xs")
                or self.S0.contains_kind("cs")
            ):
                raise ContractViolation("S0 must depend on the fields only")
            if self.S0.ghost_degree() != 0 or self.S0.parity() != 0:
                raise ContractViolation("S0 must be even of ghost degree 0")

    def c_value(self, a, b, g) -> Fraction:
        return self.C.get((a, b, g), Fraction(0))

    def rho_value(self, a, i, j) -> Fraction:
        return self.rho[a - 1][i - 1][j - 1]

    def rho_vector_field_applied(self, a: int, F: Superfunction) -> Superfunction:
        """rho(e_a) F = rho^i_aj x^j dF/dx^i for a fields-only F."""
        ctx = self.ctx
        out = Superfunction.zero(ctx)
        for i in range(1, self.n + 1):
            dF = right_derivative(F, ctx.field(i))
            if dF.is_zero():
                continue
            for j in range(1, self.n + 1):
                v = self.rho_value(a, i, j)
                if v:
                    out = out + (Superfunction.generator(ctx, ctx.field(j)) * dF).scaled(v)
        return out


# -- BV action construction ---------------------------------------------


def build_s_r(model: GaugeModel) -> Superfunction:
    """rho^i_aj x^j c^a xs_i."""
    ctx = model.ctx
    out = Superfunction.zero(ctx)
    for a in range(1, model.m + 1):
        for i in range(1, model.n + 1):
            for j in range(1, model.n + 1):
                v = model.rho_value(a, i, j)
                if v:
                    term = (
                        Superfunction.generator(ctx, ctx.field(j))
                        * Superfunction.generator(ctx, ctx.ghost(a))
                        * Superfunction.generator(ctx, ctx.antifield(i))
                    ).scaled(v)
                    out = out + term
    return out


def build_s_e(model: GaugeModel) -> Superfunction:
    """-1/2 c^a c^b C^g_ab cs_g."""
    ctx = model.ctx
    out = Superfunction.zero(ctx)
    half = Fraction(-1, 2)
    for (a, b, g), v in sorted(model.C.items()):
        term = (
            Superfunction.generator(ctx, ctx.ghost(a))
            * Superfunction.generator(ctx, ctx.ghost(b))
            * Superfunction.generator(ctx, ctx.antighost(g))
        ).scaled(v * half)
        out = out + term
    return out


def build_bv_action(model: GaugeModel) -> Superfunction:
    """S = S0 + S_E + S_R; even, with every monomial of ghost degree 0."""
    return model.S0 + build_s_e(model) + build_s_r(model)


# -- reports -------------------------------------------------------------


@dataclass
class MasterEquationReport:
    """Residual superfunctions with verdicts and a failed-hypothesis diagnosis."""

    model_name: str
    residuals: dict = field(default_factory=dict)  # name -> Superfunction
    verdicts: dict = field(default_factory=dict)   # name -> bool
    diagnoses: list = field(default_factory=list)

    def set_residual(self, name: str, value: Superfunction):
        self.residuals[name] = value
        self.verdicts[name] = value.is_zero()

    @property
    def passed(self) -> bool:
        return all(self.verdicts.values())

    def structured_lines(self) -> list[str]:
        lines = [f"model={self.model_name}"]
        for name in self.residuals:
            lines.append(f"verdict.{name}={'pass' if self.verdicts[name] else 'FAIL'}")
            lines.append(f"residual.{name}={format_superfunction(self.residuals[name])}")
        for d in self.diagnoses:
            lines.append(f"diagnosis={d}")
        return lines

    def human_lines(self) -> list[str]:
        lines = []
        for name in self.residuals:
            status = "= 0" if self.verdicts[name] else "NONZERO"
            lines.append(f"  {name}: {status}")
            if not self.verdicts[name]:
                lines.append(f"    residual: {format_superfunction(self.residuals[name])}")
        for d in self.diagnoses:
            lines.append(f"  diagnosis: {d}")
        return lines


def _diagnose_cme_residual(residual: Superfunction) -> list[str]:
    """Classify {S,S} residual monomials by their antifield content."""
    diagnoses = []
    for (evens, odds), _ in residual.terms():
        kinds = [g[0] for g, _ in evens] + [g[0] for g in odds]
        n_antifields = kinds.count("xs")
        if "cs" in kinds:
            tag = DIAG_JACOBI
        elif n_antifields >= 2:
            tag = DIAG_OPEN_ALGEBRA
        elif n_antifields == 1:
            tag = DIAG_NOT_HOMOMORPHISM
        else:
            tag = DIAG_NOT_INVARIANT
        if tag not in diagnoses:
            diagnoses.append(tag)
    return diagnoses


def check_cme(S: Superfunction, model: GaugeModel | None = None) -> MasterEquationReport:
    """Classical master equation {S,S} = 0, with residual diagnosis."""
    if S.parity() not in (0, None) and not S.is_zero():
        raise ContractViolation("the action must be even")
    report = MasterEquationReport(model.name if model else "action")
    residual = schouten_bracket(S, S)
    report.set_residual("cme", residual)
    if not residual.is_zero():
        report.diagnoses.extend(_diagnose_cme_residual(residual))
    return report


def check_qme(S: Superfunction, model: GaugeModel | None = None) -> MasterEquationReport:
    """Quantum master equation.

    Reports {S,S} and Delta S separately, plus both normalizations of the
    combined residual: the printed form {S,S} - i h Delta S and the form the
    exponential expansion actually produces, {S,S} - 2 i h Delta S. The
    verdict requires both to vanish, so the factor-two convention question
    never affects it.
    """
    if S.parity() not in (0, None) and not S.is_zero():
        raise ContractViolation("the action must be even")
    report = MasterEquationReport(model.name if model else "action")
    bracket = schouten_bracket(S, S)
    delta = bv_delta(S)
    ih = Coefficient.gauss(0, 1, h_power=1)
    report.set_residual("cme", bracket)
    report.set_residual("delta", delta)
    report.set_residual("qme", bracket - delta.scaled(ih))
    report.set_residual("qme_exp_convention", bracket - delta.scaled(ih * 2))
    if not bracket.is_zero():
        report.diagnoses.extend(_diagnose_cme_residual(bracket))
    if not delta.is_zero():
        if model is not None:
            if not bv_delta(build_s_e(model)).is_zero():
                report.diagnoses.append(DIAG_NOT_UNIMODULAR)
            if not bv_delta(build_s_r(model)).is_zero():
                report.diagnoses.append(DIAG_NOT_MEASURE_PRESERVING)
        else:
            report.diagnoses.append("Delta S nonzero")
    return report


def check_theorem_hypotheses(model: GaugeModel) -> MasterEquationReport:
    """The five hypotheses behind the non-anomalous BV action:

    (i)   tr rho_a = 0 (the linear action preserves the canonical measure)
    (ii)  C^b_ab = 0 (unimodularity)
    (iii) rho(e_a) S0 = 0 (invariance of the action)
    (iv)  [rho_a, rho_b] = -C^g_ab rho_g (representation by vector fields)
    (v)   the Jacobi identity for C

    Each residual is embedded as a superfunction so the report invariant
    (verdict <=> zero residual) holds uniformly.
    """
    ctx = model.ctx
    report = MasterEquationReport(model.name)
    zero = Superfunction.zero(ctx)

    # (i) traces as sum tr(rho_a) c^a
    res = zero
    for a in range(1, model.m + 1):
        tr = sum(model.rho_value(a, i, i) for i in range(1, model.n + 1))
        if tr:
            res = res + Superfunction.generator(ctx, ctx.ghost(a)).scaled(tr)
    report.set_residual("measure_preservation", res)
    if not res.is_zero():
        report.diagnoses.append(DIAG_NOT_MEASURE_PRESERVING)

    # (ii) unimodularity traces as sum C^b_ab c^a
    res = zero
    for a in range(1, model.m + 1):
        u = sum(model.c_value(a, b, b) for b in range(1, model.m + 1))
        if u:
            res = res + Superfunction.generator(ctx, ctx.ghost(a)).scaled(u)
    report.set_residual("unimodularity", res)
    if not res.is_zero():
        report.diagnoses.append(DIAG_NOT_UNIMODULAR)

    # (iii) invariance as sum (rho(e_a) S0) c^a
    res = zero
    for a in range(1, model.m + 1):
        acted = model.rho_vector_field_applied(a, model.S0)
        if not acted.is_zero():
            res = res + acted * Superfunction.generator(ctx, ctx.ghost(a))
    report.set_residual("invariance", res)
    if not res.is_zero():
        report.diagnoses.append(DIAG_NOT_INVARIANT)

    # (iv) homomorphism residual [rho_a, rho_b] + C^g_ab rho_g, embedded as
    # sum over a<b of (M_ab)^m_n x^n c^a c^b xs_m
    res = zero
    for a in range(1, model.m + 1):
        for b in range(a + 1, model.m + 1):
            for mm in range(1, model.n + 1):
                for nn in range(1, model.n + 1):
                    comm = sum(
                        model.rho_value(a, mm, k) * model.rho_value(b, k, nn)
                        - model.rho_value(b, mm, k) * model.rho_value(a, k, nn)
                        for k in range(1, model.n + 1)
                    )
                    lin = sum(
                        model.c_value(a, b, g) * model.rho_value(g, mm, nn)
                        for g in range(1, model.m + 1)
                    )
                    v = comm + lin
                    if v:
                        term = (
                            Superfunction.generator(ctx, ctx.field(nn))
                            * Superfunction.generator(ctx, ctx.ghost(a))
                            * Superfunction.generator(ctx, ctx.ghost(b))
                            * Superfunction.generator(ctx, ctx.antifield(mm))
                        ).scaled(v)
                        res = res + term
    report.set_residual("homomorphism", res)
    if not res.is_zero():
        report.diagnoses.append(DIAG_NOT_HOMOMORPHISM)

    # (v) Jacobi residual embedded as sum over a<b<g of J^e c^a c^b c^g cs_e
    res = zero
    for a in range(1, model.m + 1):
        for b in range(a + 1, model.m + 1):
            for g in range(b + 1, model.m + 1):
                for e in range(1, model.m + 1):
                    j = sum(
                        model.c_value(b, g, d) * model.c_value(a, d, e)
                        + model.c_value(g, a, d) * model.c_value(b, d, e)
                        + model.c_value(a, b, d) * model.c_value(g, d, e)
                        for d in range(1, model.m + 1)
                    )
                    if j:
                        term = (
                            Superfunction.generator(ctx, ctx.ghost(a))
                            * Superfunction.generator(ctx, ctx.ghost(b))
                            * Superfunction.generator(ctx, ctx.ghost(g))
                            * Superfunction.generator(ctx, ctx.antighost(e))
                        ).scaled(j)
                        res = res + term
    report.set_residual("jacobi", res)
    if not res.is_zero():
        report.diagnoses.append(DIAG_JACOBI)

    return report


# -- exponential expansion check -----------------------------------------


@dataclass
class ExpansionReport:
    """Exact verification of Delta S^n = n S^(n-1) Delta S + n(n-1)/2 S^(n-2) {S,S}
    and of the truncated-exponential identity that ties the master equation to
    Delta e^(iS/h) = 0."""

    order: int
    power_verdicts: list
    truncation_verdict: bool

    @property
    def passed(self) -> bool:
        return self.truncation_verdict and all(ok for _, ok in self.power_verdicts)

    def structured_lines(self) -> list[str]:
        lines = []
        for n, ok in self.power_verdicts:
            lines.append(f"verdict.power_rule.n{n}={'pass' if ok else 'FAIL'}")
        lines.append(
            f"verdict.exp_truncation={'pass' if self.truncation_verdict else 'FAIL'}"
        )
        return lines

    def human_lines(self) -> list[str]:
        ns = ", ".join(str(n) for n, ok in self.power_verdicts if ok)
        lines = [f"  power rule exact for n = {ns}" if ns else "  power rule: none passed"]
        bad = [str(n) for n, ok in self.power_verdicts if not ok]
        if bad:
            lines.append(f"  power rule FAILED for n = {', '.join(bad)}")
        lines.append(
            "  truncated exp(iS/h) identity: "
            + ("exact" if self.truncation_verdict else "FAIL")
        )
        return lines


def exp_check(S: Superfunction, order: int) -> ExpansionReport:
    """Check the power-rule identity for n = 1..order on S, and the order-N
    truncation identity

        Delta T_N = (i/h) T_(N-1) Delta S + 1/2 (i/h)^2 T_(N-2) {S,S}

    with T_k the order-k truncation of exp(iS/h). Multiplying through by
    -2 h^2 / (i)^2 shows that Delta e^(iS/h) = 0 corresponds to the
    combination {S,S} - 2 i h Delta S."""
    if order < 2:
        raise ContractViolation("truncation order must be >= 2")
    if S.parity() not in (0, None) and not S.is_zero():
        raise ContractViolation("the action must be even")
    ctx = S.ctx
    dS = bv_delta(S)
    SS = schouten_bracket(S, S)
    powers = [Superfunction.constant(ctx, 1)]
    for _ in range(order):
        powers.append(powers[-1] * S)

    verdicts = []
    for n in range(1, order + 1):
        lhs = bv_delta(powers[n])
        rhs = (powers[n - 1] * dS).scaled(n)
        if n >= 2:
            rhs = rhs + (powers[n - 2] * SS).scaled(Fraction(n * (n - 1), 2))
        verdicts.append((n, lhs == rhs))

    i_over_h = Coefficient.gauss(0, 1, h_power=-1)

    def truncation(k: int) -> Superfunction:
        total = Superfunction.zero(ctx)
        coeff = Coefficient.one()
        for j in range(k + 1):
            total = total + powers[j].scaled(coeff * Fraction(1, factorial(j)))
            coeff = coeff * i_over_h
        return total

    lhs = bv_delta(truncation(order))
    rhs = (truncation(order - 1) * dS).scaled(i_over_h) + (
        truncation(order - 2) * SS
    ).scaled(i_over_h * i_over_h * Fraction(1, 2))
    return ExpansionReport(order, verdicts, lhs == rhs)


# -- observables ----------------------------------------------------------


def quantum_differential(S: Superfunction, F: Superfunction) -> Superfunction:
    """{S,F} - i h Delta F, with h a formal symbol."""
    ih = Coefficient.gauss(0, 1, h_power=1)
    return schouten_bracket(S, F) - bv_delta(F).scaled(ih)


def check_observable(S: Superfunction, F: Superfunction) -> bool:
    return quantum_differential(S, F).is_zero()


# -- model catalog ---------------------------------------------------------


def _eps(i, j, k):
    if (i, j, k) in ((1, 2, 3), (2, 3, 1), (3, 1, 2)):
        return 1
    if (i, j, k) in ((1, 3, 2), (3, 2, 1), (2, 1, 3)):
        return -1
    return 0


def su2_model() -> GaugeModel:
    """Rotations of R^3 with the radial quartic action: all hypotheses hold."""
    ctx = Context(3, 3)
    r2 = Superfunction.zero(ctx)
    for i in (1, 2, 3):
        xi = Superfunction.generator(ctx, ctx.field(i))
        r2 = r2 + xi * xi
    C = {
        (a, b, g): _eps(a, b, g)
        for a in (1, 2, 3)
        for b in (1, 2, 3)
        for g in (1, 2, 3)
        if _eps(a, b, g)
    }
    rho = [
        [[_eps(a, i, j) for j in (1, 2, 3)] for i in (1, 2, 3)] for a in (1, 2, 3)
    ]
    return GaugeModel(3, 3, C, rho, r2 * r2, name="su2")


def abelian_model() -> GaugeModel:
    """Trivial structure constants and trivial action of a 1-dim algebra."""
    ctx = Context(2, 1)
    x1 = Superfunction.generator(ctx, ctx.field(1))
    x2 = Superfunction.generator(ctx, ctx.field(2))
    S0 = x1 * x1 + x2 * x2
    return GaugeModel(2, 1, {}, [[[0, 0], [0, 0]]], S0, name="abelian")


def nonunimodular_model() -> GaugeModel:
    """[e1,e2] = e2 with rho the adjoint representation: the algebra is not
    unimodular, so Delta S_E is proportional to C^b_ab c^a and the QME fails."""
    ctx = Context(2, 2)
    x1 = Superfunction.generator(ctx, ctx.field(1))
    C = {(1, 2, 2): Fraction(1), (2, 1, 2): Fraction(-1)}
    rho = [
        [[0, 0], [0, 1]],   # ad(e1)
        [[0, 0], [-1, 0]],  # ad(e2)
    ]
    return GaugeModel(2, 2, C, rho, x1 * x1, name="nonunimodular")


def noninvariant_model() -> GaugeModel:
    """su(2) rotations with an action that is not rotation invariant."""
    ctx = Context(3, 3)
    x1 = Superfunction.generator(ctx, ctx.field(1))
    x2 = Superfunction.generator(ctx, ctx.field(2))
    C = {
        (a, b, g): _eps(a, b, g)
        for a in (1, 2, 3)
        for b in (1, 2, 3)
        for g in (1, 2, 3)
        if _eps(a, b, g)
    }
    rho = [
        [[_eps(a, i, j) for j in (1, 2, 3)] for i in (1, 2, 3)] for a in (1, 2, 3)
    ]
    return GaugeModel(3, 3, C, rho, x1 * x1 + x2 * x2, name="noninvariant")


def model_catalog() -> list[GaugeModel]:
    return [abelian_model(), su2_model(), nonunimodular_model(), noninvariant_model()]


# -- model file format ------------------------------------------------------
#
# Line-oriented text; '#' starts a comment. Keys:
#   n <int>
#   m <int>
#   C <alpha> <beta> <gamma> <rational>     (both orders must be listed)
#   rho <alpha> <n*n rationals, row-major>
#   S0 <superfunction text over x1..xn>
# Missing C entries are zero; rho defaults to the zero matrix.


def parse_model(text: str, name: str = "model") -> GaugeModel:
    n = m = None
    c_entries = {}
    rho_rows = {}
    s0_text = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split(None, 1)
        key = parts[0]
        rest = parts[1] if len(parts) > 1 else ""
        try:
            if key == "n":
                n = int(rest)
            elif key == "m":
                m = int(rest)
            elif key == "C":
                fields = rest.split()
                if len(fields) != 4:
                    raise ValueError("C expects: alpha beta gamma value")
                a, b, g = (int(v) for v in fields[:3])
                val = Fraction(fields[3])
                if (a, b, g) in c_entries:
                    raise ValueError(f"duplicate C entry for ({a},{b},{g})")
                c_entries[(a, b, g)] = val
            elif key == "rho":
                fields = rest.split()
                a = int(fields[0])
                vals = [Fraction(v) for v in fields[1:]]
                if a in rho_rows:
                    raise ValueError(f"duplicate rho entry for alpha={a}")
                rho_rows[a] = vals
            elif key == "S0":
                s0_text = rest
            else:
                raise ValueError(f"unknown key {key!r}")
        except ParseError:
            raise
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno) from exc
    if n is None or m is None:
        raise ParseError("model file must set both n and m")
    ctx = Context(n, m)
    if s0_text is None:
        S0 = Superfunction.zero(ctx)
    else:
        S0 = parse_superfunction(s0_text, ctx)
    rho = []
    for a in range(1, m + 1):
        vals = rho_rows.get(a)
        if vals is None:
            vals = [Fraction(0)] * (n * n)
        if len(vals) != n * n:
            raise ParseError(f"rho {a} expects {n * n} entries, got {len(vals)}")
        rho.append([vals[i * n : (i + 1) * n] for i in range(n)])
    try:
        return GaugeModel(n, m, c_entries, rho, S0, name=name)
    except ContractViolation as exc:
        raise ParseError(str(exc)) from exc


def load_model(path) -> GaugeModel:
    from pathlib import Path

    p = Path(path)
    return parse_model(p.read_text(), name=p.stem)
