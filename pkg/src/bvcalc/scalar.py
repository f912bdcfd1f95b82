"""Exact symbolic scalar expressions on an open box in R^N.

A ScalarExpr is kept in the normal form

    sum_t  num_t(x) / den_t(x) * exp(s_t(x))

with num, den, s multivariate polynomials over the rationals. The class is
closed under sums, products, integer powers (negative powers need a common
exponential factor) and exact partial differentiation. Zero testing is
decidable: within each group of equal exponential arguments the rational
parts are combined over a common denominator and the numerator is expanded;
exponentials of distinct polynomials are linearly independent over rational
functions, so the expression vanishes iff every group numerator does.

Evaluation computes the polynomial values exactly at rational points and
rounds once per term at the final float conversion.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

from .errors import ContractViolation, NumericError, ParseError


class Poly:
    """Multivariate polynomial over Fraction; terms map exponent tuples to
    coefficients, zero coefficients never stored."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        self.nvars = nvars
        self.terms = terms or {}

    @staticmethod
    def const(nvars: int, value) -> "Poly":
        value = value if isinstance(value, Fraction) else Fraction(value)
        if value == 0:
            return Poly(nvars)
        return Poly(nvars, {(0,) * nvars: value})

    @staticmethod
    def var(nvars: int, index: int) -> "Poly":
        # index is 0-based
        exps = [0] * nvars
        exps[index] = 1
        return Poly(nvars, {tuple(exps): Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return all(all(e == 0 for e in exps) for exps in self.terms)

    def const_value(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def key(self):
        return tuple(sorted(self.terms.items()))

    def __eq__(self, other):
        return (
            isinstance(other, Poly)
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.nvars, self.key()))

    def __add__(self, other: "Poly") -> "Poly":
        out = dict(self.terms)
        for exps, c in other.terms.items():
            s = out.get(exps, Fraction(0)) + c
            if s == 0:
                out.pop(exps, None)
            else:
                out[exps] = s
        return Poly(self.nvars, out)

    def __neg__(self) -> "Poly":
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            f = other if isinstance(other, Fraction) else Fraction(other)
            if f == 0:
                return Poly(self.nvars)
            return Poly(self.nvars, {e: c * f for e, c in self.terms.items()})
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, Fraction(0)) + c1 * c2
                if s == 0:
                    out.pop(e, None)
                else:
                    out[e] = s
        return Poly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ContractViolation("negative power of a bare polynomial")
        out = Poly.const(self.nvars, 1)
        for _ in range(k):
            out = out * self
        return out

    def diff(self, index: int) -> "Poly":
        out = {}
        for exps, c in self.terms.items():
            k = exps[index]
            if k == 0:
                continue
            e = list(exps)
            e[index] = k - 1
            e = tuple(e)
            s = out.get(e, Fraction(0)) + c * k
            if s == 0:
                out.pop(e, None)
            else:
                out[e] = s
        return Poly(self.nvars, out)

    def eval(self, point):
        """Exact when all coordinates are Fraction/int; float otherwise."""
        total = None
        for exps, c in self.terms.items():
            v = c if all(isinstance(p, (int, Fraction)) for p in point) else float(c)
            for p, k in zip(point, exps):
                if k:
                    v = v * p**k
            total = v if total is None else total + v
        if total is None:
            return Fraction(0) if all(isinstance(p, (int, Fraction)) for p in point) else 0.0
        return total

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def leading_coefficient(self) -> Fraction:
        """Coefficient of the lexicographically greatest exponent tuple."""
        if not self.terms:
            return Fraction(0)
        return self.terms[max(self.terms)]

    def text(self, prefix: str = "x") -> str:
        if not self.terms:
            return "0"
        bits = []
        for exps, c in sorted(self.terms.items()):
            factors = [str(c)]
            for i, k in enumerate(exps):
                if k == 1:
                    factors.append(f"{prefix}{i + 1}")
                elif k > 1:
                    factors.append(f"{prefix}{i + 1}^{k}")
            bits.append("*".join(factors))
        return " + ".join(bits)


_ONE_KEY = None


class ScalarExpr:
    """Canonical sum of num/den * exp(s) terms (see the module docstring)."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=()):
        # terms: iterable of (num, den, exparg); merged on matching
        # (den, exparg) keys, zero numerators dropped, dens normalized monic
        self.nvars = nvars
        merged = {}
        for num, den, s in terms:
            if den.is_zero():
                raise ContractViolation("zero denominator in scalar expression")
            if num.is_zero():
                continue
            lead = den.leading_coefficient()
            if lead != 1:
                den = den * (1 / lead)
                num = num * (1 / lead)
            key = (den.key(), s.key())
            if key in merged:
                old_num, _, _ = merged[key]
                num = old_num + num
                if num.is_zero():
                    del merged[key]
                    continue
            merged[key] = (num, den, s)
        self.terms = tuple(merged.values())

    # -- constructors --------------------------------------------------

    @staticmethod
    def const(nvars: int, value) -> "ScalarExpr":
        p = Poly.const(nvars, value)
        one = Poly.const(nvars, 1)
        zero = Poly(nvars)
        return ScalarExpr(nvars, [(p, one, zero)])

    @staticmethod
    def var(nvars: int, index: int) -> "ScalarExpr":
        return ScalarExpr.from_poly(Poly.var(nvars, index))

    @staticmethod
    def from_poly(p: Poly) -> "ScalarExpr":
        one = Poly.const(p.nvars, 1)
        zero = Poly(p.nvars)
        return ScalarExpr(p.nvars, [(p, one, zero)])

    @staticmethod
    def exp_poly(p: Poly) -> "ScalarExpr":
        one = Poly.const(p.nvars, 1)
        return ScalarExpr(p.nvars, [(one, one, p)])

    def exp(self) -> "ScalarExpr":
        """exp of a polynomial-valued expression."""
        p = self.as_poly()
        if p is None:
            raise ContractViolation("exp() argument must be a polynomial expression")
        return ScalarExpr.exp_poly(p)

    # -- queries ---------------------------------------------------------

    def as_poly(self):
        """Return the underlying Poly when the expression is polynomial."""
        total = Poly(self.nvars)
        one = Poly.const(self.nvars, 1)
        for num, den, s in self.terms:
            if not s.is_zero() or den != one:
                return None
            total = total + num
        return total

    def is_zero(self) -> bool:
        groups = {}
        for num, den, s in self.terms:
            groups.setdefault(s.key(), []).append((num, den))
        for _, rats in groups.items():
            combined = Poly(self.nvars)
            for j, (num, _) in enumerate(rats):
                prod = num
                for k, (_, den) in enumerate(rats):
                    if k != j:
                        prod = prod * den
                combined = combined + prod
            if not combined.is_zero():
                return False
        return True

    def __eq__(self, other):
        if not isinstance(other, ScalarExpr):
            return NotImplemented
        return self.nvars == other.nvars and (self - other).is_zero()

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ScalarExpr.const(self.nvars, other)
        return ScalarExpr(self.nvars, self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self):
        return ScalarExpr(self.nvars, [(-n, d, s) for n, d, s in self.terms])

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ScalarExpr.const(self.nvars, other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ScalarExpr.const(self.nvars, other)
        out = []
        for n1, d1, s1 in self.terms:
            for n2, d2, s2 in other.terms:
                out.append((n1 * n2, d1 * d2, s1 + s2))
        return ScalarExpr(self.nvars, out)

    __rmul__ = __mul__

    def _single_term(self):
        """Collapse to one (num, den, exparg) term, or None when the terms
        carry distinct exponential factors."""
        if not self.terms:
            return None
        s0 = self.terms[0][2]
        if any(s.key() != s0.key() for _, _, s in self.terms):
            return None
        num = Poly(self.nvars)
        den = Poly.const(self.nvars, 1)
        for n, d, _ in self.terms:
            num = num * d + n * den
            den = den * d
        return num, den, s0

    def intpow(self, k: int) -> "ScalarExpr":
        if k >= 0:
            out = ScalarExpr.const(self.nvars, 1)
            for _ in range(k):
                out = out * self
            return out
        single = self._single_term()
        if single is None:
            raise ContractViolation(
                "negative power needs a common exponential factor"
            )
        num, den, s = single
        if num.is_zero():
            raise ContractViolation("reciprocal of the zero expression")
        inv = ScalarExpr(self.nvars, [(den, num, -s)])
        return inv.intpow(-k)

    def __pow__(self, k: int) -> "ScalarExpr":
        return self.intpow(k)

    def diff(self, index: int) -> "ScalarExpr":
        out = []
        for num, den, s in self.terms:
            dn = num.diff(index)
            dd = den.diff(index)
            ds = s.diff(index)
            # d(num/den e^s) = (num' den - num den' + num den s') / den^2 e^s
            top = dn * den - num * dd + num * den * ds
            out.append((top, den * den, s))
        return ScalarExpr(self.nvars, out)

    # -- evaluation -----------------------------------------------------------

    def eval(self, point):
        """Evaluate at a point (len nvars). Rational coordinates evaluate the
        polynomial parts exactly with one rounding per term; float coordinates
        evaluate in floats throughout."""
        if len(point) != self.nvars:
            raise ContractViolation(
                f"point has {len(point)} coordinates, expression has {self.nvars}"
            )
        total = 0.0
        for num, den, s in self.terms:
            nv = num.eval(point)
            dv = den.eval(point)
            sv = s.eval(point)
            if dv == 0:
                raise NumericError("evaluation hit a zero denominator")
            if isinstance(nv, Fraction) and isinstance(dv, Fraction):
                ratio = float(nv / dv)
            else:
                ratio = float(nv) / float(dv)
            try:
                term = ratio * math.exp(float(sv))
            except OverflowError as exc:
                raise NumericError("exponential overflow during evaluation") from exc
            total += term
        if not math.isfinite(total):
            raise NumericError("non-finite value during evaluation")
        return total

    def text(self, prefix: str = "x") -> str:
        if not self.terms:
            return "0"
        one = Poly.const(self.nvars, 1)
        bits = []
        for num, den, s in self.terms:
            b = f"({num.text(prefix)})"
            if den != one:
                b += f"/({den.text(prefix)})"
            if not s.is_zero():
                b += f"*exp({s.text(prefix)})"
            bits.append(b)
        return " + ".join(bits)

    def __repr__(self):
        return f"<ScalarExpr {self.text()}>"


# -- prefix notation parser ----------------------------------------------------
#
# Expressions are s-expressions over rationals and variables:
#   (+ a b ...)   sum
#   (* a b ...)   product
#   (- a)         negation;  (- a b ...) left-fold subtraction
#   (^ a k)       integer power (k may be negative)
#   (/ a b)       shorthand for (* a (^ b -1))
#   (exp p)       exponential of a polynomial expression
# Atoms: rationals like 3, -1/2 and variables like x1..xN (the prefix is
# configurable, e.g. u1..uk for chart parameters).

_SEXP_TOKEN = re.compile(r"\(|\)|[^\s()]+")


def _tokenize_sexp(text: str):
    return _SEXP_TOKEN.findall(text)


def parse_scalar_expr(text: str, nvars: int, prefix: str = "x") -> ScalarExpr:
    tokens = _tokenize_sexp(text)
    if not tokens:
        raise ParseError("empty scalar expression")
    pos = 0

    var_re = re.compile(re.escape(prefix) + r"(\d+)$")

    def parse_one():
        nonlocal pos
        if pos >= len(tokens):
            raise ParseError("unexpected end of scalar expression")
        tok = tokens[pos]
        pos += 1
        if tok == "(":
            if pos >= len(tokens):
                raise ParseError("unexpected end after '('")
            op = tokens[pos]
            pos += 1
            args = []
            while pos < len(tokens) and tokens[pos] != ")":
                args.append(parse_one())
            if pos >= len(tokens):
                raise ParseError("missing ')' in scalar expression")
            pos += 1  # consume ')'
            return apply_op(op, args)
        if tok == ")":
            raise ParseError("unexpected ')'")
        m = var_re.match(tok)
        if m:
            idx = int(m.group(1))
            if not 1 <= idx <= nvars:
                raise ParseError(f"variable {tok} out of range (nvars={nvars})")
            return ScalarExpr.var(nvars, idx - 1)
        try:
            return ScalarExpr.const(nvars, Fraction(tok))
        except ValueError:
            raise ParseError(f"unknown token {tok!r} in scalar expression") from None

    def apply_op(op, args):
        if op == "+":
            if not args:
                raise ParseError("(+) needs arguments")
            out = args[0]
            for a in args[1:]:
                out = out + a
            return out
        if op == "*":
            if not args:
                raise ParseError("(*) needs arguments")
            out = args[0]
            for a in args[1:]:
                out = out * a
            return out
        if op == "-":
            if len(args) == 1:
                return -args[0]
            if not args:
                raise ParseError("(-) needs arguments")
            out = args[0]
            for a in args[1:]:
                out = out - a
            return out
        if op == "^":
            if len(args) != 2:
                raise ParseError("(^ base k) needs exactly two arguments")
            k = args[1].as_poly()
            if k is None or not k.is_const() or k.const_value().denominator != 1:
                raise ParseError("power exponent must be an integer literal")
            return args[0].intpow(int(k.const_value()))
        if op == "/":
            if len(args) != 2:
                raise ParseError("(/ a b) needs exactly two arguments")
            return args[0] * args[1].intpow(-1)
        if op == "exp":
            if len(args) != 1:
                raise ParseError("(exp p) needs exactly one argument")
            try:
                return args[0].exp()
            except ContractViolation as exc:
                raise ParseError(str(exc)) from exc
        raise ParseError(f"unknown operator {op!r} in scalar expression")

    result = parse_one()
    if pos != len(tokens):
        raise ParseError(f"trailing tokens in scalar expression: {tokens[pos]!r}")
    return result
