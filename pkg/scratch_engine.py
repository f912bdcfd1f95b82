"""Dev smoke test: engine vs oracle."""
import random
from fractions import Fraction
import sys
sys.path.insert(0, "tests")
from oracle_grassmann import OExpr, left_deriv, right_deriv, is_odd

from bvcalc.context import Context, Generator
from bvcalc.coefficients import Coefficient
from bvcalc.superfunction import Superfunction, right_derivative, left_derivative
from bvcalc.operators import bv_delta, schouten_bracket, random_superfunction
from bvcalc.textio import format_superfunction, parse_superfunction

NF, NG = 2, 2
ctx = Context(NF, NG)

def oracle_delta(e):
    out = OExpr()
    for i in range(1, NF + 1):
        out = out + right_deriv(left_deriv(e, f"xs{i}"), f"x{i}")
    for a in range(1, NG + 1):
        out = out - left_deriv(right_deriv(e, f"cs{a}"), f"c{a}")
    return out

def oracle_bracket(F, G):
    pairs = [(f"x{i}", f"xs{i}") for i in range(1, NF + 1)] + [
        (f"c{a}", f"cs{a}") for a in range(1, NG + 1)]
    out = OExpr()
    for base, fiber in pairs:
        out = out + right_deriv(F, base) * left_deriv(G, fiber)
        out = out - right_deriv(F, fiber) * left_deriv(G, base)
    return out

def to_oracle(F):
    """Convert an engine superfunction with rational (h-free) coefficients."""
    terms = []
    for (evens, odds), coeff in F.terms():
        items = list(coeff.items())
        assert len(items) <= 1
        if not items:
            continue
        k, (re, im) = items[0]
        assert k == 0 and im == 0, "oracle comparison needs plain rational coeffs"
        seq = []
        for (kind, idx), e in evens:
            seq.extend([f"{kind}{idx}"] * e)
        seq.extend(f"{kind}{idx}" for kind, idx in odds)
        terms.append((re, tuple(seq)))
    return OExpr(terms)

rng = random.Random(99)
pool = tuple(Coefficient.rational(v) for v in (1, -1, 2, Fraction(1, 2), -3))
bad = 0
for trial in range(400):
    F = random_superfunction(ctx, rng, 4, coeff_pool=pool)
    G = random_superfunction(ctx, rng, 4, coeff_pool=pool)
    if to_oracle(F * G) != to_oracle(F) * to_oracle(G):
        print("MUL mismatch"); bad += 1
    if to_oracle(bv_delta(F)) != oracle_delta(to_oracle(F)):
        print("DELTA mismatch", format_superfunction(F)); bad += 1
    if to_oracle(schouten_bracket(F, G)) != oracle_bracket(to_oracle(F), to_oracle(G)):
        print("BRACKET mismatch"); bad += 1
    for tok, gen in (("x1", ctx.field(1)), ("xs2", ctx.antifield(2)),
                     ("c1", ctx.ghost(1)), ("cs2", ctx.antighost(2))):
        if to_oracle(right_derivative(F, gen)) != right_deriv(to_oracle(F), tok):
            print("RDERIV mismatch", tok); bad += 1
        if to_oracle(left_derivative(F, gen)) != left_deriv(to_oracle(F), tok):
            print("LDERIV mismatch", tok); bad += 1
    # text roundtrip with full coefficient pool
    H = random_superfunction(ctx, rng, 4)
    txt = format_superfunction(H)
    if parse_superfunction(txt, ctx) != H:
        print("ROUNDTRIP mismatch:", txt); bad += 1
    if bad > 5:
        break
print("done, bad =", bad)
