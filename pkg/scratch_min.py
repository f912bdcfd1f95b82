"""Minimize BV_prod failures over single monomials."""
import itertools
from fractions import Fraction
import sys
sys.path.insert(0, "tests")
from oracle_grassmann import OExpr, bv_delta, bracket, is_odd

NF, NG = 2, 2

def mono(c, *seq):
    return OExpr([(Fraction(c), tuple(seq))])

TOKENS = ["x1", "x2", "c1", "c2", "xs1", "xs2", "cs1", "cs2"]

def monomials(max_len):
    for k in range(max_len + 1):
        for combo in itertools.product(TOKENS, repeat=k):
            e = mono(1, *combo)
            if not e.is_zero():
                yield combo, e

fails = []
ms = list(monomials(3))
for (sf, f), (sg, g) in itertools.product(ms, ms):
    pf = f.parity()
    sign = -1 if pf else 1
    lhs = bv_delta(f * g, NF, NG)
    rhs = bv_delta(f, NF, NG) * g + sign * (f * bv_delta(g, NF, NG)) + sign * bracket(f, g, NF, NG)
    if not (lhs - rhs).is_zero():
        fails.append((sf, sg, lhs, rhs))

print("fail count:", len(fails), "of", len(ms) ** 2)
for sf, sg, lhs, rhs in fails[:12]:
    print("f=", "*".join(sf) or "1", "  g=", "*".join(sg) or "1", "  lhs=", lhs, "  rhs=", rhs)
