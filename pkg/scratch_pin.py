"""Dev scratch: pin sign conventions with the oracle. Not part of the package."""
import itertools
import random
from fractions import Fraction

import sys
sys.path.insert(0, "tests")
from oracle_grassmann import OExpr, bv_delta, bracket, is_odd

NF, NG = 2, 2

def mono(c, *seq):
    return OExpr([(Fraction(c), tuple(seq))])

one = mono(1)

def parity(e):
    return e.parity()

# 1. primitive values
print("Delta(x1 xs1) =", bv_delta(mono(1, "x1", "xs1"), NF, NG))
print("Delta(c1 cs1) =", bv_delta(mono(1, "c1", "cs1"), NF, NG))
print("{x1,xs1} =", bracket(mono(1, "x1"), mono(1, "xs1"), NF, NG))
print("{xs1,x1} =", bracket(mono(1, "xs1"), mono(1, "x1"), NF, NG))
print("{c1,cs1} =", bracket(mono(1, "c1"), mono(1, "cs1"), NF, NG))
print("{cs1,c1} =", bracket(mono(1, "cs1"), mono(1, "c1"), NF, NG))

# 2. BV product rule over random homogeneous pairs
rng = random.Random(7)
TOKENS = ["x1", "x2", "c1", "c2", "xs1", "xs2", "cs1", "cs2"]

def random_mono():
    k = rng.randint(0, 4)
    return tuple(rng.choice(TOKENS) for _ in range(k))

def random_expr(parity_wanted=None):
    while True:
        e = OExpr()
        for _ in range(rng.randint(1, 3)):
            e = e + mono(rng.choice([1, -1, 2, Fraction(1, 2)]), *random_mono())
        if e.is_zero():
            continue
        ps = {sum(1 for t in key if is_odd(t)) % 2 for key in e.terms}
        if len(ps) != 1:
            # project onto one parity
            p = ps.pop()
            e = OExpr.from_dict({k: v for k, v in e.terms.items()
                                 if sum(1 for t in k if is_odd(t)) % 2 == p})
            if e.is_zero():
                continue
        if parity_wanted is not None and e.parity() != parity_wanted:
            continue
        return e

bad = 0
for trial in range(600):
    f = random_expr()
    g = random_expr()
    pf = f.parity()
    sign = -1 if pf else 1
    lhs = bv_delta(f * g, NF, NG)
    rhs = bv_delta(f, NF, NG) * g + sign * (f * bv_delta(g, NF, NG)) + sign * bracket(f, g, NF, NG)
    if not (lhs - rhs).is_zero():
        bad += 1
        if bad <= 2:
            print("BVPROD FAIL f=", f, " g=", g)
print("BV product rule failures:", bad, "/600")

# 3. antisymmetry {F,G} = -(-1)^((|F|+1)(|G|+1)) {G,F}
bad = 0
for trial in range(600):
    f = random_expr(); g = random_expr()
    s = -1 if ((f.parity() + 1) * (g.parity() + 1)) % 2 else 1
    lhs = bracket(f, g, NF, NG)
    rhs = (-s) * bracket(g, f, NF, NG)
    if not (lhs - rhs).is_zero():
        bad += 1
print("antisymmetry failures:", bad, "/600")

# 4. Jacobi: (-1)^((|F|+1)(|H|+1)) {F,{G,H}} + cyclic = 0
bad = 0
for trial in range(300):
    f, g, h = random_expr(), random_expr(), random_expr()
    def jterm(a, b, c):
        s = ((a.parity() + 1) * (c.parity() + 1)) % 2
        t = bracket(a, bracket(b, c, NF, NG), NF, NG)
        return -t if s else t
    tot = jterm(f, g, h) + jterm(g, h, f) + jterm(h, f, g)
    if not tot.is_zero():
        bad += 1
        if bad <= 2:
            print("JACOBI FAIL")
print("jacobi failures:", bad, "/300")

# 5. Leibniz {F,GH} = {F,G}H + (-1)^((|F|+1)|G|) G{F,H}
bad = 0
for trial in range(400):
    f, g, h = random_expr(), random_expr(), random_expr()
    s = -1 if ((f.parity() + 1) * g.parity()) % 2 else 1
    lhs = bracket(f, g * h, NF, NG)
    rhs = bracket(f, g, NF, NG) * h + s * (g * bracket(f, h, NF, NG))
    if not (lhs - rhs).is_zero():
        bad += 1
print("leibniz failures:", bad, "/400")

# 6. compatibility Delta{F,G} = {Delta F, G} + (-1)^(|F|+1) {F, Delta G}
bad = 0
for trial in range(400):
    f, g = random_expr(), random_expr()
    s = -1 if (f.parity() + 1) % 2 else 1
    lhs = bv_delta(bracket(f, g, NF, NG), NF, NG)
    rhs = bracket(bv_delta(f, NF, NG), g, NF, NG) + s * bracket(f, bv_delta(g, NF, NG), NF, NG)
    if not (lhs - rhs).is_zero():
        bad += 1
print("compatibility failures:", bad, "/400")

# 7. nilpotency
bad = 0
for trial in range(400):
    f = random_expr()
    if not bv_delta(bv_delta(f, NF, NG), NF, NG).is_zero():
        bad += 1
print("nilpotency failures:", bad, "/400")
