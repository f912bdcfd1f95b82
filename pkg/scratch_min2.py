"""Re-scan identities with a left-derivative Laplacian."""
import itertools
from fractions import Fraction
import sys
sys.path.insert(0, "tests")
from oracle_grassmann import OExpr, bracket, left_deriv, is_odd

NF, NG = 2, 2

def mono(c, *seq):
    return OExpr([(Fraction(c), tuple(seq))])

def bv_delta_left(expr):
    out = OExpr()
    for i in range(1, NF + 1):
        out = out + left_deriv(left_deriv(expr, f"xs{i}"), f"x{i}")
    for a in range(1, NG + 1):
        out = out - left_deriv(left_deriv(expr, f"cs{a}"), f"c{a}")
    return out

TOKENS = ["x1", "x2", "c1", "c2", "xs1", "xs2", "cs1", "cs2"]

def monomials(max_len):
    for k in range(max_len + 1):
        for combo in itertools.product(TOKENS, repeat=k):
            e = mono(1, *combo)
            if not e.is_zero():
                yield combo, e

print("Delta_L(x1 xs1) =", bv_delta_left(mono(1, "x1", "xs1")))
print("Delta_L(c1 cs1) =", bv_delta_left(mono(1, "c1", "cs1")))

ms = list(monomials(2))
fails_prod = fails_nilp = 0
example = None
for (sf, f), (sg, g) in itertools.product(ms, ms):
    pf = f.parity()
    sign = -1 if pf else 1
    lhs = bv_delta_left(f * g)
    rhs = bv_delta_left(f) * g + sign * (f * bv_delta_left(g)) + sign * bracket(f, g, NF, NG)
    if not (lhs - rhs).is_zero():
        fails_prod += 1
        if example is None:
            example = (sf, sg, lhs, rhs)
for sf, f in ms:
    if not bv_delta_left(bv_delta_left(f)).is_zero():
        fails_nilp += 1
print("prod fails:", fails_prod, "of", len(ms) ** 2, " nilp fails:", fails_nilp)
if example:
    print("example:", example)

# Jacobi / Leibniz / compat with left-delta
import random
rng = random.Random(3)
def random_expr():
    while True:
        e = OExpr()
        for _ in range(rng.randint(1, 3)):
            seq = tuple(rng.choice(TOKENS) for _ in range(rng.randint(0, 4)))
            e = e + mono(rng.choice([1, -1, 2]), *seq)
        if e.is_zero():
            continue
        ps = {sum(1 for t in k if is_odd(t)) % 2 for k in e.terms}
        if len(ps) != 1:
            p = ps.pop()
            e = OExpr.from_dict({k: v for k, v in e.terms.items()
                                 if sum(1 for t in k if is_odd(t)) % 2 == p})
            if e.is_zero():
                continue
        return e

jac = lei = com = 0
for _ in range(400):
    f, g, h = random_expr(), random_expr(), random_expr()
    def jterm(a, b, c):
        s = ((a.parity() + 1) * (c.parity() + 1)) % 2
        t = bracket(a, bracket(b, c, NF, NG), NF, NG)
        return -t if s else t
    if not (jterm(f, g, h) + jterm(g, h, f) + jterm(h, f, g)).is_zero():
        jac += 1
    s = -1 if ((f.parity() + 1) * g.parity()) % 2 else 1
    if not (bracket(f, g * h, NF, NG) - bracket(f, g, NF, NG) * h - s * (g * bracket(f, h, NF, NG))).is_zero():
        lei += 1
    s2 = -1 if (f.parity() + 1) % 2 else 1
    if not (bv_delta_left(bracket(f, g, NF, NG)) - bracket(bv_delta_left(f), g, NF, NG) - s2 * bracket(f, bv_delta_left(g), NF, NG)).is_zero():
        com += 1
print("jacobi fails:", jac, " leibniz fails:", lei, " compat fails:", com, " (of 400)")
