"""Enumerate (Laplacian variant) x (bracket side convention) jointly."""
import itertools
from fractions import Fraction
import sys
sys.path.insert(0, "tests")
from oracle_grassmann import OExpr, left_deriv, right_deriv, is_odd

NF, NG = 2, 2

def mono(c, *seq):
    return OExpr([(Fraction(c), tuple(seq))])

TOKENS = ["x1", "x2", "c1", "c2", "xs1", "xs2", "cs1", "cs2"]

def monomials(max_len):
    out = []
    for k in range(max_len + 1):
        for combo in itertools.product(TOKENS, repeat=k):
            e = mono(1, *combo)
            if not e.is_zero():
                out.append((combo, e))
    return out

ms = monomials(2)
D = {"L": left_deriv, "R": right_deriv}
PAIRS = [(f"x{i}", f"xs{i}") for i in range(1, NF + 1)] + [
    (f"c{a}", f"cs{a}") for a in range(1, NG + 1)
]

def make_delta(side_xs, side_c, s_ghost):
    def delta(e):
        out = OExpr()
        for i in range(1, NF + 1):
            out = out + right_deriv(D[side_xs](e, f"xs{i}"), f"x{i}")
        for a in range(1, NG + 1):
            out = out + D[side_c](right_deriv(e, f"cs{a}"), f"c{a}") * s_ghost
        return out
    return delta

def make_bracket(side_f, side_g):
    df, dg = D[side_f], D[side_g]
    def br(F, G):
        out = OExpr()
        for base, fiber in PAIRS:
            out = out + df(F, base) * dg(G, fiber)
            out = out - df(F, fiber) * dg(G, base)
        return out
    return br

survivors = []
for side_xs, side_c, s_ghost, side_f, side_g in itertools.product(
    "LR", "LR", (1, -1), "LR", "LR"
):
    delta = make_delta(side_xs, side_c, s_ghost)
    if delta(mono(1, "x1", "xs1")) != mono(1):
        continue
    br = make_bracket(side_f, side_g)
    ok = True
    for (sf, f), (sg, g) in itertools.islice(itertools.product(ms, ms), 0, None, 11):
        pf = f.parity()
        sign = -1 if pf else 1
        lhs = delta(f * g)
        rhs = delta(f) * g + sign * (f * delta(g)) + sign * br(f, g)
        if not (lhs - rhs).is_zero():
            ok = False
            break
    if ok:
        survivors.append((side_xs, side_c, s_ghost, side_f, side_g,
                          str(delta(mono(1, "c1", "cs1"))),
                          str(br(mono(1, "x1"), mono(1, "xs1"))),
                          str(br(mono(1, "c1"), mono(1, "cs1")))))

print("survivors (side_xs, side_c, s_ghost, bracketF, bracketG, D(c1cs1), {x1,xs1}, {c1,cs1}):")
for s in survivors:
    print(" ", s)
