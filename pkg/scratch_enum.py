"""Enumerate Laplacian conventions against the pinned bracket + product rule."""
import itertools
from fractions import Fraction
import sys
sys.path.insert(0, "tests")
from oracle_grassmann import OExpr, bracket, left_deriv, right_deriv, is_odd

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

ms = list(monomials(2))
D = {"L": left_deriv, "R": right_deriv}

def make_delta(side_xs, side_c, s_ghost):
    def delta(e):
        out = OExpr()
        for i in range(1, NF + 1):
            out = out + right_deriv(D[side_xs](e, f"xs{i}"), f"x{i}")
        for a in range(1, NG + 1):
            term = right_deriv(D[side_c](e, f"c{a}"), f"cs{a}") if False else None
            # ghost pair: base derivative (c) may be L or R; fiber (cs) is even
            t = D[side_c](right_deriv(e, f"cs{a}"), f"c{a}")
            out = out + (t * s_ghost)
        return out
    return delta

results = []
for side_xs, side_c, s_ghost in itertools.product("LR", "LR", (1, -1)):
    delta = make_delta(side_xs, side_c, s_ghost)
    v_field = delta(mono(1, "x1", "xs1"))
    if v_field != mono(1):
        results.append((side_xs, side_c, s_ghost, "field-pin-fail", str(v_field)))
        continue
    nilp = prod = 0
    for sf, f in ms[:400]:
        if not delta(delta(f)).is_zero():
            nilp += 1
    for (sf, f), (sg, g) in itertools.islice(itertools.product(ms, ms), 0, None, 7):
        pf = f.parity()
        sign = -1 if pf else 1
        lhs = delta(f * g)
        rhs = delta(f) * g + sign * (f * delta(g)) + sign * bracket(f, g, NF, NG)
        if not (lhs - rhs).is_zero():
            prod += 1
    results.append((side_xs, side_c, s_ghost, f"nilp={nilp}", f"prod={prod}",
                    f"delta(c1cs1)={delta(mono(1,'c1','cs1'))}"))

for r in results:
    print(r)
