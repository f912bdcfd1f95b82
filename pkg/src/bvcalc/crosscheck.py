"""Symbolic consistency check tying the geometric Laplacian (contraction,
exterior derivative, volume form) to the coordinate one (superfunction
derivatives), through the shift isomorphism, including the e^f twist
against Delta + {f,-}.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .context import Context
from .forms import (
    PolyvectorField,
    delta_geometric,
    poly_to_superfunction,
    shift_to_superfunction,
)
from .errors import ContractViolation
from .operators import bv_delta, schouten_bracket
from .scalar import Poly, ScalarExpr


def random_poly(nvars: int, rng: random.Random, degree_bound: int = 3,
                max_terms: int = 3) -> Poly:
    out = Poly(nvars)
    for _ in range(rng.randint(1, max_terms)):
        exps = [0] * nvars
        budget = rng.randint(0, degree_bound)
        for _ in range(budget):
            exps[rng.randrange(nvars)] += 1
        coeff = rng.choice((1, -1, 2, -2, 3))
        out = out + Poly(nvars, {tuple(exps): coeff})
    return out


def random_polyvector(dim: int, rng: random.Random, degree_bound: int = 3,
                      degree: int | None = None) -> PolyvectorField:
    import itertools

    if degree is None:
        degree = rng.randint(0, dim)
    indices = list(itertools.combinations(range(1, dim + 1), degree))
    comps = {}
    for idx in indices:
        if rng.random() < 0.6:
            p = random_poly(dim, rng, degree_bound)
            if not p.is_zero():
                comps[idx] = ScalarExpr.from_poly(p)
    return PolyvectorField(dim, degree, comps)


@dataclass
class CrossCheckReport:
    """Counts of exact symbolic comparisons between the two Laplacian routes."""

    seed: int
    trials: int
    mismatches: list = field(default_factory=list)
    checked: int = 0

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def structured_lines(self) -> list[str]:
        lines = [
            "check=coordinate_vs_geometric",
            f"status={'pass' if self.passed else 'FAIL'}",
            f"seed={self.seed}",
            f"trials={self.trials}",
            f"comparisons={self.checked}",
            f"mismatches={len(self.mismatches)}",
        ]
        for what, dim, detail in self.mismatches[:5]:
            lines.append(f"mismatch.{what}=N{dim}:{detail}")
        return lines

    def human_lines(self) -> list[str]:
        status = "pass" if self.passed else "FAIL"
        return [
            f"geometry/algebra cross-check: {status} "
            f"({self.checked} comparisons over {self.trials} trials, seed {self.seed})"
        ] + [f"  mismatch in {what} at N={dim}: {detail}" for what, dim, detail in self.mismatches[:5]]


def cross_check_coordinate_vs_geometric(
    seed: int, trials: int, max_dim: int = 4, degree_bound: int = 3
) -> CrossCheckReport:
    """For random polynomial polyvectors alpha over R^N (N <= max_dim), check
    symbolically that

        shift(delta_geometric(alpha, 0)) == bv_delta(shift(alpha))

    in the field sector, and for a random polynomial f that

        shift(delta_geometric(alpha, f)) == bv_delta(shift(alpha))
                                            + {f, shift(alpha)}

    as identical canonical superfunctions.
    """
    if trials < 1:
        raise ContractViolation("trials must be >= 1")
    if not 1 <= max_dim <= 4:
        raise ContractViolation("max_dim must be between 1 and 4")
    rng = random.Random(seed)
    report = CrossCheckReport(seed, trials)
    for _ in range(trials):
        dim = rng.randint(1, max_dim)
        ctx = Context(dim, 0)
        alpha = random_polyvector(dim, rng, degree_bound)
        shifted = shift_to_superfunction(alpha)

        geom = shift_to_superfunction(delta_geometric(alpha, None))
        coord = bv_delta(shifted)
        report.checked += 1
        if geom != coord:
            report.mismatches.append(("untwisted", dim, repr(alpha)))

        f_poly = random_poly(dim, rng, degree_bound)
        f_expr = ScalarExpr.from_poly(f_poly)
        f_sf = poly_to_superfunction(f_poly, ctx)
        geom_twisted = shift_to_superfunction(delta_geometric(alpha, f_expr))
        coord_twisted = bv_delta(shifted) + schouten_bracket(f_sf, shifted)
        report.checked += 1
        if geom_twisted != coord_twisted:
            report.mismatches.append(("twisted", dim, repr(alpha)))
    return report
