"""Geometry vs coordinate Laplacian consistency through the shift."""

import pytest

from bvcalc.crosscheck import cross_check_coordinate_vs_geometric
from bvcalc.errors import ContractViolation
from bvcalc.forms import PolyvectorField, delta_geometric, shift_to_superfunction
from bvcalc.operators import bv_delta
from bvcalc.scalar import ScalarExpr


def test_dimension_one_divergence():
    # N=1, alpha = x d1: both routes give 1
    alpha = PolyvectorField(1, 1, {(1,): ScalarExpr.var(1, 0)})
    geom = shift_to_superfunction(delta_geometric(alpha))
    coord = bv_delta(shift_to_superfunction(alpha))
    assert geom == coord
    from bvcalc.textio import format_superfunction

    assert format_superfunction(geom) == "1"


def test_constant_bivector_both_zero():
    alpha = PolyvectorField(3, 2, {(1, 2): ScalarExpr.const(3, 1)})
    assert delta_geometric(alpha).is_zero()
    assert bv_delta(shift_to_superfunction(alpha)).is_zero()


def test_cross_check_randomized():
    report = cross_check_coordinate_vs_geometric(seed=5, trials=60, max_dim=4)
    assert report.passed
    assert report.checked == 120
    assert report.mismatches == []


def test_cross_check_preconditions():
    with pytest.raises(ContractViolation):
        cross_check_coordinate_vs_geometric(seed=1, trials=0)
    with pytest.raises(ContractViolation):
        cross_check_coordinate_vs_geometric(seed=1, trials=5, max_dim=9)


def test_cross_check_report_lines():
    report = cross_check_coordinate_vs_geometric(seed=2, trials=5)
    lines = report.structured_lines()
    assert "status=pass" in lines
    assert any(line.startswith("comparisons=") for line in lines)
