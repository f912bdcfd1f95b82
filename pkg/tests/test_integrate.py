"""Numeric BV integrals: areas, circulation, Stokes, homology, level sets."""

import math
import pathlib
from fractions import Fraction

import pytest

from bvcalc.errors import ContractViolation
from bvcalc.fixtures import (
    angular_polyvector,
    area_polyvector,
    circulation_polyvector,
    disk_surface,
    ellipse_surface,
    exact_polyvector,
    gaussian_polyvector,
    levelset_surface,
    load_fixture,
    parse_fixture,
    stokes_disk_polyvector,
    unit_circle_surface,
)
from bvcalc.forms import PolyvectorField, delta_geometric
from bvcalc.integrate import (
    QuadratureSpec,
    Surface,
    bv_integral,
    homology_invariance_check,
    stokes_report,
    stokes_residual,
)
from bvcalc.scalar import Poly, ScalarExpr

FIXTURES = pathlib.Path(__file__).parent.parent / "fixtures"
Q32 = QuadratureSpec(32)
Q32S4 = QuadratureSpec(32, 4)


def test_disk_area_is_pi():
    value, estimate = bv_integral(area_polyvector(), disk_surface(), None, Q32)
    assert abs(value - math.pi) < 1e-9
    assert estimate < 1e-9
    assert isinstance(value, float)


def test_circulation_is_two_pi():
    value, _ = bv_integral(circulation_polyvector(), unit_circle_surface(), None, Q32)
    assert abs(value - 2 * math.pi) < 1e-9


def test_degree_mismatch_rejected():
    with pytest.raises(ContractViolation):
        bv_integral(circulation_polyvector(), disk_surface(), None, Q32)


def test_weighted_area_with_volume_twist():
    # area weighted by e^(-x^2-y^2) over the disk of radius 2:
    # closed form pi (1 - e^-4)
    f = ScalarExpr.from_poly(Poly(2, {(2, 0): Fraction(-1), (0, 2): Fraction(-1)}))
    value, _ = bv_integral(area_polyvector(), disk_surface(2), f, Q32)
    assert abs(value - math.pi * (1 - math.exp(-4))) < 1e-9


def test_stokes_disk():
    report = stokes_report(stokes_disk_polyvector(), disk_surface(), None, Q32)
    assert abs(report.boundary_value - math.pi) < 1e-9
    assert abs(report.interior_value - math.pi) < 1e-9
    assert report.residual < 1e-6


def test_stokes_gaussian():
    residual = stokes_residual(gaussian_polyvector(), disk_surface(2), None, Q32)
    assert residual < 1e-6


def test_stokes_residual_convergence():
    # >= 10x reduction per point doubling until the 1e-10 floor
    previous = stokes_residual(stokes_disk_polyvector(), disk_surface(), None, QuadratureSpec(8))
    for pts in (16, 32):
        current = stokes_residual(
            stokes_disk_polyvector(), disk_surface(), None, QuadratureSpec(pts)
        )
        assert current < previous / 10 or current < 1e-10
        previous = current


def test_stokes_closed_surface_lhs_zero():
    # delta-closed alpha over a closed curve: both sides vanish
    alpha = PolyvectorField(2, 2, {(1, 2): ScalarExpr.const(2, 1)})
    assert delta_geometric(alpha).is_zero()
    residual = stokes_residual(alpha, unit_circle_surface(), None, Q32)
    assert residual < 1e-12


def test_stokes_requires_boundary_parametrization():
    surface = Surface(2, 2, disk_surface().charts, boundary=None)
    with pytest.raises(ContractViolation):
        stokes_residual(stokes_disk_polyvector(), surface, None, Q32)


def test_exact_polyvector_integrates_to_zero():
    value, _ = bv_integral(exact_polyvector(), unit_circle_surface(), None, Q32)
    assert abs(value) < 1e-8
    value, _ = bv_integral(exact_polyvector(), ellipse_surface(4), None, Q32S4)
    assert abs(value) < 1e-8


def test_homology_circle_vs_ellipse():
    report = homology_invariance_check(
        angular_polyvector(), unit_circle_surface(), ellipse_surface(4), None, Q32S4
    )
    assert abs(report.value1 - 2 * math.pi) < 1e-9
    assert abs(report.value2 - 2 * math.pi) < 1e-9
    assert report.difference < 1e-6
    assert report.passed


def test_homology_reparametrized_cycle():
    # the same circle, traversed through the level-set parametrization at t=1
    report = homology_invariance_check(
        angular_polyvector(), unit_circle_surface(), levelset_surface(1), None, Q32
    )
    assert report.difference < 1e-9


def test_homology_rejects_non_closed_integrand():
    with pytest.raises(ContractViolation) as err:
        homology_invariance_check(
            stokes_disk_polyvector(), unit_circle_surface(), ellipse_surface(4), None, Q32
        )
    assert "not closed" in str(err.value)


def test_levelset_sweep_constant():
    values = []
    for t in (0, Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), 1):
        v, _ = bv_integral(angular_polyvector(), levelset_surface(t), None, Q32S4)
        values.append(v)
    for v in values:
        assert abs(v - 2 * math.pi) < 1e-6
    assert max(values) - min(values) < 1e-6


# -- fixture files ------------------------------------------------------------


def test_fixture_files_match_builders():
    surfaces = {
        "circle.srf": unit_circle_surface(),
        "ellipse2.srf": ellipse_surface(4),
        "levelset_t25.srf": levelset_surface(Fraction(1, 4)),
        "levelset_t50.srf": levelset_surface(Fraction(1, 2)),
        "levelset_t75.srf": levelset_surface(Fraction(3, 4)),
    }
    for fname, built in surfaces.items():
        fx = load_fixture(FIXTURES / fname)
        loaded = fx.require_surface()
        assert loaded.params == built.params
        assert len(loaded.charts) == len(built.charts)
        for ca, cb in zip(loaded.charts, built.charts):
            assert ca.box == cb.box
            for ea, eb in zip(ca.exprs, cb.exprs):
                assert ea == eb
    integrands = {
        "angular.bv": angular_polyvector(),
        "circulation.bv": circulation_polyvector(),
        "disk_area.bv": area_polyvector(),
        "stokes_disk.bv": stokes_disk_polyvector(),
        "stokes_gaussian.bv": gaussian_polyvector(),
        "exact_loop.bv": exact_polyvector(),
    }
    for fname, built in integrands.items():
        fx = load_fixture(FIXTURES / fname)
        assert fx.require_alpha() == built, fname


def test_fixture_file_surfaces_integrate_correctly():
    disk = load_fixture(FIXTURES / "disk_area.bv")
    v, _ = bv_integral(disk.require_alpha(), disk.require_surface(), disk.f, Q32)
    assert abs(v - math.pi) < 1e-9

    stokes = load_fixture(FIXTURES / "stokes_disk.bv")
    assert stokes_residual(stokes.require_alpha(), stokes.require_surface(), stokes.f, Q32) < 1e-6

    angular = load_fixture(FIXTURES / "angular.bv")
    assert angular.quad == QuadratureSpec(32, 4)
    circle = load_fixture(FIXTURES / "circle.srf").require_surface()
    v, _ = bv_integral(angular.require_alpha(), circle, angular.f, angular.quad)
    assert abs(v - 2 * math.pi) < 1e-9


def test_parse_fixture_errors():
    from bvcalc.errors import ParseError

    with pytest.raises(ParseError):
        parse_fixture("alpha 1\n")  # dim missing
    with pytest.raises(ParseError):
        parse_fixture("dim 2\nsurface 1\nchart box -1 1\ncomp u1\n")  # no end
    with pytest.raises(ParseError):
        parse_fixture("dim 2\nbogus 3\n")
