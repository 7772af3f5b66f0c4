"""Checks for the adaptive quadrature layer against known integrals."""

import math

import numpy as np
import pytest

from gamowlab import integrate_real_line, integrate_contour, residue_at
from gamowlab.errors import ValidationError
from gamowlab.paths import ContourPath, LineSegment, Sheet, circle


def test_classic_definite_integrals():
    """Integrands receive numpy arrays, so they must vectorize."""
    r = integrate_real_line(lambda x: 1.0 / (1.0 + x * x))
    assert abs(r.value - math.pi) < 1e-12

    r = integrate_real_line(lambda x: np.exp(-x), lower=0.0, upper=math.inf)
    assert abs(r.value - 1.0) < 1e-12

    r = integrate_real_line(lambda x: np.exp(-x * x))
    assert abs(r.value - math.sqrt(math.pi)) < 1e-12

    r = integrate_real_line(lambda x: x * x, lower=0.0, upper=3.0)
    assert abs(r.value - 9.0) < 1e-13


def test_complex_valued_integrand():
    """A complex integrand integrates component by component."""
    r = integrate_real_line(lambda x: 1.0 / (x - 1j), lower=-50.0, upper=50.0)
    oracle = np.log((50.0 - 1j) / (-50.0 - 1j))
    assert abs(r.value - oracle) < 1e-10


def test_breakpoints_isolate_a_kink():
    f = lambda x: abs(x - 0.3)
    exact = 0.5 * (0.3**2 + 0.7**2)
    r = integrate_real_line(f, lower=0.0, upper=1.0, breakpoints=(0.3,))
    assert abs(r.value - exact) < 1e-13
    assert r.error < 1e-10


def test_breakpoints_outside_range_are_ignored():
    r = integrate_real_line(
        lambda x: x, lower=0.0, upper=1.0, breakpoints=(-5.0, 0.5, 7.0)
    )
    assert abs(r.value - 0.5) < 1e-13


def test_reported_error_bounds_true_error():
    rng = np.random.default_rng(7)
    for _ in range(25):
        a = rng.uniform(0.2, 3.0)
        b = rng.uniform(0.5, 4.0)
        r = integrate_real_line(lambda x: np.exp(-a * abs(x)) * np.cos(b * x))
        exact = 2.0 * a / (a * a + b * b)
        assert abs(r.value - exact) <= max(r.error * 50.0, 1e-13)


def test_tolerance_is_respected():
    loose = integrate_real_line(lambda x: np.exp(-x * x), tol=1e-4)
    tight = integrate_real_line(lambda x: np.exp(-x * x), tol=1e-13)
    assert abs(tight.value - math.sqrt(math.pi)) < 1e-13
    assert abs(loose.value - math.sqrt(math.pi)) < 1e-3
    assert tight.evaluations >= loose.evaluations


def test_unit_circle_winding_integral():
    """Contour integral of 1/z around the unit circle gives 2 pi i."""
    path = circle(0.0j, 1.0)
    r = integrate_contour(lambda z, sheet: 1.0 / z, path)
    assert abs(r.value - 2j * math.pi) < 1e-12


def test_open_polyline_matches_antiderivative():
    seg1 = LineSegment(complex(-2.0, -1.0), complex(0.0, 0.0), Sheet.FIRST)
    seg2 = LineSegment(complex(0.0, 0.0), complex(2.0, -1.0), Sheet.FIRST)
    path = ContourPath((seg1, seg2))
    r = integrate_contour(lambda z, sheet: z * z, path)
    a, b = complex(-2.0, -1.0), complex(2.0, -1.0)
    exact = (b**3 - a**3) / 3.0
    assert abs(r.value - exact) < 1e-12


def test_residue_extraction_for_rational_functions():
    # simple pole
    r = residue_at(lambda z: 1.0 / (z - 0.5j), 0.5j)
    assert abs(r.value - 1.0) < 1e-12

    # pole with nontrivial residue
    f = lambda z: (z * z + 1.0) / ((z - 2.0) * (z + 1j))
    expected = (4.0 + 1.0) / (2.0 + 1j)
    r = residue_at(f, 2.0, radius=0.3)
    assert abs(r.value - expected) < 1e-12

    # double pole: residue is the derivative of the regular part
    g = lambda z: np.exp(z) / (z - 1.0) ** 2
    r = residue_at(g, 1.0, radius=0.4)
    assert abs(r.value - math.e) < 1e-11


def test_residue_of_regular_point_vanishes():
    r = residue_at(lambda z: z * np.exp(z), 0.3 + 0.1j, radius=0.2)
    assert abs(r.value) < 1e-12


def test_loop_straddling_two_poles_is_rejected():
    """Halving the loop radius drops one pole, so the estimates disagree."""
    from gamowlab.errors import InconsistentResidue

    f = lambda z: 1.0 / (z - 1.0) + 1.0 / (z - 1.3)
    with pytest.raises(InconsistentResidue):
        residue_at(f, 1.0, radius=0.4)


def test_invalid_bounds_are_rejected():
    with pytest.raises(ValidationError):
        integrate_real_line(lambda x: x, lower=2.0, upper=1.0)
