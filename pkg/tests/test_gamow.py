"""Resonance functionals, semigroup evolution, and domain enforcement."""

import numpy as np
import pytest

from gamowlab import (
    EnergyWaveFunction,
    GamowFunctional,
    GamowVariant,
    HardyClass,
    ResonancePole,
    WaveTerm,
    breit_wigner_pole_term,
    eigenvalue_defect,
    gamow_pairing,
    semigroup_divergence_scan,
    semigroup_factor,
)
from gamowlab.errors import (
    ClassMismatch,
    DecayTooSlow,
    TimeDirectionViolation,
    ValidationError,
)


def _lower(rng, n_terms=2, order=1):
    terms = tuple(
        WaveTerm(
            complex(rng.normal(), rng.normal()),
            complex(rng.uniform(-2, 2), rng.uniform(0.2, 2.0)),
            order,
        )
        for _ in range(n_terms)
    )
    return EnergyWaveFunction(terms, HardyClass.HARDY_LOWER)


def test_decaying_pairing_is_the_continued_boundary_value():
    """Pairing a test function extracts its value at the lower pole."""
    rng = np.random.default_rng(31)
    for _ in range(25):
        pole = ResonancePole(rng.uniform(0.5, 5.0), rng.uniform(0.02, 0.8))
        wf = _lower(rng)
        z_R = complex(pole.E_R, -0.5 * pole.Gamma)
        got = gamow_pairing(GamowFunctional(pole, GamowVariant.DECAYING), wf)
        assert abs(got - wf(z_R)) < 1e-9 * max(1.0, abs(wf(z_R)))


def test_growing_pairing_uses_the_mirror_point():
    pole = ResonancePole(1.5, 0.3)
    wf = EnergyWaveFunction((WaveTerm(0.7, -1.2j),), HardyClass.HARDY_UPPER)
    got = gamow_pairing(GamowFunctional(pole, GamowVariant.GROWING), wf)
    want = wf(complex(1.5, 0.15))
    assert abs(got - want) < 1e-10


def test_pairing_enforces_the_test_function_class():
    pole = ResonancePole(1.0, 0.1)
    lower = EnergyWaveFunction((WaveTerm(1.0, 1j),), HardyClass.HARDY_LOWER)
    upper = EnergyWaveFunction((WaveTerm(1.0, -1j),), HardyClass.HARDY_UPPER)
    with pytest.raises(ClassMismatch):
        gamow_pairing(GamowFunctional(pole, GamowVariant.DECAYING), upper)
    with pytest.raises(ClassMismatch):
        gamow_pairing(GamowFunctional(pole, GamowVariant.GROWING), lower)


def test_normalization_scale():
    g = GamowFunctional(ResonancePole(2.0, 0.4), GamowVariant.DECAYING)
    assert abs(g.normalization() - np.sqrt(2.0 * np.pi * 0.4)) < 1e-14


def test_multiplication_by_energy_acts_as_the_complex_eigenvalue():
    """Applying the energy multiplier inside the pairing scales by z_R."""
    rng = np.random.default_rng(32)
    for _ in range(20):
        pole = ResonancePole(rng.uniform(0.5, 4.0), rng.uniform(0.05, 0.6))
        wf = _lower(rng, n_terms=2, order=2)
        g = GamowFunctional(pole, GamowVariant.DECAYING)
        assert eigenvalue_defect(g, wf) < 1e-9


def test_eigenvalue_check_requires_fast_decay():
    wf = EnergyWaveFunction((WaveTerm(1.0, 1j, 1),), HardyClass.HARDY_LOWER)
    g = GamowFunctional(ResonancePole(1.0, 0.1), GamowVariant.DECAYING)
    with pytest.raises(DecayTooSlow):
        eigenvalue_defect(g, wf)


def test_pole_term_matches_the_lorentzian_matrix_element():
    rng = np.random.default_rng(33)
    for _ in range(15):
        pole = ResonancePole(rng.uniform(0.5, 4.0), rng.uniform(0.05, 0.6))
        psi = _lower(rng)
        phi = _lower(rng)
        lhs, rhs = breit_wigner_pole_term(psi, phi, pole)
        z_R = complex(pole.E_R, -0.5 * pole.Gamma)
        by_hand = 2.0 * np.pi * pole.Gamma * psi(z_R) * phi(z_R)
        assert abs(rhs - by_hand) < 1e-10 * max(1.0, abs(by_hand))
        assert abs(lhs - rhs) < 1e-8 * max(1.0, abs(rhs))


def test_evolution_factor_and_decay_law():
    pole = ResonancePole(1.0, 0.25)
    g = GamowFunctional(pole, GamowVariant.DECAYING)
    for t in (0.0, 0.5, 2.0, 10.0):
        f = semigroup_factor(g, t)
        assert abs(f - np.exp(-1j * complex(1.0, -0.125) * t)) < 1e-14
        assert abs(abs(f) ** 2 - np.exp(-0.25 * t)) < 1e-12


def test_evolution_composes_over_time_splits():
    g = GamowFunctional(ResonancePole(2.0, 0.3), GamowVariant.DECAYING)
    rng = np.random.default_rng(34)
    for _ in range(20):
        t1 = rng.uniform(0.0, 5.0)
        t2 = rng.uniform(0.0, 5.0)
        combined = semigroup_factor(g, t1 + t2)
        split = semigroup_factor(g, t1) * semigroup_factor(g, t2)
        assert abs(combined - split) < 5e-15


def test_growing_variant_runs_backwards():
    g = GamowFunctional(ResonancePole(1.0, 0.25), GamowVariant.GROWING)
    f = semigroup_factor(g, -3.0)
    assert abs(abs(f) ** 2 - np.exp(-0.25 * 3.0)) < 1e-12


def test_wrong_sign_times_are_refused():
    dec = GamowFunctional(ResonancePole(1.0, 0.1), GamowVariant.DECAYING)
    grow = GamowFunctional(ResonancePole(1.0, 0.1), GamowVariant.GROWING)
    for t in np.linspace(0.05, 8.0, 12):
        with pytest.raises(TimeDirectionViolation):
            semigroup_factor(dec, -t)
        with pytest.raises(TimeDirectionViolation):
            semigroup_factor(grow, t)


def test_forbidden_time_blows_up_with_the_cutoff():
    """Off-axis truncation exposes the exponential breakdown outside the domain.

    Inside the allowed domain the same scan settles to a cutoff-independent
    value, so the growth really is a property of the forbidden direction and
    not of the contour construction.
    """
    wf = EnergyWaveFunction((WaveTerm(1.0, 1j, 2),), HardyClass.HARDY_LOWER)
    g = GamowFunctional(ResonancePole(1.0, 0.1), GamowVariant.DECAYING)

    bad = semigroup_divergence_scan(g, wf, t=-2.0)
    assert bad[0] < bad[1] < bad[2]
    assert bad[2] > 1e6 * bad[1]

    good = semigroup_divergence_scan(g, wf, t=2.0)
    ratio = good[2] / good[1]
    assert 1.0 / 1.01 < ratio < 1.01


def test_scan_mirrors_for_the_growing_variant():
    wf = EnergyWaveFunction((WaveTerm(1.0, -1j, 2),), HardyClass.HARDY_UPPER)
    g = GamowFunctional(ResonancePole(1.0, 0.1), GamowVariant.GROWING)
    bad = semigroup_divergence_scan(g, wf, t=2.0)
    assert bad[0] < bad[1] < bad[2]
    good = semigroup_divergence_scan(g, wf, t=-2.0)
    assert 1.0 / 1.01 < good[2] / good[1] < 1.01


def test_scan_guards_against_overflow_and_bad_tilt():
    wf = EnergyWaveFunction((WaveTerm(1.0, 1j, 2),), HardyClass.HARDY_LOWER)
    g = GamowFunctional(ResonancePole(1.0, 0.1), GamowVariant.DECAYING)
    with pytest.raises(ValidationError):
        semigroup_divergence_scan(g, wf, t=-2.0, cutoffs=(1e2, 1e5))
    with pytest.raises(ValidationError):
        semigroup_divergence_scan(g, wf, t=-1.0, tilt=0.0)
    with pytest.raises(ValidationError):
        semigroup_divergence_scan(g, wf, t=-1.0, tilt=1.5)


def test_scan_checks_the_test_function_class():
    upper = EnergyWaveFunction((WaveTerm(1.0, -1j, 2),), HardyClass.HARDY_UPPER)
    g = GamowFunctional(ResonancePole(1.0, 0.1), GamowVariant.DECAYING)
    with pytest.raises(ClassMismatch):
        semigroup_divergence_scan(g, upper, t=-1.0)
