"""Exact decay law for a Gamow state and its Born-approximation limit.

The probability of finding the decay products at time t is

    P(t) = 1 - e^{-Gamma t} * I,
    I    = integral_0^inf dE sum_b |v_b(E)|^2 / ((E - E_R)^2 + (Gamma/2)^2),

where v_b(E) couples the decaying state to the free channel b.  Demanding
P(0) = 0 forces I = 1, which fixes the overall coupling scale; after that
normalization P(t) = 1 - e^{-Gamma t} exactly and the initial rate equals
Gamma.  The Born approximation collapses the Lorentzian onto a free energy
E_d and yields the familiar rate 2 pi sum_b |v_b(E_d)|^2.

The coupling families here are deliberately simple closed forms (constant,
damped polynomial, tabulated); the physics fixes only the Lorentzian kernel
and the normalization, not the channel functions themselves.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import TimeDirectionViolation, ValidationError, ZeroCoupling
from .quadrature import DEFAULT_TOL, integrate_real_line
from .spectral import ResonancePole


@dataclass(frozen=True)
class ConstantCoupling:
    """Energy-independent channel coupling v(E) = amplitude."""

    amplitude: float

    def __post_init__(self):
        if not math.isfinite(self.amplitude) or self.amplitude < 0:
            raise ValidationError("coupling amplitude must be finite and >= 0")

    def squared(self, energy):
        return np.full_like(np.asarray(energy, dtype=float), self.amplitude**2)

    def scaled(self, factor: float) -> "ConstantCoupling":
        return ConstantCoupling(self.amplitude * factor)

    def breakpoints(self) -> tuple[float, ...]:
        return ()


@dataclass(frozen=True)
class PolynomialLorentzianCoupling:
    """|v(E)|^2 = poly(E)^2 * (width^2 / ((E-center)^2 + width^2))^2.

    The squared-Lorentzian damping keeps the normalization integral finite
    for polynomial degrees up to 2; higher degrees would make |v|^2 grow
    faster than the Lorentzian kernel decays.
    """

    coefficients: tuple[float, ...]
    center: float
    width: float

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(float(c) for c in self.coefficients))
        if not self.coefficients:
            raise ValidationError("polynomial coupling needs at least one coefficient")
        if len(self.coefficients) > 3:
            raise ValidationError(
                "polynomial degree must be <= 2 so the channel intensity converges"
            )
        if self.width <= 0:
            raise ValidationError("damping width must be > 0")

    def squared(self, energy):
        e = np.asarray(energy, dtype=float)
        poly = np.polynomial.polynomial.polyval(e, self.coefficients)
        damp = self.width**2 / ((e - self.center) ** 2 + self.width**2)
        return poly**2 * damp**2

    def scaled(self, factor: float) -> "PolynomialLorentzianCoupling":
        coeffs = tuple(c * factor for c in self.coefficients)
        return PolynomialLorentzianCoupling(coeffs, self.center, self.width)

    def breakpoints(self) -> tuple[float, ...]:
        return (self.center - self.width, self.center, self.center + self.width)


@dataclass(frozen=True)
class TabulatedCoupling:
    """|v(E)|^2 linearly interpolated between table knots, zero outside.

    The table stores amplitudes; squaring happens before interpolation so
    the interpolated intensity stays nonnegative.
    """

    energies: tuple[float, ...]
    amplitudes: tuple[float, ...]

    def __post_init__(self):
        es = tuple(float(e) for e in self.energies)
        vs = tuple(float(v) for v in self.amplitudes)
        object.__setattr__(self, "energies", es)
        object.__setattr__(self, "amplitudes", vs)
        if len(es) != len(vs) or len(es) < 2:
            raise ValidationError("coupling table needs matching columns, length >= 2")
        if any(b <= a for a, b in zip(es, es[1:])):
            raise ValidationError("table energies must be strictly increasing")
        if not all(map(math.isfinite, es + vs)):
            raise ValidationError("table entries must be finite")

    def squared(self, energy):
        e = np.asarray(energy, dtype=float)
        table = np.asarray(self.amplitudes) ** 2
        return np.interp(e, self.energies, table, left=0.0, right=0.0)

    def scaled(self, factor: float) -> "TabulatedCoupling":
        return TabulatedCoupling(self.energies, tuple(v * factor for v in self.amplitudes))

    def breakpoints(self) -> tuple[float, ...]:
        return self.energies


@dataclass(frozen=True)
class DecayScenario:
    """A resonance pole, its decay channels, and optional Born data.

    ``normalization`` records the cumulative coupling scale applied by
    ``normalize`` (1.0 for a raw scenario).  ``born_energy`` is the free
    eigenvalue E_d used by the Born-approximation rate; it is typically
    E_R and must be set for ``born_rate`` to make sense.
    """

    pole: ResonancePole
    channels: tuple
    normalization: float = 1.0
    born_energy: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "channels", tuple(self.channels))
        if not self.channels:
            raise ValidationError("a decay scenario needs at least one channel")
        if self.born_energy is not None and self.born_energy <= 0:
            raise ValidationError("born_energy must lie in the scattering spectrum (> 0)")

    def coupling_squared(self, energy):
        e = np.asarray(energy, dtype=float)
        total = np.zeros_like(e)
        for channel in self.channels:
            total = total + channel.squared(e)
        return total


def intensity(scenario: DecayScenario, tol: float = DEFAULT_TOL) -> float:
    """The Lorentzian-weighted channel intensity I over the spectrum [0, inf)."""
    pole = scenario.pole
    half = 0.5 * pole.Gamma

    def f(e):
        kernel = 1.0 / ((e - pole.E_R) ** 2 + half**2)
        return scenario.coupling_squared(e) * kernel

    marks = {pole.E_R - half, pole.E_R, pole.E_R + half}
    for channel in scenario.channels:
        marks.update(channel.breakpoints())
    res = integrate_real_line(f, tol, lower=0.0, breakpoints=tuple(sorted(marks)))
    return float(res.value.real)


def normalize(scenario: DecayScenario, tol: float = DEFAULT_TOL) -> DecayScenario:
    """Rescale all couplings so the intensity integral equals 1.

    Forcing I = 1 is what makes P(0) = 0 exact; it fixes the only freedom
    the decay law leaves in the couplings.  Applying ``normalize`` twice is
    a no-op up to quadrature error.
    """
    value = intensity(scenario, tol)
    if value <= 0.0 or not math.isfinite(value):
        raise ZeroCoupling(
            "cannot normalize: the channel intensity integral is zero (no coupling)"
        )
    scale = 1.0 / math.sqrt(value)
    return replace(
        scenario,
        channels=tuple(c.scaled(scale) for c in scenario.channels),
        normalization=scenario.normalization * scale,
    )


def _require_forward(t: float) -> None:
    if t < 0:
        raise TimeDirectionViolation(
            f"the decay law is defined for t >= 0 only (got t = {t:g})"
        )


def transition_probability(
    scenario: DecayScenario, t: float, tol: float = DEFAULT_TOL
) -> tuple[float, float]:
    """P(t) plus the quadrature-audited intensity it used.

    Returns (P, I) with P = 1 - e^{-Gamma t} * I.  On a normalized scenario
    I is 1 to quadrature accuracy, so P follows the pure exponential law;
    the audit value lets callers check that precondition instead of
    trusting it.
    """
    _require_forward(t)
    value = intensity(scenario, tol)
    prob = 1.0 - math.exp(-scenario.pole.Gamma * t) * value
    return prob, value


def decay_rate(scenario: DecayScenario, t: float, tol: float = DEFAULT_TOL) -> float:
    """Transition rate P'(t) = Gamma e^{-Gamma t} I, with I by quadrature."""
    _require_forward(t)
    value = intensity(scenario, tol)
    return scenario.pole.Gamma * math.exp(-scenario.pole.Gamma * t) * value


def born_rate(scenario: DecayScenario) -> float:
    """Golden-rule rate 2 pi sum_b |v_b(E_d)|^2 at the free energy E_d.

    The Born approximation replaces the decaying state by a free eigenstate
    with energy E_d, collapsing the Lorentzian kernel to a point evaluation.
    """
    if scenario.born_energy is None:
        raise ValidationError("born_rate needs a scenario with born_energy set")
    value = float(scenario.coupling_squared(scenario.born_energy))
    if value == 0.0:
        raise ZeroCoupling(
            f"all channel couplings vanish at the Born energy {scenario.born_energy:g}"
        )
    return 2.0 * math.pi * value
