"""Gamow functionals: pairing integrals, complex eigenvalues, semigroups.

A resonance pole defines two generalized states, known only through their
pairings with admissible test functions:

    DECAYING  <psi|z_R>  = -(1/2 pi i) integral psi(E) / (E - z_R  ) dE,
    GROWING   <psi|z_R*> = +(1/2 pi i) integral psi(E) / (E - z_R* ) dE,

where the decaying variant acts on HARDY_LOWER test functions (so the
integral closes around the lower half-plane pole) and the growing one on
HARDY_UPPER.  Both evaluate to the analytic continuation of the test
function at the pole, which is what the eigenvalue and pole-term identities
below exercise.

Time evolution is a one-sided semigroup: the decaying state evolves only
forward (factor exp(-i z_R t), |factor|^2 = exp(-Gamma t) for t >= 0), the
growing state only backward.  Outside the legal direction the defining
integral does not exist; the divergence scan makes that failure visible as
unbounded growth of a cutoff sequence along a tilted contour.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ClassMismatch,
    DecayTooSlow,
    TimeDirectionViolation,
    ValidationError,
)
from .paths import ContourPath, LineSegment, Sheet
from .quadrature import integrate_contour, integrate_real_line
from .spectral import EnergyWaveFunction, HardyClass, ResonancePole


class GamowVariant(enum.Enum):
    DECAYING = "decaying"
    GROWING = "growing"


@dataclass(frozen=True)
class GamowFunctional:
    """One of the two generalized eigenstates attached to a resonance pole."""

    pole: ResonancePole
    variant: GamowVariant

    @property
    def point(self) -> complex:
        """The complex eigenvalue: z_R for decaying, z_R* for growing."""
        return self.pole.z_R if self.variant is GamowVariant.DECAYING else self.pole.z_R_conj

    @property
    def required_class(self) -> HardyClass:
        return (
            HardyClass.HARDY_LOWER
            if self.variant is GamowVariant.DECAYING
            else HardyClass.HARDY_UPPER
        )

    def normalization(self) -> float:
        """Scale sqrt(2 pi Gamma) turning the pole term into a unit rank-one piece."""
        return math.sqrt(2.0 * math.pi * self.pole.Gamma)


def _require_class(g: GamowFunctional, test: EnergyWaveFunction):
    if test.declared_class is not g.required_class:
        raise ClassMismatch(
            f"{g.variant.value} functionals pair with {g.required_class.value} "
            f"test functions, got {test.declared_class.value}"
        )


def gamow_pairing(g: GamowFunctional, test: EnergyWaveFunction, tol: float = 1e-10) -> complex:
    """Defining pairing integral; equals the continuation of ``test`` at the pole."""
    _require_class(g, test)
    z0 = g.point
    sign = -1.0 if g.variant is GamowVariant.DECAYING else +1.0
    marks = sorted({z0.real} | {t.pole.real for t in test.terms})
    res = integrate_real_line(lambda E: test(E) / (E - z0), tol, breakpoints=marks)
    return sign * res.value / (2j * math.pi)


def eigenvalue_defect(g: GamowFunctional, test: EnergyWaveFunction, tol: float = 1e-10) -> float:
    """Relative defect of <E * test | g> = z * <test | g>.

    Multiplying by E costs one power of decay, so the test function must
    decay at least like 1/E^2.
    """
    if test.decay_order() < 2:
        raise DecayTooSlow(
            "eigenvalue checks need test functions of decay order >= 2"
        )
    lifted = test.multiply_by_E()
    paired = gamow_pairing(g, test, tol)
    paired_lifted = gamow_pairing(g, lifted, tol)
    reference = g.point * paired
    return abs(paired_lifted - reference) / abs(reference)


def semigroup_factor(g: GamowFunctional, t: float) -> complex:
    """Evolution factor exp(-i z t) in the functional's legal time direction."""
    if g.variant is GamowVariant.DECAYING and t < 0:
        raise TimeDirectionViolation(
            f"the decaying semigroup is defined for t >= 0 only (got t = {t:.6g})"
        )
    if g.variant is GamowVariant.GROWING and t > 0:
        raise TimeDirectionViolation(
            f"the growing semigroup is defined for t <= 0 only (got t = {t:.6g})"
        )
    return cmath.exp(-1j * g.point * t)


def breit_wigner_pole_term(
    psi: EnergyWaveFunction,
    phi: EnergyWaveFunction,
    pole: ResonancePole,
    tol: float = 1e-10,
) -> tuple[complex, complex]:
    """Both sides of the pole-term identity.

    Left: 2 pi Gamma times the product of the two pairings at z_R.
    Right: the full-line integral of psi * phi against the Breit-Wigner
    kernel i Gamma / (E - z_R), computed by quadrature.  In exact arithmetic
    they coincide.
    """
    for name, wf in (("psi", psi), ("phi", phi)):
        if wf.declared_class is not HardyClass.HARDY_LOWER:
            raise ClassMismatch(f"{name} must be HARDY_LOWER for the pole-term identity")
    if psi.decay_order() + phi.decay_order() < 2:
        raise DecayTooSlow("the product psi * phi must decay at least like 1/E^2")
    g = GamowFunctional(pole, GamowVariant.DECAYING)
    lhs = 2.0 * math.pi * pole.Gamma * gamow_pairing(g, psi, tol) * gamow_pairing(g, phi, tol)
    z0 = pole.z_R
    marks = sorted(
        {z0.real} | {t.pole.real for t in psi.terms} | {t.pole.real for t in phi.terms}
    )
    rhs = integrate_real_line(
        lambda E: psi(E) * phi(E) * (1j * pole.Gamma) / (E - z0),
        tol,
        breakpoints=marks,
    )
    return lhs, rhs.value


def semigroup_divergence_scan(
    g: GamowFunctional,
    test: EnergyWaveFunction,
    t: float,
    cutoffs=(1e2, 1e3, 1e4),
    tilt: float = 0.03,
    tol: float = 1e-6,
) -> list[float]:
    """Magnitudes of truncated evolved pairings at growing energy cutoffs.

    The integrand test(z) exp(-izt) / (z - pole) is integrated over the open
    path z = x -+ i*tilt*|x| for x in [-X, X], the defining real-axis integral
    tilted toward the functional's pole side.  In the legal time direction the
    exponential decays along the tilt and the magnitudes settle as the cutoff
    X grows.  In the forbidden direction no amount of tilting helps: the
    endpoint regions carry weight exp(|t|*tilt*X), so the truncated sequence
    grows without bound, which is the numerical signature that the defining
    integral does not exist there.
    """
    _require_class(g, test)
    if not 0.0 < tilt < 1.0:
        raise ValidationError(f"tilt must lie in (0, 1), got {tilt}")
    z0 = g.point
    largest = max(float(c) for c in cutoffs)
    if abs(t) * tilt * largest > 690.0:
        raise ValidationError(
            "scan would overflow: |t| * tilt * max(cutoffs) = "
            f"{abs(t) * tilt * largest:.3g} exceeds 690; reduce one of them"
        )
    slope = -tilt if g.variant is GamowVariant.DECAYING else tilt
    out: list[float] = []
    for cutoff in cutoffs:
        x = float(cutoff)
        if x <= 0.0:
            raise ValidationError(f"cutoffs must be positive, got {cutoff}")
        apex = complex(0.0, 0.0)
        path = ContourPath(
            (
                LineSegment(complex(-x, slope * x), apex, Sheet.SECOND),
                LineSegment(apex, complex(x, slope * x), Sheet.SECOND),
            )
        )

        def kernel(z, _sheet):
            return test(z) * np.exp(-1j * z * t) / (z - z0)

        res = integrate_contour(kernel, path, tol)
        out.append(abs(res.value))
    return out
