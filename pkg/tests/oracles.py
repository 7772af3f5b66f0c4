"""Independent reference implementations used by the test suite.

Everything in this module is written directly from the defining formulas
using numpy and cmath only. Nothing here calls back into the package
quadrature or model code, so agreement between these values and the
package output is a genuine cross-check rather than a tautology.
"""

import cmath
import math

import numpy as np


def pole_position(E_R, Gamma):
    """Lower-half-plane resonance position for a pole with the given data."""
    return complex(E_R, -0.5 * Gamma)


def flat_s_reference(pole_data, z, background=1.0 + 0.0j):
    """Rational S-matrix value from the product formula, written out by hand.

    pole_data is a sequence of (E_R, Gamma) pairs. Each factor is
    (conj(z_i) - z) / (z - z_i) with z_i in the lower half-plane, and the
    overall sign alternates with the pole count so the value tends to the
    background at large |z|.
    """
    value = complex(background) * (-1.0) ** (len(pole_data) - 1)
    for E_R, Gamma in pole_data:
        z_i = pole_position(E_R, Gamma)
        value *= (z_i.conjugate() - z) / (z - z_i)
    return value


def momentum_first_sheet(z):
    """Upper-half-plane momentum root of z = k**2."""
    return 1j * cmath.sqrt(-complex(z))


def uniformized_s_reference(pole_data, z, sheet_two=False):
    """Momentum-plane Blaschke product evaluated by hand.

    Each resonance contributes factors built from the fourth-quadrant
    momentum root q of its lower-half position. The first sheet maps to
    Im k >= 0 and the second sheet to the reflected root.
    """
    k = momentum_first_sheet(z)
    if sheet_two:
        k = -k
    value = complex((-1.0) ** (len(pole_data) - 1))
    for E_R, Gamma in pole_data:
        q = cmath.sqrt(pole_position(E_R, Gamma))
        if q.real < 0:
            q = -q
        value *= (q.conjugate() - k) * (q + k) / ((k - q) * (k + q.conjugate()))
    return value


def rational_value(terms, z):
    """Evaluate sum of c / (z - p)**m for (c, p, m) triples."""
    total = 0.0 + 0.0j
    for c, p, m in terms:
        total += c / (z - p) ** m
    return total


def fourier_pole_signal(c, p, m, t):
    """Closed-form Fourier transform of c / (E - p)**m at time t.

    Convention: signal(t) = integral over the real axis of f(E) exp(-iEt).
    A pole in the upper half-plane contributes only for t < 0 and one in
    the lower half-plane only for t > 0; the value follows from the
    residue of exp(-iEt) / (E - p)**m.
    """
    residue = c * (-1j * t) ** (m - 1) * cmath.exp(-1j * p * t) / math.factorial(m - 1)
    if p.imag > 0:
        return 2j * math.pi * residue if t < 0 else 0.0j
    return -2j * math.pi * residue if t > 0 else 0.0j


def bw_intensity_constant(E_R, Gamma, amplitude):
    """Exact Lorentzian line-shape integral for a constant channel coupling.

    integral over [0, inf) of a**2 / ((E - E_R)**2 + Gamma**2 / 4) dE.
    """
    return amplitude**2 * (2.0 / Gamma) * (math.atan(2.0 * E_R / Gamma) + math.pi / 2.0)


def simpson(f, a, b, n):
    """Composite Simpson rule with n panels (n must be even)."""
    if n % 2:
        n += 1
    x = np.linspace(a, b, n + 1)
    y = np.asarray([f(xi) for xi in x], dtype=float)
    h = (b - a) / n
    return h / 3.0 * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-1:2].sum())


def simpson_between_breakpoints(f, points, n_per_panel=4000):
    """Simpson rule applied separately on each interval between breakpoints.

    Integrands in the tests are smooth inside each interval but may have
    kinks at the interval ends, so splitting keeps the rule accurate.
    """
    total = 0.0
    for a, b in zip(points[:-1], points[1:]):
        if b > a:
            total += simpson(f, a, b, n_per_panel)
    return total


def lorentzian_weight(E, E_R, Gamma):
    return 1.0 / ((E - E_R) ** 2 + 0.25 * Gamma**2)
