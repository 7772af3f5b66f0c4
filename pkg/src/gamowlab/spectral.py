"""Resonance poles, two-sheet S-matrix models and rational energy wavefunctions.

Models come in two kinds.

``FLAT_RATIONAL_E`` is single valued: both sheet tags evaluate the same
rational function of z, a product of unimodular one-pole factors

    S(z) = background * (-1)**(N-1) * prod_i (z_i* - z) / (z - z_i),

where z_i = E_i - i*Gamma_i/2.  The overall sign keeps each pole's residue at
+i*Gamma_i when the poles are far apart, and exactly so for a single pole.

``UNIFORMIZED_RATIONAL_K`` lives on the genuine two-sheet surface E = k^2 with
a branch point at 0: sheet I is the upper half k-plane (Im k >= 0), sheet II
the lower one.  Each resonance contributes the rational factor

    u_i(k) = (q_i* - k)(q_i + k) / ((k - q_i)(k + q_i*)),

with q_i the sheet II momentum above z_i, so the sheet II poles sit at q_i and
-q_i* while their mirror images are zeros; |u_i| = 1 on the real k axis.

Wavefunctions are finite sums c_k / (E - a_k)^{m_k}, optionally damped by a
Gaussian, with all a_k strictly off the real axis.  A declared Hardy class
commits to where the poles may live: HARDY_LOWER functions are analytic in
the lower half-plane (poles strictly above the real axis), HARDY_UPPER the
mirror image.  Damping is incompatible with either declaration because a
Gaussian grows along imaginary directions.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BranchPointHit, DecayTooSlow, PoleHit, ValidationError
from .paths import Sheet

_COLLISION_TOL = 1e-12


class ModelKind(enum.Enum):
    FLAT_RATIONAL_E = "flat"
    UNIFORMIZED_RATIONAL_K = "uniformized"


class HardyClass(enum.Enum):
    HARDY_UPPER = "hardy_upper"
    HARDY_LOWER = "hardy_lower"
    NONE = "none"


@dataclass(frozen=True)
class ComplexEnergy:
    """A point of the energy surface: a complex value plus its sheet tag."""

    value: complex
    sheet: Sheet = Sheet.FIRST


@dataclass(frozen=True)
class ResonancePole:
    """Resonance at z = E_R - i*Gamma/2 (and its mirror at the conjugate).

    ``residue`` is the residue the surrounding S-matrix model assigns to this
    pole on the second sheet; in isolation it defaults to i*Gamma.
    """

    E_R: float
    Gamma: float
    residue: complex | None = None

    def __post_init__(self):
        if not self.E_R > 0:
            raise ValidationError("E_R must be > 0")
        if not self.Gamma > 0:
            raise ValidationError("Gamma must be > 0")
        if self.residue is None:
            object.__setattr__(self, "residue", 1j * self.Gamma)

    @property
    def z_R(self) -> complex:
        """Decaying pole position E_R - i*Gamma/2."""
        return complex(self.E_R, -0.5 * self.Gamma)

    @property
    def z_R_conj(self) -> complex:
        """Growing pole position E_R + i*Gamma/2."""
        return complex(self.E_R, 0.5 * self.Gamma)


def momentum_for_sheet(z: complex, sheet: Sheet) -> complex:
    """Momentum above z on the requested sheet of E = k^2.

    Sheet I is Im k >= 0.  Real z > 0 is read as the upper rim E + i0, so
    sheet I gives +sqrt(E) there and sheet II gives -sqrt(E).
    """
    z = complex(z)
    if z.imag == 0.0:
        if z.real > 0.0:
            k1 = complex(math.sqrt(z.real), 0.0)
        elif z.real < 0.0:
            k1 = complex(0.0, math.sqrt(-z.real))
        else:
            raise BranchPointHit("momentum is requested at the branch point z = 0")
        return k1 if sheet is Sheet.FIRST else -k1
    k1 = 1j * cmath.sqrt(-z)
    return k1 if sheet is Sheet.FIRST else -k1


@dataclass(frozen=True)
class SMatrixModel:
    """S-matrix with a finite set of resonance poles on the second sheet."""

    kind: ModelKind
    poles: tuple[ResonancePole, ...] = ()
    background: complex = 1.0 + 0.0j
    branch_point: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "poles", tuple(self.poles))
        object.__setattr__(self, "background", complex(self.background))
        positions = [p.z_R for p in self.poles]
        for i, a in enumerate(positions):
            for b in positions[i + 1 :]:
                if abs(a - b) < 1e-9:
                    raise ValidationError("model poles must be distinct")
        if self.kind is ModelKind.UNIFORMIZED_RATIONAL_K and self.branch_point != 0.0:
            raise ValidationError("the uniformized model has its branch point at 0")
        # Re-tag each pole with the residue the assembled model actually has
        # there, so downstream residue sums close exactly.
        tagged = tuple(
            ResonancePole(p.E_R, p.Gamma, self._analytic_residue(i))
            for i, p in enumerate(self.poles)
        )
        object.__setattr__(self, "poles", tagged)

    # -- assembly ---------------------------------------------------------

    @property
    def _sign(self) -> complex:
        n = len(self.poles)
        return complex((-1.0) ** (n - 1)) if n else 1.0 + 0.0j

    def _momenta(self) -> list[complex]:
        return [momentum_for_sheet(p.z_R, Sheet.SECOND) for p in self.poles]

    def _flat_value(self, z):
        value = np.full_like(np.asarray(z, dtype=complex), self.background * self._sign)
        for p in self.poles:
            value = value * (np.conj(p.z_R) - z) / (z - p.z_R)
        return value

    def _k_value(self, k):
        value = np.full_like(np.asarray(k, dtype=complex), self.background * self._sign)
        for q in self._momenta():
            qc = np.conj(q)
            value = value * ((qc - k) * (q + k)) / ((k - q) * (k + qc))
        return value

    def _analytic_residue(self, index: int) -> complex:
        """Residue of the assembled second-sheet S at pole ``index``."""
        p = self.poles[index]
        z0 = p.z_R
        if self.kind is ModelKind.FLAT_RATIONAL_E:
            res = self.background * self._sign * (np.conj(z0) - z0)
            for j, other in enumerate(self.poles):
                if j != index:
                    res *= (np.conj(other.z_R) - z0) / (z0 - other.z_R)
            return complex(res)
        # Uniformized: S(z) ~ r_k * 2q / (z - z0) near z0 on sheet II.
        momenta = self._momenta()
        q = momenta[index]
        qc = np.conj(q)
        r_k = self.background * self._sign * (qc - q) * (q + q) / (q + qc)
        for j, other_q in enumerate(momenta):
            if j != index:
                oc = np.conj(other_q)
                r_k *= ((oc - q) * (other_q + q)) / ((q - other_q) * (q + oc))
        return complex(r_k * 2.0 * q)

    # -- evaluation -------------------------------------------------------

    def _check_collisions(self, z, sheet: Sheet):
        z = np.asarray(z, dtype=complex)
        if self.kind is ModelKind.FLAT_RATIONAL_E:
            for p in self.poles:
                tol = _COLLISION_TOL * max(1.0, abs(p.z_R))
                if np.any(np.abs(z - p.z_R) < tol):
                    raise PoleHit(f"evaluation point collides with pole {p.z_R:.6g}")
            return None
        tol_bp = _COLLISION_TOL
        if np.any(np.abs(z) < tol_bp):
            raise BranchPointHit("evaluation point collides with the branch point 0")
        flat = z.ravel()
        k = np.array([momentum_for_sheet(w, sheet) for w in flat]).reshape(z.shape)
        for q in self._momenta():
            tol = _COLLISION_TOL * max(1.0, abs(q))
            if np.any(np.abs(k - q) < tol) or np.any(np.abs(k + np.conj(q)) < tol):
                raise PoleHit(
                    f"evaluation momentum collides with pole at k = {q:.6g} or {-np.conj(q):.6g}"
                )
        return k

    def evaluate(self, z, sheet: Sheet = Sheet.FIRST):
        """S on the requested sheet; accepts scalars or arrays."""
        scalar = np.isscalar(z) or (isinstance(z, np.ndarray) and z.ndim == 0)
        arr = np.atleast_1d(np.asarray(z, dtype=complex))
        if self.kind is ModelKind.FLAT_RATIONAL_E:
            self._check_collisions(arr, sheet)
            out = self._flat_value(arr)
        else:
            k = self._check_collisions(arr, sheet)
            out = self._k_value(k)
        return complex(out[0]) if scalar else out

    def pole_residue(self, index: int) -> complex:
        """Residue of the second-sheet S at pole ``index`` (analytic form)."""
        return self.poles[index].residue


def evaluate_smatrix(model: SMatrixModel, z: ComplexEnergy) -> complex:
    """S-matrix value at a tagged point of the energy surface."""
    return model.evaluate(z.value, z.sheet)


def unitarity_defect(model: SMatrixModel, grid) -> float:
    """max | |S(E+i0)| - 1 | over a grid of real scattering energies."""
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise ValidationError("unitarity grid must be nonempty")
    if np.any(grid <= 0):
        raise ValidationError("unitarity grid must contain positive energies only")
    values = model.evaluate(grid.astype(complex), Sheet.FIRST)
    return float(np.max(np.abs(np.abs(values) - 1.0)))


# ---------------------------------------------------------------------------
# energy wavefunctions


@dataclass(frozen=True)
class WaveTerm:
    """One partial fraction c / (E - a)^m."""

    coefficient: complex
    pole: complex
    multiplicity: int = 1

    def __post_init__(self):
        object.__setattr__(self, "coefficient", complex(self.coefficient))
        object.__setattr__(self, "pole", complex(self.pole))
        if self.multiplicity < 1:
            raise ValidationError("term multiplicity must be >= 1")
        if self.pole.imag == 0.0:
            raise ValidationError("wavefunction poles must lie strictly off the real axis")


@dataclass(frozen=True)
class EnergyWaveFunction:
    """Finite rational sum, optionally Gaussian damped.

    A declared class pins the analyticity half-plane: HARDY_LOWER means every
    pole has Im a > 0 (the function is analytic below the real axis and is
    the boundary value of that continuation), HARDY_UPPER the mirror image.
    """

    terms: tuple[WaveTerm, ...]
    declared_class: HardyClass = HardyClass.NONE
    damping_scale: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if not self.terms:
            raise ValidationError("a wavefunction needs at least one term")
        if all(t.coefficient == 0 for t in self.terms):
            raise ValidationError("a wavefunction must not be identically zero")
        if self.damping_scale is not None and not self.damping_scale > 0:
            raise ValidationError("damping scale must be > 0")
        if self.declared_class is HardyClass.HARDY_LOWER:
            if any(t.pole.imag <= 0 for t in self.terms):
                raise ValidationError(
                    "HARDY_LOWER requires all poles strictly in the upper half-plane"
                )
        elif self.declared_class is HardyClass.HARDY_UPPER:
            if any(t.pole.imag >= 0 for t in self.terms):
                raise ValidationError(
                    "HARDY_UPPER requires all poles strictly in the lower half-plane"
                )
        if self.declared_class is not HardyClass.NONE and self.damping_scale is not None:
            raise ValidationError(
                "Gaussian damping is incompatible with a declared Hardy class"
            )

    # -- evaluation -------------------------------------------------------

    def __call__(self, z):
        scalar = np.isscalar(z) or (isinstance(z, np.ndarray) and np.ndim(z) == 0)
        arr = np.atleast_1d(np.asarray(z, dtype=complex))
        for t in self.terms:
            tol = _COLLISION_TOL * max(1.0, abs(t.pole))
            if np.any(np.abs(arr - t.pole) < tol):
                raise PoleHit(f"evaluation point collides with pole {t.pole:.6g}")
        out = np.zeros_like(arr)
        for t in self.terms:
            out += t.coefficient / (arr - t.pole) ** t.multiplicity
        if self.damping_scale is not None:
            out *= np.exp(-((arr / self.damping_scale) ** 2))
        return complex(out[0]) if scalar else out

    # -- structure --------------------------------------------------------

    def asymptotic_coefficients(self, orders: int) -> np.ndarray:
        """Coefficients w_n of the large-E expansion sum_n w_n / E^n of the
        rational part, n = 1..orders."""
        w = np.zeros(orders, dtype=complex)
        for t in self.terms:
            m = t.multiplicity
            for n in range(m, orders + 1):
                w[n - 1] += t.coefficient * math.comb(n - 1, m - 1) * t.pole ** (n - m)
        return w

    def decay_order(self) -> int:
        """Leading power p with wf ~ 1/E^p at large real E (rational part)."""
        n_max = max(t.multiplicity for t in self.terms) + 8
        w = self.asymptotic_coefficients(n_max)
        scale = sum(abs(t.coefficient) * max(1.0, abs(t.pole)) ** n_max for t in self.terms)
        for n in range(1, n_max + 1):
            if abs(w[n - 1]) > 1e-12 * max(scale, 1.0):
                return n
        return n_max

    def multiply_by_E(self) -> "EnergyWaveFunction":
        """The function E * wf(E), which stays in the family only when the
        would-be constant part cancels (decay order >= 2)."""
        const = 0.0 + 0.0j
        const_scale = 0.0
        merged: dict[tuple[complex, int], complex] = {}

        def add(coef, pole, mult):
            key = (pole, mult)
            merged[key] = merged.get(key, 0.0 + 0.0j) + coef

        for t in self.terms:
            if t.multiplicity == 1:
                const += t.coefficient
                const_scale += abs(t.coefficient)
                add(t.coefficient * t.pole, t.pole, 1)
            else:
                add(t.coefficient, t.pole, t.multiplicity - 1)
                add(t.coefficient * t.pole, t.pole, t.multiplicity)
        if abs(const) > 1e-12 * max(const_scale, 1.0):
            raise DecayTooSlow(
                "E * wf(E) keeps a constant part at infinity; "
                "decay order >= 2 is required"
            )
        terms = tuple(
            WaveTerm(c, pole, mult) for (pole, mult), c in merged.items() if c != 0
        )
        return EnergyWaveFunction(terms, self.declared_class, self.damping_scale)

    def reflect(self) -> "EnergyWaveFunction":
        """The function wf(-E); swaps the analyticity half-plane."""
        flipped = {
            HardyClass.HARDY_LOWER: HardyClass.HARDY_UPPER,
            HardyClass.HARDY_UPPER: HardyClass.HARDY_LOWER,
            HardyClass.NONE: HardyClass.NONE,
        }[self.declared_class]
        terms = tuple(
            WaveTerm(t.coefficient * (-1.0) ** t.multiplicity, -t.pole, t.multiplicity)
            for t in self.terms
        )
        return EnergyWaveFunction(terms, flipped, self.damping_scale)

    def conjugate_on_axis(self) -> "EnergyWaveFunction":
        """The continuation of conj(wf(E)) off the real axis."""
        flipped = {
            HardyClass.HARDY_LOWER: HardyClass.HARDY_UPPER,
            HardyClass.HARDY_UPPER: HardyClass.HARDY_LOWER,
            HardyClass.NONE: HardyClass.NONE,
        }[self.declared_class]
        terms = tuple(
            WaveTerm(np.conj(t.coefficient), np.conj(t.pole), t.multiplicity)
            for t in self.terms
        )
        return EnergyWaveFunction(terms, flipped, self.damping_scale)

    def __add__(self, other: "EnergyWaveFunction") -> "EnergyWaveFunction":
        if not isinstance(other, EnergyWaveFunction):
            return NotImplemented
        if self.damping_scale != other.damping_scale:
            raise ValidationError("cannot add wavefunctions with different damping")
        cls = (
            self.declared_class
            if self.declared_class is other.declared_class
            else HardyClass.NONE
        )
        return EnergyWaveFunction(self.terms + other.terms, cls, self.damping_scale)

    def __mul__(self, factor) -> "EnergyWaveFunction":
        factor = complex(factor)
        terms = tuple(
            WaveTerm(t.coefficient * factor, t.pole, t.multiplicity) for t in self.terms
        )
        return EnergyWaveFunction(terms, self.declared_class, self.damping_scale)

    __rmul__ = __mul__


def evaluate_wavefunction(wf: EnergyWaveFunction, z) -> complex:
    """Closed-form value of the wavefunction's continuation at z."""
    return wf(z)
