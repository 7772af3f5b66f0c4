"""Resonance expansion: direct S-matrix elements vs pole terms + background.

The matrix element of S between energy wavefunctions,

    (psi, phi) = integral psi(E) S(E + i0) phi(E) dE,

can be evaluated two ways.  Directly, as written.  Or by deforming the
integration line into the lower half-plane (the second sheet, for models
that have one): each simple S-pole z_i crossed on the way down contributes
-2 pi i * residue_i * psi(z_i) phi(z_i), with the continuations psi(z_i)
and phi(z_i) supplied by Gamow pairings, and what remains is a background
integral along the final contour.  ``decompose`` computes both sides and
reports the residual.

Two decomposition modes:

* ``oracle``   - the direct integral runs over the full real line and the
  background lives on a horizontal line below every pole.  Only flat
  (single-sheet rational) models qualify; the identity is then exact and
  checkable to quadrature precision.
* ``physical`` - the direct integral runs over the scattering spectrum
  [0, inf) and the deformation sweeps clockwise through the lower
  half-plane onto the negative real axis of the second sheet.  This is the
  geometry the uniformized models realize literally; the full-line tail
  that the physical domain omits is reported separately.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PoleOnPath, ValidationError
from .gamow import GamowFunctional, GamowVariant, gamow_pairing
from .hardy import fourier_transform_signal, signal_energy
from .paths import ContourPath, LineSegment, RaySegment, Sheet, horizontal_line, negative_axis_ray
from .quadrature import DEFAULT_TOL, integrate_contour, integrate_real_line
from .spectral import (
    EnergyWaveFunction,
    ModelKind,
    ResonancePole,
    SMatrixModel,
    unitarity_defect,
)

_UNITARITY_GRID = np.geomspace(1e-2, 1e3, 241)
_UNITARITY_LIMIT = 1e-8


@dataclass(frozen=True)
class ExpansionReport:
    """Both sides of the deformation identity for one matrix element.

    ``residual`` is relative to |direct| when the direct value is
    meaningfully nonzero and absolute otherwise (a vanishing matrix
    element would make any relative measure meaningless).
    """

    direct: complex
    pole_terms: tuple[tuple[ResonancePole, complex], ...]
    background: complex
    residual: float
    tier: str
    mode: str
    negative_tail: float | None = None

    def to_dict(self) -> dict:
        data = {
            "tier": self.tier,
            "mode": self.mode,
            "direct": [self.direct.real, self.direct.imag],
            "poles": [
                {
                    "E_R": p.E_R,
                    "Gamma": p.Gamma,
                    "contribution": [term.real, term.imag],
                }
                for p, term in self.pole_terms
            ],
            "background": [self.background.real, self.background.imag],
            "residual": self.residual,
            "negative_tail": self.negative_tail,
        }
        return data


def _tier(model: SMatrixModel) -> str:
    return "flat" if model.kind is ModelKind.FLAT_RATIONAL_E else "uniformized"


def _require_unitary(model: SMatrixModel) -> None:
    defect = unitarity_defect(model, _UNITARITY_GRID)
    if defect > _UNITARITY_LIMIT:
        raise ValidationError(
            f"the model is not unitary on the physical axis (defect {defect:.3g}); "
            "matrix-element identities assume |S(E+i0)| = 1"
        )


def _kernel(psi: EnergyWaveFunction, phi: EnergyWaveFunction, model: SMatrixModel):
    def f(z, sheet):
        return psi(z) * model.evaluate(z, sheet) * phi(z)

    return f


def _axis_breakpoints(psi, phi, model) -> tuple[float, ...]:
    points = {p.E_R for p in model.poles}
    for wf in (psi, phi):
        points.update(term.pole.real for term in wf.terms)
    return tuple(sorted(points))


def direct_smatrix_element(
    psi: EnergyWaveFunction,
    phi: EnergyWaveFunction,
    model: SMatrixModel,
    domain: str = "physical",
    tol: float = DEFAULT_TOL,
) -> complex:
    """The matrix element integral, straight off the integration line.

    ``domain`` selects [0, inf) (``"physical"``, the scattering spectrum)
    or the whole line (``"full-line"``, defined for flat models whose S is
    a single rational function).
    """
    _require_unitary(model)
    if domain not in ("physical", "full-line"):
        raise ValidationError(f"unknown domain {domain!r}")
    if domain == "full-line" and model.kind is not ModelKind.FLAT_RATIONAL_E:
        raise ValidationError("full-line integration needs a flat model; "
                              "a branch cut starts at 0 otherwise")

    def f(e):
        return psi(e) * model.evaluate(np.asarray(e, dtype=complex), Sheet.FIRST) * phi(e)

    lower = 0.0 if domain == "physical" else -np.inf
    res = integrate_real_line(
        f, tol, lower=lower, breakpoints=_axis_breakpoints(psi, phi, model)
    )
    return res.value


def _horizontal_depth(path: ContourPath) -> float:
    """Imaginary level of a horizontal background path, validated."""
    level = None
    for seg in path.segments:
        if isinstance(seg, LineSegment):
            if seg.start.imag != seg.end.imag:
                raise ValidationError("background path must be horizontal")
            seg_level = seg.start.imag
        elif isinstance(seg, RaySegment):
            if seg.direction.imag != 0.0:
                raise ValidationError("background path rays must be horizontal")
            seg_level = seg.start.imag
        else:
            raise ValidationError("background path must consist of lines and rays")
        if level is None:
            level = seg_level
        elif seg_level != level:
            raise ValidationError("background path segments sit at different heights")
    if level is None or level >= 0.0:
        raise ValidationError("background path must lie strictly below the real axis")
    return level


def _pole_term(pole: ResonancePole, psi, phi, tol: float) -> complex:
    g = GamowFunctional(pole, GamowVariant.DECAYING)
    left = gamow_pairing(g, psi, tol)
    right = gamow_pairing(g, phi, tol)
    return -2j * np.pi * pole.residue * left * right


def decompose(
    psi: EnergyWaveFunction,
    phi: EnergyWaveFunction,
    model: SMatrixModel,
    path: ContourPath | None = None,
    mode: str = "oracle",
    tol: float = DEFAULT_TOL,
) -> ExpansionReport:
    """Split the matrix element into pole terms plus a background integral.

    In ``oracle`` mode (flat models) the background path is a horizontal
    line; the default sits at Im z = -(max Gamma + 1/2), below every pole,
    and a caller-supplied line crosses only the poles above it.  In
    ``physical`` mode the background is the negative-axis integral on the
    second sheet and every model pole is crossed.
    """
    if mode not in ("oracle", "physical"):
        raise ValidationError(f"unknown decomposition mode {mode!r}")
    if mode == "oracle":
        if model.kind is not ModelKind.FLAT_RATIONAL_E:
            raise ValidationError(
                "oracle mode needs a flat model; uniformized models "
                "decompose in physical mode"
            )
        if path is None:
            depth = max([p.Gamma for p in model.poles], default=0.0) + 0.5
            path = horizontal_line(-depth, Sheet.SECOND)
        level = _horizontal_depth(path)
        for p in model.poles:
            gap = abs(p.z_R.imag - level)
            if gap < 1e-9 * max(1.0, abs(level)):
                raise PoleOnPath(
                    f"background line at Im z = {level:.6g} runs through the pole "
                    f"at {p.z_R:.6g}"
                )
        crossed = tuple(p for p in model.poles if p.z_R.imag > level)
        direct = direct_smatrix_element(psi, phi, model, "full-line", tol)
        negative_tail = None
    else:
        if path is None:
            path = negative_axis_ray(Sheet.SECOND)
        crossed = model.poles
        direct = direct_smatrix_element(psi, phi, model, "physical", tol)

        def tail(e):
            return psi(e) * model.evaluate(np.asarray(e, dtype=complex), Sheet.FIRST) * phi(e)

        negative_tail = abs(integrate_real_line(tail, tol, upper=0.0).value)

    background = integrate_contour(_kernel(psi, phi, model), path, tol).value
    terms = tuple((p, _pole_term(p, psi, phi, tol)) for p in crossed)
    reconstructed = background + sum(t for _, t in terms)
    gap = abs(direct - reconstructed)
    residual = gap / abs(direct) if abs(direct) > 1e-12 else gap
    return ExpansionReport(
        direct=direct,
        pole_terms=terms,
        background=background,
        residual=residual,
        tier=_tier(model),
        mode=mode,
        negative_tail=negative_tail,
    )


def background_term(
    psi: EnergyWaveFunction,
    phi: EnergyWaveFunction,
    model: SMatrixModel,
    path: ContourPath | None = None,
    tol: float = DEFAULT_TOL,
) -> complex:
    """Background integral along the second-sheet negative real axis.

    This is the physical-mode background exposed on its own: the part of
    the matrix element that no resonance pole accounts for.  ``path``
    defaults to the ray from the branch point out to -infinity.
    """
    _require_unitary(model)
    if path is None:
        path = negative_axis_ray(Sheet.SECOND)
    return integrate_contour(_kernel(psi, phi, model), path, tol).value


def continuum_completeness_defect(wf: EnergyWaveFunction, tol: float = DEFAULT_TOL) -> float:
    """Relative gap between the energy norm and its time-domain realization.

    Expanding over the continuum basis turns ||wf||^2 into a time integral;
    numerically, |integral |wf(E)|^2 dE - (1/2 pi) integral |F(t)|^2 dt|
    divided by the energy norm.  Small defects certify that the transform
    pipeline preserves the norm, which is what the continuum expansion
    asserts.
    """

    def density(e):
        v = wf(e)
        return v * np.conj(v)

    breaks = tuple(sorted({term.pole.real for term in wf.terms}))
    norm = integrate_real_line(density, tol, breakpoints=breaks).value.real
    signal = fourier_transform_signal(wf)
    time_side = signal_energy(signal) / (2.0 * np.pi)
    return abs(norm - time_side) / norm
