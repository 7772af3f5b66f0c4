"""Adaptive complex-valued quadrature on lines and contours.

The engine is a worst-first bisection scheme over embedded Gauss-Kronrod 7/15
panels.  Each panel reports the Kronrod value together with a scaled error
estimate (the classic (200*|K15-G7|/resasc)^1.5 sharpening, floored at a
roundoff level), and the panel with the largest estimate is split until the
summed estimate meets the requested absolute + relative tolerance.

Infinite and semi-infinite ranges go through the substitution E = c + tan(theta),
which keeps all nodes interior, so integrands are never evaluated at infinity.

Integrands are vectorized: ``f`` receives a numpy array of abscissae and must
return an array of values.  Line integrands take one argument ``f(E)``;
contour integrands take two, ``f(z, sheet)``, because genuinely two-sheeted
models need to know which sheet a point lives on.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from .errors import InconsistentResidue, NonConvergence, PoleOnPath, ValidationError
from .paths import ContourPath, Orientation, RaySegment

# Gauss-Kronrod 7/15 abscissae and weights on [-1, 1], ascending order.
# Odd indices (1, 3, ..., 13) are the embedded 7-point Gauss nodes.
_NODES = np.array(
    [
        -0.991455371120813,
        -0.949107912342759,
        -0.864864423359769,
        -0.741531185599394,
        -0.586087235467691,
        -0.405845151377397,
        -0.207784955007898,
        0.0,
        0.207784955007898,
        0.405845151377397,
        0.586087235467691,
        0.741531185599394,
        0.864864423359769,
        0.949107912342759,
        0.991455371120813,
    ]
)
_WEIGHTS_K = np.array(
    [
        0.022935322010529,
        0.063092092629979,
        0.104790010322250,
        0.140653259715525,
        0.169004726639267,
        0.190350578064785,
        0.204432940075298,
        0.209482141084728,
        0.204432940075298,
        0.190350578064785,
        0.169004726639267,
        0.140653259715525,
        0.104790010322250,
        0.063092092629979,
        0.022935322010529,
    ]
)
_WEIGHTS_G = np.array(
    [
        0.129484966168870,
        0.279705391489277,
        0.381830050505119,
        0.417959183673469,
        0.381830050505119,
        0.279705391489277,
        0.129484966168870,
    ]
)

DEFAULT_TOL = 1e-10
MAX_DEPTH = 60
_MAX_PANELS = 200_000
_EPS = float(np.finfo(float).eps)


@dataclass(frozen=True)
class QuadratureResult:
    """Value, summed error estimate and number of integrand evaluations."""

    value: complex
    error: float
    evaluations: int


def _panel(g, a: float, b: float) -> tuple[complex, float]:
    """One Gauss-Kronrod panel on [a, b]; returns (K15 value, error estimate)."""
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    x = center + half * _NODES
    y = np.asarray(g(x), dtype=complex)
    if not np.all(np.isfinite(y.real)) or not np.all(np.isfinite(y.imag)):
        raise PoleOnPath(
            f"integrand is not finite near {center + 0j:.6g} "
            "(pole on the path, or overflow)"
        )
    k15 = half * np.sum(_WEIGHTS_K * y)
    g7 = half * np.sum(_WEIGHTS_G * y[1::2])
    resabs = half * float(np.sum(_WEIGHTS_K * np.abs(y)))
    mean = k15 / (b - a)
    resasc = half * float(np.sum(_WEIGHTS_K * np.abs(y - mean)))
    diff = abs(k15 - g7)
    err = diff
    if resasc != 0.0 and diff != 0.0:
        err = resasc * min(1.0, (200.0 * diff / resasc) ** 1.5)
    err = max(err, 50.0 * _EPS * resabs)
    return complex(k15), err


def _adapt(pieces, atol: float, rtol: float) -> QuadratureResult:
    """Worst-first refinement over initial (g, a, b) pieces."""
    heap = []
    total = 0.0 + 0.0j
    err_sum = 0.0
    evals = 0
    seq = 0
    for g, a, b in pieces:
        val, err = _panel(g, a, b)
        evals += 15
        total += val
        err_sum += err
        heapq.heappush(heap, (-err, seq, a, b, 0, val, err, g))
        seq += 1

    while err_sum > atol + rtol * abs(total):
        if len(heap) >= _MAX_PANELS:
            raise NonConvergence(
                f"quadrature exceeded {_MAX_PANELS} panels "
                f"(estimate {err_sum:.3e}, value {abs(total):.3e})"
            )
        _, _, a, b, depth, val, err, g = heapq.heappop(heap)
        if depth >= MAX_DEPTH:
            raise NonConvergence(
                f"quadrature interval [{a:.6g}, {b:.6g}] refined past depth "
                f"{MAX_DEPTH} without meeting tolerance (estimate {err:.3e})"
            )
        mid = 0.5 * (a + b)
        v1, e1 = _panel(g, a, mid)
        v2, e2 = _panel(g, mid, b)
        evals += 30
        total += v1 + v2 - val
        err_sum += e1 + e2 - err
        heapq.heappush(heap, (-e1, seq, a, mid, depth + 1, v1, e1, g))
        seq += 1
        heapq.heappush(heap, (-e2, seq, mid, b, depth + 1, v2, e2, g))
        seq += 1

    # Recompute the sums in heap order for a clean, reproducible rounding.
    total = complex(sum(item[5] for item in heap))
    err_sum = float(sum(item[6] for item in heap))
    return QuadratureResult(total, err_sum, evals)


def _tan_piece(f, anchor: float, side: int):
    """Map a half line anchored at ``anchor`` onto a finite theta interval.

    side=+1 covers [anchor, +inf), side=-1 covers (-inf, anchor].
    """

    def g(theta):
        t = np.tan(theta)
        jac = 1.0 + t * t
        return np.asarray(f(anchor + t), dtype=complex) * jac

    if side > 0:
        return (g, 0.0, 0.5 * math.pi)
    return (g, -0.5 * math.pi, 0.0)


def integrate_real_line(
    f,
    tol: float | None = None,
    *,
    atol: float | None = None,
    rtol: float | None = None,
    lower: float = -math.inf,
    upper: float = math.inf,
    breakpoints=(),
) -> QuadratureResult:
    """Integrate ``f`` over [lower, upper] (default the whole real line).

    The caller declares integrability: ``f`` must decay at least like 1/E^2
    toward any infinite end.  ``breakpoints`` seeds extra panel boundaries,
    which helps the refinement find narrow features (sharp resonances) fast.
    """
    if tol is not None:
        atol = rtol = tol
    atol = DEFAULT_TOL if atol is None else atol
    rtol = DEFAULT_TOL if rtol is None else rtol
    if not lower < upper:
        raise ValidationError("integration range is empty")

    marks = sorted({float(p) for p in breakpoints if lower < p < upper})
    if math.isinf(lower) and math.isinf(upper) and not marks:
        marks = [0.0]

    pieces = []
    lo = lower
    for m in marks + [upper]:
        if math.isinf(lo):
            pieces.append(_tan_piece(f, m if not math.isinf(m) else 0.0, -1))
        elif math.isinf(m):
            pieces.append(_tan_piece(f, lo, +1))
        else:
            pieces.append((lambda x, _f=f: np.asarray(_f(x), dtype=complex), lo, m))
        lo = m
    return _adapt(pieces, atol, rtol)


def integrate_contour(f, path: ContourPath, tol: float | None = None) -> QuadratureResult:
    """Integrate ``f(z, sheet)`` along ``path``, honoring its orientation."""
    atol = rtol = DEFAULT_TOL if tol is None else tol
    pieces = []
    for seg in path.segments:
        if isinstance(seg, RaySegment):

            def g(theta, _seg=seg):
                s = np.tan(theta)
                jac = 1.0 + s * s
                z = _seg.points(s)
                return np.asarray(f(z, _seg.sheet), dtype=complex) * _seg.derivatives(s) * jac

            pieces.append((g, 0.0, 0.5 * math.pi))
        else:

            def g(s, _seg=seg):
                z = _seg.points(s)
                return np.asarray(f(z, _seg.sheet), dtype=complex) * _seg.derivatives(s)

            pieces.append((g, 0.0, 1.0))
    result = _adapt(pieces, atol, rtol)
    if path.orientation is Orientation.REVERSED:
        result = QuadratureResult(-result.value, result.error, result.evaluations)
    return result


def _loop_value(f, z0: complex, radius: float, atol: float, rtol: float):
    def g(theta):
        z = z0 + radius * np.exp(1j * theta)
        return np.asarray(f(z), dtype=complex) * 1j * radius * np.exp(1j * theta)

    res = _adapt([(g, 0.0, 2.0 * math.pi)], atol, rtol)
    return res.value / (2j * math.pi), res.evaluations


def residue_at(
    f,
    z0: complex,
    radius: float = 0.5,
    tol: float | None = None,
) -> QuadratureResult:
    """Residue of ``f`` at ``z0`` from a counterclockwise loop integral.

    The loop is evaluated at ``radius`` and again at ``radius/2``; if the two
    estimates disagree by more than 1e-8 relative, the pole is not simple or
    the loop encloses something else, and InconsistentResidue is raised.
    The caller must pick ``radius`` small enough to avoid other poles.
    """
    if radius <= 0:
        raise ValidationError("residue loop radius must be > 0")
    atol = rtol = DEFAULT_TOL if tol is None else tol
    coarse, n1 = _loop_value(f, z0, radius, atol, rtol)
    fine, n2 = _loop_value(f, z0, 0.5 * radius, atol, rtol)
    # An absolute disagreement at quadrature-noise level means both loops
    # converged (possibly to a zero residue at a regular point); demanding
    # 1e-8 relative agreement between two noise values would always fail.
    diff = abs(fine - coarse)
    scale = max(abs(fine), abs(coarse), 1e-300)
    if diff > max(1e-8 * scale, 10.0 * atol):
        raise InconsistentResidue(
            f"residue at {z0:.6g} changed by {diff / scale:.3e} (relative) when "
            f"the loop radius was halved from {radius:.3g}"
        )
    return QuadratureResult(fine, diff + atol, n1 + n2)
