"""Contour paths in the complex energy plane.

A path is an ordered chain of segments, each carrying the Riemann-sheet tag
its points live on (relevant only for genuinely two-sheeted models; flat
models ignore it).  Segments expose a uniform parameterization

    z(s), z'(s)   for s in [0, 1]

with vectorized evaluation, so the quadrature engine can treat every segment
the same way.  Rays reach infinity; the engine maps them through a tangent
substitution, so their parameter interval is [0, pi/2) instead.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError


class Sheet(enum.Enum):
    FIRST = "first"
    SECOND = "second"


class Orientation(enum.Enum):
    FORWARD = 1
    REVERSED = -1


@dataclass(frozen=True)
class LineSegment:
    """Straight segment from ``start`` to ``end``."""

    start: complex
    end: complex
    sheet: Sheet = Sheet.FIRST

    def points(self, s: np.ndarray) -> np.ndarray:
        return self.start + (self.end - self.start) * s

    def derivatives(self, s: np.ndarray) -> np.ndarray:
        return np.full_like(s, self.end - self.start, dtype=complex)

    @property
    def endpoints(self) -> tuple[complex, complex]:
        return (self.start, self.end)


@dataclass(frozen=True)
class ArcSegment:
    """Circular arc ``center + radius * exp(i theta)``, theta0 -> theta1.

    theta1 > theta0 runs counterclockwise.
    """

    center: complex
    radius: float
    theta0: float
    theta1: float
    sheet: Sheet = Sheet.FIRST

    def __post_init__(self):
        if self.radius <= 0:
            raise ValidationError("arc radius must be > 0")

    def points(self, s: np.ndarray) -> np.ndarray:
        theta = self.theta0 + (self.theta1 - self.theta0) * s
        return self.center + self.radius * np.exp(1j * theta)

    def derivatives(self, s: np.ndarray) -> np.ndarray:
        theta = self.theta0 + (self.theta1 - self.theta0) * s
        return 1j * self.radius * (self.theta1 - self.theta0) * np.exp(1j * theta)

    @property
    def endpoints(self) -> tuple[complex, complex]:
        return (
            self.center + self.radius * complex(math.cos(self.theta0), math.sin(self.theta0)),
            self.center + self.radius * complex(math.cos(self.theta1), math.sin(self.theta1)),
        )


@dataclass(frozen=True)
class RaySegment:
    """Half line from ``start`` toward infinity along the unit ``direction``.

    ``inward=True`` traverses it the other way, from infinity into ``start``;
    only the first or last segment of a path may do that.
    """

    start: complex
    direction: complex
    inward: bool = False
    sheet: Sheet = Sheet.FIRST

    def __post_init__(self):
        mag = abs(self.direction)
        if mag == 0:
            raise ValidationError("ray direction must be nonzero")
        if abs(mag - 1.0) > 1e-12:
            object.__setattr__(self, "direction", self.direction / mag)

    def points(self, s: np.ndarray) -> np.ndarray:
        # s is arclength here; the engine substitutes s = tan(theta).
        return self.start + self.direction * s

    def derivatives(self, s: np.ndarray) -> np.ndarray:
        sign = -1.0 if self.inward else 1.0
        return np.full_like(s, sign * self.direction, dtype=complex)

    @property
    def endpoints(self) -> tuple[complex, complex]:
        if self.inward:
            return (complex(math.inf, 0), self.start)
        return (self.start, complex(math.inf, 0))


Segment = LineSegment | ArcSegment | RaySegment


@dataclass(frozen=True)
class ContourPath:
    """Chain of segments traversed in order.

    Consecutive finite endpoints must match exactly; the builders below
    guarantee that by construction.  ``orientation`` flips the traversal
    (and hence the sign of any integral along the path).
    """

    segments: tuple[Segment, ...]
    orientation: Orientation = Orientation.FORWARD

    def __post_init__(self):
        if not self.segments:
            raise ValidationError("a contour path needs at least one segment")
        object.__setattr__(self, "segments", tuple(self.segments))
        for i, seg in enumerate(self.segments):
            if isinstance(seg, RaySegment):
                if seg.inward and i != 0:
                    raise ValidationError("an inward ray may only start a path")
                if not seg.inward and i != len(self.segments) - 1:
                    raise ValidationError("an outward ray may only end a path")
        for prev, nxt in zip(self.segments, self.segments[1:]):
            a = prev.endpoints[1]
            b = nxt.endpoints[0]
            if a != b:
                raise ValidationError(
                    f"path segments do not chain: {a} != {b}"
                )

    @property
    def is_closed(self) -> bool:
        first = self.segments[0].endpoints[0]
        last = self.segments[-1].endpoints[1]
        return (
            not any(isinstance(s, RaySegment) for s in self.segments)
            and first == last
        )

    def reversed(self) -> "ContourPath":
        flip = (
            Orientation.REVERSED
            if self.orientation is Orientation.FORWARD
            else Orientation.FORWARD
        )
        return ContourPath(self.segments, flip)


def circle(center: complex, radius: float, sheet: Sheet = Sheet.FIRST) -> ContourPath:
    """Counterclockwise circle around ``center``."""
    return ContourPath((ArcSegment(center, radius, 0.0, 2.0 * math.pi, sheet),))


def rectangle(z_sw: complex, z_ne: complex, sheet: Sheet = Sheet.FIRST) -> ContourPath:
    """Counterclockwise rectangle with opposite corners ``z_sw`` / ``z_ne``."""
    a, b = z_sw, z_ne
    if not (b.real > a.real and b.imag > a.imag):
        raise ValidationError("rectangle corners must be south-west and north-east")
    se = complex(b.real, a.imag)
    nw = complex(a.real, b.imag)
    return ContourPath(
        (
            LineSegment(a, se, sheet),
            LineSegment(se, b, sheet),
            LineSegment(b, nw, sheet),
            LineSegment(nw, a, sheet),
        )
    )


def horizontal_line(depth: float, sheet: Sheet = Sheet.FIRST) -> ContourPath:
    """The full line Im z = depth, traversed toward +infinity."""
    z0 = complex(0.0, depth)
    return ContourPath(
        (
            RaySegment(z0, -1.0 + 0j, inward=True, sheet=sheet),
            RaySegment(z0, 1.0 + 0j, sheet=sheet),
        )
    )


def negative_axis_ray(sheet: Sheet = Sheet.SECOND) -> ContourPath:
    """From the branch point at 0 out to -infinity (second sheet by default)."""
    return ContourPath((RaySegment(0j, -1.0 + 0j, sheet=sheet),))


def tilted_v(half_width: float, depth: float, sheet: Sheet = Sheet.FIRST) -> ContourPath:
    """Symmetric V from -half_width through -i*depth (depth > 0 dips below
    the real axis, depth < 0 rises above it) up to +half_width."""
    if half_width <= 0:
        raise ValidationError("half_width must be > 0")
    tip = complex(0.0, -depth)
    return ContourPath(
        (
            LineSegment(complex(-half_width, 0.0), tip, sheet),
            LineSegment(tip, complex(half_width, 0.0), sheet),
        )
    )
