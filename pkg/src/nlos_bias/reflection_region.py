"""Reflection region of a square reflector and its area.

The reflection region collects every center position at which a reflector of
width ``w`` and orientation ``theta`` produces a first-order path of length at
most ``s``. Its area has a closed form; ``estimate_region_measure`` gives an
independent rejection-sampling estimate through the image method.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .geometry import (
    HALF_PI,
    LinkGeometry,
    Point2,
    reflector_edge_arrays,
    specular_path_batch,
)

# the region is closed; absorb rounding in the focal-distance sum
PATH_RTOL = 1e-12


def _check_s(s: float, d: float, strict: bool = True) -> None:
    if not d > 0:
        raise ValueError(f"d must be positive, got {d}")
    if s < d or (strict and s == d):
        raise ValueError(f"path bound s={s} must exceed the link length d={d}")


def _check_theta(theta: float) -> None:
    if not 0.0 < theta < HALF_PI:
        raise ValueError(f"orientation must lie in (0, pi/2), got {theta}")


@dataclass(frozen=True)
class BoundaryEllipse:
    """Ellipse with foci at the link ends on which paths have length ``s``."""

    s: float
    d: float

    def __post_init__(self):
        _check_s(self.s, self.d)

    @property
    def u(self) -> float:
        return 0.5 * self.s

    @property
    def v(self) -> float:
        return 0.5 * math.sqrt(self.s**2 - self.d**2)

    def residual(self, p: Point2) -> float:
        return p.x**2 / self.u**2 + p.y**2 / self.v**2 - 1.0

    def contains(self, p: Point2) -> bool:
        return self.residual(p) <= 0.0


class GammaPoints(NamedTuple):
    I: Point2
    II: Point2
    III: Point2
    IV: Point2


def gamma_points(theta: float, s: float, d: float) -> GammaPoints:
    """Intersections of the reflection hyperbola with the boundary ellipse."""
    _check_s(s, d)
    _check_theta(theta)
    e = BoundaryEllipse(s, d)
    u2 = e.u**2
    sin, cos = math.sin(theta), math.cos(theta)
    z13 = s**4 * (cos / sin) ** 2 / (4.0 * (s**2 / sin**2 - d**2))
    z24 = s**4 * (sin / cos) ** 2 / (4.0 * (s**2 / cos**2 - d**2))
    if not (0.0 <= z13 <= u2 and 0.0 <= z24 <= u2):
        raise ArithmeticError(
            f"intersection points undefined for theta={theta}, s={s}, d={d} "
            f"(z13={z13}, z24={z24}, u^2={u2})"
        )
    ratio = e.v / e.u
    g1 = Point2(math.sqrt(z13), ratio * math.sqrt(u2 - z13))
    g2 = Point2(-math.sqrt(z24), ratio * math.sqrt(u2 - z24))
    return GammaPoints(g1, g2, -g1, -g2)


def strip_area(a: float, b: float, h: float) -> float:
    """Area swept by a vertical segment of height ``h`` along a graph on [a, b]."""
    if not b > a:
        raise ValueError(f"need b > a, got a={a}, b={b}")
    if not h > 0:
        raise ValueError(f"need h > 0, got {h}")
    return h * (b - a)


@dataclass(frozen=True)
class RegionSpec:
    w: float
    theta: float
    s: float
    d: float

    def __post_init__(self):
        if not self.w > 0:
            raise ValueError(f"width must be positive, got {self.w}")
        _check_theta(self.theta)
        _check_s(self.s, self.d, strict=False)


def region_measure_quadrants(spec: RegionSpec) -> tuple[float, float, float, float]:
    if spec.s == spec.d:
        return (0.0, 0.0, 0.0, 0.0)
    w, s, d = spec.w, spec.s, spec.d
    sin, cos = math.sin(spec.theta), math.cos(spec.theta)
    q1 = 0.5 * w * (sin * math.sqrt(s**2 / sin**2 - d**2) - d * cos)
    q4 = 0.5 * w * (cos * math.sqrt(s**2 / cos**2 - d**2) - d * sin)
    return (q1, q4, q1, q4)


def region_measure(spec: RegionSpec) -> float:
    # exact zero at s == d, where the bracket cancels only up to rounding
    if spec.s == spec.d:
        return 0.0
    w, s, d = spec.w, spec.s, spec.d
    sin, cos = math.sin(spec.theta), math.cos(spec.theta)
    return w * (math.sqrt(s**2 - (d * sin) ** 2) - d * (sin + cos) + math.sqrt(s**2 - (d * cos) ** 2))


def region_measure_array(w, theta, s, d):
    """Broadcasting version of :func:`region_measure`; zero for ``s <= d``."""
    w, theta, s = np.broadcast_arrays(
        np.asarray(w, dtype=float), np.asarray(theta, dtype=float), np.asarray(s, dtype=float)
    )
    sin, cos = np.sin(theta), np.cos(theta)
    sc = np.maximum(s, d)
    val = w * (np.sqrt(sc**2 - (d * sin) ** 2) - d * (sin + cos) + np.sqrt(sc**2 - (d * cos) ** 2))
    return np.where(s > d, val, 0.0)


def _shortest_over_edges(cx, cy, w, theta, d, quadrant: Optional[int] = None):
    n = cx.shape[0]
    qx, qy, nx, ny, hw = reflector_edge_arrays(cx, cy, np.full(n, w), np.full(n, theta))
    length, px, py = specular_path_batch(d, qx, qy, nx, ny, hw)
    if quadrant is not None:
        sx, sy = {1: (1, 1), 2: (-1, 1), 3: (-1, -1), 4: (1, -1)}[quadrant]
        with np.errstate(invalid="ignore"):
            inside = (sx * px >= 0) & (sy * py >= 0)
        length = np.where(inside, length, np.inf)
    return length.min(axis=1)


def region_contains(center: Point2, w: float, theta: float, s: float, link: LinkGeometry) -> bool:
    """True when a reflector centred at ``center`` yields a bounce of length <= s."""
    _check_s(s, link.d)
    shortest = _shortest_over_edges(np.array([center.x]), np.array([center.y]), w, theta, link.d)
    return bool(shortest[0] <= s * (1.0 + PATH_RTOL))


def region_contains_batch(cx, cy, w: float, theta: float, s: float, link: LinkGeometry, quadrant=None):
    _check_s(s, link.d)
    cx = np.asarray(cx, dtype=float)
    cy = np.asarray(cy, dtype=float)
    return _shortest_over_edges(cx, cy, w, theta, link.d, quadrant) <= s * (1.0 + PATH_RTOL)


def sampling_box(w: float, s: float, d: float) -> tuple[float, float, float, float]:
    """Axis-aligned box holding every center that can reach the ellipse for ``s``."""
    e = BoundaryEllipse(s, d)
    r = w * math.sqrt(2.0) / 2.0
    return (-e.u - r, e.u + r, -e.v - r, e.v + r)


class AreaEstimate(NamedTuple):
    area: float
    stderr: float
    hits: int
    n: int


def estimate_region_measure(
    spec: RegionSpec,
    n: int,
    rng: np.random.Generator,
    quadrant: Optional[int] = None,
    batch: int = 250_000,
) -> AreaEstimate:
    """Rejection-sampling estimate of the reflection-region area.

    Centers are drawn uniformly on :func:`sampling_box`; ``quadrant`` (1..4)
    restricts hits to bounces whose reflection point lies in that quadrant.
    """
    link = LinkGeometry(spec.d)
    x0, x1, y0, y1 = sampling_box(spec.w, spec.s, spec.d)
    box_area = (x1 - x0) * (y1 - y0)
    hits = 0
    done = 0
    while done < n:
        k = min(batch, n - done)
        cx = rng.uniform(x0, x1, k)
        cy = rng.uniform(y0, y1, k)
        hits += int(region_contains_batch(cx, cy, spec.w, spec.theta, spec.s, link, quadrant).sum())
        done += k
    p = hits / n
    return AreaEstimate(box_area * p, box_area * math.sqrt(p * (1.0 - p) / n), hits, n)
