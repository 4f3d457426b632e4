"""Planar primitives for first-order reflections on the test link.

The link runs along the x-axis with the base station at ``(-d/2, 0)`` and the
mobile at ``(d/2, 0)``. Square reflectors carry four edges labelled I..IV
counterclockwise; edge ``i`` sits opposite its center-displacement vector
``omega_i`` and faces away from the square's center.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

HALF_PI = 0.5 * math.pi
EDGE_LABELS = ("I", "II", "III", "IV")


@dataclass(frozen=True)
class Point2:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"point coordinates must be finite, got ({self.x}, {self.y})")

    def __add__(self, other: "Point2") -> "Point2":
        return Point2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Point2") -> "Point2":
        return Point2(self.x - other.x, self.y - other.y)

    def __neg__(self) -> "Point2":
        return Point2(-self.x, -self.y)

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y])


@dataclass(frozen=True)
class Segment2:
    p0: Point2
    p1: Point2

    def __post_init__(self):
        if self.p0 == self.p1:
            raise ValueError("segment endpoints must differ")

    @property
    def length(self) -> float:
        return (self.p1 - self.p0).norm()

    @property
    def midpoint(self) -> Point2:
        return Point2(0.5 * (self.p0.x + self.p1.x), 0.5 * (self.p0.y + self.p1.y))

    def unit_normal(self) -> Point2:
        """Left-hand unit normal of ``p0 -> p1``."""
        t = self.p1 - self.p0
        n = t.norm()
        return Point2(-t.y / n, t.x / n)


@dataclass(frozen=True)
class LinkGeometry:
    """Test link of length ``d`` centred on the origin."""

    d: float

    def __post_init__(self):
        if not (self.d > 0 and math.isfinite(self.d)):
            raise ValueError(f"link separation d must be positive and finite, got {self.d}")

    @property
    def b(self) -> Point2:
        return Point2(-0.5 * self.d, 0.0)

    @property
    def m(self) -> Point2:
        return Point2(0.5 * self.d, 0.0)


def normalize_orientation(theta: float) -> float:
    """Map an orientation into the open interval (0, pi/2).

    A square is invariant under quarter turns, so only ``theta mod pi/2``
    matters. Axis-aligned squares (``theta`` a multiple of pi/2) are rejected.
    """
    if not math.isfinite(theta):
        raise ValueError(f"orientation must be finite, got {theta}")
    t = math.fmod(theta, HALF_PI)
    if t < 0:
        t += HALF_PI
    if t == 0.0 or t >= HALF_PI:
        raise ValueError(f"orientation {theta} is axis-aligned; need 0 < theta mod pi/2 < pi/2")
    return t


@dataclass(frozen=True)
class SquareReflector:
    center: Point2
    width: float
    theta: float

    def __post_init__(self):
        if not (self.width > 0 and math.isfinite(self.width)):
            raise ValueError(f"reflector width must be positive and finite, got {self.width}")
        object.__setattr__(self, "theta", normalize_orientation(self.theta))


@dataclass(frozen=True)
class ReflectionHyperbola:
    theta: float
    d: float

    def __post_init__(self):
        if not 0.0 < self.theta < HALF_PI:
            raise ValueError(f"hyperbola orientation must lie in (0, pi/2), got {self.theta}")
        if not self.d > 0:
            raise ValueError(f"d must be positive, got {self.d}")


class ReflectingEdge(NamedTuple):
    label: str
    segment: Segment2
    omega: Point2

    @property
    def outward_normal(self) -> Point2:
        n = self.omega.norm()
        return Point2(-self.omega.x / n, -self.omega.y / n)


class SpecularPath(NamedTuple):
    point: Point2
    length: float


def hyperbola_residual(h: ReflectionHyperbola, p: Point2) -> float:
    """Left-hand side of the reflection hyperbola; zero exactly on it."""
    cot2 = math.cos(2 * h.theta) / math.sin(2 * h.theta)
    return p.y * p.y - p.x * p.x + 2.0 * cot2 * p.x * p.y + 0.25 * h.d * h.d


def hyperbola_point_polar(h: ReflectionHyperbola, alpha: float) -> Optional[Point2]:
    """Point of the hyperbola along the ray at angle ``alpha`` from the base station.

    The radius is measured from ``b``; ``None`` means the ray carries no
    reflection point (negative radius or a vanishing denominator).
    """
    den = math.sin(2 * alpha - 2 * h.theta)
    if abs(den) < 1e-15:
        return None
    ell = h.d * math.sin(alpha - 2 * h.theta) / den
    if ell < 0:
        return None
    return Point2(ell * math.cos(alpha) - 0.5 * h.d, ell * math.sin(alpha))


def displacement_angles(theta: float) -> np.ndarray:
    """Angles of omega_I..omega_IV, without normalizing ``theta``."""
    return theta + HALF_PI * np.arange(4)


def reflector_edges(r: SquareReflector) -> list[ReflectingEdge]:
    half = 0.5 * r.width
    out = []
    for label, ang in zip(EDGE_LABELS, displacement_angles(r.theta)):
        omega = Point2(half * math.cos(ang), half * math.sin(ang))
        mid = r.center - omega
        # edge direction is omega rotated by +pi/2, same half length
        tx, ty = -omega.y, omega.x
        seg = Segment2(Point2(mid.x - tx, mid.y - ty), Point2(mid.x + tx, mid.y + ty))
        out.append(ReflectingEdge(label, seg, omega))
    return out


def specular_path(
    link: LinkGeometry, edge: Segment2, facing: Optional[Point2] = None
) -> Optional[SpecularPath]:
    """Single-bounce path from ``b`` to ``m`` off ``edge`` by the image method.

    Endpoints count as part of the edge. When ``facing`` (a normal of the
    edge) is given, both link ends must also lie on the side it points to,
    which rules out bounces off the back of a solid reflector.
    """
    q = edge.midpoint
    n = edge.unit_normal()
    if facing is not None and n.x * facing.x + n.y * facing.y < 0:
        n = -n
    hw = 0.5 * edge.length
    lengths, px, py = specular_path_batch(
        link.d,
        np.array([q.x]),
        np.array([q.y]),
        np.array([n.x]),
        np.array([n.y]),
        np.array([hw]),
        one_sided=facing is not None,
    )
    if not np.isfinite(lengths[0]):
        return None
    return SpecularPath(Point2(float(px[0]), float(py[0])), float(lengths[0]))


def specular_path_batch(d, qx, qy, nx, ny, half_len, one_sided=True):
    """Vectorized image-method bounce over many edges.

    Each edge is given by its midpoint ``(qx, qy)``, unit normal ``(nx, ny)``
    and half length. Returns ``(length, px, py)``; invalid bounces get an
    infinite length and NaN reflection point.

    With ``one_sided`` the link ends must lie on the side the normal points
    to; otherwise either common side is accepted.
    """
    bx, mx = -0.5 * d, 0.5 * d
    # signed distances of b and m from each edge's supporting line
    sb = (bx - qx) * nx - qy * ny
    sm = (mx - qx) * nx - qy * ny
    if one_sided:
        ok = (sb > 0) & (sm > 0)
    else:
        ok = sb * sm > 0
    with np.errstate(divide="ignore", invalid="ignore"):
        ix = bx - 2.0 * sb * nx
        iy = -2.0 * sb * ny
        dx = mx - ix
        dy = -iy
        tau = sb / (sb + sm)
        px = ix + tau * dx
        py = iy + tau * dy
        along = (px - qx) * (-ny) + (py - qy) * nx
    ok &= np.abs(along) <= half_len
    length = np.where(ok, np.hypot(dx, dy), np.inf)
    px = np.where(ok, px, np.nan)
    py = np.where(ok, py, np.nan)
    return length, px, py


def reflector_edge_arrays(cx, cy, width, theta):
    """Edge midpoints, outward normals and half lengths for arrays of squares.

    Output arrays have shape ``(n, 4)`` with columns in label order I..IV.
    """
    cx = np.asarray(cx, dtype=float)[:, None]
    cy = np.asarray(cy, dtype=float)[:, None]
    half = 0.5 * np.asarray(width, dtype=float)[:, None]
    ang = np.asarray(theta, dtype=float)[:, None] + HALF_PI * np.arange(4)[None, :]
    ux, uy = np.cos(ang), np.sin(ang)
    qx = cx - half * ux
    qy = cy - half * uy
    return qx, qy, -ux, -uy, np.broadcast_to(half, qx.shape)


def incidence_angles(link: LinkGeometry, point: Point2, normal: Point2) -> tuple[float, float]:
    """Angles that ``point -> b`` and ``point -> m`` make with ``normal``."""

    def angle(vx, vy):
        return math.atan2(abs(vx * normal.y - vy * normal.x), vx * normal.x + vy * normal.y)

    b, m = link.b, link.m
    return angle(b.x - point.x, b.y - point.y), angle(m.x - point.x, m.y - point.y)
