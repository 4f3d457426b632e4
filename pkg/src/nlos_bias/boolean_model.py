"""Boolean model of square reflectors on a finite window."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .geometry import HALF_PI, LinkGeometry, Point2, SquareReflector


@dataclass(frozen=True)
class MarkDistribution:
    """Discrete joint pmf over reflector widths (rows) and orientations (columns)."""

    widths: np.ndarray
    orientations: np.ndarray
    pmf: np.ndarray

    def __post_init__(self):
        w = np.atleast_1d(np.asarray(self.widths, dtype=float))
        t = np.atleast_1d(np.asarray(self.orientations, dtype=float))
        p = np.asarray(self.pmf, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise ValueError("widths must be a non-empty 1-D sequence")
        if t.ndim != 1 or t.size == 0:
            raise ValueError("orientations must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(w) & (w > 0)):
            raise ValueError(f"widths must be positive and finite, got {w}")
        if not np.all((t > 0) & (t < HALF_PI)):
            raise ValueError(f"orientations must lie in (0, pi/2) radians, got {t}")
        if p.shape != (w.size, t.size):
            raise ValueError(f"pmf must have shape {(w.size, t.size)}, got {p.shape}")
        if np.any(p < 0) or not np.all(np.isfinite(p)):
            raise ValueError("pmf entries must be non-negative and finite")
        if abs(p.sum() - 1.0) > 1e-12:
            raise ValueError(f"pmf must sum to 1, sums to {p.sum()!r}")
        for name, arr in (("widths", w), ("orientations", t), ("pmf", p)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def uniform(cls, widths: Sequence[float], orientations: Sequence[float]) -> "MarkDistribution":
        nw, nt = len(widths), len(orientations)
        return cls(np.asarray(widths, float), np.asarray(orientations, float), np.full((nw, nt), 1.0 / (nw * nt)))

    @property
    def mean_width(self) -> float:
        return float(self.pmf.sum(axis=1) @ self.widths)

    @property
    def mean_square_width(self) -> float:
        return float(self.pmf.sum(axis=1) @ self.widths**2)

    def classes(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Flattened ``(width, orientation, probability)`` per mark class, row-major."""
        ww, tt = np.meshgrid(self.widths, self.orientations, indexing="ij")
        return ww.ravel(), tt.ravel(), self.pmf.ravel()


@dataclass(frozen=True)
class Window:
    xmin: float
    xmax: float
    ymin: float
    ymax: float

    def __post_init__(self):
        vals = (self.xmin, self.xmax, self.ymin, self.ymax)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError(f"window bounds must be finite, got {vals}")
        if not (self.xmax > self.xmin and self.ymax > self.ymin):
            raise ValueError(f"window must have positive area, got {vals}")

    @property
    def area(self) -> float:
        return (self.xmax - self.xmin) * (self.ymax - self.ymin)

    def shifted(self, dx: float, dy: float) -> "Window":
        return Window(self.xmin + dx, self.xmax + dx, self.ymin + dy, self.ymax + dy)


def auto_window(link: LinkGeometry, s_max: float, marks: MarkDistribution) -> Window:
    """Smallest window (by the truncation rule) holding every reflector able to
    produce a path of length ``<= s_max``.

    The window extends ``s_max/2`` plus the largest half-diagonal beyond each
    link end.
    """
    if not s_max > link.d:
        raise ValueError(f"s_max={s_max} must exceed d={link.d}")
    reach = 0.5 * s_max + float(marks.widths.max()) * math.sqrt(2.0) / 2.0
    return Window(-0.5 * link.d - reach, 0.5 * link.d + reach, -reach, reach)


@dataclass(frozen=True)
class BooleanModelConfig:
    intensity: float
    window: Window
    marks: MarkDistribution

    def __post_init__(self):
        if not (self.intensity > 0 and math.isfinite(self.intensity)):
            raise ValueError(f"intensity must be positive and finite, got {self.intensity}")

    @property
    def mean_count(self) -> float:
        return self.intensity * self.window.area


@dataclass(frozen=True)
class Realization:
    """One draw of the Boolean model, held as parallel arrays."""

    centers: np.ndarray = field(repr=False)
    widths: np.ndarray = field(repr=False)
    orientations: np.ndarray = field(repr=False)
    mark_index: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return int(self.widths.shape[0])

    @property
    def reflectors(self) -> list[SquareReflector]:
        return [
            SquareReflector(Point2(float(x), float(y)), float(w), float(t))
            for (x, y), w, t in zip(self.centers, self.widths, self.orientations)
        ]

    @classmethod
    def from_reflectors(cls, reflectors: Sequence[SquareReflector]) -> "Realization":
        n = len(reflectors)
        centers = np.array([[r.center.x, r.center.y] for r in reflectors], dtype=float).reshape(n, 2)
        return cls(
            centers,
            np.array([r.width for r in reflectors], dtype=float),
            np.array([r.theta for r in reflectors], dtype=float),
            np.full(n, -1, dtype=np.int64),
        )


def substream(seed: int, index: int) -> np.random.Generator:
    """Independent generator for realization ``index`` under master ``seed``."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def sample_realization(cfg: BooleanModelConfig, rng: np.random.Generator) -> Realization:
    """Poisson count, uniform centers, i.i.d. marks independent of the centers."""
    win = cfg.window
    n = int(rng.poisson(cfg.mean_count))
    u = rng.random((n, 3))
    centers = np.empty((n, 2))
    centers[:, 0] = win.xmin + u[:, 0] * (win.xmax - win.xmin)
    centers[:, 1] = win.ymin + u[:, 1] * (win.ymax - win.ymin)
    w, t, p = cfg.marks.classes()
    cum = np.cumsum(p)
    k = np.minimum(np.searchsorted(cum, u[:, 2] * cum[-1], side="right"), p.size - 1)
    return Realization(centers, w[k], t[k], k)


def coverage_fraction(cfg: BooleanModelConfig) -> float:
    """Expected fraction of the plane covered by reflectors."""
    return -math.expm1(-cfg.intensity * cfg.marks.mean_square_width)
