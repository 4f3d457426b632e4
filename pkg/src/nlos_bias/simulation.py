"""Monte Carlo shortest first-order NLOS path and its empirical CDF."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .boolean_model import BooleanModelConfig, Realization, sample_realization, substream
from .geometry import LinkGeometry, Point2, reflector_edge_arrays, specular_path_batch


@dataclass(frozen=True)
class NlosPathResult:
    length: Optional[float] = None
    reflecting_point: Optional[Point2] = None
    reflector_index: Optional[int] = None

    @property
    def found(self) -> bool:
        return self.length is not None


def _edge_lengths(real: Realization, d: float):
    qx, qy, nx, ny, hw = reflector_edge_arrays(
        real.centers[:, 0], real.centers[:, 1], real.widths, real.orientations
    )
    return specular_path_batch(d, qx, qy, nx, ny, hw)


def shortest_nlos_path(real: Realization, link: LinkGeometry) -> NlosPathResult:
    if len(real) == 0:
        return NlosPathResult()
    length, px, py = _edge_lengths(real, link.d)
    flat = int(np.argmin(length))
    best = length.flat[flat]
    if not np.isfinite(best):
        return NlosPathResult()
    i, k = divmod(flat, 4)
    return NlosPathResult(float(best), Point2(float(px[i, k]), float(py[i, k])), i)


def _shortest_lengths(cfg: BooleanModelConfig, d: float, seed: int, start: int, stop: int) -> np.ndarray:
    reals = [sample_realization(cfg, substream(seed, i)) for i in range(start, stop)]
    counts = np.array([len(r) for r in reals])
    out = np.full(stop - start, np.inf)
    if counts.sum() == 0:
        return out
    merged = Realization(
        np.concatenate([r.centers for r in reals]),
        np.concatenate([r.widths for r in reals]),
        np.concatenate([r.orientations for r in reals]),
        np.concatenate([r.mark_index for r in reals]),
    )
    per_reflector = _edge_lengths(merged, d)[0].min(axis=1)
    owner = np.repeat(np.arange(stop - start), counts)
    np.minimum.at(out, owner, per_reflector)
    return out


def simulate_shortest_paths(
    cfg: BooleanModelConfig,
    link: LinkGeometry,
    n: int,
    seed: int,
    workers: int = 1,
    chunk: int = 5000,
) -> np.ndarray:
    """Shortest path length per realization, ``inf`` where none exists.

    Realization ``i`` is drawn from its own substream of ``seed``, so the
    output does not depend on ``workers`` or ``chunk``.
    """
    if n < 1:
        raise ValueError(f"number of realizations must be >= 1, got {n}")
    bounds = [(a, min(a + chunk, n)) for a in range(0, n, chunk)]
    if workers <= 1 or len(bounds) == 1:
        parts = [_shortest_lengths(cfg, link.d, seed, a, b) for a, b in bounds]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_shortest_lengths, cfg, link.d, seed, a, b) for a, b in bounds]
            parts = [f.result() for f in futures]
    return np.concatenate(parts)


@dataclass(frozen=True)
class EmpiricalCdf:
    """Sorted finite samples plus a count of censored realizations.

    Censored realizations sit in the denominator as paths longer than any
    evaluated ``s``.
    """

    samples: np.ndarray
    censored: int = 0

    def __post_init__(self):
        x = np.sort(np.asarray(self.samples, dtype=float))
        if not np.all(np.isfinite(x)):
            raise ValueError("samples must be finite; record missing paths as censored")
        if self.censored < 0:
            raise ValueError("censored count must be non-negative")
        x.setflags(write=False)
        object.__setattr__(self, "samples", x)

    @classmethod
    def from_lengths(cls, lengths: np.ndarray) -> "EmpiricalCdf":
        lengths = np.asarray(lengths, dtype=float)
        finite = np.isfinite(lengths)
        return cls(lengths[finite], int((~finite).sum()))

    @property
    def n_total(self) -> int:
        return int(self.samples.size + self.censored)

    def evaluate(self, s):
        return np.searchsorted(self.samples, s, side="right") / self.n_total


def empirical_cdf(
    cfg: BooleanModelConfig, link: LinkGeometry, n: int, seed: int, workers: int = 1
) -> EmpiricalCdf:
    return EmpiricalCdf.from_lengths(simulate_shortest_paths(cfg, link, n, seed, workers=workers))


def ks_distance(ecdf: EmpiricalCdf, cdf: Callable[[np.ndarray], np.ndarray], lo: float, hi: float) -> float:
    """Supremum of ``|F_emp - F|`` over ``[lo, hi]``.

    Checked on both sides of every jump inside the interval and at the
    interval ends, which is exact for a continuous ``F``.
    """
    x = ecdf.samples
    x = x[(x >= lo) & (x <= hi)]
    n = ecdf.n_total
    f = cdf(x)
    below = np.abs(f - np.searchsorted(ecdf.samples, x, side="left") / n)
    above = np.abs(f - np.searchsorted(ecdf.samples, x, side="right") / n)
    ends = np.array([lo, hi])
    at_ends = np.abs(cdf(ends) - ecdf.evaluate(ends))
    parts = [at_ends]
    if x.size:
        parts += [below, above]
    return float(max(p.max() for p in parts))


def censored_within(lengths: np.ndarray, s_max: float) -> np.ndarray:
    """Mask of realizations with no path at or below ``s_max``."""
    return ~(np.asarray(lengths) <= s_max)

