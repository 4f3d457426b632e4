"""Config-driven experiment: analytic, approximate and simulated bias CDFs."""

from __future__ import annotations

import csv
import json
import math
import time
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np

from .analytic import ExpApproxParams, NlosModelParams, cdf_S, exp_approx_cdf
from .boolean_model import BooleanModelConfig, MarkDistribution, Window, auto_window
from .geometry import LinkGeometry
from .reflection_region import RegionSpec, estimate_region_measure, region_measure
from .simulation import EmpiricalCdf, ks_distance, simulate_shortest_paths

CURVE_COLUMNS = ("bias_m", "cdf_theorem2", "cdf_exp_approx", "cdf_empirical")
SAMPLE_COLUMNS = ("realization", "path_length_m", "bias_m", "censored")


class ConfigError(ValueError):
    """Invalid experiment configuration; ``field`` is a dotted path into the file."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass(frozen=True)
class ExperimentConfig:
    d: float
    intensity: float
    marks: MarkDistribution
    n_realizations: int
    seed: int
    bias_max: float
    bias_step: float
    window: Union[str, Window] = "auto"
    workers: int = 1

    @property
    def link(self) -> LinkGeometry:
        return LinkGeometry(self.d)

    @property
    def s_max(self) -> float:
        return self.d + self.bias_max

    def resolved_window(self) -> Window:
        if isinstance(self.window, Window):
            return self.window
        return auto_window(self.link, self.s_max, self.marks)

    def model(self) -> NlosModelParams:
        return NlosModelParams(self.intensity, self.marks, self.d)

    def boolean_model(self) -> BooleanModelConfig:
        return BooleanModelConfig(self.intensity, self.resolved_window(), self.marks)

    def bias_grid(self) -> np.ndarray:
        n = int(round(self.bias_max / self.bias_step))
        return self.bias_step * np.arange(n + 1)


@dataclass(frozen=True)
class ComparisonReport:
    ks_empirical_vs_theorem: Optional[float]
    max_gap_theorem_vs_approx: float
    censored_count: int
    runtime: float
    n_realizations: int = 0

    def as_dict(self) -> dict:
        return {
            "ks_empirical_vs_theorem": self.ks_empirical_vs_theorem,
            "max_gap_theorem_vs_approx": self.max_gap_theorem_vs_approx,
            "censored_count": self.censored_count,
            "runtime": self.runtime,
            "n_realizations": self.n_realizations,
        }

    def lines(self) -> list[str]:
        ks = "n/a" if self.ks_empirical_vs_theorem is None else f"{self.ks_empirical_vs_theorem:.6f}"
        return [
            f"realizations:              {self.n_realizations}",
            f"ks_empirical_vs_theorem:   {ks}",
            f"max_gap_theorem_vs_approx: {self.max_gap_theorem_vs_approx:.6f}",
            f"censored_count:            {self.censored_count}",
            f"runtime_s:                 {self.runtime:.2f}",
        ]


def _number(raw: dict, key: str, path: str, positive: bool = True) -> float:
    if key not in raw:
        raise ConfigError(path + key, "missing")
    val = raw[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)) or not math.isfinite(val):
        raise ConfigError(path + key, f"expected a finite number, got {val!r}")
    if positive and val <= 0:
        raise ConfigError(path + key, f"must be > 0, got {val!r}")
    return float(val)


def _integer(raw: dict, key: str, minimum: int) -> int:
    if key not in raw:
        raise ConfigError(key, "missing")
    val = raw[key]
    if isinstance(val, bool) or not isinstance(val, int):
        raise ConfigError(key, f"expected an integer, got {val!r}")
    if val < minimum:
        raise ConfigError(key, f"must be >= {minimum}, got {val}")
    return val


def _number_list(raw: dict, key: str, path: str) -> list[float]:
    val = raw.get(key)
    if not isinstance(val, list) or not val:
        raise ConfigError(path + key, "expected a non-empty list of numbers")
    for i, x in enumerate(val):
        if isinstance(x, bool) or not isinstance(x, (int, float)):
            raise ConfigError(f"{path}{key}[{i}]", f"expected a number, got {x!r}")
    return [float(x) for x in val]


def _parse_marks(raw: Any) -> MarkDistribution:
    if not isinstance(raw, dict):
        raise ConfigError("marks", "expected an object")
    widths = _number_list(raw, "widths", "marks.")
    if "orientations_deg" not in raw:
        raise ConfigError("marks.orientations_deg", "missing")
    orient = np.deg2rad(_number_list(raw, "orientations_deg", "marks."))
    pmf = raw.get("pmf", "uniform")
    if pmf == "uniform":
        pmf = np.full((len(widths), orient.size), 1.0 / (len(widths) * orient.size))
    else:
        try:
            pmf = np.asarray(pmf, dtype=float)
        except (TypeError, ValueError):
            raise ConfigError("marks.pmf", "expected 'uniform' or a widths x orientations matrix") from None
    try:
        return MarkDistribution(np.asarray(widths), orient, pmf)
    except ValueError as exc:
        raise ConfigError("marks", str(exc)) from None


def _parse_window(raw: Any) -> Union[str, Window]:
    if raw == "auto":
        return raw
    if not isinstance(raw, dict):
        raise ConfigError("window", f"expected 'auto' or an object with xmin/xmax/ymin/ymax, got {raw!r}")
    vals = [_number(raw, k, "window.", positive=False) for k in ("xmin", "xmax", "ymin", "ymax")]
    try:
        return Window(*vals)
    except ValueError as exc:
        raise ConfigError("window", str(exc)) from None


def parse_config(raw: Any) -> ExperimentConfig:
    """Validate a decoded config mapping.

    Intensity is ``lambda`` in reflectors per square metre, or
    ``buildings_per_km2``. Orientations are given in degrees.
    """
    if not isinstance(raw, dict):
        raise ConfigError("<root>", "expected a JSON object")
    d = _number(raw, "d", "")
    if "lambda" in raw and "buildings_per_km2" in raw:
        raise ConfigError("lambda", "give either lambda or buildings_per_km2, not both")
    if "lambda" in raw:
        intensity = _number(raw, "lambda", "")
    elif "buildings_per_km2" in raw:
        intensity = _number(raw, "buildings_per_km2", "") * 1e-6
    else:
        raise ConfigError("lambda", "missing (or give buildings_per_km2)")
    marks = _parse_marks(raw.get("marks"))
    n = _integer(raw, "n_realizations", 1)
    seed = _integer(raw, "seed", 0)
    grid = raw.get("bias_grid", {"max": 1500.0, "step": 5.0})
    if not isinstance(grid, dict):
        raise ConfigError("bias_grid", "expected an object with max and step")
    bias_max = _number(grid, "max", "bias_grid.")
    bias_step = _number(grid, "step", "bias_grid.")
    ratio = bias_max / bias_step
    if abs(ratio - round(ratio)) > 1e-9 * max(1.0, ratio):
        raise ConfigError("bias_grid.step", f"must divide max={bias_max} evenly")
    window = _parse_window(raw.get("window", "auto"))
    workers = _integer(raw, "workers", 1) if "workers" in raw else 1
    return ExperimentConfig(d, intensity, marks, n, seed, bias_max, bias_step, window, workers)


def load_config(path: Union[str, Path]) -> ExperimentConfig:
    """Read a JSON config. ``OSError`` propagates; bad content raises :class:`ConfigError`."""
    text = Path(path).read_text()
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("<file>", f"malformed JSON ({exc})") from None
    return parse_config(raw)


def theory_curves(cfg: ExperimentConfig) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    bias = cfg.bias_grid()
    s = cfg.d + bias
    return bias, cdf_S(cfg.model(), s), exp_approx_cdf(ExpApproxParams.from_model(cfg.model()), s)


def _fmt(x: float) -> str:
    return repr(float(x))


def write_curves(path: Path, bias, theorem, approx, empirical=None) -> None:
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(CURVE_COLUMNS)
        for i, b in enumerate(bias):
            emp = "" if empirical is None else _fmt(empirical[i])
            out.writerow([_fmt(b), _fmt(theorem[i]), _fmt(approx[i]), emp])


def write_samples(path: Path, lengths: np.ndarray, d: float) -> None:
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(SAMPLE_COLUMNS)
        for i, s in enumerate(lengths):
            if np.isfinite(s):
                out.writerow([i, _fmt(s), _fmt(s - d), 0])
            else:
                out.writerow([i, "", "", 1])


def run_experiment(cfg: ExperimentConfig, out_dir: Union[str, Path], simulate: bool = True) -> ComparisonReport:
    """Write ``curves.csv``, ``report.json`` and, when simulating, ``samples.csv``.

    Realizations with no path inside the window are censored. The KS
    statistic is taken over bias in ``[0, bias_max]``.
    """
    start = time.perf_counter()
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    bias, theorem, approx = theory_curves(cfg)
    gap = float(np.max(np.abs(theorem - approx)))
    ks = None
    censored = 0
    empirical = None
    if simulate:
        lengths = simulate_shortest_paths(
            cfg.boolean_model(), cfg.link, cfg.n_realizations, cfg.seed, workers=cfg.workers
        )
        ecdf = EmpiricalCdf.from_lengths(lengths)
        censored = ecdf.censored
        empirical = ecdf.evaluate(cfg.d + bias)
        model = cfg.model()
        ks = ks_distance(ecdf, lambda s: cdf_S(model, s), cfg.d, cfg.s_max)
        write_samples(out_dir / "samples.csv", lengths, cfg.d)
    write_curves(out_dir / "curves.csv", bias, theorem, approx, empirical)
    report = ComparisonReport(
        ks, gap, censored, time.perf_counter() - start, cfg.n_realizations if simulate else 0
    )
    (out_dir / "report.json").write_text(json.dumps(report.as_dict(), indent=2) + "\n")
    return report


@dataclass(frozen=True)
class RegionCheck:
    w: float
    theta: float
    s: float
    closed_form: float
    estimate: float
    stderr: float

    @property
    def z(self) -> float:
        return (self.estimate - self.closed_form) / self.stderr

    @property
    def agrees(self) -> bool:
        return abs(self.z) <= 3.0


def validate_region(
    d: float,
    widths,
    thetas,
    path_bounds,
    samples: int = 1_000_000,
    seed: int = 0,
) -> list[RegionCheck]:
    """Compare the closed-form region area with rejection sampling on a grid."""
    rows = []
    seq = np.random.SeedSequence(seed)
    combos = [(w, t, s) for w in widths for t in thetas for s in path_bounds]
    for (w, t, s), child in zip(combos, seq.spawn(len(combos))):
        spec = RegionSpec(float(w), float(t), float(s), float(d))
        est = estimate_region_measure(spec, samples, np.random.default_rng(child))
        rows.append(RegionCheck(spec.w, spec.theta, spec.s, region_measure(spec), est.area, est.stderr))
    return rows


def region_grid(cfg: ExperimentConfig) -> tuple[list[float], list[float], list[float]]:
    """Three widths, orientations and path bounds spanning the configured marks and grid."""

    def pick3(values):
        v = sorted(set(float(x) for x in values))
        if len(v) >= 3:
            return [v[0], v[len(v) // 2], v[-1]]
        return v

    bounds = [cfg.d + f * cfg.bias_max for f in (0.05, 0.3, 1.0)]
    return pick3(cfg.marks.widths), pick3(cfg.marks.orientations), bounds


def with_overrides(cfg: ExperimentConfig, seed: Optional[int] = None, realizations: Optional[int] = None) -> ExperimentConfig:
    if realizations is not None and realizations < 1:
        raise ConfigError("n_realizations", f"must be >= 1, got {realizations}")
    if seed is not None and seed < 0:
        raise ConfigError("seed", f"must be >= 0, got {seed}")
    return replace(
        cfg,
        seed=cfg.seed if seed is None else seed,
        n_realizations=cfg.n_realizations if realizations is None else realizations,
    )
