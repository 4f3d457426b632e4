"""First-arriving NLOS path length under a Boolean model of square reflectors."""

from .analytic import (
    ExpApproxParams,
    NlosModelParams,
    bias_from_path,
    cdf_S,
    exp_approx_cdf,
    pdf_S,
    sample_S,
    sf_S,
)
from .boolean_model import (
    BooleanModelConfig,
    MarkDistribution,
    Realization,
    Window,
    auto_window,
    coverage_fraction,
    sample_realization,
)
from .geometry import LinkGeometry, Point2, Segment2, SquareReflector, specular_path
from .reflection_region import RegionSpec, gamma_points, region_contains, region_measure
from .simulation import EmpiricalCdf, empirical_cdf, shortest_nlos_path

__version__ = "0.1.0"
