import math

import numpy as np
import pytest

from nlos_bias.analytic import NlosModelParams
from nlos_bias.boolean_model import MarkDistribution
from nlos_bias.geometry import LinkGeometry

FIG5_D = 300.0
FIG5_LAMBDA = 10 / 1e6  # 10 buildings per km^2
FIG5_WIDTHS = np.arange(20.0, 121.0, 20.0)
FIG5_THETAS = np.deg2rad(np.arange(10.0, 81.0, 10.0))


@pytest.fixture
def link():
    return LinkGeometry(FIG5_D)


@pytest.fixture
def fig5_marks():
    return MarkDistribution.uniform(FIG5_WIDTHS, FIG5_THETAS)


@pytest.fixture
def fig5_params(fig5_marks):
    return NlosModelParams(FIG5_LAMBDA, fig5_marks, FIG5_D)


QUARTER = math.pi / 4
