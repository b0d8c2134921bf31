import numpy as np
import pytest

from anisodrop.geometry import convex_hull, rescale_to_area


def philox(seed):
    return np.random.Generator(np.random.Philox(key=np.uint64(seed)))


def random_convex(rng, n_points=12, area=None):
    poly = convex_hull(rng.normal(size=(n_points, 2)))
    if area is not None:
        poly = rescale_to_area(poly, area)
    return poly


@pytest.fixture
def rng():
    return philox(987654321)
