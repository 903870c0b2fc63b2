import numpy as np
import pytest

from axihee.domain import make_domain


@pytest.fixture
def dom():
    return make_domain(32, 48)


@pytest.fixture
def meshes(dom):
    return np.meshgrid(dom.x_nodes, dom.grid.nodes, indexing="ij")


@pytest.fixture
def smooth_w(meshes):
    X, A = meshes
    return 4 * A + 0.1 * np.sin(2 * np.pi * X) * np.sin(2 * np.pi * A)


def random_band_limited_field(dom, seed, kx_max=4, ka_max=3, amp=0.3, slope=4.0):
    from axihee.initial_data import random_band_limited

    return random_band_limited(dom, seed=seed, kx_max=kx_max, ka_max=ka_max,
                               amp=amp, slope=slope).w0
