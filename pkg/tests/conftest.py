import numpy as np
import pytest

from polar_orbitopes import algebra as al


DESK_FAMILIES = [al.sl_r(3), al.sl_r(4), al.so_mn(3, 2), al.so_mn(2, 2), al.sl_h(2)]


@pytest.fixture(params=DESK_FAMILIES, ids=lambda f: f.label)
def family(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def chamber_anchor(family):
    """A generic interior chamber vector for the family."""
    L = family.chamber_len
    a = np.arange(L, 0, -1, dtype=float)
    if family.weyl_type == "A":
        a -= a.mean()
    return a
