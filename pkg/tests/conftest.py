import sys
from fractions import Fraction as F
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from xracah.families import make_spec  # noqa: E402


@pytest.fixture
def racah():
    return make_spec("R", [-8, 10, 2, F(3, 2)])


@pytest.fixture
def qracah_small():
    return make_spec("qR", [4, F(1, 16), F(1, 2), F(1, 2)], q=F(1, 2))


@pytest.fixture
def qracah():
    return make_spec("qR", [64, F(1, 256), F(3, 4), F(1, 2)], q=F(1, 2))


@pytest.fixture
def lqj():
    return make_spec("lqJ", [F(1, 2), F(1, 2)], q=F(1, 2))
