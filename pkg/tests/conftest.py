import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=120, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def o666():
    from cwmanifold.orthoscheme import build
    return build(6, 6, 6)


@pytest.fixture(scope="session")
def o535():
    from cwmanifold.orthoscheme import build
    return build(5, 3, 5)


@pytest.fixture(scope="session")
def cw3():
    from cwmanifold.cobweb import build_cobweb
    return build_cobweb(3)


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)
