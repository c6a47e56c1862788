import logging

import numpy as np
import pytest

from meanfield.oracles import rel_err  # noqa: F401  (re-exported for tests)

logging.getLogger("meanfield").setLevel(logging.ERROR)

KINDS = ["sigmoid", "tanh", "relu", "linear", "swish"]


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
