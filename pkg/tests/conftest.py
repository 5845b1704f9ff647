import numpy as np
import pytest

import bcvlab


@pytest.fixture(scope="session", autouse=True)
def warm_window_kernel():
    # First call JIT-compiles the sliding-window counter; keep that out of
    # the timed acceptance criteria.
    bcvlab.pair_correlation(np.array([0.0, 0.25, 0.5]), [1.0])
