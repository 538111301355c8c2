import math

import pytest

from nssl import _kernels


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # jit compilation happens once here so per-test timings are stable
    _kernels.warmup()
