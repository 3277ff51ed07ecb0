import pytest

from softcover import kernels


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    # compile the jitted kernels once so individual tests measure steady state
    kernels.warmup()
