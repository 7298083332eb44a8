import pytest

from qjoin import _kernels


@pytest.fixture(params=["numba", "numpy"])
def kernel_mode(request, monkeypatch):
    """Run a test once through each kernel implementation."""
    if request.param == "numba" and not _kernels.HAVE_NUMBA:
        pytest.skip("numba not installed")
    monkeypatch.setenv("QJOIN_DISABLE_NUMBA", "0" if request.param == "numba" else "1")
    return request.param
