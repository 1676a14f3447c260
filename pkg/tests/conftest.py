import os

import numpy as np
import pytest

# criterion id -> (status, detail); filled by tests in test_acceptance.py
ACCEPTANCE = {}


def record(criterion: str, status: str, detail: str = "") -> None:
    ACCEPTANCE[criterion] = (status, detail)
    print(f"{status} {criterion}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda s: int(s.split()[0])):
        status, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"{status:4s} {key}: {detail}")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=["cython", "python"])
def backend(request, monkeypatch):
    """Run a test against each kernel backend that is importable."""
    from lrdcp import _backend, _pykernels

    if request.param == "cython":
        try:
            from lrdcp import _kernels as mod
        except ImportError:
            pytest.skip("compiled kernels not built")
    else:
        mod = _pykernels
    for name in ("sn_values", "sn_rows", "window_sn_max"):
        monkeypatch.setattr(_backend, name, getattr(mod, name))
    return request.param


def data_dir():
    path = os.environ.get("LRDCP_DATA_DIR")
    return None if not path else path
