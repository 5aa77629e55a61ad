import numpy as np
import pytest

from qls_equiv import (BiphotonGaussianParams, MatterParams, conventional_probe)

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def ref_biphoton():
    return BiphotonGaussianParams().normalized()


@pytest.fixture(scope="session")
def ref_matter():
    return MatterParams()


@pytest.fixture(scope="session")
def fig2_probe():
    return conventional_probe(11000.0, 600.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def criterion(request):
    """Record one pass/fail line per acceptance criterion for the terminal summary."""
    def record(label, passed, detail=""):
        ACCEPTANCE_LINES.append((request.node.name, label, bool(passed), detail))
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for name, label, passed, detail in ACCEPTANCE_LINES:
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] {label}: {detail}")
