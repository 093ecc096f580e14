import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from twocenters.coords import ChargeConfig

settings.register_profile("default", max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# (Z+, Z-) presets covering every charge case
ZPM = [(2.0, 0.0), (-2.0, 0.0), (0.0, 2.0), (3.0, 1.0), (-0.5, 1.5), (1.0, 3.0)]


def zpm_charges(zp, zm):
    return ChargeConfig((zp - zm) / 2, (zp + zm) / 2)


@pytest.fixture(params=ZPM, ids=[f"Zp{zp:g}_Zm{zm:g}" for zp, zm in ZPM])
def charges(request):
    return zpm_charges(*request.param)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_ACCEPTANCE_LINES = []


def record_acceptance(line):
    _ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
