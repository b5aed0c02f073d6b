import pytest
from hypothesis import HealthCheck, settings

from tentlimit import Slope

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

SLOPE_SPECS = ["2", "golden", "7/4"]


@pytest.fixture(params=SLOPE_SPECS)
def slope(request):
    return Slope.parse(request.param)


@pytest.fixture
def s2():
    return Slope.parse("2")


@pytest.fixture
def golden():
    return Slope.golden()


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
