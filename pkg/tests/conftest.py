import contextlib
import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=500, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

_CRITERIA = {}


@pytest.fixture
def criterion(request):
    """Context manager recording PASS/FAIL for an acceptance criterion."""
    reporter = request.config.pluginmanager.get_plugin("terminalreporter")

    @contextlib.contextmanager
    def check(number, note=""):
        try:
            yield
        except BaseException:
            _CRITERIA[number] = "FAIL"
            raise
        else:
            _CRITERIA[number] = "PASS"
        finally:
            line = f"criterion {number}: {_CRITERIA[number]}" + (f" ({note})" if note else "")
            if reporter is not None:
                reporter.write_line("")
                reporter.write_line(line)
            else:
                print(line)
    return check


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for number in sorted(_CRITERIA):
            terminalreporter.write_line(f"criterion {number}: {_CRITERIA[number]}")
