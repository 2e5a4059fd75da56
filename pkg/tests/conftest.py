import sys

import pytest

from minlen.deformations import DEFORMATIONS, builtin_deformation


@pytest.fixture(params=DEFORMATIONS)
def spec(request):
    return builtin_deformation(request.param)


@pytest.fixture
def cutoff():
    return builtin_deformation("cutoff")


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for name in sorted(results):
            terminalreporter.write_line(results[name])
