import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from substruct.enumeration import enumerate_pcrls  # noqa: E402


@pytest.fixture(scope="session")
def catalog():
    return list(enumerate_pcrls(4))


@pytest.fixture(scope="session")
def small_catalog():
    return list(enumerate_pcrls(3))


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
