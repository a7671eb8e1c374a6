import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from planarconst import pipeline  # noqa: E402
from planarconst.certificate import serialize  # noqa: E402


@pytest.fixture(scope="session")
def report():
    return pipeline.compute_all()


@pytest.fixture(scope="session")
def cert_bytes(report):
    return serialize(report.certificate)


def pytest_terminal_summary(terminalreporter):
    import criteria

    if criteria.LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(criteria.LINES):
            terminalreporter.write_line(criteria.LINES[n])
