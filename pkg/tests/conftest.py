import numpy as np
import pytest
from hypothesis import settings

from polarrep import PolarParams, awgn_reliability_ga, select_information_set

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def code_n64():
    prof = awgn_reliability_ga(PolarParams(6), 0.0)
    return select_information_set(prof, 32)


@pytest.fixture(scope="session")
def report(request):
    """Record one PASS/FAIL line per acceptance criterion; echoed in the summary."""
    lines = request.config.stash.setdefault(_REPORT_KEY, [])

    def add(criterion: str, ok: bool, detail: str) -> None:
        line = f"{'PASS' if ok else 'FAIL'} criterion {criterion}: {detail}"
        print(line, flush=True)
        lines.append(line)

    return add


_REPORT_KEY = pytest.StashKey[list]()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_REPORT_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
