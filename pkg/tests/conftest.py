import numpy as np
import pytest

from sparsemm import BOOL, GF2, INT, NONNEG, zmod

DOMAINS = [BOOL, NONNEG, INT, GF2, zmod(4)]


@pytest.fixture(params=DOMAINS, ids=lambda d: d.name)
def domain(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS, line
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        terminalreporter.write_line(line(n))
