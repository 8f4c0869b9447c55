import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=30)
settings.load_profile("default")

_ACCEPTANCE = {}


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def acceptance():
    """Record ``(number, title, value, bound, passed)`` for the summary table."""
    def record(number, title, value, bound, passed):
        _ACCEPTANCE[number] = (title, value, bound, bool(passed))
        line = _format(number, *_ACCEPTANCE[number])
        print(line)
        return passed
    return record


def _format(number, title, value, bound, passed):
    return f"{'PASS' if passed else 'FAIL'}  criterion {number:2d}  {title}: {value} (bound {bound})"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        terminalreporter.write_line(_format(number, *_ACCEPTANCE[number]))
