import pytest
from hypothesis import strategies as st

from emlab import _backend
from emlab.ordinal import Ordinal

BACKENDS = _backend.available()


@pytest.fixture(params=BACKENDS, ids=[m.BACKEND for m in BACKENDS])
def kern(request):
    return request.param


@st.composite
def ordinals(draw, max_degree=4, max_coef=6):
    """Canonical ordinals below w^(max_degree+1)."""
    exps = draw(st.lists(st.integers(0, max_degree), unique=True, max_size=max_degree + 1))
    exps.sort(reverse=True)
    return Ordinal(tuple((e, draw(st.integers(1, max_coef))) for e in exps))


@st.composite
def finsets(draw, lo=0, hi=60, max_size=20):
    return tuple(sorted(draw(st.sets(st.integers(lo, hi), max_size=max_size))))


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
