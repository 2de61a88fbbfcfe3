import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from ardecomp.fields import GF, QQ
from ardecomp.linalg import Matrix

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

FIELDS = [QQ, GF(5), GF(101)]


def mat(rows, field=QQ, ncols=None):
    rows = [[field(x) for x in r] for r in rows]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    return Matrix(field, rows, ncols)


@st.composite
def matrices(draw, field=QQ, max_rows=6, max_cols=6, min_rows=0, min_cols=0):
    r = draw(st.integers(min_rows, max_rows))
    c = draw(st.integers(min_cols, max_cols))
    entries = st.sampled_from([0, 0, 0, 1, -1, 2, -3]) if field is QQ else st.integers(0, field.p - 1)
    rows = draw(st.lists(st.lists(entries, min_size=c, max_size=c), min_size=r, max_size=r))
    return mat(rows, field, c)


@pytest.fixture
def rng():
    return random.Random(20240607)


# one line per acceptance criterion, filled in by test_acceptance
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
