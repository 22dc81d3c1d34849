import re
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from liecones import catalog
from liecones.linalg import Mat

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def rationals(max_num=4, max_den=3):
    return st.builds(
        Fraction,
        st.integers(-max_num, max_num),
        st.integers(1, max_den),
    )


def matrices(n, m=None, **kw):
    m = n if m is None else m
    return st.lists(st.lists(rationals(**kw), min_size=m, max_size=m), min_size=n, max_size=n).map(
        lambda rows: Mat(rows, ncols=m)
    )


def vectors(n, **kw):
    return st.lists(rationals(**kw), min_size=n, max_size=n).map(tuple)


@pytest.fixture(scope="session")
def entries():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = catalog.get(name)
        return cache[name]

    return get


# one summary line per acceptance criterion
_CRITERION = re.compile(r"test_criterion_(\d+)_")
_outcomes: dict[int, list[bool]] = {}


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    if report.when == "call" or report.outcome != "passed":
        _outcomes.setdefault(int(m.group(1)), []).append(report.outcome == "passed")


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_outcomes):
        ok = all(_outcomes[n])
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}")
