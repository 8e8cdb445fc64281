import pytest

from umx import io
from umx.lattice import Poset, order_ideals
from umx.umatroid import UMatroid


@pytest.fixture
def stalactite():
    """min(|A|, 2) on the ideals of 1 < 4."""
    return UMatroid.from_function(order_ideals(Poset.from_relations(4, [(1, 4)])), lambda A: min(A.bit_count(), 2))


@pytest.fixture
def non_poset_umatroid():
    return UMatroid(io.load_fixture("non_poset_umatroid"))


@pytest.fixture
def closed_form_counterexample():
    return UMatroid(io.load_fixture("closed_form_counterexample"))


# --- acceptance reporting -----------------------------------------------------------
# Tests marked ``acceptance`` carry a criterion label; print one line per label.

_criteria: dict[str, list[bool]] = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    label = dict(report.user_properties).get("criterion")
    if label is None:
        return
    _criteria.setdefault(label, []).append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_criteria, key=lambda s: (int(s.split()[0]), s)):
        results = _criteria[label]
        status = "PASS" if all(results) else "FAIL"
        terminalreporter.write_line(f"{status}  criterion {label}  ({sum(results)}/{len(results)} checks)")
