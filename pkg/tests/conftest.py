import functools

import pytest

from hermitian_ramsey.field import field_for_q
from hermitian_ramsey.plane import build_plane
from hermitian_ramsey.secant_graph import build_secant_graph
from hermitian_ramsey.unital import build_unital


@functools.lru_cache(maxsize=None)
def stack(q):
    spec = field_for_q(q)
    plane = build_plane(spec)
    u = build_unital(spec, plane)
    return spec, plane, u, build_secant_graph(u, plane)


@pytest.fixture(scope="session")
def built():
    return stack


ACCEPTANCE = pytest.StashKey[dict]()


@pytest.fixture
def criterion(request):
    """Record one acceptance line per criterion; printed live and again in the summary."""
    results = request.config.stash.setdefault(ACCEPTANCE, {})

    def record(number: int, passed: bool, note: str = "") -> None:
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'}" + (f" ({note})" if note else "")
        results[number] = line
        print("\n" + line)
        assert passed, line

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash.get(ACCEPTANCE, {})
    if results:
        terminalreporter.section("acceptance")
        for number in sorted(results):
            terminalreporter.write_line(results[number])
