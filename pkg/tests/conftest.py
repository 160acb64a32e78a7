import numpy as np
import pytest
from hypothesis import strategies as st

from vrprb.model import Instance


def make_instance(n=14, capacity=5, seed=0, demands=None, fleet=3, side=100.0, iid="t"):
    rng = np.random.default_rng(seed)
    coords = [tuple(p) for p in rng.uniform(0, side, size=(n + 1, 2)).tolist()]
    if demands is None:
        demands = [1.0] * n
    return Instance(iid, tuple(coords), (0.0, *demands), capacity, fleet)


@pytest.fixture
def inst14():
    return make_instance()


@st.composite
def instances(draw, min_n=2, max_n=14):
    n = draw(st.integers(min_n, max_n))
    coord = st.floats(0, 100, allow_nan=False, allow_infinity=False)
    coords = [(draw(coord), draw(coord)) for _ in range(n + 1)]
    demands = [draw(st.integers(0, 4)) for _ in range(n)]
    capacity = draw(st.integers(max(4, 1), 12))
    return Instance("h", tuple(coords), (0, *demands), capacity, 2)


@st.composite
def tours(draw, inst):
    return tuple(draw(st.permutations(list(inst.clients))))


CRITERIA: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def criterion(request):
    """Record a PASS/FAIL line for an acceptance criterion, then assert it."""

    def record(name: str, ok: bool, detail: str = ""):
        CRITERIA[name] = (bool(ok), detail)
        assert ok, f"{name}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(CRITERIA):
        ok, detail = CRITERIA[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
