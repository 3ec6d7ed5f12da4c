from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from wadgelab.automata import OmegaAutomaton, Parity, WeakOutput
from wadgelab.realfun import FunctionAutomaton

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)


@st.composite
def parity_automata(draw, max_states=4, alphabet=2, max_priority=3):
    n = draw(st.integers(1, max_states))
    delta = tuple(
        tuple(draw(st.integers(0, n - 1)) for _ in range(alphabet)) for _ in range(n)
    )
    prios = tuple(draw(st.integers(0, max_priority)) for _ in range(n))
    return OmegaAutomaton(alphabet, delta, 0, Parity(prios))


@st.composite
def function_automata(draw, max_states=4):
    """Random automata made SCC-homogeneous by labelling each SCC with one value."""
    from wadgelab.graphs import tarjan

    n = draw(st.integers(1, max_states))
    delta = tuple(tuple(draw(st.integers(0, n - 1)) for _ in range(2)) for _ in range(n))
    succ = [sorted(set(r)) for r in delta]
    outs = [Fraction(0)] * n
    for comp in tarjan(succ):
        v = Fraction(draw(st.integers(0, 4)), 2)
        for q in comp:
            outs[q] = v
    return FunctionAutomaton(OmegaAutomaton(2, delta, 0, WeakOutput(tuple(outs))))


@st.composite
def lassos(draw, alphabet=2, max_prefix=5, max_cycle=4):
    from wadgelab.automata import LassoWord

    pre = draw(st.lists(st.integers(0, alphabet - 1), max_size=max_prefix))
    cyc = draw(st.lists(st.integers(0, alphabet - 1), min_size=1, max_size=max_cycle))
    return LassoWord(pre, cyc)


@pytest.fixture
def chi_open():
    from wadgelab.catalog import sigma_complete
    from wadgelab.realfun import char_fun

    return char_fun(sigma_complete(1))


@pytest.fixture
def chi_closed():
    from wadgelab.catalog import pi_complete
    from wadgelab.realfun import char_fun

    return char_fun(pi_complete(1))
