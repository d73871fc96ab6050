import pytest
from hypothesis import HealthCheck, settings

from topiso.graphs import Graph, complement, cycle_graph, path_graph, petersen_graph
from topiso.mekler import MeklerGroup
from topiso.quotients import word_maps

settings.register_profile(
    "repo",
    deadline=None,
    derandomize=True,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

# filled by tests/test_acceptance.py, printed at the end of the session
ACCEPTANCE_RESULTS: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"criterion {key:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


def element_of_word(G: MeklerGroup, word):
    """A normal-form oracle word as a closed-form element, without multiplying."""
    central, vector = word_maps(word)
    return G.element(vector, central)


@pytest.fixture(scope="session")
def c5():
    return cycle_graph(5)


@pytest.fixture(scope="session")
def petersen():
    return petersen_graph()


@pytest.fixture(scope="session")
def p3():
    return path_graph(3)


@pytest.fixture(scope="session")
def anti_p3():
    return complement(path_graph(3))
