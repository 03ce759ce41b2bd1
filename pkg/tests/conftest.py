import pytest

from sefe.graphs import DirectedCycle, Graph, build_instance

TRI2 = [(0, 1, "c"), (1, 2, "c"), (2, 0, "c"),
        (3, 4, "c"), (4, 5, "c"), (5, 3, "c")]
TRI3 = TRI2 + [(6, 7, "c"), (7, 8, "c"), (8, 6, "c")]

C1 = DirectedCycle.from_sequence([0, 1, 2])
C2 = DirectedCycle.from_sequence([3, 4, 5])
C3 = DirectedCycle.from_sequence([6, 7, 8])


@pytest.fixture
def triangle():
    return Graph(3, [(0, 1), (1, 2), (2, 0)])


@pytest.fixture
def k4():
    return Graph(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])


@pytest.fixture
def prism():
    """Two triangles joined by a perfect matching; 3-connected."""
    return Graph(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3),
                     (0, 3), (1, 4), (2, 5)])


@pytest.fixture
def bridged_triangles():
    """Two disjoint triangles plus a single bridge."""
    return Graph(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3)])


def double_prism_no_instance():
    """Graph one pins the second and third triangle to opposite sides of the
    first; graph two leaves the first triangle floating, which puts the other
    two on a single side of it.  Not simultaneously embeddable."""
    g1 = [(0, 3, "1"), (1, 4, "1"), (2, 5, "1"),
          (0, 6, "1"), (1, 7, "1"), (2, 8, "1")]
    g2 = [(3, 6, "2"), (4, 7, "2"), (5, 8, "2")]
    return build_instance(9, TRI3 + g1 + g2)
