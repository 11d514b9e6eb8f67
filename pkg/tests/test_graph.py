import pytest
from hypothesis import given, strategies as st

from bnet import CycleDetected, DuplicateEdge, InvalidNode, build_dag, topological_sort

FIG1 = [(0, 1), (0, 2), (1, 3), (2, 3)]


def test_chain_parents():
    g = build_dag(3, [(0, 1), (1, 2)])
    assert g.parents == ((), (0,), (1,))
    assert topological_sort(g) == [0, 1, 2]


def test_fig1_parent_sets_and_order():
    g = build_dag(4, FIG1)
    assert g.parents[3] == (1, 2)
    assert g.parents[1] == g.parents[2] == (0,)
    assert topological_sort(g) == [0, 1, 2, 3]


def test_edgeless_tie_break():
    assert topological_sort(build_dag(3, [])) == [0, 1, 2]


def test_smallest_id_first():
    # 2 and 0 are both roots; 0 must come first even though 2 feeds 1
    g = build_dag(3, [(2, 1), (0, 1)])
    assert topological_sort(g) == [0, 2, 1]
    assert g.parents[1] == (2, 0)


@pytest.mark.parametrize("edges, exc", [
    ([(0, 1), (1, 0)], CycleDetected),
    ([(0, 0)], CycleDetected),
    ([(0, 1), (1, 2), (2, 0)], CycleDetected),
    ([(0, 5)], InvalidNode),
    ([(-1, 0)], InvalidNode),
    ([(0, 1), (0, 1)], DuplicateEdge),
])
def test_bad_graphs(edges, exc):
    with pytest.raises(exc):
        build_dag(3, edges)


@st.composite
def dags(draw):
    n = draw(st.integers(1, 12))
    perm = draw(st.permutations(range(n)))
    pairs = [(perm[i], perm[j]) for i in range(n) for j in range(i + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return n, edges


@given(dags())
def test_topological_order_properties(dag):
    n, edges = dag
    g = build_dag(n, edges)
    order = topological_sort(g)
    assert sorted(order) == list(range(n))
    pos = {v: i for i, v in enumerate(order)}
    assert all(pos[u] < pos[v] for u, v in edges)
    assert build_dag(n, g.edges).parents == g.parents
