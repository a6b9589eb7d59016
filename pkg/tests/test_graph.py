# tests/test_graph.py

import math

import pytest

from steinerminor.core.exceptions import InputError, MinorValidityError
from steinerminor.core.graph import (
    STRONG,
    WEAK,
    Path,
    TerminalSet,
    WeightedGraph,
    check_planarity,
    contract_assignment,
    dist_to_set,
    induced_subgraph,
    normalize_scale,
    prune_heavy_edges,
    set_diameter,
    shortest_path,
    sssp,
)

from conftest import unit_grid, unit_path


@pytest.mark.parametrize(
    "edges",
    [
        [(0, 0, 1.0)],
        [(0, 1, 0.0)],
        [(0, 1, -2.0)],
        [(0, 1, math.nan)],
        [(0, 1, math.inf)],
        [(0, 3, 1.0)],
    ],
)
def test_weighted_graph_rejects_bad_edges(edges):
    with pytest.raises(InputError):
        WeightedGraph(3, edges)


def test_parallel_edges_collapse_to_minimum():
    g = WeightedGraph(2, [(0, 1, 3.0), (1, 0, 2.0)])
    assert g.m == 1
    assert g.weight(0, 1) == 2.0


def test_edges_and_neighbors_are_sorted():
    g = WeightedGraph(4, [(3, 0, 1.0), (2, 0, 1.0), (1, 0, 1.0), (2, 1, 4.0)])
    assert g.edges() == ((0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0), (1, 2, 4.0))
    assert [u for u, _ in g.neighbors(0)] == [1, 2, 3]
    assert g.degree(0) == 3


def test_missing_edge_weight_raises(path3):
    g, _ = path3
    with pytest.raises(InputError):
        g.weight(0, 2)


def test_check_vertex_rejects_non_ids(path3):
    g, _ = path3
    for bad in (-1, 3, 1.5, "a"):
        with pytest.raises(InputError):
            g.check_vertex(bad)


def test_terminal_set_is_sorted_and_nonempty():
    assert TerminalSet.of([3, 1, 3]).terminals == (1, 3)
    with pytest.raises(InputError):
        TerminalSet.of([])


def test_terminals_must_reach_every_component():
    g = WeightedGraph(4, [(0, 1, 1.0), (2, 3, 1.0)])
    TerminalSet.of([0, 3]).check_components(g)
    with pytest.raises(InputError, match="vertex 2"):
        TerminalSet.of([0]).check_components(g)


def test_sssp_on_path(path3):
    g, _ = path3
    dist = sssp(g, 0)
    assert dist.reachable() == [(0, 0.0), (1, 1.0), (2, 2.0)]


def test_sssp_takes_the_detour(triangle):
    assert sssp(triangle, 0).distance(2) == 2.0


def test_sssp_across_grid(grid3):
    assert sssp(grid3, 0).distance(8) == 4.0


def test_dist_to_leaf_terminals(star):
    g, terminals = star
    assert dist_to_set(g, terminals).distance(0) == 1.0


def test_sssp_unreachable_is_none():
    g = WeightedGraph(3, [(0, 1, 1.0)])
    dist = sssp(g, 0)
    assert dist.distance(2) is None
    assert not dist.is_reachable(2)


def test_dist_to_set(path3):
    g, terminals = path3
    assert dist_to_set(g, terminals).reachable() == [(0, 0.0), (1, 1.0), (2, 0.0)]
    with pytest.raises(InputError):
        dist_to_set(g, [])


def test_shortest_path(triangle):
    path = shortest_path(triangle, 0, 2)
    assert path.vertices == (0, 1, 2)
    assert path.length == 2.0
    assert path.max_edge_weight == 1.0
    assert path.hops == 2
    assert shortest_path(WeightedGraph(2), 0, 1) is None


def test_path_from_vertices_requires_adjacency(path3):
    g, _ = path3
    assert Path.from_vertices(g, [1]).length == 0.0
    with pytest.raises(InputError):
        Path.from_vertices(g, [0, 2])


def test_prune_heavy_edges(triangle):
    pruned = prune_heavy_edges(triangle, 2.0)
    assert pruned.edges() == ((0, 1, 1.0), (1, 2, 1.0))
    assert prune_heavy_edges(triangle, 0.5).m == 0
    with pytest.raises(InputError):
        prune_heavy_edges(triangle, 0)


def test_induced_subgraph_renumbers_monotonically(cycle4):
    sub, mapping = induced_subgraph(cycle4, [3, 1, 2])
    assert mapping.to_host == (1, 2, 3)
    assert sub.edges() == ((0, 1, 1.0), (1, 2, 1.0))
    assert mapping.sub(3) == 2
    assert mapping.host(0) == 1


def test_set_diameter_modes(path3, triangle):
    g, _ = path3
    assert set_diameter(g, [0, 2], WEAK) == 2.0
    assert set_diameter(g, [0, 2], STRONG) is None
    assert set_diameter(triangle, [0, 2], STRONG) == 5.0
    assert set_diameter(triangle, [0, 1, 2], STRONG) == 2.0
    with pytest.raises(InputError):
        set_diameter(g, [])
    with pytest.raises(InputError):
        set_diameter(g, [0], "sideways")


def test_normalize_scale():
    g = WeightedGraph(3, [(0, 1, 2.0), (1, 2, 4.0)])
    scaled, factor = normalize_scale(g, TerminalSet.of([0]))
    assert factor == 0.5
    assert scaled.edges() == ((0, 1, 1.0), (1, 2, 2.0))


def test_normalize_scale_keeps_unit_graphs(path3):
    g, terminals = path3
    scaled, factor = normalize_scale(g, terminals)
    assert scaled is g
    assert factor == 1.0


def test_check_planarity():
    k5 = WeightedGraph(5, [(u, v, 1.0) for u in range(5) for v in range(u + 1, 5)])
    assert not check_planarity(k5)
    assert check_planarity(unit_grid(4, 4))


def test_contract_path3(path3):
    g, terminals = path3
    minor = contract_assignment(g, terminals, [0, 0, 2])
    assert minor.edge_list() == [(0, 2, 2.0)]
    assert minor.branch_sets == {0: (0, 1), 2: (2,)}
    assert minor.graph.labels == ("a", "c")


def test_contract_accepts_mappings(path3):
    g, terminals = path3
    minor = contract_assignment(g, terminals, {0: 0, 1: 2, 2: 2})
    assert minor.branch_sets == {0: (0,), 2: (1, 2)}


def test_contract_with_every_vertex_a_terminal(triangle):
    minor = contract_assignment(triangle, TerminalSet.of([0, 1, 2]), [0, 1, 2])
    assert minor.edge_list() == [(0, 1, 1.0), (0, 2, 2.0), (1, 2, 1.0)]


def test_contract_single_terminal(path3):
    g, _ = path3
    minor = contract_assignment(g, TerminalSet.of([1]), [1, 1, 1])
    assert minor.graph.n == 1
    assert minor.graph.m == 0


def test_contract_rejects_disconnected_branch_set():
    g = unit_path(4)
    with pytest.raises(MinorValidityError) as info:
        contract_assignment(g, TerminalSet.of([0, 3]), [0, 3, 0, 3])
    assert info.value.witness == (0, 2)


@pytest.mark.parametrize(
    "assignment",
    [
        [0, 0],
        [0, None, 2],
        [0, 1, 2],
        [2, 0, 2],
    ],
)
def test_contract_rejects_invalid_assignments(path3, assignment):
    g, terminals = path3
    with pytest.raises(InputError):
        contract_assignment(g, terminals, assignment)
