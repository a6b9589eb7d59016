# tests/test_properties.py

from hypothesis import given, settings
from hypothesis import strategies as st

from steinerminor.core.graph import STRONG, TerminalSet, WeightedGraph, set_diameter, sssp
from steinerminor.core.harness import brute_force_distances, measure_distortion, validate_minor
from steinerminor.core.shortcut import ball_carving, cluster_graph, hop_distance
from steinerminor.core.spr import SprConfig, run_spr

PROPERTY_SETTINGS = settings(max_examples=50, deadline=None)


@st.composite
def connected_graphs(draw, max_n=8):
    n = draw(st.integers(min_value=1, max_value=max_n))
    weight = st.integers(min_value=1, max_value=6).map(float)
    edges = [(draw(st.integers(min_value=0, max_value=v - 1)), v, draw(weight)) for v in range(1, n)]
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    if pairs:
        extra = draw(st.lists(st.sampled_from(pairs), max_size=n, unique=True))
        edges.extend((u, v, draw(weight)) for u, v in extra)
    return WeightedGraph(n, edges)


@st.composite
def instances(draw):
    g = draw(connected_graphs())
    terminals = draw(st.lists(st.sampled_from(list(g.vertices())), min_size=1, unique=True))
    return g, TerminalSet.of(terminals)


@PROPERTY_SETTINGS
@given(connected_graphs())
def test_sssp_matches_brute_force(g):
    matrix = brute_force_distances(g)
    for u in g.vertices():
        dist = sssp(g, u)
        assert [dist.distance(v) for v in g.vertices()] == matrix[u]


@PROPERTY_SETTINGS
@given(instances(), st.integers(min_value=0, max_value=3))
def test_spr_yields_a_valid_noncontracting_minor(instance, seed):
    g, terminals = instance
    config = SprConfig(seed=seed, measure=True)
    minor = run_spr(g, terminals, config)
    assert validate_minor(g, terminals, minor).passed
    report = measure_distortion(g, terminals, minor)
    assert all(pair.ratio >= 1 - 1e-9 for pair in report.pairs)
    assert report.alpha <= report.audit_bound
    provenance = minor.provenance
    assert provenance.window_violations == []
    assert provenance.radius_violations == []
    assert all(s.scattering.passed for s in provenance.iterations)
    assert provenance.iteration_count <= provenance.termination_bound

    again = run_spr(g, terminals, config)
    assert again.assignment == minor.assignment
    assert again.graph == minor.graph


@PROPERTY_SETTINGS
@given(connected_graphs(), st.integers(min_value=1, max_value=12), st.integers(min_value=0, max_value=5))
def test_ball_carving_partitions_within_budget(g, delta, seed):
    clustering = ball_carving(g, float(delta), seed=seed)
    assert sorted(v for cluster in clustering.members for v in cluster) == list(g.vertices())
    for cluster in clustering.members:
        assert set_diameter(g, cluster, STRONG) <= delta


@PROPERTY_SETTINGS
@given(connected_graphs(), st.integers(min_value=1, max_value=12))
def test_cluster_graph_matches_edge_scan(g, delta):
    clustering = ball_carving(g, float(delta), seed=0)
    cg = cluster_graph(g, clustering)
    owner = clustering.cluster_of
    expected = {
        (min(owner[u], owner[v]), max(owner[u], owner[v]))
        for u, v, _ in g.edges()
        if owner[u] != owner[v]
    }
    assert {(min(a, b), max(a, b)) for a, b in cg.graph.edges()} == expected
    for a in range(cg.size):
        for b in range(cg.size):
            assert hop_distance(cg, a, b) == hop_distance(cg, b, a)
