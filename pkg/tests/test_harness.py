# tests/test_harness.py

import math

import pytest

from steinerminor.core.exceptions import InputError, SpecError, StructuralError
from steinerminor.core.graph import (
    SprMinor,
    TerminalSet,
    WeightedGraph,
    check_planarity,
    contract_assignment,
    sssp,
)
from steinerminor.core.harness import (
    InstanceSpec,
    audit_bound,
    brute_force_distances,
    generate,
    measure_distortion,
    run_instance,
    validate_minor,
)
from steinerminor.core.spr import SprConfig, run_spr

from conftest import unit_grid


def test_parse_instance_spec():
    spec = InstanceSpec.parse("grid:10x10")
    assert spec.size == (10, 10)
    assert spec.terminals == "corners"
    assert spec.weights == "unit"
    assert InstanceSpec.parse("random-planar:50").weights == "euclidean"
    assert InstanceSpec.parse("tree:9", terminals="random:3").terminals == "random:3"


@pytest.mark.parametrize("text", ["hexagon:5", "grid:abc", "tree:0", "path:x"])
def test_parse_instance_spec_rejects(text):
    with pytest.raises(SpecError):
        InstanceSpec.parse(text)


def test_grid_2x2_corners():
    g, terminals = generate(InstanceSpec.parse("grid:2x2"))
    assert (g.n, g.m) == (4, 4)
    assert terminals.terminals == (0, 1, 2, 3)


def test_path3_generator_matches_fixture(path3):
    fixture, fixture_terminals = path3
    g, terminals = generate(InstanceSpec.parse("path:3"))
    assert g.edges() == fixture.edges()
    assert terminals == fixture_terminals


def test_star_generator():
    g, terminals = generate(InstanceSpec.parse("star:3"))
    assert g.edges() == ((0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0))
    assert terminals.terminals == (1, 2, 3)


def test_random_planar_is_planar():
    g, terminals = generate(InstanceSpec.parse("random-planar:50", seed=7))
    assert g.m <= 3 * g.n - 6
    assert check_planarity(g)
    assert len(terminals) == math.ceil(math.sqrt(50))
    assert all(w > 0 for _, _, w in g.edges())


def test_outerplanar_and_tree_generators():
    outer, _ = generate(InstanceSpec.parse("outerplanar:30", seed=3))
    assert outer.m >= 30
    assert check_planarity(outer)
    tree, leaves = generate(InstanceSpec.parse("tree:20", seed=3))
    assert tree.m == 19
    assert all(tree.degree(v) == 1 for v in leaves)
    TerminalSet.of([0]).check_components(tree)


def test_generation_is_deterministic():
    spec = InstanceSpec.parse("random-planar:40", terminals="random:5", seed=11)
    assert generate(spec) == generate(spec)


def test_weight_modes():
    g, _ = generate(InstanceSpec.parse("grid:4x4", weights="uniform:1:2", seed=1))
    assert all(1.0 <= w <= 2.0 for _, _, w in g.edges())
    g, _ = generate(InstanceSpec.parse("tree:30", weights="exponential", seed=1))
    assert all(w >= 1.0 for _, _, w in g.edges())
    with pytest.raises(SpecError):
        generate(InstanceSpec.parse("grid:3x3", weights="uniform:0:1"))
    with pytest.raises(SpecError):
        generate(InstanceSpec.parse("grid:3x3", weights="euclidean"))


@pytest.mark.parametrize(
    "generator, terminals",
    [
        ("grid:3x3", "random:10"),
        ("tree:8", "corners"),
        ("grid:3x3", "leaves"),
        ("grid:3x3", "random:0"),
        ("grid:3x3", "somewhere"),
    ],
)
def test_terminal_selection_errors(generator, terminals):
    with pytest.raises(SpecError):
        generate(InstanceSpec.parse(generator, terminals=terminals))


def test_terminal_modes():
    _, quarter = generate(InstanceSpec.parse("grid:4x4", terminals="random:quarter", seed=2))
    assert len(quarter) == 4
    _, everything = generate(InstanceSpec.parse("path:5", terminals="all"))
    assert everything.terminals == (0, 1, 2, 3, 4)


def test_validate_path3_run(path3):
    g, terminals = path3
    assert validate_minor(g, terminals, run_spr(g, terminals)).passed


def test_validate_identity_run(grid3):
    terminals = TerminalSet.of(grid3.vertices())
    minor = run_spr(grid3, terminals)
    assert validate_minor(grid3, terminals, minor).passed
    assert all(len(members) == 1 for members in minor.branch_sets.values())


def test_validate_catches_disconnected_branch_sets(path4):
    terminals = TerminalSet.of([0, 3])
    broken = SprMinor(
        graph=WeightedGraph(2, [(0, 1, 3.0)]),
        terminals=(0, 3),
        assignment=(0, 3, 0, 3),
        branch_sets={0: (0, 2), 3: (1, 3)},
    )
    report = validate_minor(path4, terminals, broken)
    assert not report.passed
    connectivity = [v for v in report.violations if v["check"] == "connectivity"]
    assert connectivity[0]["witness"] == {"terminal": 0, "pair": [0, 2]}


def test_validate_catches_wrong_weights(path3):
    g, terminals = path3
    minor = contract_assignment(g, terminals, [0, 0, 2])
    tampered = SprMinor(WeightedGraph(2, [(0, 1, 7.0)]), minor.terminals, minor.assignment, minor.branch_sets)
    checks = {v["check"] for v in validate_minor(g, terminals, tampered).violations}
    assert checks == {"edge-weight"}


def test_distortion_path3(path3):
    g, terminals = path3
    report = measure_distortion(g, terminals, run_spr(g, terminals))
    assert report.alpha == 1.0
    assert report.flags == []
    assert report.to_dict()["schema"] == 1


def test_distortion_star(star):
    g, terminals = star
    report = measure_distortion(g, terminals, run_spr(g, terminals))
    assert report.alpha == 2.0
    assert report.mean == pytest.approx(4 / 3)
    assert [(p.t1, p.t2, p.dm) for p in report.pairs] == [(1, 2, 2.0), (1, 3, 2.0), (2, 3, 4.0)]


def test_distortion_detects_missing_minor_edges(path3):
    g, terminals = path3
    minor = contract_assignment(g, terminals, [0, 0, 2])
    edgeless = SprMinor(WeightedGraph(2), minor.terminals, minor.assignment, minor.branch_sets)
    with pytest.raises(StructuralError):
        measure_distortion(g, terminals, edgeless)


@pytest.mark.parametrize(
    "size", [2, 4, 6] + [pytest.param(size, marks=pytest.mark.slow) for size in (10, 14, 20)]
)
def test_corner_terminals_on_unit_grids(size):
    g = unit_grid(size, size)
    terminals = TerminalSet.of([0, size - 1, size * (size - 1), size * size - 1])
    minor = run_spr(g, terminals, SprConfig(measure=True))
    report = measure_distortion(g, terminals, minor)
    assert 1.0 <= report.alpha <= 3.0
    assert report.alpha <= report.audit_bound


def test_audit_bound():
    assert audit_bound(7.0, 1.0, 1.0) == 1845145.0


def test_brute_force_matches_sssp(path3, triangle, cycle4, grid2, grid3):
    g, _ = path3
    for graph in (g, triangle, cycle4, grid2, grid3):
        matrix = brute_force_distances(graph)
        for u in graph.vertices():
            dist = sssp(graph, u)
            assert matrix[u] == [dist.distance(v) for v in graph.vertices()]


def test_brute_force_fixture_values(triangle, cycle4):
    assert brute_force_distances(triangle)[0][2] == 2.0
    assert brute_force_distances(cycle4)[0][2] == 2.0


def test_brute_force_refuses_large_graphs():
    with pytest.raises(InputError):
        brute_force_distances(unit_grid(4, 3))


def test_minor_weights_match_brute_force(star, grid3):
    g, terminals = star
    for graph, ks in ((g, terminals), (grid3, TerminalSet.of([0, 2, 6, 8]))):
        minor = run_spr(graph, ks)
        matrix = brute_force_distances(graph)
        for a, b, w in minor.edge_list():
            assert w == matrix[a][b]


def test_run_instance_row():
    row = run_instance(InstanceSpec.parse("grid:5x5", seed=1))
    assert row["n"] == 25
    assert row["k"] == 4
    assert row["valid"]
    assert row["alpha"] >= 1.0


SUITE_SIZES = {
    "grid": ["10x10", "20x20", "30x30"],
    "tree": ["100", "500"],
    "random-planar": ["200", "1000"],
    "outerplanar": ["100", "300"],
}
SUITE_WEIGHTS = ["unit", "uniform:1:10", "exponential"]
SUITE_TERMINALS = ["random:2", "random:sqrt", "random:quarter"]
SUITE = [
    (f"{family}:{size}", weights)
    for family, sizes in SUITE_SIZES.items()
    for size in sizes
    for weights in SUITE_WEIGHTS + (["euclidean"] if family == "random-planar" else [])
]


@pytest.mark.slow
@pytest.mark.parametrize("generator, weights", SUITE)
@pytest.mark.parametrize("terminals", SUITE_TERMINALS)
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_suite_properties(generator, weights, terminals, seed):
    spec = InstanceSpec.parse(generator, weights=weights, terminals=terminals, seed=seed)
    g, ks = generate(spec)
    minor = run_spr(g, ks, SprConfig(seed=seed, measure=True, pairs=500))
    assert validate_minor(g, ks, minor).passed
    report = measure_distortion(g, ks, minor)
    assert all(p.ratio >= 1 - 1e-9 for p in report.pairs)
    assert report.alpha <= report.audit_bound
    provenance = minor.provenance
    assert provenance.window_violations == []
    assert provenance.radius_violations == []
    assert all(s.scattering.passed for s in provenance.iterations)
    assert provenance.iteration_count <= provenance.termination_bound
