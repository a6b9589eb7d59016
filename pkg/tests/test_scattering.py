# tests/test_scattering.py

import pytest

from steinerminor.core.exceptions import InputError, ScatterInfeasibleError
from steinerminor.core.graph import WeightedGraph
from steinerminor.core.scattering import (
    ScatteringPartition,
    build_scattering_partition,
    parse_pair_mode,
    scattered_path,
    verify_scattering,
)
from steinerminor.core.shortcut import Clustering

from conftest import unit_grid


def _fixed_partition(g, clusters, delta):
    return ScatteringPartition(g, g, Clustering.from_clusters(g, clusters), delta)


def test_path3_with_one_cluster(path3):
    g, _ = path3
    sp = build_scattering_partition(g, 2.0, provider="components")
    assert sp.clustering.members == ((0, 1, 2),)
    assert sp.pruned == g


def test_heavy_edge_is_pruned(triangle):
    sp = build_scattering_partition(triangle, 2.0)
    assert sp.pruned.edges() == ((0, 1, 1.0), (1, 2, 1.0))
    assert sp.graph.m == 3


def test_budget_below_every_weight_gives_singletons(triangle):
    sp = build_scattering_partition(triangle, 0.5)
    assert sp.pruned.m == 0
    assert sp.clustering.members == ((0,), (1,), (2,))


def test_budget_must_be_positive(triangle):
    with pytest.raises(InputError):
        build_scattering_partition(triangle, 0.0)


def test_trivial_scattered_path(path3):
    g, _ = path3
    sp = build_scattering_partition(g, 2.0, provider="components")
    path = scattered_path(sp, 1, 1)
    assert path.length == 0.0
    assert path.clusters == (0,)


def test_scattered_path_inside_one_cluster(path3):
    g, _ = path3
    sp = build_scattering_partition(g, 2.0, provider="components")
    path = scattered_path(sp, 0, 2)
    assert path.path.vertices == (0, 1, 2)
    assert path.length == 2.0
    assert path.clusters == (0,)
    assert path.violations(sp) == []


def test_scattered_path_across_two_clusters(path4):
    sp = _fixed_partition(path4, [[0, 1], [2, 3]], 1.0)
    path = scattered_path(sp, 0, 3)
    assert path.path.vertices == (0, 1, 2, 3)
    assert path.clusters == (0, 1)
    assert path.length == 3.0
    assert path.max_edge_weight == 1.0
    assert path.violations(sp) == []


def test_inner_path_stays_inside_its_cluster():
    g = WeightedGraph(4, [(0, 1, 1.0), (1, 2, 1.0), (0, 3, 0.5), (2, 3, 0.5)])
    sp = _fixed_partition(g, [[0, 1, 2], [3]], 2.0)
    assert sp.inner_path(0, 0, 2) == [0, 1, 2]
    assert sp.inner_path(1, 3, 3) == [3]


def test_scattered_path_across_pruned_components(triangle):
    sp = build_scattering_partition(triangle, 0.5)
    with pytest.raises(ScatterInfeasibleError):
        scattered_path(sp, 0, 1)


def test_verify_single_cluster(path3):
    g, _ = path3
    sp = build_scattering_partition(g, 2.0, provider="components")
    report = verify_scattering(g, sp, pairs="all")
    assert report.tau_emp == 1
    assert report.beta_emp <= 1.0
    assert report.violations == []


def test_verify_singletons_on_path(path4):
    sp = build_scattering_partition(path4, 1.0, provider="singletons")
    report = verify_scattering(path4, sp, pairs="all")
    assert report.pairs_checked == 3
    assert report.tau_emp == 2
    assert report.beta_emp == 1.0
    assert report.max_hops == 1
    assert report.passed


def test_verify_paired_clusters(path4):
    sp = _fixed_partition(path4, [[0, 1], [2, 3]], 2.0)
    report = verify_scattering(path4, sp, pairs="all")
    assert report.pairs_checked == 5
    assert report.tau_emp == 2
    assert report.beta_emp == 1.0
    assert not report.sampled


def test_verify_records_weak_diameter_violations(path4):
    sp = _fixed_partition(path4, [[0, 1, 2], [3]], 1.0)
    report = verify_scattering(path4, sp, pairs="all")
    assert any("weak diameter" in v["reason"] for v in report.violations)


@pytest.mark.parametrize("delta", [1.0, 2.0, 4.0])
def test_ball_carving_partitions_verify_cleanly(delta):
    g = unit_grid(6, 5)
    sp = build_scattering_partition(g, delta, seed=4)
    report = verify_scattering(g, sp, pairs="all")
    assert report.passed
    assert report.beta_emp <= 2 * report.tau_emp


def test_sampled_verification():
    g = unit_grid(5, 5)
    sp = build_scattering_partition(g, 2.0, seed=2)
    report = verify_scattering(g, sp, pairs=20, seed=9)
    assert report.sampled
    assert 0 < report.pairs_checked <= 20
    assert report == verify_scattering(g, sp, pairs=20, seed=9)


def test_threaded_verification_matches_serial():
    g = unit_grid(5, 4)
    sp = build_scattering_partition(g, 2.0, seed=2)
    assert verify_scattering(g, sp, pairs="all").to_dict() == verify_scattering(g, sp, pairs="all", jobs=3).to_dict()


def test_with_measurements(path4):
    sp = build_scattering_partition(path4, 1.0, provider="singletons")
    measured = sp.with_measurements(verify_scattering(path4, sp, pairs="all"))
    assert (measured.tau_emp, measured.beta_emp) == (2, 1.0)
    assert sp.tau_emp is None


def test_parse_pair_mode():
    assert parse_pair_mode("all") == "all"
    assert parse_pair_mode("auto") == "auto"
    assert parse_pair_mode("sample:1000") == 1000
    for bad in ("sample:0", "sample:x", "most"):
        with pytest.raises(InputError):
            parse_pair_mode(bad)
