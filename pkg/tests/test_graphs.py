"""Configurations, gauge action, holonomy, Wilson loops, tree fixing, alignment."""

import numpy as np
import pytest

from wilsonnet import (
    Configuration,
    GaugeTransform,
    Graph,
    GroupElement,
    GroupKind,
    SignedEdge,
    align_configurations,
    bouquet,
    gauge_apply,
    haar_sample,
    holonomy,
    loops_based_at,
    spanning_tree_fix,
    wilson_loop,
)

U2 = GroupKind("U", 2)
U3 = GroupKind("U", 3)


def random_config(graph, kind, seed):
    rng = np.random.default_rng(seed)
    return Configuration(graph, tuple(haar_sample(kind, rng) for _ in graph.edges))


def test_graph_rejects_isolated_vertex():
    with pytest.raises(ValueError):
        Graph(3, ((0, 1),))


def test_graph_allows_multi_and_self_edges():
    g = Graph(2, ((0, 1), (0, 1), (1, 1)))
    assert g.num_edges == 3


def test_signed_edge_reverses_endpoints():
    g = Graph(2, ((0, 1),))
    assert g.step_source(SignedEdge(0, 1)) == 0
    assert g.step_target(SignedEdge(0, 1)) == 1
    assert g.step_source(SignedEdge(0, -1)) == 1
    assert g.step_target(SignedEdge(0, -1)) == 0


def test_configuration_checks_membership():
    graph = bouquet(1)
    bad = GroupElement(U2, np.diag([2.0, 1.0]))
    with pytest.raises(ValueError):
        Configuration(graph, (bad,))


def test_gauge_apply_identity_fixes_nothing():
    cfg = random_config(bouquet(2), U2, 0)
    phi = GaugeTransform((GroupElement.identity(U2),))
    out = gauge_apply(phi, cfg)
    for a, b in zip(out.elements, cfg.elements):
        assert np.allclose(a.mat, b.mat)


def test_gauge_apply_self_loop_conjugates():
    cfg = random_config(bouquet(1), U2, 1)
    k = haar_sample(U2, np.random.default_rng(2))
    out = gauge_apply(GaugeTransform((k,)), cfg)
    expected = k.mat.conj().T @ cfg.elements[0].mat @ k.mat
    assert np.allclose(out.elements[0].mat, expected)


def test_gauge_apply_bouquet_is_diagonal_conjugation():
    cfg = random_config(bouquet(2), U2, 3)
    k = haar_sample(U2, np.random.default_rng(4))
    out = gauge_apply(GaugeTransform((k,)), cfg)
    for old, new in zip(cfg.elements, out.elements):
        assert np.allclose(new.mat, k.mat.conj().T @ old.mat @ k.mat)


def test_holonomy_single_step():
    cfg = random_config(bouquet(1), U2, 5)
    h = holonomy(cfg, [SignedEdge(0, 1)])
    assert np.allclose(h.mat, cfg.elements[0].mat)


def test_holonomy_cancellation():
    cfg = random_config(bouquet(1), U2, 6)
    h = holonomy(cfg, [SignedEdge(0, 1), SignedEdge(0, -1)])
    assert np.abs(h.mat - np.eye(2)).max() < 1e-12


def test_holonomy_reversed_order():
    # loop (e1^-1, e2, e2) evaluates to g2 g2 g1^-1
    cfg = random_config(bouquet(2), U2, 7)
    g1, g2 = (g.mat for g in cfg.elements)
    h = holonomy(cfg, [SignedEdge(0, -1), SignedEdge(1, 1), SignedEdge(1, 1)])
    assert np.allclose(h.mat, g2 @ g2 @ np.linalg.inv(g1))


def test_holonomy_cocycle_concatenation():
    graph = Graph(3, ((0, 1), (1, 2)))
    cfg = random_config(graph, U2, 8)
    p1 = [SignedEdge(0, 1)]
    p2 = [SignedEdge(1, 1)]
    whole = holonomy(cfg, p1 + p2).mat
    assert np.allclose(whole, holonomy(cfg, p2).mat @ holonomy(cfg, p1).mat)


def test_holonomy_path_then_reverse_is_identity():
    graph = Graph(3, ((0, 1), (1, 2)))
    cfg = random_config(graph, U2, 9)
    path = [SignedEdge(0, 1), SignedEdge(1, 1)]
    back = [SignedEdge(1, -1), SignedEdge(0, -1)]
    h = holonomy(cfg, path + back)
    assert np.abs(h.mat - np.eye(2)).max() < 1e-12


def test_holonomy_rejects_broken_path():
    graph = Graph(3, ((0, 1), (1, 2)))
    cfg = random_config(graph, U2, 10)
    with pytest.raises(ValueError):
        holonomy(cfg, [SignedEdge(0, 1), SignedEdge(0, 1)])


def test_wilson_loop_identity_config():
    graph = bouquet(2)
    cfg = Configuration(graph, (GroupElement.identity(U3), GroupElement.identity(U3)))
    assert wilson_loop(cfg, [SignedEdge(0, 1)]) == pytest.approx(3.0)


def test_wilson_loop_trace_of_diagonal():
    cfg = Configuration(bouquet(1), (GroupElement(U2, np.diag([1j, -1j])),))
    assert wilson_loop(cfg, [SignedEdge(0, 1)]) == pytest.approx(0.0)


def test_wilson_loop_gauge_invariance():
    graph = Graph(3, ((0, 1), (1, 2), (2, 0), (0, 0)))
    cfg = random_config(graph, U2, 11)
    rng = np.random.default_rng(12)
    loops = loops_based_at(graph, 0, 4)
    assert loops
    for _ in range(5):
        phi = GaugeTransform(tuple(haar_sample(U2, rng) for _ in range(3)))
        moved = gauge_apply(phi, cfg)
        for loop in loops[:40]:
            assert abs(wilson_loop(moved, loop) - wilson_loop(cfg, loop)) < 1e-10


def test_wilson_loop_rejects_open_path():
    graph = Graph(2, ((0, 1),))
    cfg = random_config(graph, U2, 13)
    with pytest.raises(ValueError):
        wilson_loop(cfg, [SignedEdge(0, 1)])


def test_spanning_tree_fix_on_tree_gives_all_identity():
    graph = Graph(4, ((0, 1), (1, 2), (2, 3)))
    cfg = random_config(graph, U2, 14)
    fixed = spanning_tree_fix(cfg, root=0)
    assert fixed.tree_edges == frozenset({0, 1, 2})
    for g in fixed.configuration.elements:
        assert np.array_equal(g.mat, np.eye(2))


def test_spanning_tree_fix_bouquet_unchanged():
    cfg = random_config(bouquet(3), U2, 15)
    fixed = spanning_tree_fix(cfg, root=0)
    assert fixed.tree_edges == frozenset()
    for a, b in zip(fixed.configuration.elements, cfg.elements):
        assert np.allclose(a.mat, b.mat)


def test_spanning_tree_fix_two_vertex_double_edge():
    # edges a=(0,1), b=(0,1): fixing a sends b to the holonomy of (b, a^-1)
    graph = Graph(2, ((0, 1), (0, 1)))
    cfg = random_config(graph, U2, 16)
    fixed = spanning_tree_fix(cfg, root=0)
    assert fixed.tree_edges == frozenset({0})
    ga, gb = (g.mat for g in cfg.elements)
    assert np.array_equal(fixed.configuration.elements[0].mat, np.eye(2))
    assert np.allclose(fixed.configuration.elements[1].mat, ga.conj().T @ gb)
    for base in range(2):
        for loop in loops_based_at(graph, base, 4):
            before = wilson_loop(cfg, loop)
            after = wilson_loop(fixed.configuration, loop)
            assert abs(before - after) < 1e-10


def test_spanning_tree_fix_gauge_is_recoverable():
    graph = Graph(3, ((0, 1), (1, 2), (2, 0)))
    cfg = random_config(graph, U2, 17)
    fixed = spanning_tree_fix(cfg, root=0)
    replayed = gauge_apply(fixed.gauge, cfg)
    for e, g in enumerate(replayed.elements):
        target = fixed.configuration.elements[e].mat
        assert np.abs(g.mat - target).max() < 1e-12


def test_spanning_tree_fix_rejects_disconnected():
    graph = Graph(4, ((0, 1), (2, 3)))
    cfg = random_config(graph, U2, 18)
    with pytest.raises(ValueError):
        spanning_tree_fix(cfg)


@pytest.mark.parametrize("kind", [U2, GroupKind("O", 3), GroupKind("SO", 3), GroupKind("Sp", 1)], ids=str)
def test_align_recovers_constructed_gauge(kind):
    graph = bouquet(2)
    cfg = random_config(graph, kind, 19)
    k = haar_sample(kind, np.random.default_rng(20))
    moved = gauge_apply(GaugeTransform((k,)), cfg)
    loops = [
        (SignedEdge(0, 1),),
        (SignedEdge(1, 1),),
        (SignedEdge(0, 1), SignedEdge(1, 1)),
    ]
    # the gauge action conjugates by k^{-1}, so alignment maps cfg onto moved
    found = align_configurations(cfg, moved, 0, loops, tol=1e-8)
    assert found is not None
    for loop in loops:
        lhs = holonomy(moved, loop).mat
        rhs = found.mat @ holonomy(cfg, loop).mat @ found.mat.conj().T
        assert np.abs(lhs - rhs).max() < 1e-8


def test_align_identical_configurations():
    cfg = random_config(bouquet(2), U2, 21)
    loops = [(SignedEdge(0, 1),), (SignedEdge(1, 1),)]
    found = align_configurations(cfg, cfg, 0, loops, tol=1e-9)
    assert found is not None
    for loop in loops:
        lhs = holonomy(cfg, loop).mat
        rhs = found.mat @ lhs @ found.mat.conj().T
        assert np.abs(lhs - rhs).max() < 1e-9


def test_align_returns_none_when_spectra_differ():
    a = random_config(bouquet(1), U2, 22)
    b = random_config(bouquet(1), U2, 23)
    assert align_configurations(a, b, 0, [(SignedEdge(0, 1),)], tol=1e-9) is None


def test_align_rejects_loops_elsewhere():
    graph = Graph(2, ((0, 1), (1, 0)))
    cfg = random_config(graph, U2, 24)
    loop_at_1 = (SignedEdge(1, 1), SignedEdge(0, 1))
    with pytest.raises(ValueError):
        align_configurations(cfg, cfg, 0, [loop_at_1], tol=1e-9)


def test_loops_based_at_counts_bouquet():
    # every step sequence on a bouquet is a loop: (2r)^1 + (2r)^2 for max_len 2
    loops = loops_based_at(bouquet(2), 0, 2)
    assert len(loops) == 4 + 16
