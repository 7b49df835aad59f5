"""Routing, templates, skeletons, and the random-subset expansion experiment."""

import math
import random
import statistics

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cycledecomp.connectivity import (
    PairBatch,
    RoutedPaths,
    RouteFailure,
    Skeleton,
    SkeletonFailure,
    build_skeleton,
    connect_one_pair_of_batch,
    make_template,
    route_pairs,
    verify_random_subset_expansion,
    _unrank_pair,
)
from cycledecomp.expansion import CapacityError, ExpanderParams
from cycledecomp.graph import Graph

from helpers import cycle_graph, complete_graph


def gnp(n, p, seed):
    rng = random.Random(seed)
    return Graph.from_edges(
        n, [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    )


class TestPairBatch:
    def test_multiplicity_enforced(self):
        with pytest.raises(ValueError):
            PairBatch(((0, 1), (0, 2)), 1)
        PairBatch(((0, 1), (0, 2)), 2)

    def test_degenerate_pair_rejected(self):
        with pytest.raises(ValueError):
            PairBatch(((3, 3),), 1)

    def test_from_pairs_infers_t(self):
        b = PairBatch.from_pairs([(2, 0), (0, 1), (0, 3)])
        assert b.t == 3
        assert b.pairs == ((0, 2), (0, 1), (0, 3))


class TestRoutePairs:
    def test_c8_single_pair(self):
        g = cycle_graph(8)
        b = PairBatch.from_pairs([(0, 4)])
        r = route_pairs(g, b, g.vertices, 4)
        assert isinstance(r, RoutedPaths)
        assert len(r.paths) == 1
        assert len(r.paths[0].edge_ids) == 4
        assert r.validate(g, b) == []

    def test_k4_duplicate_pair(self):
        g = complete_graph(4)
        b = PairBatch(((0, 1), (0, 1)), 2)
        for strategy in ("greedy", "matching_oracle"):
            r = route_pairs(g, b, g.vertices, 2, strategy=strategy)
            assert isinstance(r, RoutedPaths)
            assert r.validate(g, b) == []
            lens = sorted(len(p.edge_ids) for p in r.paths)
            assert lens == [1, 2]

    def test_c4_crossing_batch_infeasible(self):
        # both pairs need 2 of the 4 edges and any two length-2 routes share one
        g = cycle_graph(4)
        b = PairBatch(((0, 2), (1, 3)), 2)
        rg = route_pairs(g, b, g.vertices, 2, retries=16)
        assert isinstance(rg, RouteFailure)
        assert rg.strategy == "greedy"
        assert rg.attempts == 16
        ro = route_pairs(g, b, g.vertices, 2, strategy="matching_oracle")
        assert isinstance(ro, RouteFailure)
        assert "no edge-disjoint system" in ro.reason

    def test_length_cap_flips_feasibility(self):
        # duplicate pair with one short and one long route: needs ell >= 3
        g = Graph.from_edges(5, [(0, 1), (1, 2), (0, 3), (3, 4), (4, 2)])
        b = PairBatch(((0, 2), (0, 2)), 2)
        tight = route_pairs(g, b, g.vertices, 2, strategy="matching_oracle")
        assert isinstance(tight, RouteFailure)
        loose = route_pairs(g, b, g.vertices, 3, strategy="matching_oracle")
        assert isinstance(loose, RoutedPaths)
        assert loose.validate(g, b) == []
        assert sorted(len(p.edge_ids) for p in loose.paths) == [2, 3]

    def test_escalation_to_oracle(self):
        # adversarial order can strand greedy; escalation settles feasibility
        g = cycle_graph(4)
        b = PairBatch(((0, 2), (1, 3)), 2)
        r = route_pairs(g, b, g.vertices, 2, retries=2, escalate=True)
        assert isinstance(r, RouteFailure)
        assert r.strategy == "matching_oracle"

    def test_through_set_restricts_internals(self):
        # path 0-1-2 allowed only when 1 is in the through set
        g = Graph.from_edges(3, [(0, 1), (1, 2)])
        b = PairBatch.from_pairs([(0, 2)])
        ok = route_pairs(g, b, {1}, 2)
        assert isinstance(ok, RoutedPaths)
        bad = route_pairs(g, b, set(), 2)
        assert isinstance(bad, RouteFailure)

    def test_endpoint_outside_through_set(self):
        # single edge is a path through any set
        g = Graph.from_edges(2, [(0, 1)])
        b = PairBatch.from_pairs([(0, 1)])
        r = route_pairs(g, b, set(), 1)
        assert isinstance(r, RoutedPaths)

    def test_oracle_caps(self):
        g = complete_graph(4)
        b = PairBatch.from_pairs([(0, 1)])
        with pytest.raises(CapacityError):
            route_pairs(g, b, g.vertices, 11, strategy="matching_oracle")

    def test_ell_must_be_positive(self):
        g = complete_graph(3)
        with pytest.raises(ValueError):
            route_pairs(g, PairBatch.from_pairs([(0, 1)]), g.vertices, 0)

    def test_unknown_strategy(self):
        g = complete_graph(3)
        with pytest.raises(ValueError):
            route_pairs(g, PairBatch.from_pairs([(0, 1)]), g.vertices, 1, strategy="astar")

    def test_determinism(self):
        g = gnp(24, 0.3, 4)
        verts = g.vertex_list()
        b = PairBatch.from_pairs([(verts[0], verts[10]), (verts[3], verts[17])])
        r1 = route_pairs(g, b, g.vertices, 6, rng_seed=5)
        r2 = route_pairs(g, b, g.vertices, 6, rng_seed=5)
        assert isinstance(r1, RoutedPaths)
        assert [p.edge_ids for p in r1.paths] == [p.edge_ids for p in r2.paths]

    @given(st.integers(0, 10_000), st.integers(2, 40))
    def test_greedy_never_beats_oracle(self, seed, n_seed):
        # infeasible per oracle implies infeasible per greedy, never the reverse
        rng = random.Random(seed)
        n = rng.randint(4, 10)
        g = gnp(n, 0.5, rng.randint(0, 999))
        verts = g.vertex_list()
        if len(verts) < 4:
            return
        pool = verts[:]
        rng.shuffle(pool)
        b = PairBatch.from_pairs([(pool[0], pool[1]), (pool[2], pool[3])], t=2)
        ell = rng.randint(1, 4)
        greedy = route_pairs(g, b, g.vertices, ell, retries=8, rng_seed=seed)
        oracle = route_pairs(g, b, g.vertices, ell, strategy="matching_oracle")
        if isinstance(greedy, RoutedPaths):
            assert isinstance(oracle, RoutedPaths)
            assert greedy.validate(g, b) == []
        if isinstance(oracle, RoutedPaths):
            assert oracle.validate(g, b) == []


class TestConnectOnePair:
    def test_connected_found(self):
        g = cycle_graph(8)
        res = connect_one_pair_of_batch(g, [(0, 4)], g.vertices, 8)
        assert res is not None
        j, path = res
        assert j == 0
        assert {path.vertices[0], path.vertices[-1]} == {0, 4}
        path.check(g)

    def test_two_components_none(self):
        g = Graph.from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])
        assert connect_one_pair_of_batch(g, [(0, 3), (1, 4)], g.vertices, 6) is None

    def test_c8_small_ell_big_radius(self):
        # radius ceil(2*1*log2(8)) = 6 >= 4, balls meet, witness length 4
        g = cycle_graph(8)
        res = connect_one_pair_of_batch(g, [(0, 4)], g.vertices, 1)
        assert res is not None
        j, path = res
        assert j == 0
        assert len(path.edge_ids) == 4
        assert path.vertices == (0, 1, 2, 3, 4)

    def test_length_within_bound(self):
        g = gnp(30, 0.2, 9)
        verts = g.vertex_list()
        res = connect_one_pair_of_batch(g, [(verts[0], verts[-1])], g.vertices, 3)
        n = g.n
        bound = math.ceil(4 * 3 * math.log2(n))
        if res is not None:
            assert len(res[1].edge_ids) <= bound

    def test_adjacent_pair_one_endpoint_through(self):
        g = Graph.from_edges(2, [(0, 1)])
        res = connect_one_pair_of_batch(g, [(0, 1)], {0}, 1)
        assert res is not None
        assert res[1].vertices == (0, 1)

    def test_degenerate_pair_rejected(self):
        g = complete_graph(3)
        with pytest.raises(ValueError):
            connect_one_pair_of_batch(g, [(1, 1)], g.vertices, 2)


class TestMakeTemplate:
    def test_determinism(self):
        t1 = make_template(32, 0.3, 11)
        t2 = make_template(32, 0.3, 11)
        assert t1.graph.edge_table == t2.graph.edge_table
        assert t1.attempts == t2.attempts == 1

    def test_seed_changes_edges(self):
        t1 = make_template(32, 0.3, 11)
        t3 = make_template(32, 0.3, 12)
        assert t1.graph.edge_table != t3.graph.edge_table

    def test_through_set_convention(self):
        t = make_template(32, 0.3, 11)
        assert t.through_set == frozenset(range(6))
        assert make_template(7, 0.5, 0).through_set == frozenset(range(2))

    def test_edge_count_within_3_sigma(self):
        n, p = 40, 0.25
        total = n * (n - 1) // 2
        mu = total * p
        sigma = math.sqrt(total * p * (1 - p))
        counts = [make_template(n, p, s).graph.m for s in range(20)]
        assert all(abs(m - mu) <= 3 * sigma for m in counts)
        assert abs(statistics.mean(counts) - mu) <= sigma

    def test_degree_cap_enforced_by_resampling(self):
        t = make_template(16, 0.5, 0, delta_cap=8)
        assert max(t.graph.degrees().values()) <= 8
        assert t.attempts == 30

    def test_cap_failure(self):
        with pytest.raises(CapacityError):
            make_template(12, 1.0, 0, delta_cap=3, max_resample=5)

    def test_extreme_probabilities(self):
        assert make_template(5, 1.0, 0).graph.m == 10
        assert make_template(5, 0.0, 0).graph.m == 0

    def test_unrank_matches_lexicographic(self):
        for n in (2, 3, 7, 13):
            pairs = [_unrank_pair(i, n) for i in range(n * (n - 1) // 2)]
            assert pairs == [(u, v) for u in range(n) for v in range(u + 1, n)]

    def test_n_too_small(self):
        with pytest.raises(ValueError):
            make_template(1, 0.5, 0)


class TestSkeleton:
    def test_k32_build_and_serve_50_batches(self):
        g = complete_graph(32)
        V = frozenset(range(16))
        sk = build_skeleton(g, V, ell_route=4, template_p=0.4, rng_seed=7)
        assert isinstance(sk, Skeleton)
        assert sk.subgraph.m == 207
        assert sk.subgraph.edge_ids <= g.edge_ids
        assert sk.subgraph.m <= 512 * 32
        rng = random.Random(99)
        verts = g.vertex_list()
        for trial in range(50):
            pool = verts[:]
            rng.shuffle(pool)
            batch = PairBatch.from_pairs(
                [(pool[2 * j], pool[2 * j + 1]) for j in range(4)], t=2
            )
            served = sk.serve(batch, rng_seed=trial)
            assert isinstance(served, RoutedPaths)
            assert served.validate(g, batch) == []
            assert all(len(p.edge_ids) <= sk.ell_serve for p in served.paths)

    def test_sparse_host_nontrivial_replacements(self):
        h = gnp(32, 0.45, 5)
        sk = build_skeleton(h, h.vertices, ell_route=4, template_p=0.15, rng_seed=3)
        assert isinstance(sk, Skeleton)
        assert h.m == 221
        assert sk.subgraph.m == 103
        assert sk.template.m == 62
        lens = [len(p.edge_ids) for p in sk.replacements.values()]
        assert sum(1 for L in lens if L > 1) == 40
        assert max(lens) <= 4
        rng = random.Random(42)
        verts = h.vertex_list()
        for trial in range(20):
            pool = verts[:]
            rng.shuffle(pool)
            batch = PairBatch.from_pairs([(pool[0], pool[1]), (pool[2], pool[3])], t=2)
            served = sk.serve(batch, rng_seed=trial)
            assert isinstance(served, RoutedPaths)
            assert served.validate(h, batch) == []

    def test_replacement_single_edge_outside_through_set(self):
        # adjacent endpoints outside V may route as the bare edge
        g = complete_graph(32)
        V = frozenset(range(16))
        sk = build_skeleton(g, V, ell_route=4, template_p=0.4, rng_seed=7)
        assert isinstance(sk, Skeleton)
        outside = [
            (u, v) for (u, v) in sk.replacements if u not in V and v not in V
        ]
        assert outside
        for key in outside:
            assert len(sk.replacements[key].edge_ids) >= 1

    def test_build_failure_is_first_class(self):
        # template denser than the sparse host cannot route edge-disjointly
        h = gnp(32, 0.3, 5)
        res = build_skeleton(h, h.vertices, ell_route=4, template_p=0.3, rng_seed=3)
        assert isinstance(res, SkeletonFailure)
        assert res.routing.stuck
        assert res.template_edges > 0

    def test_skeleton_edges_form_subview(self):
        g = complete_graph(32)
        sk = build_skeleton(g, frozenset(range(16)), ell_route=4, template_p=0.4, rng_seed=7)
        assert isinstance(sk, Skeleton)
        sub = g.subview(edge_ids=sk.subgraph.edge_ids)
        assert sub.edge_ids == sk.subgraph.edge_ids

    def test_serve_respects_template_failure(self):
        g = complete_graph(32)
        sk = build_skeleton(g, frozenset(range(16)), ell_route=4, template_p=0.4, rng_seed=7)
        assert isinstance(sk, Skeleton)
        # a batch whose multiplicity saturates one vertex beyond its template degree
        deg = sk.template.degrees()
        v = min(deg, key=lambda w: (deg[w], w))
        others = [w for w in sk.template.vertex_list() if w != v][: deg[v] + 1]
        batch = PairBatch.from_pairs([(v, w) for w in others], t=deg[v] + 1)
        served = sk.serve(batch)
        if isinstance(served, RouteFailure):
            assert served.stuck
        else:
            assert served.validate(g, batch) == []


class TestSubsetExpansion:
    def test_k32_rate_one(self):
        p = ExpanderParams(1 / 32, 0.25, "log2sq")
        stats = verify_random_subset_expansion(complete_graph(32), p, 40, rng_seed=1)
        assert stats.evaluated == 40
        assert stats.skipped == 0
        assert stats.rate == 1.0

    def test_c64_low_rate_reported(self):
        p = ExpanderParams(1 / 32, 0.25, "log2sq")
        stats = verify_random_subset_expansion(
            cycle_graph(64), p, 60, tau=1, rng_seed=1
        )
        assert stats.evaluated == 60
        assert stats.successes == 44
        assert stats.rate < 1.0

    def test_strong_tau_skips_cycle_trials(self):
        # no well-expanding core exists on a cycle at tau=4
        p = ExpanderParams(1 / 32, 0.0, "log2sq")
        stats = verify_random_subset_expansion(cycle_graph(64), p, 10, rng_seed=1)
        assert stats.evaluated == 0
        assert stats.skipped == 10

    def test_zero_trials_empty(self):
        p = ExpanderParams(1 / 32, 0.25, "log2sq")
        stats = verify_random_subset_expansion(complete_graph(32), p, 0)
        assert stats.trials == 0
        assert stats.evaluated == 0
        assert stats.records == ()
        assert stats.rate == 0.0

    def test_buckets_partition_records(self):
        p = ExpanderParams(1 / 32, 0.25, "log2sq")
        stats = verify_random_subset_expansion(complete_graph(32), p, 40, rng_seed=1)
        buckets = stats.buckets()
        assert sum(tot for _, tot in buckets.values()) == stats.evaluated
        assert sum(s for s, _ in buckets.values()) == stats.successes

    def test_determinism(self):
        p = ExpanderParams(1 / 32, 0.25, "log2sq")
        a = verify_random_subset_expansion(complete_graph(32), p, 15, rng_seed=3)
        b = verify_random_subset_expansion(complete_graph(32), p, 15, rng_seed=3)
        assert a == b


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_routed_paths_invariants(seed):
    # disjointness, containment, and length cap on every successful routing
    rng = random.Random(seed)
    n = rng.randint(6, 16)
    g = gnp(n, 0.45, rng.randint(0, 999))
    verts = g.vertex_list()
    if len(verts) < 6:
        return
    pool = verts[:]
    rng.shuffle(pool)
    b = PairBatch.from_pairs([(pool[0], pool[1]), (pool[2], pool[3]), (pool[4], pool[5])], t=2)
    V = frozenset(v for v in verts if rng.random() < 0.7)
    ell = rng.randint(2, 5)
    r = route_pairs(g, b, V, ell, rng_seed=seed)
    if isinstance(r, RoutedPaths):
        assert r.validate(g, b) == []
        used = set()
        for path in r.paths:
            assert not (used & set(path.edge_ids))
            used |= set(path.edge_ids)
