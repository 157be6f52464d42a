import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latentgraph import (
    Adjacency,
    EstimateMatrix,
    HopMatrix,
    INF_HOPS,
    Indicator,
    PointConfig,
    ScaledIndicator,
    all_pairs_hops,
    check_boundary_bias,
    check_general_bound,
    check_knn_bounds,
    check_simple_bound,
    coverage_radius,
    generate_graph,
    interval,
    knn_graph,
    knn_scale,
    monotone_path_check,
    pairwise_distances,
    rectangle,
    sample_uniform,
    scale_hops,
    shortest_path_nodes,
    symmetrize_union,
)
from tests.conftest import floyd_warshall_hops, random_graph


def as_uint16(float_hops: np.ndarray) -> np.ndarray:
    out = np.where(np.isinf(float_hops), float(INF_HOPS), float_hops)
    return out.astype(np.uint16)


class TestAllPairsHops:
    def test_path_graph(self):
        adj = Adjacency.from_edges(4, [[0, 1], [1, 2], [2, 3]])
        hops = all_pairs_hops(adj)
        assert hops.hops[0, 3] == 3
        assert hops.hops[0, 0] == 0

    def test_disconnected_is_infinite(self):
        adj = Adjacency.from_edges(4, [[0, 1], [2, 3]])
        hops = all_pairs_hops(adj)
        assert hops.hops[0, 2] == INF_HOPS
        assert not hops.is_connected()

    def test_matches_floyd_warshall_fixed(self):
        adj = random_graph(12, 0.3, seed=6)
        assert np.array_equal(all_pairs_hops(adj).hops, as_uint16(floyd_warshall_hops(adj)))

    @given(n=st.integers(2, 64), p=st.floats(0.02, 0.6), seed=st.integers(0, 10_000))
    @settings(max_examples=40, deadline=None)
    def test_equals_floyd_warshall(self, n, p, seed):
        adj = random_graph(n, p, seed)
        hops = all_pairs_hops(adj)
        assert np.array_equal(hops.hops, as_uint16(floyd_warshall_hops(adj)))

    @given(n=st.integers(3, 40), p=st.floats(0.05, 0.5), seed=st.integers(0, 10_000))
    @settings(max_examples=25, deadline=None)
    def test_metric_properties(self, n, p, seed):
        adj = random_graph(n, p, seed)
        h = all_pairs_hops(adj).to_float()
        assert np.array_equal(h, h.T)
        # one hop exactly on edges
        assert np.array_equal(h == 1.0, adj.dense())
        # triangle inequality with infinity arithmetic
        assert np.all(h[:, :, None] + h[None, :, :] >= h[:, None, :] - 1e-9)

    def test_shortest_path_nodes(self):
        adj = Adjacency.from_edges(5, [[0, 1], [1, 2], [2, 3], [0, 4], [4, 3]])
        path = shortest_path_nodes(adj, 0, 3)
        assert path[0] == 0 and path[-1] == 3
        assert len(path) - 1 == all_pairs_hops(adj).hops[0, 3]
        with pytest.raises(ValueError):
            shortest_path_nodes(Adjacency.from_edges(4, [[0, 1], [2, 3]]), 0, 3)


class TestScaleHops:
    def test_elementwise(self):
        hops = HopMatrix(3, np.array([[0, 3, 1], [3, 0, 2], [1, 2, 0]], dtype=np.uint16))
        est = scale_hops(hops, 0.2)
        assert est.values[0, 1] == pytest.approx(0.6)
        assert est.scale == 0.2

    def test_infinity_propagates(self):
        h = np.array([[0, INF_HOPS], [INF_HOPS, 0]], dtype=np.uint16)
        est = scale_hops(HopMatrix(2, h), 0.5)
        assert np.isinf(est.values[0, 1])

    def test_matrix_matches_scalar_recompute(self):
        adj = random_graph(25, 0.25, seed=2)
        hops = all_pairs_hops(adj)
        est = scale_hops(hops, 0.37)
        for i in range(25):
            for j in range(25):
                h = hops.hops[i, j]
                expect = np.inf if h == INF_HOPS else 0.37 * float(h)
                assert est.values[i, j] == expect

    def test_positive_scale_required(self):
        hops = all_pairs_hops(random_graph(5, 0.5, seed=1))
        with pytest.raises(ValueError):
            scale_hops(hops, 0.0)


class TestSimpleBound:
    def test_indicator_graph_zero_violations(self):
        cfg = sample_uniform(rectangle(2, 1), 800, seed=12)
        r = 0.5
        adj = generate_graph(cfg, Indicator(r), seed=0)
        est = scale_hops(all_pairs_hops(adj), r)
        truth = pairwise_distances(cfg)
        eps = coverage_radius(cfg, "convex_hull", grid_step=0.01).upper
        rep = check_simple_bound(est, truth, eps, r)
        assert rep.asserted  # eps <= r/4 for this density
        assert rep.lower_violations == 0
        assert rep.upper_violations == 0

    def test_identical_matrices(self):
        cfg = sample_uniform(rectangle(2, 1), 30, seed=1)
        truth = pairwise_distances(cfg)
        est = EstimateMatrix(truth.copy(), scale=1.0)
        rep = check_simple_bound(est, truth, eps=0.01, r=0.2)
        assert rep.lower_violations == 0
        assert rep.upper_violations == 0
        assert rep.max_residual == 0.0
        assert rep.min_residual == 0.0

    def test_tight_adversarial_line(self):
        # the far pair sits just beyond r, forcing a second hop: the additive
        # r term of the bound is attained (dense line keeps coverage <= r/4)
        r = 1.0
        pts = np.array([[0.0], [0.25], [0.5], [0.75], [1.0 + 1e-6]])
        cfg = PointConfig(pts, interval(2.0))
        adj = generate_graph(cfg, Indicator(r), seed=0)
        est = scale_hops(all_pairs_hops(adj), r)
        truth = pairwise_distances(cfg)
        resid = est.values[0, 4] - truth[0, 4]
        assert resid == pytest.approx(r, abs=1e-5)
        eps = coverage_radius(cfg, "convex_hull", grid_step=0.001).upper
        rep = check_simple_bound(est, truth, eps, r)
        assert rep.asserted
        assert rep.upper_violations == 0
        assert rep.max_residual == pytest.approx(resid)

    def test_mismatched_sizes(self):
        est = EstimateMatrix(np.zeros((3, 3)), scale=1.0)
        with pytest.raises(ValueError):
            check_simple_bound(est, np.zeros((4, 4)), eps=0.1, r=0.4)

    def test_report_only_mode_flag(self):
        cfg = sample_uniform(rectangle(2, 1), 50, seed=3)
        truth = pairwise_distances(cfg)
        est = EstimateMatrix(truth.copy(), scale=1.0)
        rep = check_simple_bound(est, truth, eps=0.3, r=0.4)  # eps > r/4
        assert not rep.asserted


class TestGeneralBound:
    def test_alpha_zero_matches_simple_exponent(self):
        cfg = sample_uniform(rectangle(2, 1), 200, seed=5)
        r = 0.3
        adj = generate_graph(cfg, Indicator(r), seed=0)
        est = scale_hops(all_pairs_hops(adj), r)
        truth = pairwise_distances(cfg)
        simple = check_simple_bound(est, truth, eps=0.05, r=r)
        general = check_general_bound(est, truth, eps=0.05, r=r, alpha=0.0)
        assert general.gamma == 1.0
        assert general.fitted_constant == pytest.approx(simple.fitted_constant)

    def test_lower_bound_deterministic_for_compact_support(self):
        cfg = sample_uniform(rectangle(2, 1), 400, seed=6)
        r = 0.25
        adj = generate_graph(cfg, ScaledIndicator(r, 0.5), seed=2)
        est = scale_hops(all_pairs_hops(adj), r)
        truth = pairwise_distances(cfg)
        rep = check_general_bound(est, truth, eps=0.06, r=r, alpha=0.0)
        assert rep.lower_violations == 0

    def test_fitted_constant_below_four_for_indicator(self):
        cfg = sample_uniform(rectangle(2, 1), 800, seed=7)
        r = 0.5
        adj = generate_graph(cfg, Indicator(r), seed=0)
        est = scale_hops(all_pairs_hops(adj), r)
        truth = pairwise_distances(cfg)
        eps = coverage_radius(cfg, "convex_hull", grid_step=0.01).upper
        assert eps <= r / 4
        rep = check_general_bound(est, truth, eps, r, alpha=0.0)
        assert rep.fitted_constant <= 4.0

    def test_supplied_constant_counts_violations(self):
        truth = pairwise_distances(sample_uniform(rectangle(2, 1), 30, seed=8))
        est = EstimateMatrix(truth * 3.0, scale=1.0)
        rep = check_general_bound(est, truth, eps=0.01, r=0.2, alpha=0.0, c2=0.5)
        assert rep.upper_violations > 0


class TestKnnBounds:
    def test_deep_interior_lower_bound(self):
        cfg = sample_uniform(rectangle(4, 1), 1200, seed=21)
        kappa = 12
        adj = symmetrize_union(knn_graph(cfg, kappa))
        s = knn_scale(cfg.domain, cfg.n, kappa)
        est = scale_hops(all_pairs_hops(adj), s.r)
        truth = pairwise_distances(cfg)
        rep = check_knn_bounds(est, truth, cfg, s.eps, s.r)
        assert rep.lower_checked_pairs > 0
        assert rep.lower_violations == 0

    def test_one_dimensional_lower_bound_everywhere(self):
        # high-probability event at finite n: the seed below realizes it
        cfg = sample_uniform(interval(1.0), 400, seed=2)
        kappa = 25
        adj = symmetrize_union(knn_graph(cfg, kappa))
        s = knn_scale(cfg.domain, cfg.n, kappa, c1=2.0)
        est = scale_hops(all_pairs_hops(adj), s.r)
        truth = pairwise_distances(cfg)
        iu = np.triu_indices(cfg.n, 1)
        finite = np.isfinite(est.values[iu])
        assert np.all(est.values[iu][finite] >= truth[iu][finite] - 1e-9)

    def test_upper_violation_counting(self):
        truth = pairwise_distances(sample_uniform(rectangle(2, 1), 30, seed=3))
        cfg = sample_uniform(rectangle(2, 1), 30, seed=3)
        est = EstimateMatrix(truth * 10.0, scale=1.0)
        rep = check_knn_bounds(est, truth, cfg, eps=0.01, r=0.05)
        assert rep.upper_violations > 0


class TestBoundaryBias:
    def test_threshold_beyond_diameter_errors(self):
        cfg = sample_uniform(rectangle(2, 1), 30, seed=4)
        truth = pairwise_distances(cfg)
        est = EstimateMatrix(truth.copy(), scale=1.0)
        with pytest.raises(ValueError):
            check_boundary_bias(est, truth, threshold_d=10.0)

    def test_equality_gives_ratio_one(self):
        cfg = sample_uniform(rectangle(2, 1), 30, seed=5)
        truth = pairwise_distances(cfg)
        est = EstimateMatrix(truth.copy(), scale=1.0)
        ratio, pairs = check_boundary_bias(est, truth, threshold_d=0.5)
        assert ratio == pytest.approx(1.0)
        assert pairs > 0


class TestMonotonePaths:
    def test_sorted_line_kappa_one(self):
        pts = np.linspace(0, 1, 12)[:, None]
        cfg = PointConfig(pts, interval(1.0))
        assert monotone_path_check(cfg, knn_graph(cfg, 1))

    def test_complete_graph(self):
        cfg = sample_uniform(interval(1.0), 15, seed=1)
        assert monotone_path_check(cfg, knn_graph(cfg, 14))

    def test_uniform_sample(self):
        cfg = sample_uniform(interval(1.0), 60, seed=9)
        assert monotone_path_check(cfg, knn_graph(cfg, 4))

    def test_agrees_with_exhaustive_enumeration(self):
        cfg = sample_uniform(interval(1.0), 12, seed=13)
        knn = knn_graph(cfg, 3)
        assert monotone_path_check(cfg, knn)
        adj = symmetrize_union(knn)
        hops = all_pairs_hops(adj).to_float()
        order = np.argsort(cfg.points[:, 0])
        w = adj.dense()[np.ix_(order, order)]
        h = hops[np.ix_(order, order)]
        n = cfg.n

        def increasing_paths_exist(a, b, length):
            # depth-first enumeration of strictly increasing index paths
            stack = [(a, 0)]
            while stack:
                node, used = stack.pop()
                if node == b:
                    if used == length:
                        return True
                    continue
                if used >= length:
                    continue
                for nxt in range(node + 1, n):
                    if w[node, nxt]:
                        stack.append((nxt, used + 1))
            return False

        for a in range(n):
            for b in range(a + 1, n):
                if np.isfinite(h[a, b]):
                    assert increasing_paths_exist(a, b, int(h[a, b]))

    def test_requires_one_dimension(self):
        cfg = sample_uniform(rectangle(1, 1), 10, seed=0)
        with pytest.raises(ValueError):
            monotone_path_check(cfg, knn_graph(cfg, 2))
