import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pspindex.engines import dijkstra_all
from pspindex.errors import InfeasibleStratumError
from pspindex.graph import Graph, grid_graph, random_connected_graph
from pspindex.partition import core_tree_decompose, from_assignment, partition_growing
from pspindex.workload import (BAND_STRATA, LOCATION_STRATA, UNITS_PER_KM, band_limits,
                               classify_pair, generate_queries)

from helpers import example_graph


def _metric_grid(n=12, seed=3):
    # weights look like meters, so lmin of one kilometer sits inside the range
    return grid_graph(n, n, seed=seed, wmax=900)


class TestLocationStrata:
    def test_q2_pairs_are_boundary(self):
        g, p = example_graph()
        wl = generate_queries(g, p, 200, "Q2", seed=1)
        b = p.overlay_vertices()
        assert len(wl) == 200
        assert all(s in b and t in b for s, t in wl)

    def test_q4_infeasible_with_one_partition(self):
        g = random_connected_graph(30, 1)
        p = from_assignment(g, [0] * 30)
        with pytest.raises(InfeasibleStratumError):
            generate_queries(g, p, 10, "Q4", seed=0)

    @pytest.mark.parametrize("stratum", LOCATION_STRATA)
    def test_filter_honored(self, stratum):
        g = random_connected_graph(120, 4)
        p = partition_growing(g, 4, seed=4)
        wl = generate_queries(g, p, 300, stratum, seed=2)
        assert wl.stratum == stratum
        assert all(classify_pair(p, s, t) == stratum for s, t in wl)
        assert all(s != t for s, t in wl)

    def test_core_periphery_overlay_is_core(self):
        g = random_connected_graph(80, 2)
        p = core_tree_decompose(g, 3)
        core = set(p.core)
        assert all(s in core and t in core for s, t in generate_queries(g, p, 50, "Q2", 0))

    def test_classes_partition_pairs(self):
        g, p = example_graph()
        seen = {classify_pair(p, s, t) for s in range(g.n) for t in range(g.n) if s != t}
        assert seen == set(LOCATION_STRATA)

    def test_needs_partition(self):
        with pytest.raises(ValueError):
            generate_queries(random_connected_graph(10, 0), None, 5, "Q1")

    def test_unknown_stratum(self):
        with pytest.raises(ValueError):
            generate_queries(random_connected_graph(10, 0), None, 5, "Q9")


class TestUnstratified:
    def test_count_and_tags(self):
        g = random_connected_graph(60, 5)
        p = partition_growing(g, 3, seed=5)
        wl = generate_queries(g, p, 500, seed=7)
        assert len(wl) == 500
        assert wl.tags == [classify_pair(p, s, t) for s, t in wl]
        assert sum(len(v) for v in wl.by_tag().values()) == 500

    def test_without_partition(self):
        wl = generate_queries(random_connected_graph(20, 1), None, 10, seed=0)
        assert len(wl) == 10 and all(s != t for s, t in wl)

    def test_too_small(self):
        with pytest.raises(InfeasibleStratumError):
            generate_queries(Graph(1), None, 3)


class TestBands:
    def test_lmin_one_km_with_coordinates(self):
        g = _metric_grid()
        assert g.coords is not None
        assert band_limits(g)[0][0] == UNITS_PER_KM

    def test_lmin_min_weight_without_coordinates(self):
        g = random_connected_graph(40, 8, wmin=7, wmax=50)
        assert band_limits(g)[0][0] == min(w for _, _, w in g.edges())

    def test_geometric_ratio(self):
        lim = band_limits(_metric_grid(), l_min=1000, l_max=1000 * 2**10)
        for i, (lo, hi) in enumerate(lim, 1):
            assert lo == pytest.approx(1000 * 2 ** (i - 1))
            assert hi == pytest.approx(1000 * 2**i)

    def test_lmax_exact_on_small_graph(self):
        g = random_connected_graph(50, 9)
        diam = max(max(dijkstra_all(g, s).values()) for s in range(g.n))
        assert band_limits(g)[-1][1] == pytest.approx(diam)

    @pytest.mark.parametrize("stratum", ["D2", "D5", "D9"])
    def test_band_distances_in_interval(self, stratum):
        g = _metric_grid()
        lo, hi = band_limits(g)[int(stratum[1:]) - 1]
        wl = generate_queries(g, None, 40, stratum, seed=3)
        assert len(wl) == 40
        for s, t in wl:
            assert lo < dijkstra_all(g, s)[t] <= hi

    def test_bands_cover_range(self):
        assert len(BAND_STRATA) == 10

    def test_degenerate_range(self):
        with pytest.raises(InfeasibleStratumError):
            band_limits(Graph(2, [(0, 1, 5)]), l_min=5)


@settings(max_examples=25, deadline=None)
@given(st.integers(20, 80), st.integers(0, 10**6), st.sampled_from([None, *LOCATION_STRATA]))
def test_pure_function_of_seed(n, seed, stratum):
    g = random_connected_graph(n, seed)
    p = partition_growing(g, 3, seed=seed)
    try:
        a = generate_queries(g, p, 50, stratum, seed)
    except InfeasibleStratumError:
        with pytest.raises(InfeasibleStratumError):
            generate_queries(g, p, 50, stratum, seed)
        return
    b = generate_queries(g, p, 50, stratum, seed)
    assert a.pairs == b.pairs and a.tags == b.tags
