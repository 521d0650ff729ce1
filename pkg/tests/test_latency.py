import numpy as np
import pytest

from oppwalk.errors import DisconnectedGraphError, ParameterError
from oppwalk.graphs import Graph, TorusSpec, build_cycle, build_torus
from oppwalk.latency import (
    LatencyReport,
    cycle_latency_bounds,
    expected_packet_delay,
    hitting_times,
    hitting_times_linear_system,
    latency_bounds,
    mean_latency_cycle,
    mean_latency_pinv,
    mean_latency_spectral,
    mean_latency_torus,
    torus_latency_bounds,
)
from oppwalk.spectral import cycle_laplacian_spectrum
from oppwalk.wireless import WirelessConfig, generate_topology


def two_component_graph():
    w = np.zeros((4, 4))
    w[0, 1] = w[1, 0] = 1.0
    w[2, 3] = w[3, 2] = 1.0
    return Graph(w)


class TestMeanLatencySpectral:
    def test_k3(self):
        assert mean_latency_spectral(build_cycle(3, 1)) == pytest.approx(
            2 / 3, abs=1e-12)

    def test_c4(self):
        assert mean_latency_spectral(build_cycle(4, 1)) == pytest.approx(
            5 / 6, abs=1e-12)

    @pytest.mark.parametrize("n,r", [(6, 1), (15, 3), (40, 5)])
    def test_matches_pseudoinverse_oracle(self, n, r):
        g = build_cycle(n, r)
        assert mean_latency_spectral(g) == pytest.approx(
            mean_latency_pinv(g), abs=1e-9)

    def test_disconnected_rejected(self):
        with pytest.raises(DisconnectedGraphError):
            mean_latency_spectral(two_component_graph())


class TestMeanLatencyCycle:
    def test_k3(self):
        assert mean_latency_cycle(3, 1) == pytest.approx(2 / 3, abs=1e-12)

    def test_c4(self):
        assert mean_latency_cycle(4, 1) == pytest.approx(5 / 6, abs=1e-12)

    @pytest.mark.parametrize("n,r", [(10, 1), (25, 4), (64, 10), (101, 2)])
    def test_matches_spectral_route(self, n, r):
        assert mean_latency_cycle(n, r) == pytest.approx(
            mean_latency_spectral(build_cycle(n, r)), abs=1e-9)

    def test_decreasing_in_r_n300(self):
        vals = [mean_latency_cycle(300, r) for r in range(1, 11)]
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_increasing_in_n_fixed_r(self):
        vals = [mean_latency_cycle(n, 1) for n in range(10, 200, 10)]
        assert all(a < b for a, b in zip(vals, vals[1:]))


class TestMeanLatencyTorus:
    def test_3x3(self):
        assert mean_latency_torus(TorusSpec([3, 3], 1)) == pytest.approx(
            0.5, abs=1e-12)
        g = build_torus(TorusSpec([3, 3], 1))
        assert mean_latency_pinv(g) == pytest.approx(0.5, abs=1e-9)

    def test_m1_equals_cycle(self):
        assert mean_latency_torus(TorusSpec([11], 2)) == pytest.approx(
            mean_latency_cycle(11, 2), abs=1e-12)

    @pytest.mark.parametrize("dims,r", [([4, 4], 1), ([5, 7], 1),
                                        ([9, 9], 2), ([4, 5, 6], 1)])
    def test_matches_spectral_route(self, dims, r):
        spec = TorusSpec(dims, r)
        assert mean_latency_torus(spec) == pytest.approx(
            mean_latency_spectral(build_torus(spec)), abs=1e-9)

    def test_decreases_with_dimension_and_r(self):
        dims = [16, 18, 20, 22]
        for r in range(1, 5):
            series = [mean_latency_torus(TorusSpec(dims[:m], r))
                      for m in range(1, 5)]
            assert all(a > b for a, b in zip(series, series[1:]))
        for m in range(1, 5):
            series = [mean_latency_torus(TorusSpec(dims[:m], r))
                      for r in range(1, 5)]
            assert all(a > b for a, b in zip(series, series[1:]))


class TestLatencyBounds:
    def test_k3_hits_upper(self):
        lower, upper = latency_bounds(build_cycle(3, 1))
        assert (lower, upper) == pytest.approx((1 / 3, 2 / 3), abs=1e-12)
        assert mean_latency_cycle(3, 1) == pytest.approx(upper, abs=1e-12)

    def test_sandwich_c300(self):
        lower, upper = cycle_latency_bounds(300, 1)
        t = mean_latency_cycle(300, 1)
        assert lower <= t <= upper

    @pytest.mark.parametrize("n,r", [(12, 1), (30, 3), (64, 9), (300, 5)])
    def test_closed_form_equals_spectrum_route(self, n, r):
        lam1 = cycle_laplacian_spectrum(n, r).values[1]
        lower, upper = cycle_latency_bounds(n, r)
        assert upper == pytest.approx(2 / lam1, abs=1e-9)
        assert lower == pytest.approx(2 / ((n - 1) * lam1), abs=1e-9)

    def test_torus_bounds_sandwich(self):
        spec = TorusSpec([6, 8], 1)
        lower, upper = torus_latency_bounds(spec)
        t = mean_latency_torus(spec)
        assert lower <= t <= upper
        assert latency_bounds(spec) == (lower, upper)

    def test_wireless_graph_sandwich(self):
        topo = generate_topology(WirelessConfig(n=20), seed=9,
                                 resample_until_connected=50)
        lower, upper = latency_bounds(topo.graph)
        assert lower <= mean_latency_spectral(topo.graph) <= upper

    def test_disconnected_rejected(self):
        with pytest.raises(DisconnectedGraphError):
            latency_bounds(two_component_graph())


class TestHittingTimes:
    def test_k3_all_two(self):
        h = hitting_times(build_cycle(3, 1)).h
        off = h[~np.eye(3, dtype=bool)]
        assert np.allclose(off, 2.0, atol=1e-10)
        assert np.allclose(np.diag(h), 0.0)

    def test_c4_adjacent_and_antipodal(self):
        h = hitting_times(build_cycle(4, 1)).h
        assert h[0, 1] == pytest.approx(3.0, abs=1e-10)
        assert h[0, 2] == pytest.approx(4.0, abs=1e-10)

    def test_weighted_two_node_graph(self):
        for w in (0.1, 1.0, 7.3):
            g = Graph(np.array([[0.0, w], [w, 0.0]]))
            h = hitting_times(g).h
            assert h[0, 1] == pytest.approx(1.0, abs=1e-10)
            assert h[1, 0] == pytest.approx(1.0, abs=1e-10)

    @pytest.mark.parametrize("builder", [
        lambda: build_cycle(7, 1),
        lambda: build_cycle(12, 3),
        lambda: build_torus(TorusSpec([4, 4], 1)),
        lambda: generate_topology(WirelessConfig(n=12), seed=2,
                                  resample_until_connected=50).graph,
    ])
    def test_spectral_matches_linear_system(self, builder):
        g = builder()
        a = hitting_times(g).h
        b = hitting_times_linear_system(g).h
        assert np.abs(a - b).max() <= 1e-8 * b.max()

    def test_nonnegative_and_asymmetric_ok(self):
        g = build_cycle(9, 2)
        h = hitting_times(g).h
        assert h.min() >= -1e-10

    def test_commute_symmetry_under_rotation(self):
        g = build_cycle(8, 2)
        h = hitting_times(g).h
        commute = h + h.T
        perm = (np.arange(8) + 1) % 8
        assert np.abs(commute - commute[np.ix_(perm, perm)]).max() < 1e-8

    def test_disconnected_rejected(self):
        with pytest.raises(DisconnectedGraphError):
            hitting_times(two_component_graph())


class TestExpectedPacketDelay:
    def test_k3(self):
        assert expected_packet_delay(build_cycle(3, 1)) == pytest.approx(
            2.0, abs=1e-10)

    def test_c4(self):
        assert expected_packet_delay(build_cycle(4, 1)) == pytest.approx(
            10 / 3, abs=1e-10)

    def test_linear_system_route(self):
        g = build_cycle(4, 1)
        assert expected_packet_delay(g, "linear-system") == pytest.approx(
            10 / 3, abs=1e-10)

    @pytest.mark.parametrize("builder", [
        lambda: build_cycle(3, 1),
        lambda: build_cycle(4, 1),
        lambda: build_cycle(10, 2),
        lambda: build_torus(TorusSpec([4, 4], 1)),
    ])
    def test_regular_graph_relation_to_pinv_trace(self, builder):
        # empirical: for d-regular graphs EPD == 2m * Tr(L+) / (n-1)
        g = builder()
        two_m = g.degrees.sum()
        expected = two_m * mean_latency_spectral(g) / 2
        assert expected_packet_delay(g) == pytest.approx(expected, rel=1e-9)

    def test_unknown_method_rejected(self):
        with pytest.raises(ParameterError):
            expected_packet_delay(build_cycle(4, 1), "guesswork")


class TestLatencyReport:
    def test_csv_row_full(self):
        rep = LatencyReport(analytic=0.5, lower_bound=0.25, upper_bound=1.0,
                            oracle=0.5, mc_mean=0.49, mc_ci_halfwidth=0.01,
                            mc_trials=1000)
        row = rep.csv_row("torus", "dims=3x3;r=1")
        assert row == "torus,dims=3x3;r=1,0.5,0.25,1,0.5,0.49,0.01,1000"

    def test_csv_row_optional_fields_empty(self):
        rep = LatencyReport(analytic=2.0, lower_bound=1.0, upper_bound=3.0)
        assert rep.csv_row("cycle", "n=3;r=1") == "cycle,n=3;r=1,2,1,3,,,,"

    def test_invariant_holds_on_report_from_graph(self):
        g = build_cycle(9, 2)
        lower, upper = latency_bounds(g)
        rep = LatencyReport(analytic=mean_latency_spectral(g),
                            lower_bound=lower, upper_bound=upper)
        assert rep.lower_bound <= rep.analytic <= rep.upper_bound
        assert rep.analytic > 0
