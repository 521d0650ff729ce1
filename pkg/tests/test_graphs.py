import io

import numpy as np
import pytest

from oppwalk.errors import ParameterError, ValidationError
from oppwalk.graphs import (
    Graph,
    TorusSpec,
    build_cycle,
    build_torus,
    cartesian_product,
    complete_graph,
    edge_list_str,
    load_edge_list,
    save_edge_list,
    torus_neighbors,
)


class TestGraphInvariants:
    def test_rejects_asymmetric(self):
        with pytest.raises(ValidationError):
            Graph(np.array([[0.0, 1.0], [0.5, 0.0]]))

    def test_rejects_nonzero_diagonal(self):
        with pytest.raises(ValidationError):
            Graph(np.array([[1.0, 1.0], [1.0, 0.0]]))

    def test_rejects_negative_weight(self):
        with pytest.raises(ValidationError):
            Graph(np.array([[0.0, -1.0], [-1.0, 0.0]]))

    def test_weights_immutable(self):
        g = build_cycle(4, 1)
        with pytest.raises(ValueError):
            g.weights[0, 1] = 5.0

    def test_weighted_graph_not_binary(self):
        g = Graph(np.array([[0.0, 2.5], [2.5, 0.0]]))
        assert not g.is_binary
        assert g.degrees.tolist() == [2.5, 2.5]


class TestBuildCycle:
    def test_c4_adjacency(self):
        g = build_cycle(4, 1)
        assert g.n == 4
        assert set(np.flatnonzero(g.weights[0])) == {1, 3}
        assert np.all(g.degrees == 2)
        assert g.is_binary

    def test_triangle_boundary(self):
        # 2r+1 == n: complete graph K_3
        g = build_cycle(3, 1)
        off = g.weights[~np.eye(3, dtype=bool)]
        assert np.all(off == 1.0)

    def test_edge_count_large(self):
        g = build_cycle(300, 5)
        assert g.edge_count == 300 * 5
        assert np.all(g.degrees == 10)

    def test_circulant_rows(self):
        g = build_cycle(11, 3)
        for i in range(10):
            assert np.array_equal(np.roll(g.weights[i], 1), g.weights[i + 1])

    @pytest.mark.parametrize("n,r", [(2, 1), (4, 0), (4, 2), (7, 3.0 + 1)])
    def test_rejects_bad_parameters(self, n, r):
        with pytest.raises(ParameterError):
            build_cycle(n, int(r))


class TestCartesianProduct:
    def test_k3_square(self):
        g = cartesian_product(build_cycle(3, 1), build_cycle(3, 1))
        assert g.n == 9
        assert np.all(g.degrees == 4)

    def test_c4_square_is_torus(self):
        g = cartesian_product(build_cycle(4, 1), build_cycle(4, 1))
        assert g.n == 16
        assert np.all(g.degrees == 4)
        assert np.array_equal(g.weights,
                              build_torus(TorusSpec([4, 4], 1)).weights)

    def test_edge_count_rule_random_graphs(self):
        rng = np.random.default_rng(11)
        for _ in range(5):
            n1, n2 = rng.integers(2, 7, size=2)
            w1 = (rng.random((n1, n1)) < 0.5).astype(float)
            w1 = np.triu(w1, 1)
            w1 = w1 + w1.T
            w2 = (rng.random((n2, n2)) < 0.5).astype(float)
            w2 = np.triu(w2, 1)
            w2 = w2 + w2.T
            g1, g2 = Graph(w1), Graph(w2)
            prod = cartesian_product(g1, g2)
            assert prod.edge_count == (g1.n * g2.edge_count
                                       + g2.n * g1.edge_count)

    def test_row_major_indexing(self):
        # node (i1, i2) -> i1 * n2 + i2
        g1 = build_cycle(3, 1)
        g2 = build_cycle(5, 1)
        prod = cartesian_product(g1, g2)
        # (0,0) ~ (0,1): same g1 coordinate, adjacent in g2
        assert prod.weights[0, 1] == 1.0
        # (0,0) ~ (1,0): adjacent in g1, same g2 coordinate
        assert prod.weights[0, 5] == 1.0
        # (0,0) !~ (1,1): differs in both coordinates
        assert prod.weights[0, 6] == 0.0


class TestTorus:
    def test_m1_degenerates_to_cycle(self):
        g = build_torus(TorusSpec([4], 1))
        assert np.array_equal(g.weights, build_cycle(4, 1).weights)

    def test_2d_regularity(self):
        g = build_torus(TorusSpec([4, 4], 1))
        assert g.n == 16
        assert np.all(g.degrees == 4)

    def test_axis_transposition_isomorphism(self):
        a = build_torus(TorusSpec([3, 5], 1))
        b = build_torus(TorusSpec([5, 3], 1))
        # relabel b's nodes by transposing coordinates
        i, j = np.unravel_index(np.arange(15), (3, 5))
        perm = j * 3 + i
        assert np.array_equal(a.weights, b.weights[np.ix_(perm, perm)])

    def test_spec_invariants(self):
        with pytest.raises(ParameterError):
            TorusSpec([], 1)
        with pytest.raises(ParameterError):
            TorusSpec([2, 4], 1)
        with pytest.raises(ParameterError):
            TorusSpec([4, 4], 2)  # 2r+1 > min k

    def test_neighbor_enumeration_matches_dense(self):
        spec = TorusSpec([4, 5, 6], 1)
        g = build_torus(spec)
        for idx in [0, 7, 59, 100]:
            assert np.array_equal(torus_neighbors(spec, idx),
                                  np.flatnonzero(g.weights[idx]))

    def test_large_4d_torus_degrees(self):
        # 126720-node case: spot-check degrees via neighbor enumeration
        spec = TorusSpec([16, 18, 20, 22], 4)
        assert spec.n == 126720
        rng = np.random.default_rng(3)
        for idx in rng.integers(0, spec.n, size=25):
            assert torus_neighbors(spec, int(idx)).size == 2 * 4 * 4


class TestConnectivity:
    def test_connected_cycle(self):
        assert build_cycle(9, 2).is_connected()

    def test_disconnected_union(self):
        w = np.zeros((4, 4))
        w[0, 1] = w[1, 0] = 1.0
        w[2, 3] = w[3, 2] = 1.0
        assert not Graph(w).is_connected()


class TestEdgeListFormat:
    def test_round_trip(self, tmp_path):
        g = build_cycle(7, 2)
        path = tmp_path / "g.edges"
        save_edge_list(g, str(path))
        loaded = load_edge_list(str(path))
        assert np.array_equal(loaded.weights, g.weights)

    def test_header_and_rows(self):
        g = Graph(np.array([[0.0, 0.5], [0.5, 0.0]]))
        text = edge_list_str(g)
        lines = text.strip().split("\n")
        assert lines[0] == "n 2"
        assert lines[1].split() == ["0", "1", "0.5"]

    def test_rejects_missing_header(self):
        with pytest.raises(ValidationError):
            load_edge_list(io.StringIO("0 1 1.0\n"))


def test_complete_graph():
    g = complete_graph(5)
    assert np.all(g.degrees == 4)
    with pytest.raises(ParameterError):
        complete_graph(1)
