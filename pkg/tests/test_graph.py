import warnings

import numpy as np
import pytest

from tempembed.graph import (
    DENSE_GUARD,
    EdgeListError,
    Snapshot,
    SnapshotSpec,
    StructureError,
    TemporalGraph,
    adjacency_dense,
    degree,
    dump_edge_list,
    parse_edge_list,
    synth_dynamic_sbm,
)

from conftest import random_snapshot


def _structure(g):
    named = []
    for s in g.snapshots:
        named.append(sorted((tuple(sorted((g.labels[u], g.labels[v]))), c)
                            for u, v, c in zip(s.src.tolist(), s.dst.tolist(), s.counts.tolist())))
    return sorted(g.labels), named


class TestParse:
    def test_equal_width_two_bins(self):
        g = parse_edge_list(["0 1 5", "1 2 15"], SnapshotSpec.equal_width(2))
        assert g.vertex_count == 3
        assert g.snapshots[0].edges() == {(0, 1)}
        assert g.snapshots[1].edges() == {(1, 2)}

    def test_self_loop_dropped_vertex_kept(self):
        g = parse_edge_list(["0 1 0", "3 3 7", "1 2 9"], SnapshotSpec.equal_width(2))
        assert g.vertex_count == 4
        v = g.index_of("3")
        assert v == 2  # first-appearance order: 0, 1, 3, 2
        assert all(g.snapshots[t].degree(v) == 0 for t in range(g.T))

    def test_comments_and_whitespace(self):
        lines = ["# header", "", "a\tb   1", "  # indented comment", "b c 2.5"]
        g = parse_edge_list(lines, SnapshotSpec.equal_width(2))
        assert g.labels == ("a", "b", "c")

    def test_multiplicity_accumulates(self):
        g = parse_edge_list(["0 1 0", "1 0 0", "0 1 0", "1 2 1"], SnapshotSpec.pre_binned())
        s = g.snapshots[0]
        assert s.edge_count == 1 and s.interaction_count == 3

    def test_explicit_boundaries(self):
        g = parse_edge_list(["0 1 1", "1 2 4", "2 3 10"], SnapshotSpec.explicit([3, 5]))
        assert g.T == 3
        assert [s.edges() for s in g.snapshots] == [{(0, 1)}, {(1, 2)}, {(2, 3)}]

    def test_malformed_line_reports_number(self):
        with pytest.raises(EdgeListError) as exc:
            parse_edge_list(["0 1 1", "0 1", "1 2 2"], SnapshotSpec.equal_width(2))
        assert exc.value.line_number == 2

    def test_bad_timestamp(self):
        with pytest.raises(EdgeListError):
            parse_edge_list(["0 1 x", "1 2 2"], SnapshotSpec.equal_width(2))

    def test_single_snapshot_is_structural_error(self):
        with pytest.raises(StructureError):
            parse_edge_list(["0 1 3", "1 2 3"], SnapshotSpec.pre_binned())

    def test_empty_snapshot_warns(self):
        with pytest.warns(UserWarning):
            g = parse_edge_list(["0 1 0", "1 2 2"], SnapshotSpec.pre_binned())
        assert g.snapshots[1].edge_count == 0

    def test_bin_count_validation(self):
        with pytest.raises(ValueError):
            SnapshotSpec.equal_width(1)


class TestRoundTrip:
    def test_six_line_file(self):
        lines = ["a b 0", "b c 0", "a b 0", "c d 1", "d e 1", "e e 1"]
        g = parse_edge_list(lines, SnapshotSpec.pre_binned())
        h = parse_edge_list(dump_edge_list(g).splitlines(), SnapshotSpec.pre_binned())
        assert _structure(g) == _structure(h)

    def test_isolated_vertices_and_empty_tail(self):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            g = TemporalGraph(5, (Snapshot.from_pairs(5, [(0, 1)]), Snapshot.from_pairs(5, [(1, 2)]),
                                  Snapshot.empty(5)), tuple("vwxyz"))
            h = parse_edge_list(dump_edge_list(g).splitlines(), SnapshotSpec.pre_binned())
        assert h.T == 3 and h.vertex_count == 5
        assert _structure(g) == _structure(h)

    def test_synthetic_round_trip(self):
        g = synth_dynamic_sbm(40, 3, 4, 0.3, 0.05, 0.1, seed=3)
        h = parse_edge_list(dump_edge_list(g).splitlines(), SnapshotSpec.pre_binned())
        assert _structure(g) == _structure(h)


class TestQueries:
    def test_degree_cases(self):
        iso = Snapshot.from_pairs(3, [(0, 1)])
        assert degree(iso, 2) == 0
        tri = Snapshot.from_pairs(3, [(0, 1), (1, 2), (0, 2)])
        assert [degree(tri, v) for v in range(3)] == [2, 2, 2]
        star = Snapshot.from_pairs(6, [(0, k) for k in range(1, 6)])
        assert degree(star, 0) == 5

    def test_degree_out_of_range(self):
        with pytest.raises(IndexError):
            degree(Snapshot.empty(3), 3)

    def test_handshake(self, rng):
        for _ in range(20):
            s = random_snapshot(30, rng.uniform(0, 0.5), rng)
            assert s.degrees().sum() == 2 * s.edge_count

    def test_adjacency_symmetric(self, rng):
        for _ in range(20):
            s = random_snapshot(25, 0.2, rng)
            a = adjacency_dense(s)
            assert np.array_equal(a, a.T)
            assert not a.diagonal().any()
            np.testing.assert_array_equal(a, s.adjacency().toarray())

    def test_weighted_adjacency(self):
        s = Snapshot.from_pairs(3, [(0, 1), (1, 0), (1, 2)])
        a = adjacency_dense(s, weighted=True)
        assert a[0, 1] == a[1, 0] == 2 and a[1, 2] == 1
        assert adjacency_dense(s)[0, 1] == 1

    def test_dense_guard(self):
        with pytest.raises(MemoryError):
            adjacency_dense(Snapshot.empty(20), guard=10)
        assert DENSE_GUARD == 50_000

    def test_snapshot_immutable(self):
        s = Snapshot.from_pairs(3, [(0, 1)])
        with pytest.raises(ValueError):
            s.src[0] = 2

    def test_summary(self):
        g = parse_edge_list(["0 1 0", "0 1 0", "1 2 1", "2 3 1"], SnapshotSpec.pre_binned())
        assert g.summary() == {"nodes": 4, "edges": 3, "interactions": 4, "snapshots": 2,
                               "edges_per_snapshot": [1, 2]}


class TestSynth:
    def test_deterministic(self):
        a = synth_dynamic_sbm(50, 3, 4, 0.3, 0.02, 0.1, seed=9)
        b = synth_dynamic_sbm(50, 3, 4, 0.3, 0.02, 0.1, seed=9)
        for s, t in zip(a.snapshots, b.snapshots):
            assert np.array_equal(s.src, t.src) and np.array_equal(s.dst, t.dst)

    def test_no_churn_no_cross_edges(self):
        g, history = synth_dynamic_sbm(60, 3, 4, 0.4, 0.0, 0.0, seed=1, return_membership=True)
        for s, m in zip(g.snapshots, history):
            assert np.array_equal(m, history[0])
            assert np.all(m[s.src] == m[s.dst])

    def test_within_community_fraction(self):
        g, history = synth_dynamic_sbm(200, 4, 8, 0.2, 0.01, 0.05, seed=0, return_membership=True)
        fracs = [np.mean(m[s.src] == m[s.dst]) for s, m in zip(g.snapshots, history)]
        assert np.mean(fracs) > 0.85

    def test_churn_moves_vertices(self):
        _, history = synth_dynamic_sbm(100, 4, 3, 0.2, 0.01, 0.2, seed=0, return_membership=True)
        assert 0 < np.sum(history[0] != history[1]) <= 20

    @pytest.mark.parametrize("p_in,p_out,churn", [(0.1, 0.2, 0.0), (1.1, 0.0, 0.0), (0.5, 0.1, 1.5)])
    def test_invalid(self, p_in, p_out, churn):
        with pytest.raises(ValueError):
            synth_dynamic_sbm(10, 2, 3, p_in, p_out, churn, seed=0)
