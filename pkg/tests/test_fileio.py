import numpy as np
import pytest

from latentgraph import INF_HOPS, all_pairs_hops
from latentgraph import fileio
from tests.conftest import random_graph


class TestPointsCsv:
    def test_roundtrip_exact(self, tmp_path):
        rng = np.random.default_rng(0)
        pts = rng.random((40, 3)) * np.array([2.0, 1.0, 0.5])
        pts[0, 0] = 1 / 3  # not representable in short decimal
        path = tmp_path / "pts.csv"
        fileio.write_points_csv(path, pts)
        back = fileio.read_points_csv(path)
        assert np.array_equal(back, pts)  # bit-exact via repr round-trip

    def test_header_present(self, tmp_path):
        path = tmp_path / "pts.csv"
        fileio.write_points_csv(path, np.zeros((3, 2)))
        assert path.read_text().splitlines()[0] == "x0,x1"

    def test_bad_header_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b\n1,2\n")
        with pytest.raises(ValueError):
            fileio.read_points_csv(path)


class TestEdgeList:
    def test_roundtrip(self, tmp_path):
        adj = random_graph(30, 0.2, seed=1)
        path = tmp_path / "edges.txt"
        fileio.write_edge_list(path, adj)
        assert fileio.read_edge_list(path) == adj
        first = path.read_text().splitlines()[0]
        assert first == "n=30"

    def test_header_required(self, tmp_path):
        path = tmp_path / "edges.txt"
        path.write_text("0 1\n")
        with pytest.raises(ValueError):
            fileio.read_edge_list(path)


class TestBinaryFormats:
    def test_adjacency_roundtrip(self, tmp_path):
        adj = random_graph(43, 0.3, seed=2)  # deliberately not a byte multiple
        path = tmp_path / "adj.bin"
        fileio.write_adjacency_binary(path, adj)
        assert fileio.read_adjacency_binary(path) == adj
        assert path.read_bytes()[:4] == b"LGA1"

    def test_hops_roundtrip(self, tmp_path):
        hops = all_pairs_hops(random_graph(20, 0.15, seed=3))
        assert (hops.hops == INF_HOPS).any()  # keep the sentinel in the test data
        path = tmp_path / "hops.bin"
        fileio.write_hops_binary(path, hops)
        back = fileio.read_hops_binary(path)
        assert np.array_equal(back.hops, hops.hops)
        assert path.read_bytes()[:4] == b"LGH1"

    def test_dense_roundtrip(self, tmp_path):
        rng = np.random.default_rng(4)
        mat = rng.random((17, 17))
        path = tmp_path / "m.bin"
        fileio.write_matrix_binary(path, mat)
        assert np.array_equal(fileio.read_matrix_binary(path), mat)
        assert path.read_bytes()[:4] == b"LGD1"

    def test_magic_checked(self, tmp_path):
        path = tmp_path / "junk.bin"
        path.write_bytes(b"XXXX" + b"\0" * 16)
        for reader in (fileio.read_adjacency_binary, fileio.read_hops_binary,
                       fileio.read_matrix_binary):
            with pytest.raises(ValueError):
                reader(path)


class TestMatrixCsv:
    def test_roundtrip(self, tmp_path):
        rng = np.random.default_rng(5)
        mat = rng.random((9, 9))
        path = tmp_path / "m.csv"
        fileio.write_matrix_csv(path, mat)
        assert np.array_equal(fileio.read_matrix_csv(path), mat)


class TestTracesAndManifest:
    def test_stress_trace_format(self, tmp_path):
        path = tmp_path / "stress.csv"
        fileio.write_stress_trace(path, [3.0, 2.5, 2.25])
        lines = path.read_text().splitlines()
        assert lines[0] == "iter,stress"
        assert lines[1] == "0,3.0"

    def test_mvu_trace_format(self, tmp_path):
        path = tmp_path / "trace.csv"
        fileio.write_mvu_trace(path, [(0, 0, 1.5, 0.01, 1.4)])
        lines = path.read_text().splitlines()
        assert lines[0] == "stage,iter,objective,max_violation"
        assert lines[1] == "0,0,1.5,0.01"

    def test_manifest_deterministic_bytes(self, tmp_path):
        man = {"b": 2, "a": 1.5, "c": "x", "flag": True}
        p1, p2 = tmp_path / "m1.json", tmp_path / "m2.json"
        fileio.write_manifest(p1, man)
        fileio.write_manifest(p2, dict(reversed(list(man.items()))))
        assert p1.read_bytes() == p2.read_bytes()
        assert fileio.read_manifest(p1) == man

    def test_manifest_rejects_nested(self, tmp_path):
        with pytest.raises(ValueError):
            fileio.write_manifest(tmp_path / "m.json", {"a": {"b": 1}})
