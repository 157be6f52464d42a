"""On-disk formats.

Points travel as CSV with header ``x0,x1,...`` and shortest round-trip
decimal floats.  Adjacency has a text edge-list form (``n=<count>`` header,
then ``i j`` lines, 0-based, i < j) and a binary form: magic ``LGA1``, u64
little-endian node count, then the strict upper triangle row-major as packed
bits (little bit order).  Hop matrices: magic ``LGH1``, u64 n, row-major u16
little-endian with 0xFFFF for infinity.  Dense float matrices: CSV or magic
``LGD1``, u64 n, row-major f64 little-endian.  Manifests are flat JSON
objects with sorted keys so equal runs produce byte-identical files.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .hopdist import HopMatrix
from .linkgraph import Adjacency

__all__ = [
    "read_adjacency_binary",
    "read_edge_list",
    "read_hops_binary",
    "read_manifest",
    "read_matrix_binary",
    "read_matrix_csv",
    "read_points_csv",
    "write_adjacency_binary",
    "write_edge_list",
    "write_hops_binary",
    "write_manifest",
    "write_matrix_binary",
    "write_matrix_csv",
    "write_mvu_trace",
    "write_points_csv",
    "write_stress_trace",
]

_MAGIC_ADJ = b"LGA1"
_MAGIC_HOP = b"LGH1"
_MAGIC_DEN = b"LGD1"


def _fmt(x: float) -> str:
    return repr(float(x))


def write_points_csv(path: str | Path, points: np.ndarray) -> None:
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    cols = ",".join(f"x{k}" for k in range(pts.shape[1]))
    lines = [cols]
    lines.extend(",".join(_fmt(x) for x in row) for row in pts)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_points_csv(path: str | Path) -> np.ndarray:
    text = Path(path).read_text(encoding="utf-8").strip().splitlines()
    if not text or not text[0].startswith("x0"):
        raise ValueError(f"{path}: expected a point CSV with an x0,... header")
    return np.array([[float(v) for v in line.split(",")] for line in text[1:]])


def write_edge_list(path: str | Path, adj: Adjacency) -> None:
    lines = [f"n={adj.n}"]
    lines.extend(f"{i} {j}" for i, j in adj.edges())
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_edge_list(path: str | Path) -> Adjacency:
    lines = Path(path).read_text(encoding="utf-8").strip().splitlines()
    if not lines or not lines[0].startswith("n="):
        raise ValueError(f"{path}: expected an 'n=<count>' header line")
    n = int(lines[0][2:])
    edges = np.array([[int(t) for t in line.split()] for line in lines[1:]], dtype=np.int64)
    return Adjacency.from_edges(n, edges.reshape(-1, 2))


def _upper_bits(adj: Adjacency) -> np.ndarray:
    dense = adj.dense()
    iu = np.triu_indices(adj.n, 1)
    return dense[iu]


def write_adjacency_binary(path: str | Path, adj: Adjacency) -> None:
    bits = _upper_bits(adj)
    with open(path, "wb") as fh:
        fh.write(_MAGIC_ADJ)
        fh.write(struct.pack("<Q", adj.n))
        fh.write(np.packbits(bits, bitorder="little").tobytes())


def read_adjacency_binary(path: str | Path) -> Adjacency:
    raw = Path(path).read_bytes()
    if raw[:4] != _MAGIC_ADJ:
        raise ValueError(f"{path}: bad magic, expected LGA1")
    n = struct.unpack("<Q", raw[4:12])[0]
    m = n * (n - 1) // 2
    bits = np.unpackbits(np.frombuffer(raw[12:], dtype=np.uint8), count=m, bitorder="little")
    dense = np.zeros((n, n), dtype=bool)
    dense[np.triu_indices(n, 1)] = bits.astype(bool)
    return Adjacency.from_dense(dense | dense.T)


def write_hops_binary(path: str | Path, hops: HopMatrix) -> None:
    with open(path, "wb") as fh:
        fh.write(_MAGIC_HOP)
        fh.write(struct.pack("<Q", hops.n))
        fh.write(hops.hops.astype("<u2").tobytes())


def read_hops_binary(path: str | Path) -> HopMatrix:
    raw = Path(path).read_bytes()
    if raw[:4] != _MAGIC_HOP:
        raise ValueError(f"{path}: bad magic, expected LGH1")
    n = struct.unpack("<Q", raw[4:12])[0]
    hops = np.frombuffer(raw[12:], dtype="<u2", count=n * n).reshape(n, n)
    return HopMatrix(n, hops.astype(np.uint16))


def write_matrix_binary(path: str | Path, values: np.ndarray) -> None:
    m = np.asarray(values, dtype=np.float64)
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError("matrix must be square")
    with open(path, "wb") as fh:
        fh.write(_MAGIC_DEN)
        fh.write(struct.pack("<Q", n))
        fh.write(m.astype("<f8").tobytes())


def read_matrix_binary(path: str | Path) -> np.ndarray:
    raw = Path(path).read_bytes()
    if raw[:4] != _MAGIC_DEN:
        raise ValueError(f"{path}: bad magic, expected LGD1")
    n = struct.unpack("<Q", raw[4:12])[0]
    return np.frombuffer(raw[12:], dtype="<f8", count=n * n).reshape(n, n).copy()


def write_matrix_csv(path: str | Path, values: np.ndarray) -> None:
    m = np.asarray(values, dtype=np.float64)
    lines = [",".join(_fmt(x) for x in row) for row in np.atleast_2d(m)]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_matrix_csv(path: str | Path) -> np.ndarray:
    lines = Path(path).read_text(encoding="utf-8").strip().splitlines()
    return np.array([[float(v) for v in line.split(",")] for line in lines])


def write_stress_trace(path: str | Path, trace) -> None:
    lines = ["iter,stress"]
    lines.extend(f"{k},{_fmt(s)}" for k, s in enumerate(trace))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_mvu_trace(path: str | Path, trace) -> None:
    lines = ["stage,iter,objective,max_violation"]
    lines.extend(f"{row[0]},{row[1]},{_fmt(row[2])},{_fmt(row[3])}" for row in trace)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_manifest(path: str | Path, manifest: dict) -> None:
    for key, value in manifest.items():
        if not isinstance(value, (str, int, float, bool)):
            raise ValueError(f"manifest values must be scalars; key {key!r} is {type(value)}")
    Path(path).write_text(
        json.dumps(manifest, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )


def read_manifest(path: str | Path) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))
