"""Command-line interface.

Exit codes: 0 success, 2 validation error, 3 bound-check hard failure under
``--strict``.
"""

from __future__ import annotations

import argparse
import ctypes
import os
import sys


def _cap_threads(k: int) -> None:
    # env covers subprocesses and not-yet-loaded pools; the loaded OpenBLAS
    # (numpy is already imported by the package) needs the runtime call
    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ[var] = str(k)
    for lib in ("libopenblas.so.0", "libopenblas.so", "libopenblasp-r0.so.0"):
        try:
            ctypes.CDLL(lib).openblas_set_num_threads(int(k))
            return
        except (OSError, AttributeError):
            continue


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="latentgraph",
                                 description="latent distance estimation from graph hops")
    ap.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    ap.add_argument("--threads", type=int, default=None, help="cap worker/BLAS threads")
    ap.add_argument("--out", default=".", help="output directory (default .)")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="sample points and draw a random graph")
    g.add_argument("--domain", required=True,
                   help="rectangle:A,B | hole:A,B,x0,y0,x1,y1 | interval:L")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--link", required=True,
                   help="indicator:R | scaled_indicator:R,P | poly:R,C0,ALPHA | two_level:R,P,Q")

    h = sub.add_parser("hops", help="all-pairs hop distances of an edge list")
    h.add_argument("--adjacency", required=True)

    e = sub.add_parser("estimate", help="scale a hop matrix into distance estimates")
    e.add_argument("--hops", required=True)
    e.add_argument("--r", type=float, required=True)
    e.add_argument("--csv", action="store_true", help="write CSV instead of binary")

    m = sub.add_parser("embed", help="classical scaling of a distance matrix")
    m.add_argument("--matrix", required=True, help="LGD1 binary or CSV matrix")
    m.add_argument("--dim", type=int, default=2)
    m.add_argument("--align-to", default=None, help="points CSV to procrustes-align against")

    v = sub.add_parser("mvu", help="maximum variance unfolding of an edge list")
    v.add_argument("--adjacency", required=True)
    v.add_argument("--rank", type=int, default=5)

    c = sub.add_parser("check", help="bound checks of estimates against truth")
    c.add_argument("--estimate", required=True, help="LGD1/CSV estimate matrix")
    c.add_argument("--truth", required=True, help="points CSV of true positions")
    c.add_argument("--kind", choices=["simple", "general", "knn"], default="simple")
    c.add_argument("--eps", type=float, required=True)
    c.add_argument("--r", type=float, required=True)
    c.add_argument("--alpha", type=float, default=0.0)
    c.add_argument("--strict", action="store_true",
                   help="exit 3 on lower-bound violations or asserted upper violations")

    p = sub.add_parser("preset", help="experiment presets")
    psub = p.add_subparsers(dest="preset_command", required=True)
    pl = psub.add_parser("list", help="list preset names")
    pr = psub.add_parser("run", help="run a preset")
    pr.add_argument("name")
    pr.add_argument("--scale-n", type=int, default=None, help="shrink the preset to n points")
    pr.add_argument("--cities-file", default=None)
    pr.add_argument("--literal-omega", action="store_true",
                    help="use the raw domain area as the neighbor-scale omega")

    i = sub.add_parser("ingest-cities", help="subsample a cities CSV into a point file")
    i.add_argument("--file", required=True)
    i.add_argument("--n", type=int, required=True)
    i.add_argument("--lat-col", default="lat")
    i.add_argument("--lng-col", default="lng")

    pl2 = sub.add_parser("plot", help="emit scatter CSV/SVG from a result directory")
    pl2.add_argument("--dir", required=True)
    return ap


def _parse_domain(spec: str):
    from .geometry import Box, RectangleWithHole, interval, rectangle
    import numpy as np

    kind, _, rest = spec.partition(":")
    vals = [float(t) for t in rest.split(",")] if rest else []
    if kind == "rectangle" and len(vals) == 2:
        return rectangle(*vals)
    if kind == "interval" and len(vals) == 1:
        return interval(vals[0])
    if kind == "hole" and len(vals) == 6:
        return RectangleWithHole(
            rectangle(vals[0], vals[1]),
            Box(np.array(vals[2:4]), np.array(vals[4:6])),
        )
    raise ValueError(f"cannot parse domain spec {spec!r}")


def _parse_link(spec: str):
    from .linkgraph import Indicator, PolynomialEdge, ScaledIndicator, TwoLevel

    kind, _, rest = spec.partition(":")
    vals = [float(t) for t in rest.split(",")] if rest else []
    table = {
        "indicator": (Indicator, 1),
        "scaled_indicator": (ScaledIndicator, 2),
        "poly": (PolynomialEdge, 3),
        "two_level": (TwoLevel, 3),
    }
    if kind in table and len(vals) == table[kind][1]:
        return table[kind][0](*vals)
    raise ValueError(f"cannot parse link spec {spec!r}")


def _run(args) -> int:
    from pathlib import Path

    import numpy as np

    from . import fileio
    from .cities import ingest_cities
    from .embed import classical_mds, procrustes_align
    from .geometry import pairwise_distances, sample_uniform
    from .hopdist import all_pairs_hops, check_general_bound, check_simple_bound, scale_hops
    from .linkgraph import generate_graph
    from .mvu import solve_mvu
    from .plotdata import emit_plotdata
    from .presets import run_preset

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    if args.command == "generate":
        config = sample_uniform(_parse_domain(args.domain), args.n, args.seed)
        adj = generate_graph(config, _parse_link(args.link), args.seed)
        fileio.write_points_csv(out / "points.csv", config.points)
        fileio.write_edge_list(out / "edges.txt", adj)
        print(f"wrote points.csv and edges.txt (n={config.n}, edges={adj.edge_count()})")
        return 0

    if args.command == "hops":
        adj = fileio.read_edge_list(args.adjacency)
        hops = all_pairs_hops(adj)
        fileio.write_hops_binary(out / "hops.bin", hops)
        print(f"wrote hops.bin (n={hops.n}, max finite hop={hops.max_finite()})")
        return 0

    if args.command == "estimate":
        hops = fileio.read_hops_binary(args.hops)
        est = scale_hops(hops, args.r)
        values = np.where(np.isfinite(est.values), est.values, -1.0)
        if args.csv:
            fileio.write_matrix_csv(out / "estimate.csv", values)
            print("wrote estimate.csv (disconnected pairs as -1)")
        else:
            fileio.write_matrix_binary(out / "estimate.bin", values)
            print("wrote estimate.bin (disconnected pairs as -1)")
        return 0

    if args.command == "embed":
        path = Path(args.matrix)
        mat = (fileio.read_matrix_csv(path) if path.suffix == ".csv"
               else fileio.read_matrix_binary(path))
        if (mat < 0).any():
            raise ValueError("matrix contains disconnected (-1) entries; embed a component")
        emb = classical_mds(mat, args.dim)
        fileio.write_points_csv(out / "embedded.csv", emb.coords)
        print(f"wrote embedded.csv (top eigenvalues: {emb.eigenvalues})")
        if args.align_to:
            target = fileio.read_points_csv(args.align_to)
            fit = procrustes_align(emb.coords, target)
            fileio.write_points_csv(out / "aligned.csv", fit.aligned)
            print(f"wrote aligned.csv (rmse={fit.rmse:.6g}, scale={fit.scale:.6g})")
        return 0

    if args.command == "mvu":
        adj = fileio.read_edge_list(args.adjacency)
        sol = solve_mvu(adj, rank=args.rank, seed=args.seed)
        fileio.write_points_csv(out / "mvu_coords.csv", sol.coords)
        fileio.write_mvu_trace(out / "mvu_trace.csv", sol.trace)
        print(f"wrote mvu_coords.csv (objective={sol.objective:.6g}, "
              f"max edge violation={sol.max_edge_violation:.3g})")
        return 0

    if args.command == "check":
        path = Path(args.estimate)
        values = (fileio.read_matrix_csv(path) if path.suffix == ".csv"
                  else fileio.read_matrix_binary(path))
        est_values = np.where(values < 0, np.inf, values)
        truth = pairwise_distances(fileio.read_points_csv(args.truth))
        from .hopdist import EstimateMatrix
        est = EstimateMatrix(est_values, scale=args.r)
        if args.kind == "simple":
            rep = check_simple_bound(est, truth, args.eps, args.r)
        elif args.kind == "general":
            rep = check_general_bound(est, truth, args.eps, args.r, args.alpha)
        else:
            raise ValueError("knn checks need the point configuration; use the library API")
        print(f"pairs connected {rep.pairs_connected}, disconnected {rep.pairs_disconnected}")
        print(f"lower violations {rep.lower_violations}")
        if rep.upper_violations is not None:
            print(f"upper violations {rep.upper_violations} (asserted={rep.asserted})")
        print(f"fitted constant {rep.fitted_constant:.6g}, max residual {rep.max_residual:.6g}")
        hard_fail = rep.lower_violations > 0 or (
            rep.asserted and (rep.upper_violations or 0) > 0
        )
        if args.strict and hard_fail:
            print("strict mode: bound check failed")
            return 3
        return 0

    if args.command == "preset":
        if args.preset_command == "list":
            from .presets import PRESETS
            for name, preset in PRESETS.items():
                print(f"{name:14s} n={preset.default_n:<6d} {preset.description}")
            return 0
        man = run_preset(args.name, args.seed, out, scale_n=args.scale_n,
                         cities_file=args.cities_file, literal_omega=args.literal_omega)
        print(f"wrote {len(man)} manifest entries to {out / 'manifest.json'}")
        return 0

    if args.command == "ingest-cities":
        config = ingest_cities(args.file, args.n, args.seed,
                               lat_col=args.lat_col, lng_col=args.lng_col)
        fileio.write_points_csv(out / "cities_points.csv", config.points)
        print(f"wrote cities_points.csv (n={config.n})")
        return 0

    if args.command == "plot":
        written = emit_plotdata(args.dir)
        for w in written:
            print(f"wrote {w}")
        return 0

    raise ValueError(f"unknown command {args.command!r}")


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.threads is not None:
        _cap_threads(args.threads)
    try:
        return _run(args)
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
