"""Experiment presets: fully scripted pipelines from sampling through graph
construction, hop estimation, bound checks and embeddings.

Every preset is determined by (name, seed): two runs write byte-identical
artifacts and manifests.  ``scale_n`` shrinks a preset proportionally for
fast runs; default sizes match the original experiments.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from . import fileio
from .cities import ingest_cities
from .embed import classical_mds, localize, procrustes_align, smacof
from .geometry import (
    Box,
    PointConfig,
    RectangleWithHole,
    coverage_radius,
    pairwise_distances,
    rectangle,
    sample_uniform,
)
from .hopdist import (
    HopMatrix,
    all_pairs_hops,
    check_boundary_bias,
    check_general_bound,
    check_knn_bounds,
    check_simple_bound,
    scale_hops,
    shortest_path_nodes,
)
from .linkgraph import Adjacency, Indicator, couple_thin, generate_graph, knn_graph, knn_scale, symmetrize_union
from .plotdata import svg_paths

__all__ = ["ExperimentPreset", "PRESETS", "preset_names", "run_preset"]


@dataclass(frozen=True)
class ExperimentPreset:
    name: str
    description: str
    default_n: int
    needs_cities: bool = False


def _components(hops: HopMatrix) -> np.ndarray:
    # nodes share a component exactly when their hop distance is finite;
    # label each node by the smallest index it reaches
    finite = hops.finite_mask()
    return finite.argmax(axis=1)


def _largest_component(hops: HopMatrix) -> np.ndarray:
    labels = _components(hops)
    uniq, counts = np.unique(labels, return_counts=True)
    return np.flatnonzero(labels == uniq[counts.argmax()])


def _put_report(man: dict, tag: str, rep) -> None:
    man[f"{tag}.bound.pairs_connected"] = rep.pairs_connected
    man[f"{tag}.bound.pairs_disconnected"] = rep.pairs_disconnected
    man[f"{tag}.bound.lower_violations"] = rep.lower_violations
    if rep.upper_violations is not None:
        man[f"{tag}.bound.upper_violations"] = rep.upper_violations
    man[f"{tag}.bound.max_residual"] = rep.max_residual
    man[f"{tag}.bound.max_relative_error"] = rep.max_relative_error
    man[f"{tag}.bound.fitted_constant"] = rep.fitted_constant
    man[f"{tag}.bound.asserted"] = rep.asserted
    if rep.lower_checked_pairs is not None:
        man[f"{tag}.bound.lower_checked_pairs"] = rep.lower_checked_pairs


def _embed_and_align(
    config: PointConfig,
    hops: HopMatrix,
    est_values: np.ndarray,
    out: Path,
    tag: str,
    man: dict,
) -> None:
    keep = _largest_component(hops)
    man[f"{tag}.n_embedded"] = int(keep.size)
    if keep.size < max(3, config.dim + 1):
        return  # nothing meaningful to embed at this sparsity
    sub = est_values[np.ix_(keep, keep)]
    emb = classical_mds(sub, v=config.dim if config.dim >= 2 else 2)
    truth_pts = config.points[keep]
    if config.dim == 1:
        truth_pts = np.column_stack([truth_pts[:, 0], np.zeros(keep.size)])
    fit = procrustes_align(emb.coords, truth_pts)
    rec_name = f"{tag}_recovered.csv"
    ali_name = f"{tag}_aligned.csv"
    fileio.write_points_csv(out / rec_name, emb.coords)
    fileio.write_points_csv(out / ali_name, fit.aligned)
    man[f"{tag}.recovered.points_file"] = rec_name
    man[f"{tag}.aligned.points_file"] = ali_name
    man[f"{tag}.rmse_aligned"] = fit.rmse
    man[f"{tag}.procrustes_scale"] = fit.scale


def _grid_step(config: PointConfig) -> float:
    span = config.points.max(axis=0) - config.points.min(axis=0)
    return float(span.max() / 400.0)


def _indicator_variant(
    config: PointConfig,
    truth: np.ndarray,
    adj: Adjacency,
    r: float,
    out: Path,
    tag: str,
    man: dict,
) -> None:
    hops = all_pairs_hops(adj)
    est = scale_hops(hops, r)
    eps = coverage_radius(config, "convex_hull", _grid_step(config))
    rep = check_simple_bound(est, truth, eps.upper, r)
    man[f"{tag}.r"] = r
    man[f"{tag}.edge_count"] = adj.edge_count()
    man[f"{tag}.components"] = int(np.unique(_components(hops)).size)
    man[f"{tag}.eps_lower"] = eps.lower
    man[f"{tag}.eps_upper"] = eps.upper
    man[f"{tag}.eps_over_r"] = eps.upper / r
    _put_report(man, tag, rep)
    adj_name, hop_name, est_name = f"{tag}_edges.txt", f"{tag}_hops.bin", f"{tag}_est.bin"
    fileio.write_edge_list(out / adj_name, adj)
    fileio.write_hops_binary(out / hop_name, hops)
    fileio.write_matrix_binary(out / est_name, np.where(np.isfinite(est.values), est.values, -1.0))
    man[f"{tag}.adjacency_file"] = adj_name
    man[f"{tag}.hops_file"] = hop_name
    man[f"{tag}.estimate_file"] = est_name
    _embed_and_align(config, hops, est.values, out, tag, man)


def _tag(prefix: str, value: float) -> str:
    return f"{prefix}{value:g}"


# ---------------------------------------------------------------------------
# preset runners


def _run_rectangles(seed: int, out: Path, n: int, man: dict, **_) -> None:
    """Dense rectangle with two denser patches; indicator links at three radii."""
    rng = np.random.default_rng(seed)
    n0 = max(3, int(round(n * 0.6)))
    n1 = max(3, int(round(n * 0.2)))
    n2 = max(3, n - n0 - n1)
    base = rectangle(2.0, 1.0)
    patch1 = Box(np.array([0.25, 0.25]), np.array([0.75, 0.75]))
    patch2 = Box(np.array([1.25, 0.0]), np.array([1.5, 1.0]))
    pts = np.vstack([base.sample(rng, n0), patch1.sample(rng, n1), patch2.sample(rng, n2)])
    config = PointConfig(pts, base, provenance=f"sampled(seed={seed})")
    truth = pairwise_distances(config)
    man["n"] = config.n
    fileio.write_points_csv(out / "truth.csv", config.points)
    man["truth.points_file"] = "truth.csv"
    for r in (0.05, 0.1, 0.2):
        adj = generate_graph(config, Indicator(r), seed)
        _indicator_variant(config, truth, adj, r, out, _tag("r", r), man)


def _run_hole(seed: int, out: Path, n: int, man: dict, **_) -> None:
    """Rectangle with a rectangular hole: the convexity requirement bites."""
    domain = RectangleWithHole(
        rectangle(2.0, 1.0),
        Box(np.array([0.5, 0.25]), np.array([1.5, 0.75])),
    )
    config = sample_uniform(domain, n, seed)
    truth = pairwise_distances(config)
    man["n"] = config.n
    fileio.write_points_csv(out / "truth.csv", config.points)
    man["truth.points_file"] = "truth.csv"
    adj = generate_graph(config, Indicator(0.2), seed)
    _indicator_variant(config, truth, adj, 0.2, out, "r0.2", man)


def _run_cities(seed: int, out: Path, n: int, man: dict, cities_file=None, **_) -> None:
    """City coordinates in planar degrees; indicator links at three radii."""
    if cities_file is None:
        raise ValueError("this preset needs a cities CSV (pass cities_file)")
    config = ingest_cities(cities_file, n, seed)
    truth = pairwise_distances(config)
    man["n"] = config.n
    fileio.write_points_csv(out / "truth.csv", config.points)
    man["truth.points_file"] = "truth.csv"
    for r in (3.0, 5.0, 7.0):
        adj = generate_graph(config, Indicator(r), seed)
        _indicator_variant(config, truth, adj, r, out, _tag("r", r), man)


def _run_cities_thinned(seed: int, out: Path, n: int, man: dict, cities_file=None, **_) -> None:
    """Coupled link levels on one city graph: the lower levels are obtained
    by erasing edges from the p=0.5 graph, never by regenerating."""
    if cities_file is None:
        raise ValueError("this preset needs a cities CSV (pass cities_file)")
    r = 5.0
    config = ingest_cities(cities_file, n, seed)
    truth = pairwise_distances(config)
    man["n"] = config.n
    man["r"] = r
    fileio.write_points_csv(out / "truth.csv", config.points)
    man["truth.points_file"] = "truth.csv"
    full = generate_graph(config, Indicator(r), seed)
    half = couple_thin(full, 0.5 / 1.0, seed + 1)
    fifth = couple_thin(half, 0.2 / 0.5, seed + 2)  # keep ratio of levels: emulates p=0.2
    eps = coverage_radius(config, "convex_hull", _grid_step(config))
    for p, adj in ((1.0, full), (0.5, half), (0.2, fifth)):
        tag = _tag("p", p)
        hops = all_pairs_hops(adj)
        est = scale_hops(hops, r)
        rep = check_general_bound(est, truth, eps.upper, r, alpha=0.0)
        man[f"{tag}.r"] = r
        man[f"{tag}.edge_count"] = adj.edge_count()
        man[f"{tag}.components"] = int(np.unique(_components(hops)).size)
        man[f"{tag}.eps_lower"] = eps.lower
        man[f"{tag}.eps_upper"] = eps.upper
        man[f"{tag}.eps_over_r"] = eps.upper / r
        _put_report(man, tag, rep)
        adj_name = f"{tag}_edges.txt"
        fileio.write_edge_list(out / adj_name, adj)
        man[f"{tag}.adjacency_file"] = adj_name
        _embed_and_align(config, hops, est.values, out, tag, man)


def _run_knn_band(seed: int, out: Path, n: int, man: dict, literal_omega=False, **_) -> None:
    """Nearest-neighbor graph on a long strip: boundary paths shortcut."""
    kappa = 25 if n >= 200 else max(2, n // 200)
    config = sample_uniform(rectangle(4.0, 1.0), n, seed)
    truth = pairwise_distances(config)
    man["n"] = config.n
    man["kappa"] = kappa
    fileio.write_points_csv(out / "truth.csv", config.points)
    man["truth.points_file"] = "truth.csv"
    knn = knn_graph(config, kappa)
    adj = symmetrize_union(knn)
    scale = knn_scale(config.domain, config.n, kappa, c1=1.0,
                      omega=4.0 if literal_omega else None)
    man["knn.r_circ"] = scale.r_circ
    man["knn.eps"] = scale.eps
    man["knn.omega"] = scale.omega
    tag = "knn"
    hops = all_pairs_hops(adj)
    est = scale_hops(hops, scale.r)
    rep = check_knn_bounds(est, truth, config, scale.eps, scale.r)
    man[f"{tag}.r"] = scale.r
    man[f"{tag}.edge_count"] = adj.edge_count()
    man[f"{tag}.components"] = int(np.unique(_components(hops)).size)
    man[f"{tag}.eps_lower"] = scale.eps
    man[f"{tag}.eps_upper"] = scale.eps
    man[f"{tag}.eps_over_r"] = scale.eps / scale.r
    _put_report(man, tag, rep)
    threshold = min(2.0, 0.5 * float(truth.max()))
    ratio, pairs = check_boundary_bias(est, truth, threshold)
    man["knn.bias.threshold"] = threshold
    man["knn.bias.max_ratio"] = ratio
    man["knn.bias.pairs"] = pairs
    adj_name = f"{tag}_edges.txt"
    fileio.write_edge_list(out / adj_name, adj)
    man[f"{tag}.adjacency_file"] = adj_name
    _embed_and_align(config, hops, est.values, out, tag, man)


def _run_knn_paths(seed: int, out: Path, n: int, man: dict, **_) -> None:
    """Shortest neighbor-graph paths for a nearby and a faraway pair; the far
    path hugs the boundary."""
    kappa = 25 if n >= 200 else max(2, n // 200)
    config = sample_uniform(rectangle(4.0, 1.0), n, seed)
    man["n"] = config.n
    man["kappa"] = kappa
    fileio.write_points_csv(out / "truth.csv", config.points)
    man["truth.points_file"] = "truth.csv"
    adj = symmetrize_union(knn_graph(config, kappa))
    pts = config.points
    anchors = {
        "near": (np.array([1.8, 0.5]), np.array([2.2, 0.5])),
        "far": (np.array([0.2, 0.5]), np.array([3.8, 0.5])),
    }
    polylines = {}
    lines = ["path,step,x,y"]
    for name, (a, b) in anchors.items():
        src = int(np.linalg.norm(pts - a, axis=1).argmin())
        dst = int(np.linalg.norm(pts - b, axis=1).argmin())
        nodes = shortest_path_nodes(adj, src, dst)
        poly = pts[nodes]
        polylines[name] = poly
        man[f"paths.{name}.hops"] = len(nodes) - 1
        man[f"paths.{name}.euclidean"] = float(np.linalg.norm(pts[src] - pts[dst]))
        for k, (x, y) in enumerate(poly):
            lines.append(f"{name},{k},{x!r},{y!r}")
    (out / "paths.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    man["paths.file"] = "paths.csv"
    svg_paths(out / "paths.svg", pts, polylines)
    man["paths.svg"] = "paths.svg"


def _run_mds_discrete(seed: int, out: Path, n: int, man: dict, **_) -> None:
    """Hop distances take a handful of values, yet classical scaling of them
    recovers the layout."""
    config = sample_uniform(rectangle(2.0, 1.0), n, seed)
    truth = pairwise_distances(config)
    man["n"] = config.n
    fileio.write_points_csv(out / "truth.csv", config.points)
    man["truth.points_file"] = "truth.csv"
    r = 0.5
    adj = generate_graph(config, Indicator(r), seed)
    hops = all_pairs_hops(adj)
    iu = np.triu_indices(config.n, 1)
    vals, counts = np.unique(hops.hops[iu], return_counts=True)
    for v, c in zip(vals, counts):
        man[f"hops.hist.{int(v)}"] = int(c)
    man["hops.max"] = hops.max_finite()
    _indicator_variant(config, truth, adj, r, out, _tag("r", r), man)


def _run_hole_local(seed: int, out: Path, n: int, man: dict, **_) -> None:
    """Localization on the hole domain: keep hop estimates up to two hops,
    reconcile with stress majorization from the classical-scaling start."""
    domain = RectangleWithHole(
        rectangle(2.0, 1.0),
        Box(np.array([0.5, 0.25]), np.array([1.5, 0.75])),
    )
    config = sample_uniform(domain, n, seed)
    truth = pairwise_distances(config)
    man["n"] = config.n
    fileio.write_points_csv(out / "truth.csv", config.points)
    man["truth.points_file"] = "truth.csv"
    r, max_hops = 0.2, 2
    adj = generate_graph(config, Indicator(r), seed)
    _indicator_variant(config, truth, adj, r, out, "r0.2", man)
    hops = all_pairs_hops(adj)
    keep = _largest_component(hops)
    sub_hops = HopMatrix(keep.size, hops.hops[np.ix_(keep, keep)])
    est_sub = scale_hops(sub_hops, r)
    init = classical_mds(est_sub.values, 2).coords
    partial = localize(sub_hops, max_hops, r)
    man["local.max_hops"] = max_hops
    man["local.present_fraction"] = float(partial.mask.mean())
    result = smacof(partial, init)
    fit = procrustes_align(result.coords, config.points[keep])
    fileio.write_points_csv(out / "local_recovered.csv", result.coords)
    fileio.write_points_csv(out / "local_aligned.csv", fit.aligned)
    fileio.write_stress_trace(out / "local_stress.csv", result.stress_trace)
    man["local.recovered.points_file"] = "local_recovered.csv"
    man["local.aligned.points_file"] = "local_aligned.csv"
    man["local.stress_file"] = "local_stress.csv"
    man["local.stress_final"] = result.stress
    man["local.iterations"] = result.iterations
    trace = result.stress_trace
    man["local.stress_monotone"] = bool(
        all(trace[k + 1] <= trace[k] * (1 + 1e-12) + 1e-9 for k in range(len(trace) - 1))
    )
    man["local.rmse_aligned"] = fit.rmse


_RUNNERS: dict[str, tuple[Callable, ExperimentPreset]] = {
    "rectangles": (
        _run_rectangles,
        ExperimentPreset("rectangles", "uniform rectangle plus two dense patches, "
                         "indicator radii 0.05/0.1/0.2", 5000),
    ),
    "hole": (
        _run_hole,
        ExperimentPreset("hole", "rectangle with hole removed, indicator r=0.2 shows "
                         "non-convexity bias", 5000),
    ),
    "cities": (
        _run_cities,
        ExperimentPreset("cities", "city coordinates, indicator radii 3/5/7 degrees",
                         3000, needs_cities=True),
    ),
    "cities-thinned": (
        _run_cities_thinned,
        ExperimentPreset("cities-thinned", "coupled edge thinning p=1/0.5/0.2 at r=5 degrees",
                         3000, needs_cities=True),
    ),
    "knn-band": (
        _run_knn_band,
        ExperimentPreset("knn-band", "25-nearest-neighbor graph on [0,4]x[0,1]: "
                         "boundary bias checks", 5000),
    ),
    "knn-paths": (
        _run_knn_paths,
        ExperimentPreset("knn-paths", "shortest-path illustration on the strip "
                         "neighbor graph", 5000),
    ),
    "mds-discrete": (
        _run_mds_discrete,
        ExperimentPreset("mds-discrete", "very coarse hop distances still embed well "
                         "(r=0.5)", 2000),
    ),
    "hole-local": (
        _run_hole_local,
        ExperimentPreset("hole-local", "thresholded hops + stress majorization fix "
                         "the hole bias (r=0.2, two hops)", 5000),
    ),
}

PRESETS: dict[str, ExperimentPreset] = {k: v[1] for k, v in _RUNNERS.items()}


def preset_names() -> list[str]:
    return list(_RUNNERS)


def run_preset(
    name: str,
    seed: int,
    out_dir: str | Path,
    scale_n: int | None = None,
    cities_file: str | Path | None = None,
    literal_omega: bool = False,
) -> dict:
    """Run a named preset and write its artifacts plus ``manifest.json``.

    Returns the manifest dictionary.  Identical (name, seed, scale_n) runs
    produce byte-identical outputs.
    """
    if name not in _RUNNERS:
        raise ValueError(f"unknown preset {name!r}; available: {', '.join(_RUNNERS)}")
    runner, preset = _RUNNERS[name]
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    man: dict = {"preset": name, "seed": int(seed)}
    n = int(scale_n) if scale_n else preset.default_n
    runner(seed, out, n, man, cities_file=cities_file, literal_omega=literal_omega)
    fileio.write_manifest(out / "manifest.json", man)
    return man
