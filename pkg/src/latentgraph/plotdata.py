"""Scatter plot emission: plain CSV series and dependency-free SVG.

The SVG keeps a fixed aspect ratio (one latent unit is the same length on
both axes) so recovered shapes are comparable to the truth by eye.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .fileio import read_manifest, read_points_csv

__all__ = ["emit_plotdata", "svg_paths", "svg_scatter", "write_scatter_csv"]

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2")


def write_scatter_csv(path: str | Path, series: dict[str, np.ndarray]) -> None:
    """Stacked 2-d scatter series as ``series,x,y`` rows."""
    lines = ["series,x,y"]
    for name, pts in series.items():
        pts = np.atleast_2d(pts)
        _require_points(pts)
        for row in pts:
            lines.append(f"{name},{row[0]!r},{row[1]!r}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _require_points(pts: np.ndarray) -> None:
    if pts.size == 0:
        raise ValueError("empty point set")
    if pts.ndim != 2 or pts.shape[1] < 2:
        raise ValueError("need an n-by-2 coordinate array")


def svg_scatter(
    path: str | Path,
    series: dict[str, np.ndarray],
    marker_radius: float = 0.25,
    width: float = 640.0,
) -> None:
    """Render point clouds side by side, one panel per series.

    Panels share the marker scale; each panel's viewBox matches its own
    bounding box, padded by the marker radius, with aspect ratio preserved.
    """
    if not series:
        raise ValueError("no series to render")
    clouds = {}
    for name, pts in series.items():
        pts = np.atleast_2d(np.asarray(pts, dtype=np.float64))
        _require_points(pts)
        clouds[name] = pts[:, :2]
    spans = {k: p.max(axis=0) - p.min(axis=0) for k, p in clouds.items()}
    unit = max(max(s[0], s[1]) for s in spans.values())
    rad = marker_radius * unit / 100.0
    panels = []
    x_cursor = 0.0
    height = 0.0
    for idx, (name, pts) in enumerate(clouds.items()):
        lo = pts.min(axis=0) - 2 * rad
        hi = pts.max(axis=0) + 2 * rad
        w, h = hi - lo
        color = _COLORS[idx % len(_COLORS)]
        dots = "".join(
            f'<circle cx="{x - lo[0] + x_cursor:.6g}" cy="{hi[1] - y:.6g}" r="{rad:.6g}"/>'
            for x, y in pts
        )
        panels.append(
            f'<g fill="{color}" fill-opacity="0.55">'
            f"<title>{name}</title>{dots}</g>"
        )
        x_cursor += w + 4 * rad
        height = max(height, float(h))
    total_w = x_cursor - 4 * rad
    scale = width / total_w
    svg = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.6g}" '
        f'height="{height * scale:.6g}" viewBox="0 0 {total_w:.6g} {height:.6g}" '
        f'preserveAspectRatio="xMidYMid meet">{"".join(panels)}</svg>\n'
    )
    Path(path).write_text(svg, encoding="utf-8")


def svg_paths(
    path: str | Path,
    cloud: np.ndarray,
    polylines: dict[str, np.ndarray],
    width: float = 640.0,
) -> None:
    """One panel: a point cloud with highlighted polylines over it."""
    cloud = np.atleast_2d(np.asarray(cloud, dtype=np.float64))[:, :2]
    _require_points(cloud)
    span = cloud.max(axis=0) - cloud.min(axis=0)
    rad = max(span[0], span[1]) / 400.0
    lo = cloud.min(axis=0) - 2 * rad
    hi = cloud.max(axis=0) + 2 * rad
    w, h = hi - lo
    dots = "".join(
        f'<circle cx="{x - lo[0]:.6g}" cy="{hi[1] - y:.6g}" r="{rad:.6g}"/>' for x, y in cloud
    )
    lines = []
    for idx, (name, poly) in enumerate(polylines.items()):
        poly = np.atleast_2d(np.asarray(poly, dtype=np.float64))[:, :2]
        pts_attr = " ".join(f"{x - lo[0]:.6g},{hi[1] - y:.6g}" for x, y in poly)
        color = _COLORS[(idx + 1) % len(_COLORS)]
        lines.append(
            f'<polyline points="{pts_attr}" fill="none" stroke="{color}" '
            f'stroke-width="{2 * rad:.6g}"><title>{name}</title></polyline>'
        )
    svg = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.6g}" '
        f'height="{width * h / w:.6g}" viewBox="0 0 {w:.6g} {h:.6g}" '
        f'preserveAspectRatio="xMidYMid meet">'
        f'<g fill="#888888" fill-opacity="0.45">{dots}</g>{"".join(lines)}</svg>\n'
    )
    Path(path).write_text(svg, encoding="utf-8")


def emit_plotdata(result_dir: str | Path, manifest_name: str = "manifest.json") -> list[Path]:
    """Turn a preset's result directory into scatter CSV and SVG files.

    Reads the manifest, groups the point files it references (keys ending in
    ``points_file``) by variant, and writes one side-by-side truth/recovered
    SVG plus a combined scatter CSV per group.  Returns the files written.
    """
    result_dir = Path(result_dir)
    manifest_path = result_dir / manifest_name
    if not manifest_path.exists():
        raise FileNotFoundError(f"missing manifest: {manifest_path}")
    manifest = read_manifest(manifest_path)
    groups: dict[str, dict[str, np.ndarray]] = {}
    truth = None
    for key, value in sorted(manifest.items()):
        if not key.endswith("points_file"):
            continue
        pts = read_points_csv(result_dir / str(value))
        if pts.shape[1] < 2:
            pts = np.column_stack([pts[:, 0], np.zeros(len(pts))])
        if key == "truth.points_file":
            truth = pts
            continue
        group = key.rsplit(".", 1)[0]
        groups.setdefault(group, {})[Path(str(value)).stem] = pts
    written = []
    for group, series in groups.items():
        if truth is not None:
            series = {"truth": truth, **series}
        base = result_dir / group.replace(".", "_")
        write_scatter_csv(base.with_suffix(".scatter.csv"), series)
        svg_scatter(base.with_suffix(".svg"), series)
        written.extend([base.with_suffix(".scatter.csv"), base.with_suffix(".svg")])
    if truth is not None and not groups:
        base = result_dir / "truth"
        write_scatter_csv(base.with_suffix(".scatter.csv"), {"truth": truth})
        svg_scatter(base.with_suffix(".svg"), {"truth": truth})
        written.extend([base.with_suffix(".scatter.csv"), base.with_suffix(".svg")])
    if not written:
        raise ValueError(f"{manifest_path}: no point files referenced")
    return written
