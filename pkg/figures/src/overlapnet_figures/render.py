"""Figure rendering: per-threshold overlap panels and the |O|-vs-thr curve.

Everything is deterministic: node placement comes from a seeded layout,
drawing order is fixed, and image metadata is pinned so that two renders of
the same spec produce identical bytes.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
# SVG element ids are salted with a per-process UUID unless pinned
matplotlib.rcParams["svg.hashsalt"] = "overlapnet-figures"

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
from matplotlib.collections import LineCollection  # noqa: E402

from . import io
from .io import FigureError
from .layout import spring_layout

# palette mirrors the CLI's DOT export so figures and DOT files agree
PALETTE = (
    "#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00",
    "#ffff33", "#a65628", "#f781bf", "#999999",
)

_METADATA = {
    ".png": {"Software": "overlapnet-figures"},
    ".svg": {"Date": None, "Creator": "overlapnet-figures"},
}


@dataclass(frozen=True)
class FigureSpec:
    """Everything one render needs; paths stay unopened until render time."""

    sweep: str
    out: str
    graph: str | None = None
    blocks: str | None = None
    grid: tuple[int, int] | None = None
    layout_seed: int = 7
    thresholds: tuple[float, ...] | None = None
    palette: tuple[str, ...] = PALETTE


def _metadata_for(out: Path) -> dict:
    try:
        return dict(_METADATA[out.suffix.lower()])
    except KeyError:
        raise FigureError(
            f"{out}: unsupported image format {out.suffix!r} (png or svg)")


def plan_grid(n_panels: int, grid: tuple[int, int] | None) -> tuple[int, int]:
    """Panel arrangement; explicit grids must hold every panel."""
    if n_panels < 1:
        raise FigureError("nothing to draw: no panels requested")
    if grid is None:
        return 1, n_panels
    rows, cols = grid
    if rows < 1 or cols < 1:
        raise FigureError(f"grid {rows}x{cols} is not positive")
    if rows * cols < n_panels:
        raise FigureError(
            f"grid {rows}x{cols} holds {rows * cols} panels but the sweep"
            f" has {n_panels}")
    return rows, cols


def _select_points(sweep: list[dict], thresholds) -> list[dict]:
    if thresholds is None:
        return sweep
    chosen = []
    for thr in thresholds:
        for p in sweep:
            if abs(float(p["thr"]) - float(thr)) < 1e-12:
                chosen.append(p)
                break
        else:
            available = ", ".join(f"{float(p['thr']):g}" for p in sweep)
            raise FigureError(
                f"threshold {float(thr):g} not in sweep (has: {available})")
    return chosen


def panel_colors(point: dict, blocks: list[dict] | None, palette=PALETTE
                 ) -> dict[str, str]:
    """Fill color per overlapping node (external id, as text); rest stay white.

    With block structure available each node inherits its block's palette
    slot (1-based, cycling); without it every overlapping node shares the
    first color.
    """
    overlapping = {str(x) for x in point["overlapping_external_ids"]}
    if not overlapping:
        return {}
    block_of: dict[str, int] = {}
    for k, blk in enumerate(blocks or (), start=1):
        for member in blk["members"]:
            block_of[str(member)] = k
    out = {}
    for ext in overlapping:
        k = block_of.get(ext, 1)
        out[ext] = palette[(k - 1) % len(palette)]
    return out


def render_overlap_panels(spec: FigureSpec) -> Path:
    """One panel per threshold: overlapping nodes filled, others white."""
    if not spec.graph:
        raise FigureError("overlap panels need the graph file (--graph)")
    out = Path(spec.out)
    metadata = _metadata_for(out)
    sweep = io.read_sweep(spec.sweep)
    points = _select_points(sweep, spec.thresholds)
    blocks = io.read_blocks(spec.blocks) if spec.blocks else None
    ids, edges = io.read_edge_list(spec.graph)
    pos = spring_layout(len(ids), edges, spec.layout_seed)

    rows, cols = plan_grid(len(points), spec.grid)
    fig, axes = plt.subplots(rows, cols, figsize=(3.2 * cols, 3.2 * rows),
                             squeeze=False)
    for ax in axes.flat:
        ax.set_axis_off()
    segments = [(pos[u], pos[v]) for u, v in edges]
    for ax, point in zip(axes.flat, points):
        colors = panel_colors(point, blocks, spec.palette)
        ax.add_collection(LineCollection(segments, colors="#b0b0b0",
                                         linewidths=0.7, zorder=1))
        face = [colors.get(ext, "white") for ext in ids]
        ax.scatter(pos[:, 0], pos[:, 1], s=150, c=face, edgecolors="black",
                   linewidths=0.6, zorder=2)
        if len(ids) <= 60:
            for ext, (x, y) in zip(ids, pos):
                ax.text(x, y, ext, fontsize=5.5, ha="center", va="center",
                        zorder=3)
        ax.set_title(f"thr = {float(point['thr']):g}", fontsize=10)
        ax.set_xlim(-0.02, 1.02)
        ax.set_ylim(-0.02, 1.02)
        ax.set_aspect("equal")

    fig.tight_layout()
    fig.savefig(out, dpi=150, metadata=metadata)
    plt.close(fig)
    return out


def curve_points(sweep: list[dict]) -> list[tuple[float, int]]:
    """(thr, |O|) pairs sorted by threshold, however the file was ordered."""
    pts = [(float(p["thr"]), len(p["overlapping_external_ids"]))
           for p in sweep]
    return sorted(pts)


def render_sweep_curve(spec: FigureSpec) -> Path:
    """Step plot of how the overlapping set shrinks as thr grows."""
    out = Path(spec.out)
    metadata = _metadata_for(out)
    pts = curve_points(io.read_sweep(spec.sweep))
    if len(pts) < 2:
        raise FigureError(
            "a curve needs at least two sweep points; rerun the sweep with"
            " more thresholds")
    thrs = [t for t, _ in pts]
    sizes = [n for _, n in pts]

    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    ax.step(thrs, sizes, where="post", color=PALETTE[1], linewidth=1.6)
    ax.plot(thrs, sizes, "o", color=PALETTE[0], markersize=5, zorder=3)
    ax.set_xlabel("threshold")
    ax.set_ylabel("overlapping nodes")
    ax.set_ylim(bottom=0)
    ax.grid(alpha=0.3, linewidth=0.5)
    fig.tight_layout()
    fig.savefig(out, dpi=150, metadata=metadata)
    plt.close(fig)
    return out
