"""Graphviz DOT export with overlapping nodes colored by block."""
from __future__ import annotations

from pathlib import Path

from .blocks import BlockAssignment
from .graph import Graph
from .overlap import OverlapResult

# fixed palette cycled over unmatched blocks (qualitative, print-safe)
PALETTE = (
    "#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00",
    "#ffff33", "#a65628", "#f781bf", "#999999",
)


def dot_string(g: Graph, result: OverlapResult, blocks: BlockAssignment) -> str:
    """Render the graph: overlapping nodes filled by their block's color.

    Non-overlapping nodes stay white. Node statements come first in internal
    id order, then edges in storage order, so output is deterministic.
    """
    color_of: dict[int, str] = {}
    for k, pat in enumerate(blocks.blocks, start=1):
        if k <= len(result.gamma) and result.gamma[k - 1] == -1:
            color = PALETTE[(k - 1) % len(PALETTE)]
            for j in pat.members:
                if j in result.O:
                    color_of[j] = color

    kind = "digraph" if g.directed else "graph"
    dash = "->" if g.directed else "--"
    lines = [f"{kind} overlapnet {{"]
    lines.append('  node [style=filled, fillcolor="white"];')
    lines.append(f'  label="thr={result.thr:g}";')
    for j in range(g.n_nodes):
        ext = str(g.external(j))
        attrs = []
        if j in color_of:
            attrs.append(f'fillcolor="{color_of[j]}"')
        name = g.label(j)
        if name != ext:
            attrs.append(f'label="{name}"')
        suffix = f" [{', '.join(attrs)}]" if attrs else ""
        lines.append(f'  "{ext}"{suffix};')
    for u, v, w in g.edges:
        lines.append(f'  "{g.external(u)}" {dash} "{g.external(v)}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_dot(g: Graph, result: OverlapResult, blocks: BlockAssignment,
               path) -> None:
    Path(path).write_text(dot_string(g, result, blocks))
