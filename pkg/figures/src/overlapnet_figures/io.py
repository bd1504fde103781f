"""Readers for the artifacts the overlapnet CLI writes.

Validation here is shallow on purpose — the CLI already schema-checks its
output; these readers only guard against handing the renderer something
that is obviously not a sweep/blocks file.
"""
from __future__ import annotations

import json
from pathlib import Path


class FigureError(Exception):
    """Anything that prevents a figure from being rendered."""


def read_sweep(path) -> list[dict]:
    """Sweep JSON -> list of points sorted by ascending threshold."""
    path = Path(path)
    try:
        payload = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise FigureError(f"{path}: not valid JSON ({exc})")
    if not isinstance(payload, list) or not payload:
        raise FigureError(f"{path}: expected a non-empty list of sweep points")
    for p in payload:
        if not isinstance(p, dict) or "thr" not in p \
                or "overlapping_external_ids" not in p:
            raise FigureError(f"{path}: sweep points need 'thr' and"
                              " 'overlapping_external_ids'")
    return sorted(payload, key=lambda p: float(p["thr"]))


def read_blocks(path) -> list[dict]:
    """Blocks JSON -> block list of the first report (the pipeline default)."""
    path = Path(path)
    try:
        payload = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise FigureError(f"{path}: not valid JSON ({exc})")
    reports = payload.get("reports") if isinstance(payload, dict) else None
    if not reports:
        raise FigureError(f"{path}: no block reports found")
    blocks = reports[0].get("blocks")
    if not blocks:
        raise FigureError(f"{path}: first report has no blocks")
    return blocks


def read_edge_list(path):
    """Minimal ``u v [...]`` parser: ids and edges, weights ignored.

    Returns (ids, edges) where ids is the display order (numeric files sort
    numerically, like the CLI does) and edges hold index pairs into ids.
    """
    path = Path(path)
    seen: dict[str, None] = {}
    raw_edges: list[tuple[str, str]] = []
    with path.open() as fh:
        for lineno, line in enumerate(fh, start=1):
            body = line.strip()
            if not body or body.startswith("#"):
                continue
            parts = body.split()
            if len(parts) < 2:
                raise FigureError(f"{path}:{lineno}: expected 'u v [w]'")
            u, v = parts[0], parts[1]
            seen.setdefault(u, None)
            seen.setdefault(v, None)
            raw_edges.append((u, v))
    if not seen:
        raise FigureError(f"{path}: no edges found")

    ids = list(seen)
    try:
        ids.sort(key=int)
    except ValueError:
        pass  # non-numeric ids keep first-seen order
    index = {s: i for i, s in enumerate(ids)}
    edges = [(index[u], index[v]) for u, v in raw_edges]
    return ids, edges
