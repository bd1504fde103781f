"""Weighted network loading, validation, and basic structure metrics.

Networks arrive as whitespace-separated edge lists (``u v [w]``). External
node ids may be arbitrary strings or integers; internally every node gets a
dense index 0..n-1 so that downstream matrices can be index-addressed. The
bijection between the two is kept on the :class:`Graph` and used whenever
results are written back out.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from pathlib import Path

from .errors import FormatError, ValidationError


def _all_integral(ids) -> bool:
    for s in ids:
        try:
            int(s)
        except ValueError:
            return False
    return True


@dataclass(frozen=True)
class Graph:
    """An immutable weighted network.

    Attributes:
        n_nodes: number of nodes (internal ids are 0..n_nodes-1).
        edges: tuple of (source, target, weight) in internal ids; undirected
            edges are stored once and expanded to two arcs at matrix time.
        directed: whether edges are one-way arcs.
        external_ids: internal id -> external id string.
        labels: optional external id -> display name map.
    """

    n_nodes: int
    edges: tuple[tuple[int, int, float], ...] = ()
    directed: bool = False
    external_ids: tuple[str, ...] = ()
    labels: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.external_ids and len(self.external_ids) != self.n_nodes:
            raise ValidationError("external id map does not cover every node")
        for u, v, w in self.edges:
            if u == v:
                raise ValidationError(f"self-loop on node {u}")
            if not (0.0 <= w <= 1.0):
                raise ValidationError(f"edge weight {w} outside [0, 1]")
            if not (0 <= u < self.n_nodes and 0 <= v < self.n_nodes):
                raise ValidationError("edge endpoint outside node range")

    # -- id translation ----------------------------------------------------

    def external(self, j: int):
        """External id of internal node j, as int when it looks like one."""
        s = self.external_ids[j] if self.external_ids else str(j)
        try:
            return int(s)
        except ValueError:
            return s

    def internal(self, ext) -> int:
        key = str(ext)
        try:
            return self._index[key]
        except AttributeError:
            index = {s: i for i, s in enumerate(self.external_ids)}
            object.__setattr__(self, "_index", index)
            return self._index[key]

    def label(self, j: int) -> str:
        """Display name for node j: label file entry, else external id."""
        ext = str(self.external(j))
        return self.labels.get(ext, ext)

    # -- views -------------------------------------------------------------

    def arcs(self):
        """Directed arc list; undirected edges appear in both directions."""
        for u, v, w in self.edges:
            yield u, v, w
            if not self.directed:
                yield v, u, w

    def adjacency(self):
        """adjacency()[u] = list of (v, w) for arcs u->v."""
        adj = [[] for _ in range(self.n_nodes)]
        for u, v, w in self.arcs():
            adj[u].append((v, w))
        return adj

    def undirected_neighbors(self):
        """Neighbor sets ignoring direction and weights."""
        nbrs = [set() for _ in range(self.n_nodes)]
        for u, v, _ in self.edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        return nbrs


def load_edge_list(path, default_weight, directed: bool = False,
                   labels_path=None, use_weights: bool = True) -> Graph:
    """Parse a ``u v [w]`` edge list into a :class:`Graph`.

    Lines starting with ``#`` and blank lines are skipped. When a line has
    no weight column, ``default_weight`` is used — there is deliberately no
    built-in fallback value, because detected structure depends on it.
    ``use_weights=False`` ignores the weight column entirely and applies
    ``default_weight`` everywhere: some published edge lists carry raw
    counts in that column, which are not probabilities.

    Raises:
        FormatError: unreadable line (with its line number).
        ValidationError: weight outside [0,1], self-loop, duplicate edge.
    """
    if not (0.0 <= default_weight <= 1.0):
        raise ValidationError(f"default weight {default_weight} outside [0, 1]")
    path = Path(path)
    seen_order: list[str] = []
    seen_set: set[str] = set()
    raw: list[tuple[str, str, float]] = []
    dup_check: set = set()

    with path.open() as fh:
        for lineno, line in enumerate(fh, start=1):
            body = line.strip()
            if not body or body.startswith("#"):
                continue
            parts = body.split()
            if len(parts) not in (2, 3):
                raise FormatError(
                    f"{path}:{lineno}: expected 'u v [w]', got {body!r}")
            u, v = parts[0], parts[1]
            if len(parts) == 3 and use_weights:
                try:
                    w = float(parts[2])
                except ValueError:
                    raise FormatError(
                        f"{path}:{lineno}: weight {parts[2]!r} is not a number")
            else:
                w = float(default_weight)
            if not (0.0 <= w <= 1.0):
                raise ValidationError(
                    f"{path}:{lineno}: weight {w} outside [0, 1]")
            if u == v:
                raise ValidationError(f"{path}:{lineno}: self-loop on {u!r}")
            key = (u, v) if directed else (min(u, v), max(u, v))
            if key in dup_check:
                raise ValidationError(
                    f"{path}:{lineno}: duplicate edge {u!r} {v!r}")
            dup_check.add(key)
            for node in (u, v):
                if node not in seen_set:
                    seen_set.add(node)
                    seen_order.append(node)
            raw.append((u, v, w))

    if not raw:
        warnings.warn(f"{path}: empty edge list, graph has no nodes")
        return Graph(0, (), directed, ())

    if _all_integral(seen_order):
        ordered = sorted(seen_order, key=int)
    else:
        ordered = seen_order
    index = {s: i for i, s in enumerate(ordered)}
    edges = tuple((index[u], index[v], w) for u, v, w in raw)
    labels = load_labels(labels_path) if labels_path else {}
    return Graph(len(ordered), edges, directed, tuple(ordered), labels)


def load_labels(path) -> dict[str, str]:
    """Read an ``id<TAB>name`` file into an external-id -> name map."""
    out: dict[str, str] = {}
    with Path(path).open() as fh:
        for lineno, line in enumerate(fh, start=1):
            body = line.rstrip("\n")
            if not body.strip() or body.startswith("#"):
                continue
            if "\t" not in body:
                raise FormatError(f"{path}:{lineno}: expected 'id<TAB>name'")
            ext, name = body.split("\t", 1)
            out[ext.strip()] = name.strip()
    return out


def save_edge_list(g: Graph, path) -> None:
    """Write the graph back out in the same text format (external ids)."""
    with Path(path).open("w") as fh:
        for u, v, w in g.edges:
            fh.write(f"{g.external(u)} {g.external(v)} {format(w, '.17g')}\n")


def clustering_coefficient(g: Graph) -> float:
    """Average local clustering coefficient of the undirected view.

    Nodes with degree < 2 contribute 0; the empty graph scores 0.
    """
    if g.n_nodes == 0:
        return 0.0
    nbrs = g.undirected_neighbors()
    total = 0.0
    for u in range(g.n_nodes):
        around = nbrs[u]
        k = len(around)
        if k < 2:
            continue
        listed = sorted(around)
        closed = 0
        for ai, a in enumerate(listed):
            for b in listed[ai + 1:]:
                if b in nbrs[a]:
                    closed += 1
        total += 2.0 * closed / (k * (k - 1))
    return total / g.n_nodes
