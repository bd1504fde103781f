"""Influence-spreading matrix: how strongly each node reaches each other node.

The default model enumerates every self-avoiding path of bounded length and
combines path success probabilities as independent events:

    C(s, t) = 1 - prod_P (1 - prod_{e in P} w_e)

over all self-avoiding paths P from s to t with at most ``max_path_length``
edges. This is a documented stand-in for externally computed spreading
matrices, which can be imported from CSV instead.
"""
from __future__ import annotations

import warnings
from pathlib import Path

import numpy as np

from .errors import FormatError, ParameterError, ValidationError
from .graph import Graph

DEFAULT_MAX_PATH_LENGTH = 4


class InfluenceMatrix:
    """Dense n x n matrix of directed influence probabilities, diagonal 0."""

    def __init__(self, values):
        arr = np.array(values, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise FormatError(f"influence matrix must be square, got {arr.shape}")
        if arr.size and (arr.min() < 0.0 or arr.max() > 1.0):
            raise ValidationError("influence entries must lie in [0, 1]")
        if arr.size and np.any(np.diagonal(arr) != 0.0):
            raise ValidationError("influence diagonal must be zero")
        arr.setflags(write=False)
        self.values = arr

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def __eq__(self, other):
        return isinstance(other, InfluenceMatrix) and np.array_equal(
            self.values, other.values)

    def __repr__(self):
        return f"InfluenceMatrix(n={self.n})"


def compute_influence(g: Graph, max_path_length: int = DEFAULT_MAX_PATH_LENGTH
                      ) -> InfluenceMatrix:
    """Build C(s,t) from the graph under the bounded self-avoiding-path model.

    Per source node, a depth-first walk visits every self-avoiding path of at
    most ``max_path_length`` edges; each arrival at a node t multiplies the
    running miss probability of t by (1 - P(path)).
    """
    if max_path_length < 1:
        raise ParameterError(f"max_path_length must be >= 1, got {max_path_length}")
    n = g.n_nodes
    if n == 0:
        raise ParameterError("cannot compute influence of an empty graph")
    adj = [sorted(row) for row in g.adjacency()]
    C = np.zeros((n, n), dtype=float)

    for s in range(n):
        miss = [1.0] * n
        on_path = bytearray(n)
        on_path[s] = 1

        def _walk(u, prob, depth):
            for v, w in adj[u]:
                if on_path[v]:
                    continue
                p = prob * w
                miss[v] *= 1.0 - p
                if depth + 1 < max_path_length:
                    on_path[v] = 1
                    _walk(v, p, depth + 1)
                    on_path[v] = 0

        _walk(s, 1.0, 0)
        row = 1.0 - np.asarray(miss)
        C[s, :] = row
    if not g.directed:
        # C(s,t) and C(t,s) combine the same path-weight multisets in
        # different orders; mirror the upper triangle so equality is exact
        upper = np.triu(C, 1)
        C = upper + upper.T
    np.clip(C, 0.0, 1.0, out=C)
    np.fill_diagonal(C, 0.0)
    return InfluenceMatrix(C)


def export_matrix(m: InfluenceMatrix, path) -> None:
    """Write the matrix as header-free CSV, row-major, full float precision."""
    with Path(path).open("w") as fh:
        for row in m.values:
            fh.write(",".join(format(x, ".17g") for x in row))
            fh.write("\n")


def import_matrix(path) -> InfluenceMatrix:
    """Read a CSV matrix and validate it.

    A nonzero diagonal is repaired to 0 with a warning; range violations and
    non-square shapes are errors.
    """
    path = Path(path)
    rows = []
    with path.open() as fh:
        for lineno, line in enumerate(fh, start=1):
            body = line.strip()
            if not body:
                continue
            try:
                rows.append([float(tok) for tok in body.split(",")])
            except ValueError:
                raise FormatError(f"{path}:{lineno}: non-numeric matrix entry")
    if not rows:
        raise FormatError(f"{path}: empty matrix file")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise FormatError(f"{path}: ragged rows in matrix")
    if len(rows) != width:
        raise FormatError(
            f"{path}: matrix is {len(rows)}x{width}, expected square")
    arr = np.array(rows, dtype=float)
    if arr.min() < 0.0 or arr.max() > 1.0:
        raise ValidationError(f"{path}: matrix entries outside [0, 1]")
    if np.any(np.diagonal(arr) != 0.0):
        warnings.warn(f"{path}: nonzero diagonal forced to 0")
        np.fill_diagonal(arr, 0.0)
    return InfluenceMatrix(arr)
