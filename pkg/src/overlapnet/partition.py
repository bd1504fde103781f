"""Bipartition quality and local search for network divisions.

A division splits the node set into two factions. Its quality is the sum of
influence probabilities over ordered same-side pairs, both sides counted:

    q(m) = sum_{s!=t, m_s=m_t=1} C(s,t) + sum_{s!=t, m_s=m_t=0} C(s,t)

q is complement-invariant and is trivially maximized by putting every node on
one side, so the search space is restricted to proper bipartitions: a flip
that would empty a side is not a legal move, and returned divisions are
1-flip local maxima within that space.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (DegenerateStructureError, DimensionError, FormatError,
                     ParameterError)
from .influence import InfluenceMatrix

DEFAULT_MAX_ITERS = 10_000
_IMPROVE_TOL = 1e-12


def _values(C) -> np.ndarray:
    return C.values if isinstance(C, InfluenceMatrix) else np.asarray(C, float)


@dataclass(frozen=True)
class Division:
    """One bipartition: membership indicator per node, plus how it was found."""

    membership: tuple[int, ...]
    q_value: float
    seed: int | None = None
    converged: bool = True

    @property
    def n(self) -> int:
        return len(self.membership)


class DivisionSet:
    """T binary membership rows over the same N nodes (the matrix Z)."""

    def __init__(self, Z, divisions=None):
        arr = np.array(Z, dtype=np.uint8)
        if arr.ndim != 2:
            raise FormatError("division matrix must be 2-D")
        if arr.shape[0] < 2:
            raise ParameterError(
                f"need at least 2 divisions, got {arr.shape[0]}")
        if arr.size and not np.all((arr == 0) | (arr == 1)):
            raise FormatError("division entries must be 0/1")
        arr.setflags(write=False)
        self.Z = arr
        self.divisions = tuple(divisions) if divisions else None

    @property
    def T(self) -> int:
        return self.Z.shape[0]

    @property
    def N(self) -> int:
        return self.Z.shape[1]

    def row(self, t: int) -> np.ndarray:
        """Division t, 1-based to match the Div1..DivT naming convention."""
        if not 1 <= t <= self.T:
            raise ParameterError(f"division index {t} outside 1..{self.T}")
        return self.Z[t - 1]

    def __eq__(self, other):
        return isinstance(other, DivisionSet) and np.array_equal(self.Z, other.Z)

    def __repr__(self):
        return f"DivisionSet(T={self.T}, N={self.N})"


def quality(C, membership) -> float:
    """Eq-style pair sum over both sides; see module docstring."""
    V = _values(C)
    m = np.asarray(membership, dtype=float)
    if m.ndim != 1 or m.shape[0] != V.shape[0]:
        raise DimensionError(
            f"membership length {m.shape} does not match matrix n={V.shape[0]}")
    inv = 1.0 - m
    return float(m @ V @ m + inv @ V @ inv)


def local_search(C, seed: int, max_iters: int = DEFAULT_MAX_ITERS) -> Division:
    """Steepest-ascent single-flip search from a random proper bipartition.

    Ties between equally improving flips break on the lowest node id. Stops
    when no legal flip improves q by more than 1e-12; if ``max_iters`` flips
    happen first, the best-so-far membership is returned with
    ``converged=False``.
    """
    V = _values(C)
    n = V.shape[0]
    if n < 2:
        raise ParameterError("local search needs at least 2 nodes")
    rng = np.random.default_rng(seed)
    m = rng.integers(0, 2, size=n, dtype=np.int64)
    while not 0 < int(m.sum()) < n:
        m = rng.integers(0, 2, size=n, dtype=np.int64)

    R = V + V.T
    row_tot = R.sum(axis=1)
    rm = R @ m
    converged = False
    for _ in range(max_iters):
        delta = (2 * m - 1) * (row_tot - 2.0 * rm)
        ones = int(m.sum())
        if ones == 1:
            delta = np.where(m == 1, -np.inf, delta)
        if ones == n - 1:
            delta = np.where(m == 0, -np.inf, delta)
        j = int(np.argmax(delta))
        if not delta[j] > _IMPROVE_TOL:
            converged = True
            break
        if m[j]:
            m[j] = 0
            rm = rm - R[:, j]
        else:
            m[j] = 1
            rm = rm + R[:, j]
    else:
        converged = False

    membership = tuple(int(x) for x in m)
    return Division(membership, quality(C, membership), seed=seed,
                    converged=converged)


def _canonical(membership: tuple[int, ...]) -> tuple[int, ...]:
    # a division and its complement are the same split; fix node 0 to side 1
    if membership[0] == 1:
        return membership
    return tuple(1 - x for x in membership)


def generate_divisions(C, n_seeds: int, base_seed: int = 0,
                       max_iters: int = DEFAULT_MAX_ITERS) -> DivisionSet:
    """Run local_search from seeds base_seed .. base_seed+n_seeds-1.

    Results are canonicalized (node 0 on side 'x'), deduplicated, and sorted
    by descending q then membership, so the outcome is a deterministic
    function of (C, n_seeds, base_seed).

    Raises DegenerateStructureError when fewer than two distinct divisions
    remain — try more seeds or different link weights.
    """
    if n_seeds < 2:
        raise ParameterError(f"n_seeds must be >= 2, got {n_seeds}")
    found: dict[tuple[int, ...], Division] = {}
    for i in range(n_seeds):
        d = local_search(C, base_seed + i, max_iters=max_iters)
        mem = _canonical(d.membership)
        if mem not in found:
            found[mem] = Division(mem, quality(C, mem), seed=d.seed,
                                  converged=d.converged)
    if len(found) < 2:
        raise DegenerateStructureError(
            "only %d distinct division(s) found; try more seeds or different"
            " link weights" % len(found))
    ordered = sorted(found.values(), key=lambda d: (-d.q_value, d.membership))
    Z = np.array([d.membership for d in ordered], dtype=np.uint8)
    return DivisionSet(Z, divisions=ordered)


_CHAR_TO_BIT = {"x": 1, "X": 1, "1": 1, "o": 0, "O": 0, "0": 0}


def import_divisions(path, transpose: bool = False) -> DivisionSet:
    """Read a division file verbatim: no dedup, no canonicalization.

    Native orientation is one row per division over N nodes, characters from
    {x,o} or {1,0} (spaces inside a row are ignored). ``transpose=True``
    accepts the table orientation instead: one row per node, one column per
    division.
    """
    path = Path(path)
    rows: list[list[int]] = []
    with path.open() as fh:
        for lineno, line in enumerate(fh, start=1):
            body = line.strip()
            if not body or body.startswith("#"):
                continue
            try:
                rows.append([_CHAR_TO_BIT[ch] for ch in body if not ch.isspace()])
            except KeyError as exc:
                raise FormatError(
                    f"{path}:{lineno}: unexpected symbol {exc.args[0]!r},"
                    " expected x/o or 1/0")
    if not rows:
        raise FormatError(f"{path}: empty division file")
    width = len(rows[0])
    for i, r in enumerate(rows, start=1):
        if len(r) != width:
            raise FormatError(
                f"{path}: row {i} has {len(r)} symbols, expected {width}")
    Z = np.array(rows, dtype=np.uint8)
    if transpose:
        Z = Z.T
    return DivisionSet(Z)


def export_divisions(ds: DivisionSet, path) -> None:
    """Write one x/o row per division."""
    with Path(path).open("w") as fh:
        for row in ds.Z:
            fh.write("".join("x" if b else "o" for b in row))
            fh.write("\n")
