"""Threshold rule separating genuine overlapping nodes from noise.

Each building block is compared against every community by relative size:
block size S matches community size T1 when |T1 - S| / S (or the same ratio
against the community's complement side, |(N - T1) - S| / S) stays within
the threshold. Nodes of blocks that match no community are the overlapping
set O. Raising the threshold only ever shrinks O.

Communities can come from three places: a partition-style per-node
assignment, an explicit size list, or a :class:`~overlapnet.partition.DivisionSet`
— in the last case every division contributes its member side as one
community (the complement side is covered by the second ratio test).
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .blocks import BlockAssignment
from .errors import (DimensionError, FormatError, ParameterError,
                     UndefinedRatioError)
from .partition import DivisionSet

MODES = ("strict", "non-strict")
ACCUMULATIONS = ("after-scan", "at-own-index")


@dataclass(frozen=True)
class CommunityAssignment:
    """Partition-style community labelling: node j belongs to community c[j]."""

    c: tuple[int, ...]
    K: int

    def __post_init__(self):
        if self.K < 1:
            raise ParameterError(f"K must be >= 1, got {self.K}")
        for j, label in enumerate(self.c):
            if not 1 <= label <= self.K:
                raise ParameterError(
                    f"node {j} has community label {label} outside 1..{self.K}")

    @property
    def comm_size(self) -> tuple[int, ...]:
        counts = [0] * self.K
        for label in self.c:
            counts[label - 1] += 1
        return tuple(counts)

    @classmethod
    def from_labels(cls, labels) -> "CommunityAssignment":
        labels = tuple(int(x) for x in labels)
        return cls(labels, max(labels) if labels else 1)


@dataclass(frozen=True)
class OverlapResult:
    """Outcome of one threshold evaluation."""

    thr: float
    gamma: tuple[int, ...]        # +1 matched / -1 unmatched, one per block
    o: tuple[int, ...]            # 0/1 accumulator per node
    O: frozenset[int]             # overlapping nodes (internal ids)
    mode: str = "strict"
    accumulation: str = "after-scan"

    @property
    def size_O(self) -> int:
        return len(self.O)


def ratio(community_size: int, intersection_size: int) -> float:
    """Relative size of a community against an intersection nested in it."""
    if intersection_size < 1:
        raise UndefinedRatioError(
            "intersection is empty; treat empty intersections as vacuous"
            " matches instead of calling ratio()")
    return community_size / intersection_size


def community_sizes(communities, n_nodes: int) -> tuple[int, ...]:
    """Normalize any accepted community input into a size vector.

    DivisionSet rows count their member side; CommunityAssignment counts
    labels; a bare iterable is taken as sizes directly.
    """
    if isinstance(communities, CommunityAssignment):
        if len(communities.c) != n_nodes:
            raise DimensionError(
                f"assignment covers {len(communities.c)} nodes, blocks cover"
                f" {n_nodes}")
        return communities.comm_size
    if isinstance(communities, DivisionSet):
        if communities.N != n_nodes:
            raise DimensionError(
                f"divisions cover {communities.N} nodes, blocks cover {n_nodes}")
        return tuple(int(row.sum()) for row in communities.Z)
    sizes = tuple(int(x) for x in communities)
    if not sizes:
        raise ParameterError("empty community list")
    for sz in sizes:
        if not 0 <= sz <= n_nodes:
            raise ParameterError(f"community size {sz} outside 0..{n_nodes}")
    return sizes


def evaluate_communities(communities, block_assign: BlockAssignment,
                         thr: float, mode: str = "strict",
                         accumulation: str = "after-scan") -> OverlapResult:
    """Flag every block matched/unmatched and collect the overlapping set.

    mode "strict" matches when a size ratio is <= thr (the default; "strict"
    refers to the no-match comparison being strictly-greater). "non-strict"
    matches on < only, which can never match at thr = 0.

    accumulation "after-scan" adds a block's nodes to O once no community
    has matched it; "at-own-index" is the literal variant that adds them
    already when community b = k fails, even if a later community matches.
    """
    if thr < 0:
        raise ParameterError(f"thr must be >= 0, got {thr}")
    if mode not in MODES:
        raise ParameterError(f"mode must be one of {MODES}, got {mode!r}")
    if accumulation not in ACCUMULATIONS:
        raise ParameterError(
            f"accumulation must be one of {ACCUMULATIONS}, got {accumulation!r}")
    n = block_assign.n_nodes
    sizes = community_sizes(communities, n)

    gamma = []
    o = [0] * n
    for k, pat in enumerate(block_assign.blocks, start=1):
        S = pat.size
        if S == 0:
            gamma.append(1)
            continue
        flag = -1
        for b, T1 in enumerate(sizes, start=1):
            r1 = abs(T1 - S) / S
            r2 = abs((n - T1) - S) / S
            if mode == "strict":
                matched = r1 <= thr or r2 <= thr
            else:
                matched = r1 < thr or r2 < thr
            if matched:
                flag = 1
                break
            if accumulation == "at-own-index" and b == k:
                for j in pat.members:
                    o[j] = 1
        if accumulation == "after-scan" and flag == -1:
            for j in pat.members:
                o[j] = 1
        gamma.append(flag)
    O = frozenset(j for j, hit in enumerate(o) if hit)
    return OverlapResult(float(thr), tuple(gamma), tuple(o), O,
                         mode=mode, accumulation=accumulation)


def threshold_sweep(communities, block_assign: BlockAssignment, thresholds,
                    mode: str = "strict", accumulation: str = "after-scan"
                    ) -> list[tuple[float, OverlapResult]]:
    """Evaluate each threshold independently; thresholds strictly ascending."""
    thresholds = [float(t) for t in thresholds]
    if not thresholds:
        raise ParameterError("threshold list is empty")
    for a, b in zip(thresholds, thresholds[1:]):
        if not a < b:
            raise ParameterError(
                f"thresholds must be strictly ascending, got {a} before {b}")
    return [(t, evaluate_communities(communities, block_assign, t, mode=mode,
                                     accumulation=accumulation))
            for t in thresholds]


def load_communities(path, index=None) -> CommunityAssignment:
    """Read a partition file: one label per line, or ``id label`` rows.

    Single-column files assign labels in node order. Two-column files name
    nodes by external id and need ``index`` (external id string -> internal
    id) to place them; every node must appear exactly once.
    """
    path = Path(path)
    rows = []
    with path.open() as fh:
        for lineno, line in enumerate(fh, start=1):
            body = line.strip()
            if not body or body.startswith("#"):
                continue
            parts = body.split()
            if len(parts) not in (1, 2):
                raise FormatError(
                    f"{path}:{lineno}: expected 'label' or 'id label'")
            try:
                label = int(parts[-1])
            except ValueError:
                raise FormatError(
                    f"{path}:{lineno}: community label {parts[-1]!r} is not"
                    " an integer")
            rows.append((parts[0] if len(parts) == 2 else None, label, lineno))
    if not rows:
        raise FormatError(f"{path}: empty community file")

    if all(ext is None for ext, _, _ in rows):
        return CommunityAssignment.from_labels([label for _, label, _ in rows])
    if any(ext is None for ext, _, _ in rows):
        raise FormatError(f"{path}: mixed one- and two-column rows")
    if index is None:
        raise ParameterError(
            f"{path} names nodes by id; a graph is required to map them")
    placed: list[int | None] = [None] * len(index)
    for ext, label, lineno in rows:
        if ext not in index:
            raise FormatError(f"{path}:{lineno}: unknown node id {ext!r}")
        j = index[ext]
        if placed[j] is not None:
            raise FormatError(f"{path}:{lineno}: node {ext!r} listed twice")
        placed[j] = label
    missing = sum(1 for x in placed if x is None)
    if missing:
        raise FormatError(f"{path}: {missing} node(s) have no community label")
    return CommunityAssignment.from_labels(placed)
