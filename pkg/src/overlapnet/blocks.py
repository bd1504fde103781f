"""Building blocks: score divisions, rank them, group nodes by signature.

A node's signature over a segment of divisions is the string of its
membership characters (``x``/``o``), one per division row. Nodes sharing a
signature form a block; blocks partition the node set. Segments are chosen
around top-ranked divisions by the anchor/segment recurrence implemented in
:func:`build_blocks`, or given explicitly to :func:`blocks_for_segment`
(the full-width segment ``t1=1, t2=T`` is only reachable that way).
"""
from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .influence import InfluenceMatrix
from .partition import DivisionSet


@dataclass(frozen=True)
class DivisionScores:
    """Per-division agreement scores and their descending ranking.

    ``s[t-1]`` scores division t+1 (division 1 is never scored; the scoring
    recurrence starts from the second row). ``pi`` is a permutation of
    1..T-1 ordering those score indices by descending score, ties broken by
    the smaller index.
    """

    s: tuple[float, ...]
    pi: tuple[int, ...]
    normalized: bool

    @property
    def ranked_divisions(self) -> tuple[int, ...]:
        """Division numbers (2..T) in rank order, for reporting."""
        return tuple(t + 1 for t in self.pi)


@dataclass(frozen=True)
class Pattern:
    """A block: the nodes sharing one membership signature."""

    signature: str
    members: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class BlockAssignment:
    """Blocks of one (anchor, segment) pass over division rows t1..t2.

    ``a[j]`` is the 1-based block index of node j; ``clamped`` records that
    the segment recurrence produced t1 < 1 and was clipped to the valid
    range. Direct segment requests carry anchor=0, segment=0.
    """

    anchor: int
    segment: int
    t1: int
    t2: int
    clamped: bool
    blocks: tuple[Pattern, ...]
    a: tuple[int, ...]
    block_sizes: tuple[int, ...]

    @property
    def n_nodes(self) -> int:
        return len(self.a)


def _matrix(M) -> np.ndarray:
    return M.values if isinstance(M, InfluenceMatrix) else np.asarray(M, float)


def compute_and_rank(M, Z: DivisionSet, normalize: bool = False
                     ) -> DivisionScores:
    """Score divisions 2..T by same-side agreement weight and rank them.

    For score index t (1..T-1) with v = row t+1:

        total = sum_ij (M_ij + M_ji) * [v_i v_j + (1-v_i)(1-v_j)]

    optionally divided by 1 - 2*p0*(1-p0) where p0 is the fraction of zeros
    in v (the divisor is 1 at p0 in {0,1} and never smaller than 1/2, so
    normalization cannot divide by zero); the stored score is total/2 to
    undo the symmetric double count.
    """
    V = _matrix(M)
    if Z.T < 2:
        raise ParameterError("scoring needs at least 2 divisions")
    if V.shape[0] != Z.N:
        raise ParameterError(
            f"matrix is {V.shape[0]}x{V.shape[0]} but divisions have N={Z.N}")
    R = V + V.T
    N = Z.N
    s = []
    for t in range(1, Z.T):
        v = Z.Z[t].astype(float)
        agree = np.outer(v, v) + np.outer(1.0 - v, 1.0 - v)
        total = float((R * agree).sum())
        if normalize:
            p0 = (N - v.sum()) / N
            total /= 1.0 - 2.0 * p0 * (1.0 - p0)
        s.append(total / 2.0)
    pi = tuple(sorted(range(1, Z.T), key=lambda t: (-s[t - 1], t)))
    return DivisionScores(tuple(s), pi, normalized=bool(normalize))


def blocks_for_segment(Z: DivisionSet, t1: int, t2: int, *, anchor: int = 0,
                       segment: int = 0, clamped: bool = False
                       ) -> BlockAssignment:
    """Group nodes by their signature over division rows t1..t2 (1-based).

    Blocks are numbered in first-encounter order scanning nodes by ascending
    id, so the assignment vector and the block list are deterministic.
    """
    if not (1 <= t1 <= t2 <= Z.T):
        raise ParameterError(
            f"segment rows {t1}..{t2} outside the division range 1..{Z.T}")
    sub = Z.Z[t1 - 1:t2]
    groups: "OrderedDict[str, list[int]]" = OrderedDict()
    for j in range(Z.N):
        sig = "".join("x" if b else "o" for b in sub[:, j])
        groups.setdefault(sig, []).append(j)
    blocks = tuple(Pattern(sig, tuple(members))
                   for sig, members in groups.items())
    a = [0] * Z.N
    for idx, pat in enumerate(blocks, start=1):
        for j in pat.members:
            a[j] = idx
    return BlockAssignment(anchor, segment, t1, t2, clamped, blocks,
                           tuple(a), tuple(p.size for p in blocks))


def build_blocks(Z: DivisionSet, pi, segment_length: int, K: int,
                 diagnostics: list | None = None) -> list[BlockAssignment]:
    """Run the anchor/segment recurrence over the top-K ranked divisions.

    ``pi`` may be a DivisionScores or a plain ranking sequence. For anchor
    rank r the recurrence takes t* = pi[r], segment_end = t* + 1 and walks
    seg over segment_end-segment_length+1 .. segment_end+1; each seg selects
    rows t1 = T-seg+3 .. t2 = T. Values of t1 above t2 make an empty
    segment: it is skipped and recorded in ``diagnostics``; t1 below 1 is
    clamped to 1 and the result carries ``clamped=True``.
    """
    if isinstance(pi, DivisionScores):
        pi = pi.pi
    T = Z.T
    if not 1 <= K <= T - 1:
        raise ParameterError(f"K must be within 1..{T - 1}, got {K}")
    if segment_length < 1:
        raise ParameterError(f"segment_length must be >= 1, got {segment_length}")
    if len(pi) != T - 1 or sorted(pi) != list(range(1, T)):
        raise ParameterError("pi must be a permutation of 1..T-1")

    out = []
    for r in range(1, K + 1):
        t_star = pi[r - 1]
        segment_end = t_star + 1
        for seg in range(segment_end - segment_length + 1, segment_end + 2):
            t1_raw = T - seg + 3
            t2 = T
            if t1_raw > t2:
                if diagnostics is not None:
                    diagnostics.append(
                        {"anchor": r, "segment": seg, "t1_raw": t1_raw,
                         "event": "skipped"})
                continue
            clamped = t1_raw < 1
            t1 = max(t1_raw, 1)
            if clamped and diagnostics is not None:
                diagnostics.append(
                    {"anchor": r, "segment": seg, "t1_raw": t1_raw,
                     "event": "clamped"})
            out.append(blocks_for_segment(Z, t1, t2, anchor=r, segment=seg,
                                          clamped=clamped))
    return out


def block_table(assignment: BlockAssignment, ids=None) -> str:
    """Plain-text table: one row per node, signature characters spelled out.

    ``ids`` supplies display ids per node; default is 1-based positions.
    """
    n = assignment.n_nodes
    if ids is None:
        ids = [str(j + 1) for j in range(n)]
    width = assignment.t2 - assignment.t1 + 1
    head = ["N"] + [f"Div{t}" for t in range(assignment.t1, assignment.t2 + 1)]
    head.append("Pattern")
    lines = ["\t".join(head)]
    sig_of = {j: assignment.blocks[assignment.a[j] - 1].signature
              for j in range(n)}
    for j in range(n):
        sig = sig_of[j]
        assert len(sig) == width
        lines.append("\t".join([str(ids[j]), *sig, sig]))
    return "\n".join(lines) + "\n"
