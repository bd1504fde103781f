"""Division scoring/ranking and signature-block extraction."""
import numpy as np
import pytest

from overlapnet import (DivisionScores, DivisionSet, ParameterError,
                        block_table, blocks_for_segment, build_blocks,
                        compute_and_rank)
from oracles import blocks_oracle, scores_oracle

# golden block structure of the bundled 7-division fixture, full segment
FIXTURE_PATTERNS = [
    ("xxxxxxx", [1, 2, 4, 8, 12, 13, 14, 18, 20, 22]),
    ("xxxxoxx", [3]),
    ("oxxxooo", [5, 6, 7, 11, 17]),
    ("xooxoox", [9, 10, 28, 31]),
    ("xoooooo", [15, 16, 19, 21, 23, 24, 27, 30, 33, 34]),
    ("xoxxoxx", [25, 26, 29, 32]),
]


def zmat(rows):
    return DivisionSet(rows)


# ---------------------------------------------------------------------------
# compute_and_rank
# ---------------------------------------------------------------------------

def test_all_ones_row_scores_matrix_total():
    rng = np.random.default_rng(3)
    M = rng.random((5, 5)) * 0.8
    np.fill_diagonal(M, 0.0)
    Z = zmat([[1, 0, 1, 0, 1], [1, 1, 1, 1, 1]])
    sc = compute_and_rank(M, Z)
    assert sc.s[0] == pytest.approx(M.sum(), abs=1e-12)


def test_zero_matrix_scores_zero():
    Z = zmat([[1, 0, 0], [0, 1, 0], [1, 1, 0]])
    sc = compute_and_rank(np.zeros((3, 3)), Z)
    assert sc.s == (0.0, 0.0)


def test_cyclic_three_node_normalized_score():
    # same-side pairs of v=(1,1,0) pick up M[0,1]+M[1,0]=1 counted from both
    # ends -> total 2; p0 = 1/3 gives divisor 5/9; s = (2 / (5/9)) / 2 = 1.8
    M = [[0, 1, 0], [0, 0, 1], [1, 0, 0]]
    Z = zmat([[1, 0, 1], [1, 1, 0]])
    sc = compute_and_rank(M, Z, normalize=True)
    assert sc.s[0] == pytest.approx(1.8, abs=1e-12)
    assert sc.normalized


def test_degenerate_rows_normalize_by_one():
    # p0 in {0, 1} makes the divisor exactly 1: same score either way
    rng = np.random.default_rng(11)
    M = rng.random((4, 4)) * 0.5
    np.fill_diagonal(M, 0.0)
    Z = zmat([[1, 0, 1, 0], [1, 1, 1, 1], [0, 0, 0, 0]])
    plain = compute_and_rank(M, Z, normalize=False)
    normed = compute_and_rank(M, Z, normalize=True)
    assert plain.s == normed.s


def test_ranking_descends_and_ties_break_low():
    M = np.array([[0.0, 0.4, 0.1], [0.4, 0.0, 0.1], [0.1, 0.1, 0.0]])
    # rows 2 and 3 are complements: identical scores by construction
    Z = zmat([[1, 1, 1], [1, 1, 0], [0, 0, 1]])
    sc = compute_and_rank(M, Z)
    assert sc.s[0] == sc.s[1]
    assert sc.pi == (1, 2)
    assert sc.ranked_divisions == (2, 3)


def test_complementing_a_row_keeps_its_score():
    rng = np.random.default_rng(23)
    M = rng.random((6, 6))
    np.fill_diagonal(M, 0.0)
    row = rng.integers(0, 2, size=6)
    Z1 = zmat([np.ones(6, dtype=int), row])
    Z2 = zmat([np.ones(6, dtype=int), 1 - row])
    assert compute_and_rank(M, Z1).s == compute_and_rank(M, Z2).s


def test_scores_invariant_under_node_relabeling():
    rng = np.random.default_rng(29)
    n = 7
    M = rng.random((n, n)) * 0.9
    np.fill_diagonal(M, 0.0)
    Z = rng.integers(0, 2, size=(3, n))
    perm = rng.permutation(n)
    sc = compute_and_rank(M, zmat(Z))
    sc_p = compute_and_rank(M[np.ix_(perm, perm)], zmat(Z[:, perm]))
    assert sc.s == pytest.approx(sc_p.s, abs=1e-10)


@pytest.mark.parametrize("normalize", [False, True])
def test_scores_match_oracle(normalize):
    rng = np.random.default_rng(57)
    for _ in range(10):
        n = int(rng.integers(2, 8))
        T = int(rng.integers(2, 6))
        M = rng.random((n, n))
        np.fill_diagonal(M, 0.0)
        Z = rng.integers(0, 2, size=(T, n))
        got = compute_and_rank(M, zmat(Z), normalize=normalize)
        want = scores_oracle(M.tolist(), Z.tolist(), normalize)
        assert got.s == pytest.approx(want, abs=1e-10)


def test_matrix_division_size_mismatch():
    with pytest.raises(ParameterError):
        compute_and_rank(np.zeros((4, 4)), zmat([[1, 0, 1], [0, 1, 1]]))


# ---------------------------------------------------------------------------
# blocks_for_segment
# ---------------------------------------------------------------------------

def test_fixture_full_segment_golden(fixture_divisions):
    ba = blocks_for_segment(fixture_divisions, 1, 7)
    assert ba.block_sizes == (10, 1, 5, 4, 10, 4)
    got = [(p.signature, [m + 1 for m in p.members]) for p in ba.blocks]
    assert got == FIXTURE_PATTERNS
    # single-node pattern xxxxoxx holds exactly node 3
    assert ba.blocks[1].members == (2,)


def test_blocks_partition_the_node_set(fixture_divisions):
    ba = blocks_for_segment(fixture_divisions, 2, 5)
    assert sum(ba.block_sizes) == 34
    seen = sorted(m for p in ba.blocks for m in p.members)
    assert seen == list(range(34))
    for j, k in enumerate(ba.a):
        assert 1 <= k <= len(ba.blocks)
        assert j in ba.blocks[k - 1].members
    sigs = [p.signature for p in ba.blocks]
    assert len(sigs) == len(set(sigs))


def test_identical_rows_collapse_to_two_blocks():
    Z = zmat([[1, 0, 1, 0], [1, 0, 1, 0], [1, 0, 1, 0]])
    ba = blocks_for_segment(Z, 1, 3)
    assert [p.signature for p in ba.blocks] == ["xxx", "ooo"]
    assert ba.block_sizes == (2, 2)


def test_two_free_rows_make_four_singletons():
    ba = blocks_for_segment(zmat([[1, 1, 0, 0], [1, 0, 1, 0]]), 1, 2)
    assert [p.signature for p in ba.blocks] == ["xx", "xo", "ox", "oo"]
    assert ba.block_sizes == (1, 1, 1, 1)


def test_matches_grouping_oracle(fixture_divisions):
    Z = fixture_divisions.Z.tolist()
    for t1, t2 in [(1, 7), (1, 1), (3, 5), (7, 7), (2, 6)]:
        ba = blocks_for_segment(fixture_divisions, t1, t2)
        want = blocks_oracle(Z, t1, t2)
        assert [(p.signature, list(p.members)) for p in ba.blocks] == \
            [(sig, mem) for sig, mem in want.items()]


def test_wider_segments_refine_narrower_ones(fixture_divisions):
    narrow = blocks_for_segment(fixture_divisions, 3, 5)
    wide = blocks_for_segment(fixture_divisions, 2, 6)
    for p in wide.blocks:
        owners = {narrow.a[j] for j in p.members}
        assert len(owners) == 1  # each wide block nests in one narrow block


@pytest.mark.parametrize("t1, t2", [(0, 3), (3, 2), (1, 8), (-1, 7)])
def test_segment_bounds_validated(fixture_divisions, t1, t2):
    with pytest.raises(ParameterError):
        blocks_for_segment(fixture_divisions, t1, t2)


# ---------------------------------------------------------------------------
# build_blocks (anchor/segment recurrence)
# ---------------------------------------------------------------------------

def test_recurrence_walks_backward_suffixes(fixture_divisions):
    # T=7, anchor rank 1 on pi[1]=6: segment_end=7, seg in 6..8,
    # rows t1 = 10-seg .. 7
    out = build_blocks(fixture_divisions, (6, 5, 4, 3, 2, 1),
                       segment_length=2, K=1)
    assert [(b.anchor, b.segment, b.t1, b.t2) for b in out] == [
        (1, 6, 4, 7), (1, 7, 3, 7), (1, 8, 2, 7)]
    for b in out:
        direct = blocks_for_segment(fixture_divisions, b.t1, b.t2)
        assert b.blocks == direct.blocks
        assert not b.clamped


def test_oversized_segment_skips_and_reports(fixture_divisions):
    diags = []
    out = build_blocks(fixture_divisions, (1, 2, 3, 4, 5, 6),
                       segment_length=4, K=1, diagnostics=diags)
    # t*=1 -> seg -1..3; t1_raw = 10-seg exceeds T until seg=3
    assert [(d["segment"], d["t1_raw"], d["event"]) for d in diags] == [
        (-1, 11, "skipped"), (0, 10, "skipped"),
        (1, 9, "skipped"), (2, 8, "skipped")]
    assert [(b.t1, b.t2) for b in out] == [(7, 7)]


def test_full_width_segment_unreachable_by_recurrence(fixture_divisions):
    # the recurrence bottoms out at t1 = 2 (anchor on the last-ranked
    # division, widest segment); row 1 only enters via blocks_for_segment
    T = fixture_divisions.T
    for first in range(1, T):
        pi = (first,) + tuple(t for t in range(1, T) if t != first)
        out = build_blocks(fixture_divisions, pi, segment_length=T, K=1)
        assert min(b.t1 for b in out) == T - first + 1 >= 2
        assert not any(b.clamped for b in out)


def test_anchor_order_follows_ranking(fixture_divisions):
    out = build_blocks(fixture_divisions, (3, 6, 1, 2, 4, 5),
                       segment_length=1, K=2)
    # rank 1 anchors t*=3 (segs 4,5), rank 2 anchors t*=6 (segs 7,8)
    assert [(b.anchor, b.segment) for b in out] == [
        (1, 4), (1, 5), (2, 7), (2, 8)]
    assert [(b.t1, b.t2) for b in out] == [(6, 7), (5, 7), (3, 7), (2, 7)]


def test_ranking_object_accepted_directly(fixture_divisions):
    sc = DivisionScores(s=(6.0, 5.0, 4.0, 3.0, 2.0, 1.0),
                        pi=(1, 2, 3, 4, 5, 6), normalized=False)
    via_obj = build_blocks(fixture_divisions, sc, segment_length=1, K=1)
    via_seq = build_blocks(fixture_divisions, (1, 2, 3, 4, 5, 6),
                           segment_length=1, K=1)
    assert via_obj == via_seq


@pytest.mark.parametrize("kwargs", [
    {"segment_length": 1, "K": 0},
    {"segment_length": 1, "K": 7},      # K > T-1
    {"segment_length": 0, "K": 1},
    {"segment_length": 1, "K": 1, "pi": (1, 2, 3)},        # wrong length
    {"segment_length": 1, "K": 1, "pi": (1, 1, 3, 4, 5, 6)},  # not a perm
])
def test_recurrence_input_validation(fixture_divisions, kwargs):
    pi = kwargs.pop("pi", (1, 2, 3, 4, 5, 6))
    with pytest.raises(ParameterError):
        build_blocks(fixture_divisions, pi, **kwargs)


# ---------------------------------------------------------------------------
# block_table
# ---------------------------------------------------------------------------

def test_block_table_lists_every_node(fixture_divisions):
    ba = blocks_for_segment(fixture_divisions, 1, 7)
    text = block_table(ba)
    lines = text.strip().split("\n")
    assert lines[0].split("\t")[:2] == ["N", "Div1"]
    assert len(lines) == 35
    row3 = lines[3].split("\t")
    assert row3[0] == "3"
    assert row3[-1] == "xxxxoxx"
    assert "".join(row3[1:-1]) == "xxxxoxx"
