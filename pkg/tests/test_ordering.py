import numpy as np
import pytest

from hadapipe import (
    ContractError,
    Convention,
    HadamardMatrix,
    InternalInconsistencyError,
    OrderingScheme,
    Provenance,
    RowPermutation,
    ShapeError,
    SignMatrix,
    build_hadamard,
    index_ordering,
    match_rows,
    mpcgi_sequence,
    natural_sequence,
    odd_row_extract,
    rd_sequence,
    reshape_row,
    scheme_milestones,
    stretch_columns,
    thdc_mpcgi_order,
    thdc_permutation,
    thdc_rd_order,
)

from conftest import block_gram, gram_of

MPCGI = OrderingScheme.MPCGI
RD = OrderingScheme.RUSSIAN_DOLLS


def prefix_gram(seq, n):
    return gram_of([p.dense() for p in seq.items[:n]])


class TestPipelineSequences:
    def test_mpcgi_counts_and_prefix_levels(self):
        seq = mpcgi_sequence(3)
        assert len(seq) == 64 and seq.display_side == 8
        assert seq.provenance is Provenance.PIPELINE
        for t in range(4):
            prefix = seq.items[:4 ** t]
            assert {len(p.rule_path) for p in prefix} == set(range(t + 1))

    def test_mpcgi_level_zero(self):
        seq = mpcgi_sequence(0)
        assert len(seq) == 1 and (seq.items[0].dense() == 1).all()

    def test_rd_level_one_order(self):
        seq = rd_sequence(1)
        want = [[[1, 1], [1, 1]], [[1, 1], [-1, -1]],
                [[1, -1], [1, -1]], [[1, -1], [-1, 1]]]
        assert [p.dense().tolist() for p in seq.items] == want

    def test_rd_and_mpcgi_share_the_item_set(self):
        assert set(rd_sequence(3).items) == set(mpcgi_sequence(3).items)

    def test_full_sequences_are_permutations_of_natural(self):
        for level in (1, 2, 3):
            nat = set(natural_sequence(level).items)
            assert set(mpcgi_sequence(level).items) == nat
            assert set(rd_sequence(level).items) == nat

    @pytest.mark.parametrize("level", [1, 2, 3])
    def test_mpcgi_milestone_spans(self, level):
        seq = mpcgi_sequence(level)
        for t in range(level + 1):
            blk = 2 ** (level - t)
            assert np.array_equal(prefix_gram(seq, 4 ** t),
                                  block_gram(level, blk, blk))

    @pytest.mark.parametrize("level", [1, 2, 3])
    def test_rd_milestone_spans(self, level):
        seq = rd_sequence(level)
        for t in range(level + 1):
            blk = 2 ** (level - t)
            assert np.array_equal(prefix_gram(seq, 4 ** t),
                                  block_gram(level, blk, blk))
        for t in range(level):
            # vertically refined: blocks half as tall as they are wide
            assert np.array_equal(
                prefix_gram(seq, 2 * 4 ** t),
                block_gram(level, 2 ** (level - t - 1), 2 ** (level - t)))

    def test_rd_milestones_at_every_power_of_two(self):
        level = 3
        seq = rd_sequence(level)
        shapes = {1: (8, 8), 2: (4, 8), 4: (4, 4), 8: (2, 4),
                  16: (2, 2), 32: (1, 2), 64: (1, 1)}
        assert scheme_milestones(RD, level) == sorted(shapes)
        for n, (bh, bw) in shapes.items():
            assert np.array_equal(prefix_gram(seq, n), block_gram(level, bh, bw))

    def test_sequence_prefix_and_stack(self):
        seq = mpcgi_sequence(2)
        assert len(seq.prefix(4)) == 4
        assert seq.dense_stack().shape == (16, 4, 4)
        with pytest.raises(ContractError):
            seq.prefix(0)
        with pytest.raises(ContractError):
            seq.prefix(17)


class TestMatchRows:
    def test_all_ones_row(self):
        h4 = build_hadamard(2)
        ones = stretch_columns(SignMatrix(np.array([[1]], dtype=np.int8)), 4)
        assert match_rows(h4, ones) == [1]

    def test_h16_in_h64(self):
        h64 = build_hadamard(6, Convention.RIGHT)
        needles = stretch_columns(build_hadamard(4, Convention.RIGHT).body, 4)
        assert match_rows(h64, needles) == list(range(1, 62, 4))

    def test_h32_in_h64_are_odd_rows(self):
        h64 = build_hadamard(6, Convention.RIGHT)
        needles = stretch_columns(build_hadamard(5, Convention.RIGHT).body, 2)
        assert match_rows(h64, needles) == list(range(1, 64, 2))

    def test_match_failure(self):
        h4 = build_hadamard(2)
        with pytest.raises(InternalInconsistencyError):
            match_rows(h4, SignMatrix(np.array([[1, -1, 1, 1]], dtype=np.int8)))

    def test_ambiguous_haystack(self):
        hay = HadamardMatrix(SignMatrix(np.ones((2, 2), dtype=np.int8)),
                             Convention.LEFT)
        with pytest.raises(InternalInconsistencyError):
            match_rows(hay, SignMatrix(np.array([[1, 1]], dtype=np.int8)))

    def test_width_mismatch(self):
        with pytest.raises(ShapeError):
            match_rows(build_hadamard(2), SignMatrix(np.array([[1, 1]], dtype=np.int8)))


class TestThdcSearch:
    def test_level_one_identity(self):
        perm, seq = thdc_mpcgi_order(1)
        assert perm.indices == (1, 2, 3, 4)
        assert seq.items[0] == reshape_row(build_hadamard(2), 1)

    def test_mpcgi_group_structure(self):
        # frozen from the brute-force search: the all-ones row, then the rest
        # of the 2x2-resolution basis, then the 4x4-resolution remainder
        perm, _ = thdc_mpcgi_order(3)
        assert perm.indices[:4] == (1, 5, 33, 37)
        coarse22 = {8 * a + b + 1 for a in (0, 2, 4, 6) for b in (0, 2, 4, 6)}
        assert set(perm.indices[4:16]) == coarse22 - {1, 5, 33, 37}

    def test_rd_prefix_frozen(self):
        perm, _ = thdc_rd_order(3)
        assert perm.indices[:8] == (1, 33, 5, 37, 17, 21, 49, 53)

    def test_stage_needle_counts(self):
        # each search stage presents a 2^k x 64 needle matrix and matches
        # exactly 2^k rows: 16, 4, 1 at l=3
        from hadapipe.ordering import _extended_rows, _hadamard_chain, _stage_factors

        h64 = build_hadamard(6)
        chain = _hadamard_chain(3, None)
        for k, want in ((4, 16), (2, 4), (0, 1)):
            ra, rb = _stage_factors(k)
            needles = _extended_rows(chain, ra, rb, 2 ** (3 - ra), 2 ** (3 - rb), None)
            assert (needles.rows, needles.cols) == (want, 64)
            assert len(match_rows(h64, needles)) == want

    def test_search_equals_index_arithmetic(self):
        for K in (2, 4, 6):
            assert (thdc_permutation(K, MPCGI).indices
                    == index_ordering(K, MPCGI).indices)
        for K in (1, 2, 3, 5, 6):
            assert (thdc_permutation(K, RD).indices
                    == index_ordering(K, RD).indices)

    @pytest.mark.parametrize("level", [1, 2, 3])
    def test_prefix_sets_agree_with_pipeline(self, level):
        from hadapipe import generate, natural_row_index

        pipe = [natural_row_index(p.rule_path, level) for p in generate(level)]
        rd_perm = thdc_permutation(2 * level, RD)
        for j in range(2 * level + 1):
            n = 2 ** j
            assert set(pipe[:n]) == set(rd_perm.indices[:n])
        mp_perm = thdc_permutation(2 * level, MPCGI)
        for t in range(level + 1):
            n = 4 ** t
            assert set(pipe[:n]) == set(mp_perm.indices[:n])

    @pytest.mark.parametrize("level", [1, 2, 3])
    def test_thdc_sequences_hit_the_same_milestones(self, level):
        _, mp = thdc_mpcgi_order(level)
        _, rd = thdc_rd_order(level)
        for t in range(level + 1):
            blk = 2 ** (level - t)
            assert np.array_equal(prefix_gram(mp, 4 ** t), block_gram(level, blk, blk))
            assert np.array_equal(prefix_gram(rd, 4 ** t), block_gram(level, blk, blk))
        for t in range(level):
            assert np.array_equal(
                prefix_gram(rd, 2 * 4 ** t),
                block_gram(level, 2 ** (level - t - 1), 2 ** (level - t)))

    def test_thdc_item_set_is_natural(self):
        _, seq = thdc_rd_order(2)
        assert set(seq.items) == set(natural_sequence(2).items)
        assert seq.provenance is Provenance.THDC_SEARCH

    def test_mpcgi_odd_exponent_rejected(self):
        with pytest.raises(ContractError):
            thdc_permutation(3, MPCGI)


class TestIndexOrdering:
    def test_k2_mpcgi(self):
        assert index_ordering(2, MPCGI).indices == (1, 2, 3, 4)

    def test_rd_first_two(self):
        assert index_ordering(6, RD).indices[:2] == (1, 33)

    def test_row_33_is_the_stretched_h2_extra(self):
        h64 = build_hadamard(6, Convention.RIGHT)
        needles = stretch_columns(build_hadamard(1, Convention.RIGHT).body, 32)
        assert match_rows(h64, needles) == [1, 33]

    def test_parity_violation(self):
        with pytest.raises(ContractError):
            index_ordering(5, MPCGI)

    def test_natural_is_identity(self):
        assert index_ordering(3, OrderingScheme.NATURAL).indices == tuple(range(1, 9))


class TestOddRowExtract:
    def test_h8_to_h4(self):
        got = odd_row_extract(build_hadamard(3, Convention.RIGHT), 1)
        assert got.body == build_hadamard(2, Convention.RIGHT).body

    def test_h64_two_steps(self):
        got = odd_row_extract(build_hadamard(6, Convention.RIGHT), 2)
        assert got.body == build_hadamard(4, Convention.RIGHT).body

    def test_h2_to_h1(self):
        got = odd_row_extract(build_hadamard(1, Convention.RIGHT), 1)
        assert np.array_equal(got.body.dense(), [[1]])

    def test_whole_ladder(self):
        for k in range(1, 11):
            got = odd_row_extract(build_hadamard(k, Convention.RIGHT), 1)
            assert got.body == build_hadamard(k - 1, Convention.RIGHT).body

    def test_left_tag_is_equivalent(self):
        # both conventions build the same matrix, so extraction accepts both
        got = odd_row_extract(build_hadamard(4, Convention.LEFT), 1)
        assert got.body == build_hadamard(3, Convention.LEFT).body

    def test_corrupted_matrix_detected(self):
        d = build_hadamard(3).body.dense().copy()
        d[[0, 1]] = d[[1, 0]]  # swap two rows: stretched runs break
        bad = HadamardMatrix(SignMatrix(d), Convention.RIGHT)
        with pytest.raises(InternalInconsistencyError):
            odd_row_extract(bad, 1)

    def test_too_many_steps(self):
        with pytest.raises(ContractError):
            odd_row_extract(build_hadamard(1, Convention.RIGHT), 2)


class TestRowPermutation:
    def test_validates_bijection(self):
        with pytest.raises(ContractError):
            RowPermutation(4, (1, 2, 2, 4))

    def test_milestone_listing(self):
        assert scheme_milestones(MPCGI, 3) == [1, 4, 16, 64]
        assert scheme_milestones(OrderingScheme.NATURAL, 2) == [16]
