import pytest

from hadapipe import (
    AllocationCounter,
    ContractError,
    OrderingScheme,
    Traversal,
    bench_table,
    generate,
    measure_allocations,
    measure_generate,
    measure_thdc_search,
    nhpc_cost,
    thdc_cost,
)


class TestThdcCost:
    def test_frozen_census_values(self):
        # census of every matrix the search builds, frozen from brute force
        c = thdc_cost(6)
        assert (c.high_order_entries, c.low_order_entries, c.extended_entries) \
            == (4096, 85, 4032)
        assert c.total_entries == 8213

    def test_k1(self):
        # even the order-2 search stretches the chain: H_1, H_2, one 1x2 needle
        c = thdc_cost(1)
        assert (c.high_order_entries, c.low_order_entries, c.extended_entries) \
            == (4, 5, 2)

    def test_census_matches_instrumented_search(self):
        for K in (1, 2, 3, 4, 5, 6, 8):
            measured = measure_thdc_search(K).total_entries
            assert measured == thdc_cost(K).total_entries, f"K={K}"

    def test_paper_literal_formulas(self):
        c = thdc_cost(6, paper_literal=True)
        assert c.high_order_entries == 2 ** 36
        assert c.low_order_entries == sum(2 ** ((k - 1) ** 2) for k in range(1, 6))
        assert c.extended_entries == 2 ** 11

    def test_extended_ratio_to_paper_approaches_two(self):
        # the published 2^(2K-1) halves the true stage census asymptotically
        for K in (10, 16, 20):
            ratio = thdc_cost(K).extended_entries / 2 ** (2 * K - 1)
            assert abs(ratio - (2 - 2 ** (1 - K))) < 1e-12

    def test_bytes_conversions(self):
        c = thdc_cost(2)
        assert c.bytes("byte") == c.total_entries
        assert c.bytes("bit") == (c.total_entries + 7) // 8
        with pytest.raises(ContractError):
            c.bytes("nibble")

    def test_k_validation(self):
        with pytest.raises(ContractError):
            thdc_cost(0)


class TestNhpcCost:
    def test_depth_values(self):
        assert nhpc_cost(6, Traversal.DEPTH_FIRST).high_order_entries == 85
        assert nhpc_cost(2, Traversal.DEPTH_FIRST).high_order_entries == 5
        assert nhpc_cost(0, Traversal.DEPTH_FIRST).high_order_entries == 1

    def test_breadth_values(self):
        assert nhpc_cost(6, Traversal.BREADTH_FIRST).high_order_entries == 3264
        assert nhpc_cost(2, Traversal.BREADTH_FIRST).high_order_entries == 13
        assert nhpc_cost(0, Traversal.BREADTH_FIRST).high_order_entries == 1

    def test_no_transition_matrices(self):
        c = nhpc_cost(6, Traversal.BREADTH_FIRST)
        assert c.low_order_entries == 0 and c.extended_entries == 0

    def test_odd_k_rejected(self):
        with pytest.raises(ContractError):
            nhpc_cost(5)

    def test_dominance_up_to_k24(self):
        for K in range(2, 25, 2):
            total = thdc_cost(K).total_entries
            assert nhpc_cost(K, Traversal.BREADTH_FIRST).total_entries < total
            assert nhpc_cost(K, Traversal.DEPTH_FIRST).total_entries < total


class TestInstrumentation:
    @pytest.mark.parametrize("level", [0, 1, 2, 3])
    def test_measured_peaks_match_model(self, level):
        K = 2 * level
        for trav in Traversal:
            measured = measure_generate(level, trav).peak_entries
            assert measured == nhpc_cost(K, trav).high_order_entries

    def test_depth_peak_l3_is_85(self):
        c = measure_generate(3, Traversal.DEPTH_FIRST)
        assert c.peak_entries == 85
        assert c.current_entries == 0  # everything released at exhaustion

    def test_breadth_peak_l3_is_3264(self):
        assert measure_generate(3, Traversal.BREADTH_FIRST).peak_entries == 3264

    def test_empty_run(self):
        with measure_allocations() as c:
            pass
        assert c.peak_entries == 0 and c.total_entries == 0

    def test_thdc_peak_dominates_high_column(self):
        c = measure_thdc_search(6)
        assert c.peak_entries >= thdc_cost(6).high_order_entries

    def test_counter_invariants(self):
        c = AllocationCounter()
        c.add(5)
        c.add(3)
        c.remove(4)
        assert c.peak_entries == 8 and c.current_entries == 4
        assert c.total_entries == 8
        assert c.peak_entries >= c.current_entries

    def test_nested_measures(self):
        with measure_allocations() as outer:
            for _ in generate(1):
                pass
            with measure_allocations() as inner:
                for _ in generate(1):
                    pass
        assert inner.peak_entries == 13
        assert outer.total_entries == 2 * inner.total_entries


class TestBenchTable:
    def test_rows_and_measurements(self):
        rows = bench_table(6)
        assert [r.K for r in rows] == [2, 4, 6]
        for r in rows:
            assert r.measured_breadth_peak == r.nhpc_breadth_peak
            assert r.measured_depth_peak == r.nhpc_depth_peak
            assert r.measured_thdc_total == r.thdc_total
            assert r.nhpc_depth_peak < r.thdc_total

    def test_max_k_validation(self):
        with pytest.raises(ContractError):
            bench_table(1)
