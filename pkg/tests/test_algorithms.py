"""Tests for search networks, comparison gadgets, and the ordered-input reduction."""

import math

import numpy as np
import pytest

from querylab.algorithms import (
    CleanWrapReport,
    ComparisonResult,
    ReductionConfig,
    binary_search_network,
    clean_wrap,
    compare_leq,
    compare_leq_success_rate,
    comparison_bit,
    exact_comparison_gate,
    find_leftmost_difference,
    grover_acceptance,
    grover_error,
    grover_network,
    grover_promise_error,
    index_bit,
    leftmost_round_network,
    majority_comparison_network,
    majority_repetitions,
    ordered_instance,
    ordered_oracle_gate,
    ordered_search_network,
    ordered_search_reduction,
    superposition_error_bound_check,
    verify_ordered_gate,
)
from querylab.simcore import (
    BitOracle,
    OracleGate,
    QueryNetwork,
    SimulationError,
    acceptance_probability,
    bit_probability,
    rotation_layer,
    run_network,
)
from querylab.algorithms import _leftmost_trials, _position_space


# ---------------------------------------------------------------------------
# unstructured search


def test_grover_query_count_is_iterations_plus_verification():
    for N in (2, 4, 8):
        for T in range(4):
            assert grover_network(N, T).query_count == T + 1


def test_grover_simulation_matches_closed_form_everywhere():
    for N in (2, 4, 8, 16):
        for T in range(5):
            net = grover_network(N, T)
            for t in range(N + 1):
                x = BitOracle.of_weight(N, t) if t else BitOracle.all_zero(N)
                p = acceptance_probability(net, x)
                assert p == pytest.approx(grover_acceptance(N, t, T), abs=1e-12)


def test_grover_rejects_all_zero_input_exactly():
    for T in range(4):
        net = grover_network(8, T)
        assert acceptance_probability(net, BitOracle.all_zero(8)) == pytest.approx(0.0, abs=1e-12)
        assert grover_acceptance(8, 0, T) == 0.0


def test_grover_frozen_values():
    assert grover_acceptance(4, 1, 1) == pytest.approx(1.0, abs=1e-12)
    assert grover_error(4, 1, 1) == pytest.approx(0.0, abs=1e-12)
    assert grover_error(4, 1, 0) == pytest.approx(0.75, abs=1e-12)
    assert grover_error(8, 1, 0) == pytest.approx(0.875, abs=1e-12)
    assert grover_acceptance(2, 0, 1) == 0.0
    assert grover_acceptance(2, 1, 1) == pytest.approx(0.5, abs=1e-12)
    assert grover_acceptance(2, 2, 1) == pytest.approx(1.0, abs=1e-12)


def test_half_weight_acceptance_is_one_half_for_every_iteration_count():
    # at t = N/2 the rotation angle is pi/2 per step, so acceptance stays 1/2
    for N in (4, 8, 16):
        for T in range(6):
            assert grover_acceptance(N, N // 2, T) == pytest.approx(0.5, abs=1e-12)


def test_promise_error_dominates_single_weight_error():
    for N in (8, 16):
        for t in range(1, N + 1):
            for T in range(4):
                assert (
                    grover_promise_error(N, t, T) >= grover_error(N, t, T) - 1e-12
                )


def test_promise_error_frozen_overshoot_case():
    # T=2 on N=16: exact at t=1..ish weights but badly wrong at weight 6
    assert grover_error(16, 1, 2) == pytest.approx(0.091552734375, abs=1e-9)
    assert grover_promise_error(16, 1, 2) == pytest.approx(0.9765625, abs=1e-9)
    k_errs = [1.0 - grover_acceptance(16, k, 2) for k in range(1, 17)]
    assert max(k_errs) == pytest.approx(grover_promise_error(16, 1, 2), abs=1e-12)
    assert int(np.argmax(k_errs)) + 1 == 6


def test_grover_validation():
    with pytest.raises(SimulationError):
        grover_network(6, 1)
    with pytest.raises(SimulationError):
        grover_network(8, -1)
    with pytest.raises(SimulationError):
        grover_acceptance(8, 9, 1)


# ---------------------------------------------------------------------------
# ordered instances


def test_ordered_instance_views():
    inst = ordered_instance(8, 5)
    assert inst.Y.bits == (1, 0, 1)  # binary digits of 5, most significant first
    assert inst.X.bits == (1, 1, 1, 1, 1, 1, 0, 0)  # x_j = [j <= 5]
    # digits decode back to the hidden index
    assert sum(b << (3 - 1 - p) for p, b in enumerate(inst.Y.bits)) == 5
    for j in range(8):
        assert inst.X.bits[j] == comparison_bit(j, 5)


def test_index_bit_is_most_significant_first():
    assert [index_bit(0b110, p, 3) for p in range(3)] == [1, 1, 0]


def test_ordered_instance_validation():
    with pytest.raises(SimulationError):
        ordered_instance(8, 8)
    with pytest.raises(SimulationError):
        ordered_instance(12, 3)


# ---------------------------------------------------------------------------
# coherent comparison gates


def test_exact_comparison_gate_has_zero_residual_for_all_inputs():
    N = 8
    gate = exact_comparison_gate(N)
    assert gate.query_count == 2 * 3
    assert gate.num_qubits == 9
    for i in range(N):
        report = verify_ordered_gate(gate, ordered_instance(N, i), eta=0.05)
        assert report["max_residual"] == pytest.approx(0.0, abs=1e-12)
        assert report["ok"]


def test_majority_comparator_error_matches_binomial_prediction():
    N, copies, detuning = 8, 3, 0.075
    inst = ordered_instance(N, 5)
    inner = majority_comparison_network(N, copies, detuning)
    expected = [comparison_bit(j, 5) for j in range(N)]
    _, report = clean_wrap(inner, target_qubit=3, oracle=inst.Y, expected_bits=expected)
    p = math.sin(detuning) ** 2
    predicted = sum(
        math.comb(copies, k) * p**k * (1 - p) ** (copies - k)
        for k in range(copies // 2 + 1, copies + 1)
    )
    assert report.epsilon_measured == pytest.approx(predicted, rel=1e-6)
    assert report.max_residual <= report.residual_bound + 1e-9
    assert report.ok
    assert report.wrapped_queries == 2 * report.inner_queries
    assert report.inner_queries == copies * 2 * 3


def test_clean_wrap_residuals_shrink_with_more_copies():
    N, detuning = 8, 0.3
    inst = ordered_instance(N, 2)
    expected = [comparison_bit(j, 2) for j in range(N)]
    eps = []
    for copies in (1, 3, 5):
        inner = majority_comparison_network(N, copies, detuning)
        _, report = clean_wrap(inner, target_qubit=3, oracle=inst.Y, expected_bits=expected)
        assert report.ok
        eps.append(report.epsilon_measured)
    assert eps[0] > eps[1] > eps[2]
    assert eps[0] == pytest.approx(math.sin(detuning) ** 2, rel=1e-9)


def test_majority_comparator_rejects_even_copy_counts():
    with pytest.raises(SimulationError):
        majority_comparison_network(8, copies=2)
    with pytest.raises(SimulationError):
        majority_comparison_network(16, copies=5)  # would need 16 qubits


def test_verify_reports_failure_without_masking_it():
    # a wildly detuned gate misses the per-gate residual target; the report
    # says so instead of raising or clamping
    cfg = ReductionConfig(eta=0.05, detuning=0.7, mode="noisy")
    gate, info = ordered_oracle_gate(8, cfg)
    assert not info["meets_target"]
    report = verify_ordered_gate(gate, ordered_instance(8, 3), eta=cfg.eta)
    assert not report["ok"]
    assert report["max_residual"] > report["per_gate_target"]


# ---------------------------------------------------------------------------
# binary search and the substitution


def test_binary_search_recovers_every_index_exactly():
    for N in (4, 8, 16):
        n = N.bit_length() - 1
        net = binary_search_network(N)
        assert net.query_count == n
        for i in range(N):
            inst = ordered_instance(N, i)
            state = run_network(net, inst.X)
            # the final state is |j=0, r=i> with certainty
            assert abs(state.amplitudes[i << n]) == pytest.approx(1.0, abs=1e-12)


def test_ordered_oracle_gate_auto_mode_selection():
    gate8, info8 = ordered_oracle_gate(8, ReductionConfig(eta=0.05))
    assert info8["mode"] == "noisy"
    assert info8["meets_target"]
    assert info8["queries_per_gate"] == 36  # wrapped majority of three scans
    # at N=16 the embedded noisy comparator would exceed the register cap,
    # so automatic selection falls back to the exact scan gate
    gate16, info16 = ordered_oracle_gate(16, ReductionConfig(eta=0.05))
    assert info16["mode"] == "exact"
    assert info16["queries_per_gate"] == 8
    assert info16["predicted_epsilon"] == 0.0


def test_substituted_search_queries_only_the_digit_register():
    net, info = ordered_search_network(8, ReductionConfig(eta=0.05))
    n, w = 3, 2
    probe = tuple(range(2 * n, 2 * n + w))
    for layer in net.layers:
        if isinstance(layer, OracleGate):
            # every query addresses a digit position through the shared
            # scan probe register, never the threshold input
            assert layer.index_qubits == probe
    # a 3-bit digit oracle drives the whole network
    run_network(net, ordered_instance(8, 6).Y)
    assert info["total_queries"] == n * info["queries_per_gate"]


def test_reduction_meets_budgets_at_N8_with_noisy_gate():
    cfg = ReductionConfig(eta=0.05)
    report = ordered_search_reduction(8, cfg)
    assert report.info["mode"] == "noisy"
    assert report.all_ok
    for row in report.rows:
        assert row["recovery_probability"] >= cfg.recovery_target
        assert row["deviation"] <= math.sqrt(2) * cfg.eta + 1e-9
        assert row["max_gate_residual"] <= cfg.eta / 3 + 1e-9
        assert row["recovered_index"] == row["i"]
        assert row["digit_parity"] == bin(row["i"]).count("1") % 2
        assert row["total_queries"] == 108


def test_reduction_is_exact_at_N16():
    report = ordered_search_reduction(16, ReductionConfig(eta=0.05))
    assert report.info["mode"] == "exact"
    assert report.all_ok
    for row in report.rows:
        assert row["recovery_probability"] == pytest.approx(1.0, abs=1e-12)
        assert row["deviation"] == pytest.approx(0.0, abs=1e-9)
        assert row["total_queries"] == 32


def test_reduction_config_validation():
    with pytest.raises(SimulationError):
        ReductionConfig(eta=0.0)
    with pytest.raises(SimulationError):
        ReductionConfig(repetitions=2)
    with pytest.raises(SimulationError):
        ReductionConfig(mode="fancy")


# ---------------------------------------------------------------------------
# sampled lane


def test_round_network_matches_sampling_law():
    # the per-round measurement statistics used by the sampler are exactly
    # those of the simulated threshold-search round
    for n in (3, 4):
        N = 2**n
        w, p2 = _position_space(n)
        for j, i in [(0, N - 1), (3, 5), (N - 1, 0)]:
            inst = ordered_instance(N, i)
            diffs = [index_bit(j, p, n) ^ inst.Y.bits[p] for p in range(n)]
            for threshold in (n, 1):
                marked = [p for p in range(n) if diffs[p] and p < threshold]
                k = len(marked)
                for iters in (0, 1, 2):
                    net = leftmost_round_network(n, j, threshold, iters)
                    assert net.query_count == 2 * iters
                    state = run_network(net, inst.Y)
                    probs = np.zeros(p2)
                    for g, amp in enumerate(state.amplitudes):
                        probs[g & (p2 - 1)] += abs(amp) ** 2
                    p_hit = (
                        math.sin((2 * iters + 1) * math.asin(math.sqrt(k / p2))) ** 2
                        if k
                        else 0.0
                    )
                    law = np.full(p2, (1 - p_hit) / (p2 - k) if p2 > k else 0.0)
                    for p in marked:
                        law[p] = p_hit / k
                    assert np.max(np.abs(probs - law)) < 1e-12
                    # the kickback ancilla is returned to zero
                    assert bit_probability(state.amplitudes, w) < 1e-12


def test_find_leftmost_on_equal_strings_returns_none():
    inst = ordered_instance(16, 9)
    for mode in ("grover", "exact"):
        result = find_leftmost_difference(9, inst.Y, seed=4, mode=mode)
        assert result.position is None


def test_exact_scan_mode_is_deterministic():
    inst = ordered_instance(16, 9)
    assert find_leftmost_difference(5, inst.Y, mode="exact").position == 0
    assert find_leftmost_difference(5, inst.Y, mode="exact").queries_used == 1
    assert find_leftmost_difference(12, inst.Y, mode="exact").position == 1
    assert find_leftmost_difference(12, inst.Y, mode="exact").queries_used == 2
    assert find_leftmost_difference(9, inst.Y, mode="exact").queries_used == 4


def test_find_leftmost_respects_budget():
    inst = ordered_instance(16, 9)
    result = find_leftmost_difference(5, inst.Y, budget=0, seed=1)
    assert result.exhausted
    assert result.queries_used == 0


def test_find_leftmost_success_rate_per_trial():
    # every (known, hidden) pair at n=4: a single search finds the true
    # leftmost difference well above the 2/3 the majority vote needs
    n, N = 4, 16
    for i in (0, 6, 9, 15):
        inst = ordered_instance(N, i)
        for j in (0, 5, 10, 15):
            diffs = [index_bit(j, p, n) ^ inst.Y.bits[p] for p in range(n)]
            true_pos = next((p for p, d in enumerate(diffs) if d), n)
            rng = np.random.default_rng(1000 + 31 * i + j)
            pos, queries, _ = _leftmost_trials(j, inst.Y, 40, rng, 300, "grover")
            assert float(np.mean(pos == true_pos)) >= 0.9
            assert int(queries.max()) <= 40


def test_majority_repetitions_frozen():
    assert majority_repetitions(0.25) == 25
    assert majority_repetitions(0.1) == 43  # ceil(18 ln 10) = 42, rounded up to odd
    assert majority_repetitions(0.25) % 2 == 1
    assert majority_repetitions(0.01) > majority_repetitions(0.25)
    with pytest.raises(SimulationError):
        majority_repetitions(0.0)


def test_compare_leq_decisions_and_repetitions():
    inst = ordered_instance(16, 9)
    below = compare_leq(5, inst.Y, 0.25, seed=3)
    above = compare_leq(12, inst.Y, 0.25, seed=3)
    equal = compare_leq(9, inst.Y, 0.25, seed=3)
    assert below.is_leq and equal.is_leq and not above.is_leq
    assert below.repetitions == 25
    assert below.queries_used > 0


def test_compare_success_rate_over_all_pairs():
    N = 8
    for i in range(N):
        inst = ordered_instance(N, i)
        for j in range(N):
            rate = compare_leq_success_rate(j, inst.Y, 0.25, runs=300, seed=17 * j + i)
            assert rate >= 0.9, (j, i, rate)


# ---------------------------------------------------------------------------
# superposition guarantee


def test_superposition_check_noisy_gate_never_exceeds_bound():
    inst = ordered_instance(8, 5)
    expected = [comparison_bit(j, 5) for j in range(8)]
    gate, _ = ordered_oracle_gate(8, ReductionConfig(eta=0.05))
    check = superposition_error_bound_check(gate, inst.Y, expected, trials=10_000, seed=11)
    assert check.violations == 0
    assert check.max_ratio <= math.sqrt(2) + 1e-6
    assert check.epsilon > 0


def test_superposition_check_exact_gate_has_zero_distance():
    inst = ordered_instance(8, 5)
    expected = [comparison_bit(j, 5) for j in range(8)]
    check = superposition_error_bound_check(
        exact_comparison_gate(8), inst.Y, expected, trials=2_000, seed=1
    )
    assert check.epsilon == pytest.approx(0.0, abs=1e-12)
    assert check.max_distance == pytest.approx(0.0, abs=1e-9)
    assert check.violations == 0


def test_superposition_check_equal_residual_construction():
    # rotating the answer bit after an exact comparison gives every basis
    # input the same residual, and superpositions then sit exactly at the
    # basis residual: the sqrt(2) bound is loose but never violated
    angle = 0.2
    base = exact_comparison_gate(8)
    synth = QueryNetwork(
        base.num_qubits,
        base.layers + (rotation_layer(3, 2 * angle),),
        base.layout,
        name="equal-residual comparison",
    )
    inst = ordered_instance(8, 5)
    expected = [comparison_bit(j, 5) for j in range(8)]
    check = superposition_error_bound_check(synth, inst.Y, expected, trials=5_000, seed=2)
    assert check.epsilon == pytest.approx(math.sqrt(2 - 2 * math.cos(angle)), rel=1e-9)
    assert check.max_ratio == pytest.approx(1.0, abs=1e-9)
    assert check.violations == 0
