"""Binary search with a quantum-built comparison gate.

Classical binary search over an ordered 0/1 string Y (sorted: zeros then
ones) finds the transition index with log N comparisons "is Y_j <= i?".
Here each comparison is answered by a small quantum network that queries
the string, is wrapped so it leaves its workspace clean, and is then
substituted as a gate inside the search.  Because the wrapped gate is
within epsilon of the ideal comparison unitary on every basis state, it
stays within sqrt(2) epsilon on superpositions, and the log N
substitutions compose gracefully.

The script runs the whole reduction at N = 8 and N = 16, printing per-
index recovery probabilities and the measured residuals of the wrapped
gate, for both the noisy majority-vote comparator and the exact one.
"""

import math

import numpy as np

from querylab.algorithms import (
    ReductionConfig,
    clean_wrap,
    comparison_bit,
    majority_comparison_network,
    ordered_instance,
    ordered_search_reduction,
    superposition_error_bound_check,
)


def main():
    print("part 1 — one wrapped comparator under the microscope (N = 16, i = 5)")
    N, hidden = 16, 5
    inst = ordered_instance(N, hidden)
    inner = majority_comparison_network(N)
    expected = [comparison_bit(j, hidden) for j in range(N)]
    _, rep = clean_wrap(inner, target_qubit=4, oracle=inst.Y, expected_bits=expected)
    print(f"  basis-state error epsilon = {rep.epsilon_measured:.3e}")
    print(f"  worst workspace residual  = {rep.max_residual:.3e} "
          f"(bound sqrt(2 eps) = {math.sqrt(2 * rep.epsilon_measured):.3e})")
    print(f"  queries: {rep.inner_queries} inside, {rep.wrapped_queries} after "
          f"compute-copy-uncompute")
    print()

    print("part 2 — the same gate on 10,000 random superpositions (N = 8)")
    from querylab.algorithms import ordered_oracle_gate
    inst8 = ordered_instance(8, 3)
    gate, info = ordered_oracle_gate(8, ReductionConfig())
    expected8 = [comparison_bit(j, 3) for j in range(8)]
    chk = superposition_error_bound_check(gate, inst8.Y, expected8, trials=10_000, seed=7)
    print(f"  mode = {info['mode']}, violations of the sqrt(2) eps bound: {chk.violations}")
    print(f"  max distance / epsilon ratio = {chk.max_ratio:.4f} (cap sqrt(2) = {math.sqrt(2):.4f})")
    print()

    print("part 3 — full substituted binary search")
    for N in (8, 16):
        report = ordered_search_reduction(N, ReductionConfig(eta=0.05))
        rec = [row["recovery_probability"] for row in report.rows]
        dev = [row["deviation"] for row in report.rows]
        print(f"  N = {N:>2} ({report.info['mode']:>5} comparator): "
              f"min recovery {min(rec):.4f}, max deviation {max(dev):.4f}, "
              f"{report.info['queries_per_gate']} queries/gate, "
              f"{report.info['total_queries']} total")
        for row in report.rows[:4]:
            print(f"    hidden index {row['i']}: recovered {row['recovered_index']} "
                  f"with probability {row['recovery_probability']:.4f}")
        print("    ...")


if __name__ == "__main__":
    main()
