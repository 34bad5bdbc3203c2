"""Error versus queries for quantum search, squeezed from both sides.

Builds the search network for a range of iteration counts T, checks the
simulated acceptance probability against the closed form
sin^2((2T+1) asin sqrt(t/N)), and then prints three error curves:

  * the error at exactly t marked items — the weight the iteration count
    was tuned for; it drops fast, then rises again when T overshoots,
  * the worst error over the full promise (0 marked items, or >= t) —
    a fixed-T amplifier is terrible here, because some promised weight
    always lands near a zero of the rotation,
  * the linear-programming optimum over degree-2(T+1) polynomials —
    the floor under ANY algorithm making T+1 oracle queries (T rounds
    plus the final verification query), adaptive or not.

The LP floor decays geometrically in T, so error reduction has a fixed
best exchange rate in queries; the tuned network shows the rate is
approachable, and the promise column shows achieving it uniformly takes
more than a fixed iteration count.

Run:
    python demos/grover_tradeoff_demo.py [--N 16] [--t 1]
"""

import argparse
import math

import numpy as np

from querylab.algorithms import grover_error, grover_network, grover_promise_error
from querylab.polymethod import min_error_lp
from querylab.simcore import BitOracle, acceptance_probability


def closed_form(N, t, T):
    if t == 0:
        return 0.0
    return math.sin((2 * T + 1) * math.asin(math.sqrt(t / N))) ** 2


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--N", type=int, default=16, help="search space size (power of two)")
    parser.add_argument("--t", type=int, default=1, help="number of marked items")
    args = parser.parse_args()
    N, t = args.N, args.t

    print(f"search space N = {N}, marked items t = {t}")
    print()

    # First: the simulator agrees with the closed form, so the table below
    # is about real networks, not just formulas.
    mask = (1 << t) - 1
    worst = 0.0
    for T in range(5):
        net = grover_network(N, T)
        p = acceptance_probability(net, BitOracle.from_mask(mask, N))
        worst = max(worst, abs(p - closed_form(N, t, T)))
    print(f"simulator vs closed form over T = 0..4: max |diff| = {worst:.2e}")
    print()

    header = (f"{'T':>2} {'queries':>7} {'error at t':>12} "
              f"{'worst over promise':>19} {'LP floor (deg 2(T+1))':>22}")
    print(header)
    print("-" * len(header))
    for T in range(5):
        tuned = grover_error(N, t, T)
        promise = grover_promise_error(N, t, T)
        floor = min_error_lp(N, t, 2 * (T + 1)).epsilon_opt
        print(f"{T:>2} {T + 1:>7} {tuned:>12.8f} {promise:>19.8f} {floor:>22.8f}")
    print()
    print("the LP floor sits below the promise-worst error on every row, and")
    print("it keeps falling: log2(1/floor) gains roughly a constant per extra")
    print("query.  The tuned column approaches that rate at its own weight;")
    print("closing the gap uniformly over the promise needs adaptivity, not")
    print("just more rounds of the same rotation.")


if __name__ == "__main__":
    main()
