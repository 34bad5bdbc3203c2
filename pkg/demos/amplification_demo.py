"""How fast can repetition shrink error, classically and quantumly?

A classical RP-style algorithm that repeats T times drives its one-sided
error to 2^-T: one query per halving.  For a quantum algorithm deciding
"is the input all-zeros or exactly half-ones?" the polynomial method
gives a hard floor: after T queries the error is at least

    (1/a) exp(-8 b T^2 / N - 8 sqrt(2) T),

so for T << sqrt(N) the linear term dominates and each halving of the
error still costs a constant ~0.0613 queries — quantum amplification
beats classical repetition by at most a constant factor, not a rate.

The script measures the geometric decay of the LP optimum at t = N/2 as
a function of degree for several N, fits the slope, and compares with
the classical rate and the closed-form floor.
"""

import math

import numpy as np

from querylab.bounds import (
    CRConstants,
    queries_for_error,
    rp_amplification_bound,
    rp_amplification_exponent,
)
from querylab.labcli import amplification_slope
from querylab.polymethod import min_error_lp


def main():
    print("LP optimum at t = N/2 versus polynomial degree 2T:")
    for N in (8, 16, 32):
        line = []
        for T in range(1, N // 4 + 1):
            eps = min_error_lp(N, N // 2, 2 * T).epsilon_opt
            line.append(f"T={T}: {eps:.3e}")
        print(f"  N = {N:>2}: " + ", ".join(line))
    print()

    print("fitted halvings of log2(1/epsilon) per unit T:")
    slopes = {}
    for N in (8, 16, 32):
        slopes[N] = amplification_slope(N, strict_zero=True)
        print(f"  N = {N:>2}: slope {slopes[N]:.4f} bits/query")
    spread = max(slopes.values()) / min(slopes.values())
    print(f"  spread across N: x{spread:.3f} (flat: the rate is a constant, not N-dependent)")
    print()

    print("closed-form floor (1/a) exp(-8bT^2/N - 8 sqrt(2) T) at N = 32:")
    cr = CRConstants()
    for T in (1, 2, 4, 8):
        floor = rp_amplification_bound(32, T, cr)
        exponent = rp_amplification_exponent(32, T, cr)
        log2_floor = (-exponent - math.log(cr.a)) / math.log(2.0)
        print(f"  T = {T}: epsilon >= {floor:.3e} (log2 = {log2_floor:.2f})")
    print()

    print("queries needed to push error below 2^-k (N = 10^6, linear regime):")
    target = 1.0 / (8.0 * math.sqrt(2.0) * math.log2(math.e))
    for k in (10, 100, 1000):
        T = queries_for_error(k, cr)
        print(f"  k = {k:>4}: T = {T:>3}   T/k = {T / k:.4f}")
    print(f"  asymptotic constant 1/(8 sqrt(2) log2 e) = {target:.4f}")
    print()
    print("classical repetition needs T = k exactly; the quantum floor says")
    print("the best possible improvement is the constant factor above.")


if __name__ == "__main__":
    main()
