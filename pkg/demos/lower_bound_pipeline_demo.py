"""The Chebyshev lower-bound pipeline, one link at a time.

A degree-d polynomial that is small at weight 0 and close to 1 on
weights t..N cannot have small degree: reflect it onto [-1, 1], bound
its sup-norm there with a Coppersmith-Rivlin envelope, and compare its
value just outside the interval with the Chebyshev extremal growth
T_d(1 + mu).  Chaining the three inequalities forces

    epsilon >= (1/a) exp(-b d^2/(N-t) - 4 d sqrt(tN)/(N-t)).

This script walks an actual LP witness through each link, printing the
numbers, then evaluates the closed-form consequences: error floors at
T = c sqrt(N) queries and the query count needed per halving of the
error under two-sided bounded error.
"""

import math

import numpy as np

from querylab.bounds import (
    CRConstants,
    chebyshev,
    chebyshev_extremal_check,
    derivation_chain_check,
    error_lower_bound,
    error_lower_bound_queries_exponent,
    queries_for_error,
    reflect_and_rescale,
)
from querylab.polymethod import min_error_lp


def main():
    N, t, d = 16, 1, 6
    cert = min_error_lp(N, t, d)
    eps = cert.epsilon_opt
    mu = 2 * t / (N - t)
    print(f"LP witness: N = {N}, t = {t}, degree <= {d}, epsilon* = {eps:.6f}")
    print()

    q = reflect_and_rescale(cert.witness, N, t)
    check = chebyshev_extremal_check(cert.witness, N, t, degree=cert.degree_used)
    chain = derivation_chain_check(cert.witness, N, t, eps, degree=cert.degree_used)
    print("link 1 — reflect onto [-1, 1]:")
    print(f"  q(1 + mu) = {chain.outside_value:.6f}  (mu = {mu:.6f}; this is 1 - s(0) = 1)")
    print("link 2 — sup-norm on the interval:")
    print(f"  max |q| on [-1, 1] = {check.continuum_max:.6f}")
    print("link 3 — Chebyshev extremal growth:")
    print(f"  T_{cert.degree_used}(1 + mu) = {chebyshev(cert.degree_used, 1.0 + mu):.6f}")
    print(f"  q(1+mu) <= max|q| * T_d(1+mu): "
          f"{chain.outside_value:.4f} <= {chain.chained_product:.4f}  "
          f"({'holds' if check.ok else 'VIOLATED'})")
    print(f"  implied envelope factor needed: {chain.implied_envelope_factor:.4f} "
          f"(an a e^{{b/delta}} with a = b = 1 covers it)")
    print()

    cr = CRConstants()
    bound = error_lower_bound(N, t, d, cr)
    print(f"closed-form floor at the same (N, t, d): "
          f"epsilon >= exp(-{bound.exponent:.4f}) = {bound.epsilon_bound:.3e}")
    print()

    print("consequence 1: at T = sqrt(N)/2 queries the error cannot be tiny")
    for N_big in (10**2, 10**4, 10**6):
        T = int(round(0.5 * math.sqrt(N_big)))
        exponent = error_lower_bound_queries_exponent(N_big, T, cr)
        log2_floor = (-exponent - math.log(cr.a)) / math.log(2.0)
        print(f"  N = {N_big:>8}, T = {T:>4}: log2 epsilon >= {log2_floor:,.1f}")
    print()

    print("consequence 2: halving the error k more times costs ~0.0613 k queries")
    for k in (10, 100, 1000):
        T = queries_for_error(k, cr)
        print(f"  k = {k:>4} halvings: T = {T:>3} queries  (T/k = {T / k:.4f})")


if __name__ == "__main__":
    main()
