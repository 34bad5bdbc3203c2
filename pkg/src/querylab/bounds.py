"""Analytic error-floor machinery for query algorithms.

Three layers, all exact formula evaluation at desk scale:

- Chebyshev polynomials and their growth just outside the unit interval,
  plus measured continuum maxima of concrete polynomials.
- The Coppersmith-Rivlin envelope: a degree-d polynomial bounded at the
  integers of [0, n] is bounded by a * e^(b/delta) on the whole interval
  whenever n >= delta * d^2.  Coppersmith and Rivlin prove such constants
  a, b > 0 exist but give no numerical values; the defaults here are
  placeholders and every derived bound carries its exponent separately so
  that conclusions never silently depend on them.
- Closed-form lower bounds on the error of search networks: the general
  promise form in (N, t, d), its query-count specialization, and the
  success-amplification form at t = N/2, together with evaluators for the
  standard consequences (error floors at polynomial query counts, query
  floors for a target error, queries needed per halving of the error).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import numpy.polynomial.chebyshev as npcheb

from .polymethod import UnivariatePoly
from .simcore import SimulationError
from .tolerances import CONTINUUM_GRID_POINTS, EXTREMAL_REL_SLACK

__all__ = [
    "CRConstants",
    "BoundDerivation",
    "chebyshev",
    "chebyshev_growth_bound",
    "continuum_max",
    "coppersmith_rivlin_envelope",
    "reflect_and_rescale",
    "ExtremalCheck",
    "chebyshev_extremal_check",
    "ChainCheck",
    "derivation_chain_check",
    "error_lower_bound",
    "error_lower_bound_queries",
    "error_lower_bound_queries_exponent",
    "simplification_exponent_gap",
    "rp_amplification_bound",
    "rp_amplification_exponent",
    "queries_for_error",
    "error_floor_for_query_exponent",
    "query_floor_for_target_error",
]

_LN2 = math.log(2.0)
_EXP_OVERFLOW = 700.0


def _exp_or_inf(x: float) -> float:
    """e^x, returning inf instead of raising once the exponent overflows."""
    if x > _EXP_OVERFLOW:
        return math.inf
    return math.exp(x)


@dataclass(frozen=True)
class CRConstants:
    """The positive constants of the Coppersmith-Rivlin envelope theorem.

    The theorem asserts existence only; a = b = 1 are conventional
    placeholders, not values from the literature.  Everything downstream
    reports exponents alongside values so results can be re-read under any
    other choice.
    """

    a: float = 1.0
    b: float = 1.0

    def __post_init__(self) -> None:
        if not (self.a > 0.0 and self.b > 0.0):
            raise SimulationError("envelope constants must be positive")

    def to_dict(self) -> dict:
        return {"a": float(self.a), "b": float(self.b)}


@dataclass(frozen=True)
class BoundDerivation:
    """One evaluation of the promise-error lower bound.

    epsilon_bound = (1/a) * e^(-exponent) with
    exponent = b*d^2/(N-t) + 4d*sqrt(t*N)/(N-t); delta and mu are the
    envelope resolution (N-t)/d^2 and the overshoot 2t/(N-t) used in the
    derivation.
    """

    N: int
    t: int
    d: int
    delta: float
    mu: float
    exponent: float
    epsilon_bound: float
    constants: CRConstants

    @property
    def log2_epsilon_bound(self) -> float:
        return (-self.exponent - math.log(self.constants.a)) / _LN2

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "t": self.t,
            "d": self.d,
            "delta": self.delta,
            "mu": self.mu,
            "exponent": self.exponent,
            "epsilon_bound": self.epsilon_bound,
            "log2_epsilon_bound": self.log2_epsilon_bound,
            "constants": self.constants.to_dict(),
        }


# ---------------------------------------------------------------------------
# Chebyshev polynomials


def chebyshev(d: int, x: float) -> float:
    """T_d(x): three-term recurrence inside [-1, 1], closed form outside.

    The closed form is (1/2)((x + sqrt(x^2-1))^d + (x - sqrt(x^2-1))^d);
    both methods agree to 1e-9 relative where they overlap.
    """
    if d < 0:
        raise SimulationError("Chebyshev degree must be >= 0")
    if abs(x) <= 1.0:
        prev, cur = 1.0, x
        if d == 0:
            return 1.0
        for _ in range(d - 1):
            prev, cur = cur, 2.0 * x * cur - prev
        return cur
    root = math.sqrt(x * x - 1.0)
    return 0.5 * ((x + root) ** d + (x - root) ** d)


def chebyshev_growth_bound(d: int, mu: float) -> float:
    """e^(2d*sqrt(2*mu + mu^2)), an upper bound on T_d(1 + mu) for mu >= 0."""
    if mu < 0.0:
        raise SimulationError("growth bound requires mu >= 0")
    if d < 0:
        raise SimulationError("Chebyshev degree must be >= 0")
    return _exp_or_inf(2.0 * d * math.sqrt(2.0 * mu + mu * mu))


def continuum_max(poly: UnivariatePoly) -> float:
    """Max of |poly| over its whole domain, not just the table points.

    Measured on a dense uniform grid plus the critical points of the
    Chebyshev-basis representation and both endpoints.
    """
    coeffs = poly.coefficients
    candidates = [np.linspace(-1.0, 1.0, CONTINUUM_GRID_POINTS)]
    derivative = npcheb.chebder(coeffs)
    if len(derivative) > 1:
        roots = npcheb.chebroots(derivative)
        real = roots.real[np.abs(roots.imag) <= 1e-9]
        inside = real[(real >= -1.0 - 1e-9) & (real <= 1.0 + 1e-9)]
        if inside.size:
            candidates.append(np.clip(inside, -1.0, 1.0))
    candidates.append(np.array([-1.0, 1.0]))
    u = np.concatenate(candidates)
    return float(np.max(np.abs(npcheb.chebval(u, coeffs))))


def coppersmith_rivlin_envelope(
    p_values, d: int, cr: CRConstants, delta: float | None = None
) -> float:
    """Sup-norm envelope a * e^(b/delta) * max|p| over the real interval.

    ``p_values`` tabulates p at the integers 0..n.  Requires n >= delta*d^2;
    ``delta`` defaults to the largest admissible value n/d^2, which gives
    the tightest envelope.
    """
    values = np.asarray(p_values, dtype=np.float64)
    n = len(values) - 1
    if n < 1:
        raise SimulationError("need values at the integers of [0, n] with n >= 1")
    if d < 1:
        raise SimulationError("envelope requires degree >= 1")
    if delta is None:
        delta = n / float(d * d)
    if delta <= 0.0:
        raise SimulationError("delta must be positive")
    if n < delta * d * d - 1e-12:
        raise SimulationError(
            f"envelope precondition violated: n={n} < delta*d^2={delta * d * d:g}"
        )
    scale = float(np.max(np.abs(values)))
    return cr.a * _exp_or_inf(cr.b / delta) * scale


# ---------------------------------------------------------------------------
# rescaling and the extremal-growth / derivation-chain checks


def reflect_and_rescale(witness: UnivariatePoly, N: int, t: int) -> UnivariatePoly:
    """Turn a success polynomial on [0, N] into the reference-interval form.

    Given s with s(0) = 0 and s close to 1 on [t, N], returns
    q(x) = 1 - s(N - (x+1)(N-t)/2) on [-1, 1]: the promised weights land
    inside the interval where q is small, and q(1 + mu) = 1 - s(0) sits
    just outside it, at mu = 2t/(N-t).
    """
    if not (1 <= t < N):
        raise SimulationError("need 1 <= t < N")
    lo, hi = witness.domain
    if abs(lo) > 1e-9 or abs(hi - N) > 1e-9:
        raise SimulationError("witness domain must be [0, N]")
    degree = len(witness.coefficients) - 1

    def q(x):
        return 1.0 - witness.evaluate(N - (np.asarray(x) + 1.0) * (N - t) / 2.0)

    coeffs = npcheb.chebinterpolate(q, degree if degree > 0 else 1)
    return UnivariatePoly.from_coefficients(coeffs, (-1.0, 1.0), table_size=2)


@dataclass(frozen=True)
class ExtremalCheck:
    """Outcome of testing |q(1+mu)| <= c * T_d(1+mu) for a concrete q."""

    mu: float
    degree: int
    continuum_max: float
    outside_value: float
    chebyshev_value: float
    ok: bool


def chebyshev_extremal_check(
    witness: UnivariatePoly, N: int, t: int, degree: int | None = None
) -> ExtremalCheck:
    """Check the extremal growth fact on a rescaled success polynomial.

    A degree-d polynomial bounded by c on [-1, 1] is bounded by c*|T_d(x)|
    for |x| >= 1; here c is the measured continuum max of the rescaled
    polynomial and the comparison point is 1 + mu.  ``degree`` defaults to
    the effective degree of the rescaled polynomial; any d at least the
    true degree is valid.
    """
    q = reflect_and_rescale(witness, N, t)
    if degree is None:
        degree = max(q.effective_degree(), 1)
    mu = 2.0 * t / (N - t)
    c = continuum_max(q)
    outside = abs(q.evaluate(1.0 + mu))
    rhs = c * chebyshev(degree, 1.0 + mu)
    return ExtremalCheck(
        mu=mu,
        degree=degree,
        continuum_max=c,
        outside_value=outside,
        chebyshev_value=rhs,
        ok=bool(outside <= rhs * (1.0 + EXTREMAL_REL_SLACK)),
    )


@dataclass(frozen=True)
class ChainCheck:
    """Outcome of replaying the lower-bound derivation on a concrete witness.

    The derivation chains 1 = q(1+mu) <= E * T_d(1+mu) where E is the
    envelope bound on |q| over [-1, 1]; here the measured continuum max
    stands in for E.  ``implied_envelope_factor`` is continuum_max/epsilon:
    the value the envelope factor a*e^(b/delta) must reach to cover the
    measurement, which constrains admissible constants without determining
    them.
    """

    mu: float
    degree: int
    epsilon: float
    continuum_max: float
    outside_value: float
    chebyshev_value: float
    chained_product: float
    implied_envelope_factor: float
    ok: bool


def derivation_chain_check(
    witness: UnivariatePoly, N: int, t: int, epsilon: float, degree: int | None = None
) -> ChainCheck:
    """Verify 1 = q(1+mu) <= continuum_max * T_d(1+mu) for a witness.

    ``epsilon`` is the error certified for the witness (LP optimum, or the
    measured promise error of a network-derived polynomial); it enters only
    through the reported implied envelope factor.
    """
    q = reflect_and_rescale(witness, N, t)
    if degree is None:
        degree = max(q.effective_degree(), 1)
    mu = 2.0 * t / (N - t)
    c = continuum_max(q)
    outside = q.evaluate(1.0 + mu)
    t_val = chebyshev(degree, 1.0 + mu)
    product = c * t_val
    implied = c / epsilon if epsilon > 0.0 else math.inf
    ok = outside <= product * (1.0 + EXTREMAL_REL_SLACK)
    return ChainCheck(
        mu=mu,
        degree=degree,
        epsilon=epsilon,
        continuum_max=c,
        outside_value=outside,
        chebyshev_value=t_val,
        chained_product=product,
        implied_envelope_factor=implied,
        ok=bool(ok),
    )


# ---------------------------------------------------------------------------
# closed-form error floors


def error_lower_bound(N: int, t: int, d: int, cr: CRConstants) -> BoundDerivation:
    """Promise-error floor for degree-d acceptance polynomials.

    Any polynomial with s(0) = 0 that stays within epsilon of 1 on the
    integers [t, N] satisfies epsilon >= (1/a) e^(-exponent) with
    exponent = b*d^2/(N-t) + 4d*sqrt(t*N)/(N-t).
    """
    if not (1 <= t < N):
        raise SimulationError("need 1 <= t < N")
    if d < 1:
        raise SimulationError("need degree d >= 1")
    delta = (N - t) / float(d * d)
    mu = 2.0 * t / (N - t)
    exponent = cr.b * d * d / (N - t) + 4.0 * d * math.sqrt(t * N) / (N - t)
    epsilon = math.exp(-exponent) / cr.a if exponent <= _EXP_OVERFLOW else 0.0
    return BoundDerivation(
        N=N, t=t, d=d, delta=delta, mu=mu,
        exponent=exponent, epsilon_bound=epsilon, constants=cr,
    )


def error_lower_bound_queries_exponent(N: int, T: int, cr: CRConstants) -> float:
    """Exponent 4b*T^2/N + 8T/sqrt(N) of the query-count error floor."""
    return 4.0 * cr.b * T * T / N + 8.0 * T / math.sqrt(N)


def error_lower_bound_queries(N: int, T: int, cr: CRConstants) -> float:
    """Error floor (1/a) e^(-4b*T^2/N - 8T/sqrt(N)) for T-query search.

    This is the degree d = 2T case of ``error_lower_bound`` at t = 1 with
    the denominators simplified from N-1 to N; requires T < N (at T = N
    the error can be made exactly zero, so no floor applies).
    """
    if T < 0:
        raise SimulationError("query count must be >= 0")
    if T >= N:
        raise SimulationError("floor applies only for T < N")
    exponent = error_lower_bound_queries_exponent(N, T, cr)
    return math.exp(-exponent) / cr.a if exponent <= _EXP_OVERFLOW else 0.0


def simplification_exponent_gap(N: int, T: int, cr: CRConstants) -> float:
    """Exponent lost by simplifying the N-1 denominators to N.

    The exact degree-2T instantiation has exponent
    4b*T^2/(N-1) + 8T*sqrt(N)/(N-1); the simplified query form uses
    4b*T^2/N + 8T/sqrt(N).  The difference is
    4b*T^2/(N*(N-1)) + 8T/(sqrt(N)*(N-1)), at most 4b + 8 for T < N.
    """
    if N < 2:
        raise SimulationError("need N >= 2")
    return 4.0 * cr.b * T * T / (N * (N - 1)) + 8.0 * T / (math.sqrt(N) * (N - 1))


def rp_amplification_exponent(N: int, T: int, cr: CRConstants) -> float:
    """Exponent 8b*T^2/N + 8*sqrt(2)*T of the amplification error floor."""
    return 8.0 * cr.b * T * T / N + 8.0 * math.sqrt(2.0) * T


def rp_amplification_bound(N: int, T: int, cr: CRConstants) -> float:
    """Error floor (1/a) e^(-8b*T^2/N - 8*sqrt(2)*T) for amplification.

    Specializes the promise bound to t = N/2: a T-query network deciding
    whether a list is all-zero or at least half ones cannot have error
    below this value.  N must be even.
    """
    if N < 2 or N % 2 != 0:
        raise SimulationError("amplification floor needs even N >= 2")
    if T < 0:
        raise SimulationError("query count must be >= 0")
    exponent = rp_amplification_exponent(N, T, cr)
    return math.exp(-exponent) / cr.a if exponent <= _EXP_OVERFLOW else 0.0


def queries_for_error(k: int, cr: CRConstants, N: int = 10**6) -> int:
    """Least T with the amplification floor at or below 2^-k.

    Solved in log space: the smallest integer T with
    8b*T^2/N + 8*sqrt(2)*T >= k*ln(2) - ln(a).  For large k with N much
    bigger than T^2 the linear term dominates and T/k approaches
    1/(8*sqrt(2)*log2(e)), about 0.0613.
    """
    if k < 0:
        raise SimulationError("k must be >= 0")
    if N < 2 or N % 2 != 0:
        raise SimulationError("amplification floor needs even N >= 2")
    required = k * _LN2 - math.log(cr.a)
    if required <= 0.0:
        return 0

    def holds(T: int) -> bool:
        return rp_amplification_exponent(N, T, cr) >= required

    quad, lin = 8.0 * cr.b / N, 8.0 * math.sqrt(2.0)
    root = (-lin + math.sqrt(lin * lin + 4.0 * quad * required)) / (2.0 * quad)
    T = max(0, math.ceil(root - 1e-9))
    while not holds(T):
        T += 1
    while T > 0 and holds(T - 1):
        T -= 1
    return T


# ---------------------------------------------------------------------------
# consequence evaluators built on the query-count floor


def error_floor_for_query_exponent(N: int, alpha: float, cr: CRConstants) -> dict:
    """Error floor when the query budget is N^(0.5 + alpha).

    Returns the floor in log2 form together with the implied constant c of
    the scaling floor 1/2^(c*N^(2*alpha)); computed in log space so large
    exponents stay finite.
    """
    if alpha < 0.0:
        raise SimulationError("alpha must be >= 0")
    T = int(round(N ** (0.5 + alpha)))
    if T >= N:
        raise SimulationError("query budget reaches N; no floor applies")
    exponent = error_lower_bound_queries_exponent(N, T, cr)
    log2_floor = (-exponent - math.log(cr.a)) / _LN2
    return {
        "queries": T,
        "exponent": exponent,
        "log2_error_floor": log2_floor,
        "error_floor": _exp_or_inf(-exponent) / cr.a if exponent <= _EXP_OVERFLOW else 0.0,
        "implied_constant": -log2_floor / N ** (2.0 * alpha),
    }


def query_floor_for_target_error(N: int, epsilon: float, cr: CRConstants) -> dict:
    """Smallest real T whose query-count floor is at or below epsilon.

    Returns the crossing point of 4b*T^2/N + 8T/sqrt(N) = ln(1/(a*epsilon))
    together with the reference scale sqrt(N*ln(1/epsilon)) that the floor
    approaches once T grows faster than sqrt(N).
    """
    if not (0.0 < epsilon < 1.0):
        raise SimulationError("epsilon must be in (0, 1)")
    required = math.log(1.0 / (cr.a * epsilon))
    if required <= 0.0:
        return {"query_floor": 0.0, "reference_scale": math.sqrt(N * math.log(1.0 / epsilon)), "ratio": 0.0}
    quad, lin = 4.0 * cr.b / N, 8.0 / math.sqrt(N)
    root = (-lin + math.sqrt(lin * lin + 4.0 * quad * required)) / (2.0 * quad)
    scale = math.sqrt(N * math.log(1.0 / epsilon))
    return {"query_floor": root, "reference_scale": scale, "ratio": root / scale}
