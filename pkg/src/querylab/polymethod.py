"""Acceptance polynomials of query networks and the minimum-error LP.

The acceptance probability of a network with q oracle placements is a
multilinear polynomial of degree at most 2q in the oracle bits.  This
module extracts that polynomial exactly (by enumerating all oracles and
Moebius-inverting), symmetrizes it to a univariate polynomial in the
Hamming weight, and solves the degree-constrained minimum-error linear
program that lower-bounds every algorithm of a given query count.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
import numpy.polynomial.chebyshev as npcheb

from .simcore import BitOracle, QueryNetwork, SimulationError, acceptance_probability
from .simplex import solve_linear_program
from .tolerances import (
    COEFF_TOL,
    LP_FEAS_ATOL,
    MAX_EXTRACT_VARS,
    POLY_VALUE_ATOL,
)

__all__ = [
    "MultilinearPoly",
    "UnivariatePoly",
    "LPCertificate",
    "extract_multilinear",
    "extract_from_function",
    "symmetrize",
    "effective_degree",
    "min_error_lp",
    "parity_interpolation",
]


# ---------------------------------------------------------------------------
# multilinear polynomials over {0,1}^N


@dataclass(frozen=True)
class MultilinearPoly:
    """Multilinear polynomial sum_S c_S prod_{i in S} x_i.

    Coefficients are indexed by the subset bitmask; evaluation on an input
    mask is the zeta transform (sum of coefficients of all subsets of the
    input's support).
    """

    num_vars: int
    coefficients: np.ndarray

    def __post_init__(self) -> None:
        coeffs = np.asarray(self.coefficients, dtype=np.float64)
        if coeffs.shape != (2**self.num_vars,):
            raise SimulationError(
                f"need {2**self.num_vars} coefficients, got shape {coeffs.shape}"
            )
        object.__setattr__(self, "coefficients", coeffs)
        self.coefficients.setflags(write=False)

    def coefficient(self, subset_mask: int) -> float:
        return float(self.coefficients[subset_mask])

    def values(self) -> np.ndarray:
        """Evaluations on all 2^N inputs, input index = support bitmask."""
        v = self.coefficients.copy()
        for i in range(self.num_vars):
            bit = 1 << i
            upper = (np.arange(2**self.num_vars) & bit).astype(bool)
            v[upper] += v[np.arange(2**self.num_vars)[upper] ^ bit]
        return v

    def evaluate(self, input_mask: int) -> float:
        if not 0 <= input_mask < 2**self.num_vars:
            raise SimulationError(f"input mask {input_mask} out of range")
        return float(self.values()[input_mask])

    def degree(self, tol: float = 1e-9) -> int:
        popcounts = np.array(
            [bin(m).count("1") for m in range(2**self.num_vars)], dtype=np.int64
        )
        heavy = np.abs(self.coefficients) > tol
        return int(popcounts[heavy].max(initial=0))

    def to_dict(self, tol: float = 1e-12) -> dict:
        support = {
            str(mask): float(c)
            for mask, c in enumerate(self.coefficients)
            if abs(c) > tol
        }
        return {"num_vars": self.num_vars, "coefficients": support}


def extract_from_function(
    accept: Callable[[BitOracle], float], num_vars: int
) -> MultilinearPoly:
    """Moebius inversion of an acceptance function over all 2^N oracles."""
    if num_vars > MAX_EXTRACT_VARS:
        raise SimulationError(
            f"extraction enumerates 2^N oracles; N={num_vars} exceeds the "
            f"supported maximum {MAX_EXTRACT_VARS}"
        )
    size = 2**num_vars
    v = np.empty(size, dtype=np.float64)
    for mask in range(size):
        v[mask] = accept(BitOracle.from_mask(mask, num_vars))
    for i in range(num_vars):
        bit = 1 << i
        upper = np.flatnonzero(np.arange(size) & bit)
        v[upper] -= v[upper ^ bit]
    return MultilinearPoly(num_vars, v)


def extract_multilinear(net: QueryNetwork, N: int) -> MultilinearPoly:
    """Exact multilinear acceptance polynomial of a network on N oracle bits."""
    return extract_from_function(lambda x: acceptance_probability(net, x), N)


# ---------------------------------------------------------------------------
# univariate polynomials in a stable basis


def _chebval_extended(x: np.ndarray, coefficients: np.ndarray) -> np.ndarray:
    """Clenshaw evaluation carried out in extended precision.

    Interpolants through uniformly spaced nodes can have basis
    coefficients many orders larger than the function values; the rounding
    floor of double Clenshaw (machine epsilon times the coefficient mass)
    would then exceed the value-agreement tolerance.
    """
    out = npcheb.chebval(
        np.asarray(x, dtype=np.longdouble), coefficients.astype(np.longdouble)
    )
    return np.asarray(out, dtype=np.float64)


def _cheb_design_matrix(points: np.ndarray, degree: int, domain: tuple[float, float]) -> np.ndarray:
    lo, hi = domain
    x = 2.0 * (np.asarray(points, dtype=np.float64) - lo) / (hi - lo) - 1.0
    cols = [np.ones_like(x), x]
    for _ in range(2, degree + 1):
        cols.append(2.0 * x * cols[-1] - cols[-2])
    return np.stack(cols[: degree + 1], axis=1)


def _interpolate_chebyshev(values: np.ndarray, domain: tuple[float, float]) -> np.ndarray:
    """Coefficients of the unique interpolant through (0..N, values).

    Solves the Chebyshev-basis collocation system directly and iterates
    residual refinement: uniform interpolation nodes make the system
    ill-conditioned near the top of the desk-scale range, but refinement
    drives the value-table residual back to machine level.
    """
    n = len(values) - 1
    pts = np.arange(n + 1, dtype=np.float64)
    design = _cheb_design_matrix(pts, n, domain)
    coeffs = np.linalg.solve(design, values)
    # residuals in extended precision: in double they bottom out around
    # 1e-9 at n = 32 (coefficients reach ~1e3), which would breach the
    # value-table agreement contract
    design_hi = design.astype(np.longdouble)
    values_hi = values.astype(np.longdouble)
    scale = max(1.0, float(np.max(np.abs(values), initial=0.0)))
    coeffs_hi = coeffs.astype(np.longdouble)
    for _ in range(8):
        residual = values_hi - design_hi @ coeffs_hi
        if float(np.max(np.abs(residual), initial=0.0)) <= 1e-12 * scale:
            break
        coeffs_hi = coeffs_hi + np.linalg.solve(design, residual.astype(np.float64))
    return coeffs_hi.astype(np.float64)


@dataclass(frozen=True)
class UnivariatePoly:
    """Polynomial on [lo, hi] in the Chebyshev basis of that interval.

    Carries both the coefficient vector and the value table at the integer
    points of the domain; the two must agree (checked on construction).
    """

    domain: tuple[float, float]
    coefficients: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        coeffs = np.asarray(self.coefficients, dtype=np.float64)
        vals = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "coefficients", coeffs)
        object.__setattr__(self, "values", vals)
        lo, hi = self.domain
        if not hi > lo:
            raise SimulationError("empty domain")
        table_points = np.arange(len(vals), dtype=np.float64)
        if len(vals) and np.max(np.abs(self.evaluate(table_points) - vals)) > POLY_VALUE_ATOL:
            raise SimulationError(
                "value table disagrees with coefficient evaluation beyond "
                f"{POLY_VALUE_ATOL}"
            )
        self.coefficients.setflags(write=False)
        self.values.setflags(write=False)

    @classmethod
    def from_values(cls, values: Sequence[float], domain: tuple[float, float] | None = None) -> "UnivariatePoly":
        vals = np.asarray(values, dtype=np.float64)
        if domain is None:
            domain = (0.0, float(len(vals) - 1))
        return cls(domain, _interpolate_chebyshev(vals, domain), vals)

    @classmethod
    def from_coefficients(
        cls, coefficients: Sequence[float], domain: tuple[float, float], table_size: int
    ) -> "UnivariatePoly":
        coeffs = np.asarray(coefficients, dtype=np.float64)
        pts = np.arange(table_size, dtype=np.float64)
        lo, hi = domain
        x = 2.0 * (pts - lo) / (hi - lo) - 1.0
        vals = _chebval_extended(x, coeffs)
        return cls(domain, coeffs, vals)

    def evaluate(self, x):
        lo, hi = self.domain
        mapped = 2.0 * (np.asarray(x, dtype=np.float64) - lo) / (hi - lo) - 1.0
        out = _chebval_extended(mapped, self.coefficients)
        return float(out) if np.isscalar(x) or np.asarray(x).ndim == 0 else out

    def effective_degree(self, tol: float = COEFF_TOL) -> int:
        heavy = np.flatnonzero(np.abs(self.coefficients) > tol)
        return int(heavy.max(initial=0))

    def to_dict(self) -> dict:
        return {
            "domain": [float(self.domain[0]), float(self.domain[1])],
            "basis": "chebyshev",
            "coefficients": [float(c) for c in self.coefficients],
            "values": [float(v) for v in self.values],
        }


def symmetrize(P: MultilinearPoly) -> UnivariatePoly:
    """Average P over weight classes: Q(k) = mean of P over inputs with k ones.

    Identical to averaging over all input permutations, since permuting
    variables permutes inputs within each weight class.
    """
    n = P.num_vars
    values = P.values()
    popcounts = np.array([bin(m).count("1") for m in range(2**n)], dtype=np.int64)
    table = np.array([values[popcounts == k].mean() for k in range(n + 1)])
    return UnivariatePoly.from_values(table, (0.0, float(n)))


def effective_degree(Q: UnivariatePoly, tol: float) -> int:
    if tol <= 0:
        raise SimulationError("tolerance must be positive")
    return Q.effective_degree(tol)


def parity_interpolation(N: int) -> UnivariatePoly:
    """The unique polynomial through (k, k mod 2) for k = 0..N."""
    if N < 1:
        raise SimulationError("need at least one point beyond zero")
    return UnivariatePoly.from_values(np.arange(N + 1) % 2, (0.0, float(N)))


# ---------------------------------------------------------------------------
# the minimum-error linear program


@dataclass(frozen=True)
class LPCertificate:
    """Optimal error and witness of the degree-constrained acceptance LP.

    The witness q satisfies q(0) = 0 (or 0 <= q(0) <= epsilon in relaxed
    mode), 1 - epsilon <= q(k) <= 1 on the promised weights t..N, and
    0 <= q(k) <= 1 below t.  epsilon_opt lower-bounds the error of every
    algorithm whose acceptance polynomial has degree at most d.
    """

    N: int
    t: int
    d: int
    degree_used: int
    mode: str
    epsilon_opt: float
    witness: UnivariatePoly
    residuals: dict
    iterations: int
    status: str

    def to_dict(self) -> dict:
        return {
            "n": self.N,
            "t": self.t,
            "d": self.d,
            "degree_used": self.degree_used,
            "mode": self.mode,
            "epsilon": float(self.epsilon_opt),
            "coefficients": [float(c) for c in self.witness.coefficients],
            "values": [float(v) for v in self.witness.values],
            "residuals": {k: float(v) for k, v in self.residuals.items()},
            "status": self.status,
        }


def min_error_lp(N: int, t: int, d: int, strict_zero: bool = True) -> LPCertificate:
    """Minimum error achievable at zero weight vs promised weights t..N.

    Linear program over Chebyshev-basis coefficients on [0, N] plus the
    error scalar; the constraint grid is exactly the integers 0..N.  A
    requested degree above N is solved at degree N (the constraints see
    only N+1 points, where degree N already achieves error 0).  With
    ``strict_zero`` the witness vanishes at 0 exactly; otherwise it only
    needs to stay below epsilon there.
    """
    if not 1 <= t <= N:
        raise SimulationError(f"promised weight t={t} out of range for N={N}")
    if d < 0:
        raise SimulationError("degree must be non-negative")
    degree_used = min(d, N)
    nv = degree_used + 2  # coefficients, then the error scalar
    design = _cheb_design_matrix(np.arange(N + 1, dtype=np.float64), degree_used, (0.0, float(N)))

    def phi(k: int) -> np.ndarray:
        row = np.zeros(nv)
        row[: degree_used + 1] = design[k]
        return row

    eps_row = np.zeros(nv)
    eps_row[-1] = 1.0
    A_eq, b_eq, A_ub, b_ub = [], [], [], []
    if strict_zero:
        A_eq.append(phi(0))
        b_eq.append(0.0)
    else:
        A_ub.append(phi(0) - eps_row)
        b_ub.append(0.0)
        A_ub.append(-phi(0))
        b_ub.append(0.0)
    for k in range(t, N + 1):
        A_ub.append(-phi(k) - eps_row)
        b_ub.append(-1.0)
        A_ub.append(phi(k))
        b_ub.append(1.0)
    for k in range(1, t):
        A_ub.append(-phi(k))
        b_ub.append(0.0)
        A_ub.append(phi(k))
        b_ub.append(1.0)
    A_ub.append(-eps_row)
    b_ub.append(0.0)
    objective = np.zeros(nv)
    objective[-1] = 1.0
    sol = solve_linear_program(
        objective,
        np.array(A_eq) if A_eq else None,
        np.array(b_eq) if b_eq else None,
        np.array(A_ub),
        np.array(b_ub),
    )
    coeffs = sol.x[: degree_used + 1]
    epsilon = float(sol.x[-1])
    witness = UnivariatePoly.from_coefficients(coeffs, (0.0, float(N)), N + 1)
    q = witness.values
    zero_violation = (
        abs(q[0]) if strict_zero else max(0.0, q[0] - epsilon, -q[0])
    )
    band = q[t:]
    band_violation = max(
        0.0, float(np.max((1.0 - epsilon) - band, initial=0.0)), float(np.max(band - 1.0, initial=0.0))
    )
    middle = q[1:t]
    middle_violation = max(
        0.0, float(np.max(-middle, initial=0.0)), float(np.max(middle - 1.0, initial=0.0))
    )
    worst = max(zero_violation, band_violation, middle_violation)
    status = sol.status
    if status == "optimal" and worst > LP_FEAS_ATOL:
        status = "numerical_failure"
    residuals = {
        "zero_constraint": float(zero_violation),
        "promised_band": float(band_violation),
        "middle_band": float(middle_violation),
        "solver_equality": sol.max_equality_violation,
        "solver_inequality": sol.max_inequality_violation,
        "worst": float(worst),
    }
    return LPCertificate(
        N=N,
        t=t,
        d=d,
        degree_used=degree_used,
        mode="strict" if strict_zero else "relaxed",
        epsilon_opt=epsilon,
        witness=witness,
        residuals=residuals,
        iterations=sol.iterations,
        status=status,
    )
