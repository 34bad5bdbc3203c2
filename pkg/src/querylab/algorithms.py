"""Query algorithms built on the exact simulator.

Three families live here:

* unstructured search networks (Grover iterations plus one verification
  query) together with their closed-form acceptance and error;
* the sampled lane for ordered inputs: a Durr-Hoyer style iterated Grover
  search for the leftmost bit position where a known index differs from a
  hidden one, and a majority-vote comparator built on top of it;
* the coherent lane: reversible comparison gates against a hidden index
  register, the clean-computation wrapper (compute, copy out, uncompute),
  and the binary-search reduction that replaces direct comparison queries
  with those gates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .simcore import (
    BitOracle,
    DiagonalLayer,
    OracleGate,
    PermutationLayer,
    QueryNetwork,
    RegisterLayout,
    SimulationError,
    cnot_layer,
    diffusion_layer,
    hadamard_layer,
    permutation_from_function,
    rotation_layer,
    run_layers,
    run_network,
    x_layer,
    xor_constant_layer,
)
from .tolerances import MAX_QUBITS, RESIDUAL_SLACK, SCALAR_ATOL

__all__ = [
    "grover_network",
    "grover_acceptance",
    "grover_error",
    "grover_promise_error",
    "OrderedInstance",
    "ordered_instance",
    "index_bit",
    "comparison_bit",
    "LeftmostSearchResult",
    "find_leftmost_difference",
    "leftmost_round_network",
    "ComparisonResult",
    "compare_leq",
    "compare_leq_success_rate",
    "majority_repetitions",
    "CleanWrapReport",
    "clean_wrap",
    "exact_comparison_gate",
    "majority_comparison_network",
    "ReductionConfig",
    "ordered_oracle_gate",
    "verify_ordered_gate",
    "binary_search_network",
    "ordered_search_network",
    "ReductionReport",
    "ordered_search_reduction",
    "SuperpositionCheck",
    "superposition_error_bound_check",
    "DEFAULT_DETUNING",
]


def _log2_exact(n: int) -> int:
    k = n.bit_length() - 1
    if n <= 0 or (1 << k) != n:
        raise SimulationError(f"{n} is not a power of two")
    return k


# ---------------------------------------------------------------------------
# unstructured search


def grover_network(N: int, T: int) -> QueryNetwork:
    """T amplitude-amplification iterations plus one final verification query.

    The index register is prepared uniformly, the answer bit serves as the
    phase-kickback ancilla during the iterations, is returned to |0> and
    then receives one real query so that the all-zero input is rejected
    with certainty.  The network therefore places T + 1 oracle gates.
    """
    if T < 0:
        raise SimulationError("iteration count must be non-negative")
    n = _log2_exact(N)
    index = tuple(range(n))
    answer = n
    layers: list = [x_layer(answer), hadamard_layer((answer,)), hadamard_layer(index)]
    for _ in range(T):
        layers.append(OracleGate(index, answer))
        layers.append(diffusion_layer(index))
    layers.append(hadamard_layer((answer,)))
    layers.append(x_layer(answer))
    layers.append(OracleGate(index, answer))
    layout = RegisterLayout(index, answer)
    return QueryNetwork(n + 1, tuple(layers), layout, name=f"grover[N={N},T={T}]")


def grover_acceptance(N: int, t: int, T: int) -> float:
    """Closed-form acceptance on an input with t ones: sin^2((2T+1) asin sqrt(t/N))."""
    _log2_exact(N)
    if not 0 <= t <= N:
        raise SimulationError(f"solution count {t} out of range")
    if t == 0:
        return 0.0
    theta = math.asin(math.sqrt(t / N))
    return math.sin((2 * T + 1) * theta) ** 2


def grover_error(N: int, t: int, T: int) -> float:
    """Worst-case error on the promise {|X| = 0 or |X| = t}.

    The verification query makes the all-zero side exact, so for t >= 1
    the error is 1 - sin^2((2T+1) asin sqrt(t/N)); for t = 0 it is 0.
    """
    if t == 0:
        return 0.0
    return 1.0 - grover_acceptance(N, t, T)


def grover_promise_error(N: int, t: int, T: int) -> float:
    """Worst-case error on the one-sided promise {|X| = 0 or |X| >= t}.

    This is the quantity a degree-2(T+1) polynomial certificate genuinely
    lower-bounds: the maximum over all promised weights, not just t.
    """
    if t == 0:
        return max(1.0 - grover_acceptance(N, k, T) for k in range(1, N + 1)) if N else 0.0
    return max(1.0 - grover_acceptance(N, k, T) for k in range(t, N + 1))


# ---------------------------------------------------------------------------
# ordered inputs


def index_bit(value: int, position: int, n: int) -> int:
    """Bit of ``value`` at ``position`` counted from the most significant (=0)."""
    return (value >> (n - 1 - position)) & 1


def comparison_bit(j: int, i: int) -> int:
    return 1 if j <= i else 0


@dataclass(frozen=True)
class OrderedInstance:
    """A hidden index i with its two oracle views.

    ``X`` is the N-bit threshold input (x_j = 1 iff j <= i); ``Y`` is the
    log2(N)-bit register holding the binary digits of i, most significant
    digit at position 0, so Y read as a binary number equals i.
    """

    N: int
    i: int
    Y: BitOracle
    X: BitOracle


def ordered_instance(N: int, i: int) -> OrderedInstance:
    n = _log2_exact(N)
    if not 0 <= i < N:
        raise SimulationError(f"hidden index {i} out of range for N={N}")
    y_bits = tuple(index_bit(i, p, n) for p in range(n))
    x_bits = tuple(comparison_bit(j, i) for j in range(N))
    return OrderedInstance(N, i, BitOracle(y_bits), BitOracle(x_bits))


# ---------------------------------------------------------------------------
# sampled lane: leftmost differing position, then comparison by majority vote


@dataclass(frozen=True)
class LeftmostSearchResult:
    position: int | None
    queries_used: int
    exhausted: bool


_SCHEDULE_GROWTH = 1.31  # cap growth factor between unsuccessful rounds


def _position_space(n: int) -> tuple[int, int]:
    """Register width and padded size of the position search space."""
    w = max(1, (n - 1).bit_length())
    return w, 1 << w


def _default_budget(n: int) -> int:
    return 14 * math.isqrt(max(n - 1, 0)) + 26


def _default_rounds(p2: int) -> int:
    return 5 + 3 * math.isqrt(p2)


def _leftmost_trials(
    j: int,
    Y: BitOracle,
    budget: int,
    rng: np.random.Generator,
    trials: int,
    mode: str,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized trials; returns (position with n = none, queries, exhausted)."""
    n = Y.num_bits
    if not 0 <= j < 2**n:
        raise SimulationError(f"known index {j} out of range")
    diffs = np.array([index_bit(j, p, n) ^ Y.bits[p] for p in range(n)], dtype=bool)
    if mode == "exact":
        # deterministic scan fallback: read positions in order, stop at the
        # first difference; exact at desk scale, used to de-flake pipelines
        hit = np.flatnonzero(diffs)
        pos = int(hit[0]) if hit.size else n
        cost = pos + 1 if hit.size else n
        if cost > budget:
            return (
                np.full(trials, n, dtype=np.int64),
                np.full(trials, budget, dtype=np.int64),
                np.ones(trials, dtype=bool),
            )
        return (
            np.full(trials, pos, dtype=np.int64),
            np.full(trials, cost, dtype=np.int64),
            np.zeros(trials, dtype=bool),
        )
    if mode != "grover":
        raise SimulationError(f"unknown search mode {mode!r}")

    _, p2 = _position_space(n)
    # marked count below each possible threshold (threshold n means "no best yet")
    below = np.concatenate(([0], np.cumsum(diffs)))  # below[b] = #diffs at positions < b
    diff_positions = [np.flatnonzero(diffs[:b]) for b in range(n + 1)]

    best = np.full(trials, n, dtype=np.int64)
    queries = np.zeros(trials, dtype=np.int64)
    cap = np.ones(trials, dtype=np.float64)
    running = np.ones(trials, dtype=bool)
    exhausted = np.zeros(trials, dtype=bool)
    max_cap = math.sqrt(p2)

    for _ in range(_default_rounds(p2)):
        if not running.any():
            break
        iters = np.floor(rng.random(trials) * (np.floor(cap) + 1.0)).astype(np.int64)
        cost = 2 * iters + 1
        over = running & (queries + cost > budget)
        exhausted |= over
        running &= ~over
        act = running
        if not act.any():
            break
        queries[act] += cost[act]
        k = below[best]
        theta = np.arcsin(np.sqrt(np.minimum(k, p2) / p2))
        p_hit = np.where(k > 0, np.sin((2 * iters + 1) * theta) ** 2, 0.0)
        hit = act & (rng.random(trials) < p_hit)
        # a verified hit is a uniformly random marked position below the threshold
        for b in np.unique(best[hit]):
            members = diff_positions[b]
            sel = hit & (best == b)
            picks = members[
                np.floor(rng.random(int(sel.sum())) * members.size).astype(np.int64)
            ]
            best[sel] = picks
        cap[hit] = 1.0
        miss = act & ~hit
        cap[miss] = np.minimum(cap[miss] * _SCHEDULE_GROWTH, max_cap)

    return best, queries, exhausted


def find_leftmost_difference(
    j: int,
    Y: BitOracle,
    budget: int | None = None,
    seed: int = 0,
    mode: str = "grover",
) -> LeftmostSearchResult:
    """Search for the most significant position where j differs from the hidden index.

    Iterated Grover search with a shrinking position threshold and a
    randomized iteration schedule; each iteration costs two queries to the
    hidden register (phase marking computes and uncomputes the read bit)
    and every candidate is verified with one more.  Per-round measurement
    statistics follow the exact rotation law of the simulated search
    operator (see ``leftmost_round_network`` and its equivalence test).
    With mode="exact" a deterministic position scan is used instead.
    """
    n = Y.num_bits
    if budget is None:
        budget = _default_budget(n)
    rng = np.random.default_rng(seed)
    pos, queries, exhausted = _leftmost_trials(j, Y, budget, rng, 1, mode)
    p = int(pos[0])
    return LeftmostSearchResult(
        position=None if p == n else p,
        queries_used=int(queries[0]),
        exhausted=bool(exhausted[0]),
    )


def leftmost_round_network(n: int, j: int, threshold: int, iterations: int) -> QueryNetwork:
    """One threshold-Grover round as an explicit query network over positions.

    Position register of width ceil(log2 n) padded with never-marked dummy
    positions; the kickback ancilla reads the hidden bit, a fixed diagonal
    applies the phase for "differs and below threshold", and the read is
    uncomputed, so each iteration places two oracle gates.
    """
    w, p2 = _position_space(n)
    pos = tuple(range(w))
    anc = w
    phases = []
    for g in range(2 ** (w + 1)):
        p = g & (p2 - 1)
        a = (g >> w) & 1
        marked = p < min(threshold, n) and (a ^ index_bit(j, p, n)) == 1
        phases.append(-1.0 if marked else 1.0)
    mark = DiagonalLayer(pos + (anc,), tuple(phases))
    layers: list = [hadamard_layer(pos)]
    for _ in range(iterations):
        layers.append(OracleGate(pos, anc))
        layers.append(mark)
        layers.append(OracleGate(pos, anc))
        layers.append(diffusion_layer(pos))
    layout = RegisterLayout(pos, anc)
    return QueryNetwork(w + 1, tuple(layers), layout, name=f"leftmost-round[j={j},<{threshold}]")


@dataclass(frozen=True)
class ComparisonResult:
    is_leq: bool
    queries_used: int
    repetitions: int


def majority_repetitions(target_error: float, trial_error: float = 1.0 / 3.0) -> int:
    """Smallest odd repetition count whose Hoeffding bound is below target_error."""
    if not 0 < target_error < 1:
        raise SimulationError("target error must be in (0, 1)")
    gap = 0.5 - trial_error
    r = max(1, math.ceil(math.log(1.0 / target_error) / (2.0 * gap * gap)))
    return r if r % 2 == 1 else r + 1


def _votes_to_leq(j: int, n: int, positions: np.ndarray) -> np.ndarray:
    """Vote of each trial: below-or-equal iff no difference found or j has 0 there."""
    votes = np.empty(positions.shape, dtype=bool)
    none = positions == n
    votes[none] = True
    found = ~none
    if found.any():
        bits = np.array([index_bit(j, p, n) for p in range(n)], dtype=np.int64)
        votes[found] = bits[positions[found]] == 0
    return votes


def compare_leq(
    j: int,
    Y: BitOracle,
    target_error: float = 0.25,
    seed: int = 0,
    mode: str = "grover",
    budget: int | None = None,
) -> ComparisonResult:
    """Majority vote of repeated leftmost-difference searches.

    Decides whether j is at most the hidden index: equality or a leading
    zero at the first differing position both mean "yes".
    """
    n = Y.num_bits
    if budget is None:
        budget = _default_budget(n)
    r = majority_repetitions(target_error)
    rng = np.random.default_rng(seed)
    pos, queries, _ = _leftmost_trials(j, Y, budget, rng, r, mode)
    votes = _votes_to_leq(j, n, pos)
    return ComparisonResult(
        is_leq=bool(votes.sum() * 2 > r),
        queries_used=int(queries.sum()),
        repetitions=r,
    )


def compare_leq_success_rate(
    j: int,
    Y: BitOracle,
    target_error: float,
    runs: int,
    seed: int = 0,
    mode: str = "grover",
) -> float:
    """Fraction of seeded comparison calls that return the true answer."""
    n = Y.num_bits
    budget = _default_budget(n)
    r = majority_repetitions(target_error)
    rng = np.random.default_rng(seed)
    pos, _, _ = _leftmost_trials(j, Y, budget, rng, runs * r, mode)
    votes = _votes_to_leq(j, n, pos).reshape(runs, r)
    decisions = votes.sum(axis=1) * 2 > r
    i = int("".join(str(b) for b in Y.bits), 2)
    truth = j <= i
    return float(np.mean(decisions == truth))


# ---------------------------------------------------------------------------
# coherent lane: reversible comparison gates and the clean-computation wrapper

DEFAULT_DETUNING = 0.075


def _index_register_width(n: int) -> int:
    return max(1, (n - 1).bit_length())


def _scan_layers(n: int, idx: tuple[int, ...], y: tuple[int, ...]) -> list:
    """Read all n hidden bits into the y ancillas (n oracle gates)."""
    layers: list = []
    prev = 0
    for p in range(n):
        if p ^ prev:
            layers.append(xor_constant_layer(idx, p ^ prev))
        prev = p
        layers.append(OracleGate(idx, y[p]))
    if prev:
        layers.append(xor_constant_layer(idx, prev))
    return layers


def _verdict_permutation(n: int, j_qubits: tuple[int, ...], y_qubits: tuple[int, ...], target: int) -> PermutationLayer:
    """target ^= [j <= i] where i is decoded from the scanned digit ancillas."""
    qubits = j_qubits + y_qubits + (target,)

    def fn(g: int) -> int:
        j_val = g & ((1 << n) - 1)
        i_val = 0
        for p in range(n):
            i_val |= ((g >> (n + p)) & 1) << (n - 1 - p)
        if j_val <= i_val:
            g ^= 1 << (2 * n)
        return g

    return permutation_from_function(qubits, fn)


def exact_comparison_gate(N: int) -> QueryNetwork:
    """Reversible exact comparison |j, b, 0> -> |j, b XOR [j <= i], 0>.

    Scans the hidden digit register into ancillas, applies the comparison
    verdict, and unscans, so the workspace returns to zero exactly and the
    gate uses 2 log2(N) queries.
    """
    n = _log2_exact(N)
    w = _index_register_width(n)
    j_q = tuple(range(n))
    b = n
    idx = tuple(range(n + 1, n + 1 + w))
    y = tuple(range(n + 1 + w, n + 1 + w + n))
    scan = _scan_layers(n, idx, y)
    layers = scan + [_verdict_permutation(n, j_q, y, b)] + list(reversed(scan))
    layout = RegisterLayout(j_q, b, idx + y)
    return QueryNetwork(n + 1 + w + n, tuple(layers), layout, name=f"compare-exact[N={N}]")


def majority_comparison_network(N: int, copies: int = 3, detuning: float = DEFAULT_DETUNING) -> QueryNetwork:
    """Bounded-error comparison: majority vote over detuned scan copies.

    Each copy scans the hidden digits, writes its verdict to a private
    ancilla, passes it through a fixed detuning rotation (per-copy flip
    probability sin^2(detuning)), and unscans.  The majority of the copy
    verdicts lands in the answer ancilla.  The qubit immediately after the
    known-index register is left untouched so a clean-computation wrapper
    can copy the answer there.
    """
    if copies < 1 or copies % 2 == 0:
        raise SimulationError("majority vote needs an odd, positive copy count")
    n = _log2_exact(N)
    w = _index_register_width(n)
    j_q = tuple(range(n))
    b = n  # reserved for the wrapper
    idx = tuple(range(n + 1, n + 1 + w))
    y = tuple(range(n + 1 + w, n + 1 + w + n))
    c = tuple(range(n + 1 + w + n, n + 1 + w + n + copies))
    width = n + 1 + w + n + copies
    if width > MAX_QUBITS:
        raise SimulationError(
            f"comparator with {copies} copies needs {width} qubits (cap {MAX_QUBITS})"
        )
    layers: list = []
    scan = _scan_layers(n, idx, y)
    for k in range(copies):
        layers.extend(scan)
        layers.append(_verdict_permutation(n, j_q, y, c[k]))
        if detuning:
            layers.append(rotation_layer(c[k], 2.0 * detuning))
        layers.extend(reversed(scan))
    answer = y[0]  # zero again after the last unscan; receives the majority

    def maj(g: int) -> int:
        ones = bin(g & ((1 << copies) - 1)).count("1")
        if ones * 2 > copies:
            g ^= 1 << copies
        return g

    layers.append(permutation_from_function(c + (answer,), maj))
    layout = RegisterLayout(j_q, answer, idx + y[1:] + c)
    return QueryNetwork(
        width,
        tuple(layers),
        layout,
        name=f"compare-majority[N={N},copies={copies},detuning={detuning}]",
    )


@dataclass(frozen=True)
class CleanWrapReport:
    """Measured error of the inner network and residuals of the wrapped one."""

    epsilon_measured: float
    residual_bound: float
    residual_norms: dict
    max_residual: float
    inner_queries: int
    wrapped_queries: int
    ok: bool


def _basis_columns(width: int, indices: Sequence[int]) -> np.ndarray:
    cols = np.zeros((2**width, len(indices)), dtype=np.complex128)
    for k, idx in enumerate(indices):
        cols[idx, k] = 1.0
    return cols


def clean_wrap(
    inner: QueryNetwork,
    target_qubit: int,
    oracle: BitOracle,
    expected_bits: Sequence[int],
) -> tuple[QueryNetwork, CleanWrapReport]:
    """Compute, copy the answer into the target bit, uncompute.

    ``expected_bits[j]`` is the bit the inner network is supposed to place
    in its answer qubit on input |j, 0...0>.  The report carries the
    measured worst-case inner error and checks every wrapped residual
    against sqrt(2 * epsilon), which doubles the query count.
    """
    width = inner.num_qubits
    j_qubits = inner.layout.index_qubits
    answer = int(inner.layout.answer_qubit)
    if target_qubit == answer or target_qubit in j_qubits:
        raise SimulationError("target bit must be disjoint from index and answer")
    wrapped_layers = (
        inner.layers
        + (cnot_layer(answer, target_qubit),)
        + tuple(layer.inverse() for layer in reversed(inner.layers))
    )
    layout = RegisterLayout(
        j_qubits,
        target_qubit,
        tuple(q for q in range(width) if q not in j_qubits and q != target_qubit),
    )
    wrapped = QueryNetwork(width, wrapped_layers, layout, name=inner.name + "+wrap")

    n_vals = 2 ** len(j_qubits)
    j_indices = [sum(((j >> k) & 1) << q for k, q in enumerate(j_qubits)) for j in range(n_vals)]
    inner_out = run_layers(inner.layers, _basis_columns(width, j_indices), width, oracle)
    dim = 2**width
    basis = np.arange(dim)
    answer_bits = (basis >> answer) & 1
    j_of_basis = np.zeros(dim, dtype=np.int64)
    for k, q in enumerate(j_qubits):
        j_of_basis |= ((basis >> q) & 1) << k
    eps = 0.0
    for col, j in zip(inner_out.T, range(n_vals)):
        leaked = float(np.sum(np.abs(col[j_of_basis != j]) ** 2))
        if leaked > 2.0 * RESIDUAL_SLACK:
            raise SimulationError(
                "inner network moves amplitude off the known-index register"
            )
        p_right = float(np.sum(np.abs(col[answer_bits == expected_bits[j]]) ** 2))
        eps = max(eps, 1.0 - p_right)
    eps = max(eps, 0.0)

    pairs = [(j, b) for j in range(n_vals) for b in (0, 1)]
    in_indices = [ji | (b << target_qubit) for ji, (j, b) in zip(np.repeat(j_indices, 2), pairs)]
    wrapped_out = run_layers(wrapped_layers, _basis_columns(width, in_indices), width, oracle)
    bound = math.sqrt(2.0 * eps)
    residuals: dict = {}
    max_res = 0.0
    for col, base, (j, b) in zip(wrapped_out.T, in_indices, pairs):
        ideal = base ^ ((expected_bits[j] & 1) << target_qubit)
        diff = col.copy()
        diff[ideal] -= 1.0
        r = float(np.linalg.norm(diff))
        residuals[(j, b)] = r
        max_res = max(max_res, r)
    report = CleanWrapReport(
        epsilon_measured=eps,
        residual_bound=bound,
        residual_norms=residuals,
        max_residual=max_res,
        inner_queries=inner.query_count,
        wrapped_queries=wrapped.query_count,
        ok=max_res <= bound + RESIDUAL_SLACK,
    )
    return wrapped, report


# ---------------------------------------------------------------------------
# the ordered-search reduction


@dataclass(frozen=True)
class ReductionConfig:
    """Tuning of the comparison-gate substitution.

    ``eta`` is the residual budget for a full binary search (per-gate
    residuals must stay below eta / log2 N); ``repetitions`` is the
    majority copy count of the bounded-error gate; ``mode`` picks between
    the detuned majority gate, the exact scan gate, or automatic selection
    under the register-width cap.
    """

    eta: float = 0.05
    repetitions: int = 3
    query_budget: int = 10_000
    detuning: float = DEFAULT_DETUNING
    mode: str = "auto"
    recovery_target: float = 2.0 / 3.0

    def __post_init__(self) -> None:
        if self.eta <= 0:
            raise SimulationError("eta must be positive")
        if self.mode not in ("auto", "exact", "noisy"):
            raise SimulationError(f"unknown mode {self.mode!r}")
        if self.repetitions < 1 or self.repetitions % 2 == 0:
            raise SimulationError("repetitions must be odd and positive")


def _majority_flip_probability(copies: int, per_copy: float) -> float:
    """Exact probability that more than half of independent flips occur."""
    total = 0.0
    for k in range(copies // 2 + 1, copies + 1):
        total += math.comb(copies, k) * per_copy**k * (1.0 - per_copy) ** (copies - k)
    return total


def ordered_oracle_gate(N: int, cfg: ReductionConfig, verify: bool = True) -> tuple[QueryNetwork, dict]:
    """Build the replacement comparison gate driven by digit-register queries.

    Returns the gate network (index register, answer bit, zeroed
    workspace) together with its construction record: chosen mode, copy
    count, detuning, per-gate query count and the predicted worst-case
    error / residual bound.  With ``verify`` the per-basis residuals are
    measured against every hidden index; a miss of the eta / log2 N
    target is recorded in the record, never silently masked.
    """
    n = _log2_exact(N)
    per_gate_target = cfg.eta / n
    per_copy = math.sin(cfg.detuning) ** 2
    predicted_eps = _majority_flip_probability(cfg.repetitions, per_copy)
    predicted_bound = math.sqrt(2.0 * predicted_eps)
    noisy_embed_width = 3 * n + _index_register_width(n) + cfg.repetitions
    mode = cfg.mode
    if mode == "auto":
        fits = noisy_embed_width <= MAX_QUBITS
        mode = "noisy" if (fits and predicted_bound <= per_gate_target) else "exact"
    if mode == "exact":
        gate = exact_comparison_gate(N)
        info = {
            "mode": "exact",
            "copies": 1,
            "detuning": 0.0,
            "queries_per_gate": gate.query_count,
            "predicted_epsilon": 0.0,
            "predicted_residual_bound": 0.0,
            "meets_target": True,
            "per_gate_target": per_gate_target,
        }
    else:
        inner = majority_comparison_network(N, cfg.repetitions, cfg.detuning)
        layers = (
            inner.layers
            + (cnot_layer(int(inner.layout.answer_qubit), n),)
            + tuple(layer.inverse() for layer in reversed(inner.layers))
        )
        layout = RegisterLayout(
            inner.layout.index_qubits,
            n,
            tuple(
                q
                for q in range(inner.num_qubits)
                if q not in inner.layout.index_qubits and q != n
            ),
        )
        gate = QueryNetwork(inner.num_qubits, layers, layout, name=f"compare-wrapped[N={N}]")
        info = {
            "mode": "noisy",
            "copies": cfg.repetitions,
            "detuning": cfg.detuning,
            "queries_per_gate": gate.query_count,
            "predicted_epsilon": predicted_eps,
            "predicted_residual_bound": predicted_bound,
            "meets_target": predicted_bound <= per_gate_target,
            "per_gate_target": per_gate_target,
        }
    if verify:
        worst = 0.0
        for i in range(N):
            measured = verify_ordered_gate(gate, ordered_instance(N, i), cfg.eta)
            worst = max(worst, measured["max_residual"])
        info["max_residual_measured"] = worst
        info["verified_ok"] = worst <= per_gate_target + RESIDUAL_SLACK
    return gate, info


def verify_ordered_gate(gate: QueryNetwork, instance: OrderedInstance, eta: float) -> dict:
    """Measure per-basis residuals of the gate against the ideal comparison.

    A failure to meet eta / log2 N is reported in the returned record (the
    caller decides whether that invalidates a run), never masked.
    """
    n = _log2_exact(instance.N)
    width = gate.num_qubits
    j_qubits = gate.layout.index_qubits
    b_qubit = int(gate.layout.answer_qubit)
    pairs = [(j, b) for j in range(instance.N) for b in (0, 1)]
    in_indices = [
        sum(((j >> k) & 1) << q for k, q in enumerate(j_qubits)) | (b << b_qubit)
        for (j, b) in pairs
    ]
    out = run_layers(gate.layers, _basis_columns(width, in_indices), width, instance.Y)
    residuals = {}
    max_res = 0.0
    for col, base, (j, b) in zip(out.T, in_indices, pairs):
        ideal = base ^ (instance.X.bits[j] << b_qubit)
        diff = col.copy()
        diff[ideal] -= 1.0
        r = float(np.linalg.norm(diff))
        residuals[(j, b)] = r
        max_res = max(max_res, r)
    target = eta / n
    return {
        "residual_norms": residuals,
        "max_residual": max_res,
        "per_gate_target": target,
        "ok": max_res <= target + RESIDUAL_SLACK,
    }


def binary_search_network(N: int) -> QueryNetwork:
    """Classical reversible binary search: log2(N) comparison queries.

    Round k computes the probe index from the digits already recovered,
    queries the threshold oracle with the result bit r_k as the answer
    target, and uncomputes the probe.  On the exact oracle the final state
    is |j=0, r=i> with certainty.
    """
    n = _log2_exact(N)
    j_q = tuple(range(n))
    r_q = tuple(range(n, 2 * n))
    layers: list = []
    for k in range(n - 1, -1, -1):
        high = ((1 << n) - 1) ^ ((1 << (k + 1)) - 1)

        def probe_xor(g: int, k: int = k, high: int = high) -> int:
            r_val = (g >> n) & ((1 << n) - 1)
            probe = (r_val & high) | (1 << k)
            return g ^ probe

        perm = permutation_from_function(j_q + r_q, probe_xor)
        layers.append(perm)
        layers.append(OracleGate(j_q, n + k))
        layers.append(perm)
    layout = RegisterLayout(j_q, n, tuple(range(n + 1, 2 * n)))
    return QueryNetwork(2 * n, tuple(layers), layout, name=f"binary-search[N={N}]")


def _remap_layer(layer, qmap: dict):
    if isinstance(layer, OracleGate):
        return OracleGate(tuple(qmap[q] for q in layer.index_qubits), qmap[layer.answer_qubit])
    if isinstance(layer, PermutationLayer):
        return PermutationLayer(tuple(qmap[q] for q in layer.qubits), layer.table)
    if isinstance(layer, DiagonalLayer):
        return DiagonalLayer(tuple(qmap[q] for q in layer.qubits), layer.phases)
    return type(layer)(tuple(qmap[q] for q in layer.qubits), layer.matrix)


def ordered_search_network(N: int, cfg: ReductionConfig) -> tuple[QueryNetwork, dict]:
    """Binary search with every comparison query replaced by the built gate.

    The gate's answer wire is rerouted to the result bit of each round and
    its workspace is shared across rounds (each gate restores it up to its
    residual).  All queries of the substituted network address the digit
    register, none address the threshold input.
    """
    n = _log2_exact(N)
    gate, info = ordered_oracle_gate(N, cfg, verify=False)
    base = binary_search_network(N)
    ws_width = gate.num_qubits - (n + 1)
    width = 2 * n + ws_width
    if width > MAX_QUBITS:
        raise SimulationError(
            f"substituted search needs {width} qubits (cap {MAX_QUBITS})"
        )
    layers: list = []
    for layer in base.layers:
        if isinstance(layer, OracleGate):
            r_bit = layer.answer_qubit
            qmap = {q: q for q in range(n)}
            qmap[n] = r_bit
            for w, q in enumerate(range(n + 1, gate.num_qubits)):
                qmap[q] = 2 * n + w
            layers.extend(_remap_layer(sub, qmap) for sub in gate.layers)
        else:
            layers.append(layer)
    layout = RegisterLayout(tuple(range(n)), n, tuple(range(n + 1, width)))
    net = QueryNetwork(width, tuple(layers), layout, name=f"binary-search-substituted[N={N}]")
    info = dict(info)
    info["total_queries"] = net.query_count
    info["gate"] = gate
    return net, info


@dataclass(frozen=True)
class ReductionReport:
    N: int
    info: dict
    rows: tuple[dict, ...]
    all_ok: bool


def ordered_search_reduction(N: int, cfg: ReductionConfig) -> ReductionReport:
    """Run the substituted binary search against every hidden index.

    For each i the row records the exact recovery probability of the
    result register, the Euclidean deviation from the unsubstituted
    search, measured per-gate residuals, the digit-register query count,
    and the parity of the digit string inferred from the recovered index.
    """
    n = _log2_exact(N)
    base = binary_search_network(N)
    sub, info = ordered_search_network(N, cfg)
    gate = info["gate"]
    dim = 2**sub.num_qubits
    r_mask = ((np.arange(dim) >> n) & (N - 1)).astype(np.int64)
    rows = []
    all_ok = True
    for i in range(N):
        inst = ordered_instance(N, i)
        gate_check = verify_ordered_gate(gate, inst, cfg.eta)
        exact_state = run_network(base, inst.X)
        ext = np.zeros(dim, dtype=np.complex128)
        ext[: 2 ** (2 * n)] = exact_state.amplitudes
        sub_state = run_network(sub, inst.Y)
        deviation = float(np.linalg.norm(sub_state.amplitudes - ext))
        recovery = float(np.sum(np.abs(sub_state.amplitudes[r_mask == i]) ** 2))
        recovered = int(np.argmax(np.bincount(r_mask, weights=np.abs(sub_state.amplitudes) ** 2)))
        parity = bin(recovered).count("1") % 2
        ok = (
            gate_check["ok"]
            and recovery >= cfg.recovery_target
            and deviation <= math.sqrt(2.0) * cfg.eta + RESIDUAL_SLACK
        )
        all_ok &= ok
        rows.append(
            {
                "i": i,
                "recovery_probability": recovery,
                "deviation": deviation,
                "max_gate_residual": gate_check["max_residual"],
                "gate_residual_ok": gate_check["ok"],
                "queries_per_gate": info["queries_per_gate"],
                "total_queries": info["total_queries"],
                "recovered_index": recovered,
                "digit_parity": parity,
                "ok": ok,
            }
        )
    return ReductionReport(N=N, info=info, rows=tuple(rows), all_ok=bool(all_ok))


# ---------------------------------------------------------------------------
# superposition guarantee


@dataclass(frozen=True)
class SuperpositionCheck:
    epsilon: float
    max_distance: float
    max_ratio: float
    violations: int
    trials: int


def superposition_error_bound_check(
    gate: QueryNetwork,
    oracle: BitOracle,
    expected_bits: Sequence[int],
    trials: int = 10_000,
    seed: int = 0,
) -> SuperpositionCheck:
    """Random superpositions never deviate more than sqrt(2) x the basis residual.

    The gate's action is precomputed on every |j, b, 0> column; linearity
    then gives its action on arbitrary superpositions of those inputs, so
    each seeded trial is one matrix-vector product.  Returns the measured
    worst basis residual, the worst superposition distance, their ratio
    and the count of trials exceeding sqrt(2) x epsilon (+ slack).
    """
    width = gate.num_qubits
    j_qubits = gate.layout.index_qubits
    b_qubit = int(gate.layout.answer_qubit)
    n_vals = 2 ** len(j_qubits)
    pairs = [(j, b) for j in range(n_vals) for b in (0, 1)]
    in_indices = [
        sum(((j >> k) & 1) << q for k, q in enumerate(j_qubits)) | (b << b_qubit)
        for (j, b) in pairs
    ]
    cols = run_layers(gate.layers, _basis_columns(width, in_indices), width, oracle)
    diff = cols.copy()
    for col_idx, (base, (j, b)) in enumerate(zip(in_indices, pairs)):
        ideal = base ^ ((expected_bits[j] & 1) << b_qubit)
        diff[ideal, col_idx] -= 1.0
    residuals = np.linalg.norm(diff, axis=0)
    eps = float(residuals.max(initial=0.0))
    rng = np.random.default_rng(seed)
    alpha = rng.normal(size=(len(pairs), trials)) + 1j * rng.normal(size=(len(pairs), trials))
    alpha /= np.linalg.norm(alpha, axis=0, keepdims=True)
    # distances via the Gram matrix of the residual columns: ||D a||^2 = a* (D*D) a,
    # which avoids materializing a (dimension x trials) array
    gram = diff.conj().T @ diff
    d2 = np.einsum("ij,ij->j", alpha.conj(), gram @ alpha).real
    dists = np.sqrt(np.maximum(d2, 0.0))
    max_dist = float(dists.max(initial=0.0))
    bound = math.sqrt(2.0) * eps + RESIDUAL_SLACK
    violations = int(np.sum(dists > bound))
    ratio = max_dist / eps if eps > SCALAR_ATOL else 0.0
    return SuperpositionCheck(
        epsilon=eps,
        max_distance=max_dist,
        max_ratio=float(ratio),
        violations=violations,
        trials=trials,
    )
