"""Exact state-vector simulation of black-box query networks.

A network is an alternating product of fixed unitary layers and oracle
gates.  The oracle for an N-bit input X maps the basis state |j, b, w> to
|j, b XOR x_j, w>: the index register selects a bit, the answer bit takes
the XOR, the workspace is untouched.  Acceptance is read off one output
bit of the final state; all probabilities are computed exactly from the
amplitudes (sampling is a separate, seeded demo mode).

Qubit convention: basis index k encodes qubit q as bit q of k, so qubit 0
is the rightmost position in ket notation |q_{m-1} ... q_1 q_0>.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .tolerances import MAX_QUBITS, SCALAR_ATOL, STATE_ATOL

__all__ = [
    "SimulationError",
    "DimensionError",
    "StateVector",
    "BitOracle",
    "RegisterLayout",
    "OracleGate",
    "PermutationLayer",
    "DiagonalLayer",
    "LocalUnitaryLayer",
    "QueryNetwork",
    "MeasurementOutcome",
    "apply_oracle",
    "run_network",
    "acceptance_probability",
    "euclidean_distance",
    "measure_output_bit",
    "collapse",
    "sample_output_bit",
    "network_unitary",
    "hadamard_layer",
    "x_layer",
    "rotation_layer",
    "cnot_layer",
    "xor_constant_layer",
    "diffusion_layer",
    "permutation_from_function",
    "bit_probability",
]


class SimulationError(Exception):
    """Raised when a network or state is structurally inconsistent."""


class DimensionError(SimulationError):
    """Raised when registers, layouts or states do not fit together."""


# ---------------------------------------------------------------------------
# states and oracles


@dataclass(frozen=True)
class StateVector:
    """Normalized complex amplitude vector over ``2**num_qubits`` basis states."""

    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        if self.num_qubits < 1:
            raise DimensionError("a state needs at least one qubit")
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (2**self.num_qubits,):
            raise DimensionError(
                f"expected {2**self.num_qubits} amplitudes, got shape {amps.shape}"
            )
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > STATE_ATOL:
            raise SimulationError(f"state norm {norm!r} is not 1 within {STATE_ATOL}")
        amps = amps.copy()
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def basis(cls, num_qubits: int, index: int) -> "StateVector":
        amps = np.zeros(2**num_qubits, dtype=np.complex128)
        amps[index] = 1.0
        return cls(num_qubits, amps)

    @classmethod
    def all_zero(cls, num_qubits: int) -> "StateVector":
        return cls.basis(num_qubits, 0)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def bit_probability(self, qubit: int, value: int = 1) -> float:
        return bit_probability(self.amplitudes, qubit, value)


@dataclass(frozen=True)
class BitOracle:
    """Immutable bit string x_0 .. x_{N-1} served through the oracle gate."""

    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.bits) < 1:
            raise DimensionError("oracle needs at least one bit")
        if any(b not in (0, 1) for b in self.bits):
            raise SimulationError("oracle bits must be 0 or 1")
        arr = np.asarray(self.bits, dtype=np.uint8)
        arr.setflags(write=False)
        object.__setattr__(self, "_array", arr)

    @property
    def num_bits(self) -> int:
        return len(self.bits)

    def as_array(self) -> np.ndarray:
        return self._array  # type: ignore[attr-defined]

    def weight(self) -> int:
        return int(sum(self.bits))

    @classmethod
    def from_mask(cls, mask: int, num_bits: int) -> "BitOracle":
        """Bit j of ``mask`` becomes x_j."""
        return cls(tuple((mask >> j) & 1 for j in range(num_bits)))

    @classmethod
    def all_zero(cls, num_bits: int) -> "BitOracle":
        return cls((0,) * num_bits)

    @classmethod
    def of_weight(cls, num_bits: int, t: int, rng: np.random.Generator | None = None) -> "BitOracle":
        """An input with exactly ``t`` ones (random positions when ``rng`` given)."""
        if not 0 <= t <= num_bits:
            raise DimensionError(f"weight {t} out of range for {num_bits} bits")
        if rng is None:
            return cls((1,) * t + (0,) * (num_bits - t))
        ones = rng.choice(num_bits, size=t, replace=False)
        bits = [0] * num_bits
        for j in ones:
            bits[int(j)] = 1
        return cls(tuple(bits))


@dataclass(frozen=True)
class RegisterLayout:
    """Named sub-registers of a network: index register, answer bit, workspace.

    ``index_qubits`` lists the index register least-significant bit first.
    ``output_qubit`` defaults to the answer bit, which sits rightmost in ket
    notation under our qubit convention.
    """

    index_qubits: tuple[int, ...]
    answer_qubit: int
    workspace_qubits: tuple[int, ...] = ()
    output_qubit: int | None = None

    def __post_init__(self) -> None:
        used = list(self.index_qubits) + [self.answer_qubit] + list(self.workspace_qubits)
        if len(set(used)) != len(used):
            raise DimensionError(f"layout registers overlap: {self}")
        if self.output_qubit is None:
            object.__setattr__(self, "output_qubit", self.answer_qubit)

    def width(self) -> int:
        top = max(list(self.index_qubits) + [self.answer_qubit] + list(self.workspace_qubits))
        return top + 1


# ---------------------------------------------------------------------------
# layers

def _local_codes(num_qubits: int, qubits: tuple[int, ...]) -> np.ndarray:
    """Local code of every global index: bit k of the code is qubit ``qubits[k]``."""
    idx = np.arange(2**num_qubits)
    local = np.zeros_like(idx)
    for k, q in enumerate(qubits):
        local |= ((idx >> q) & 1) << k
    return local


def _scatter_codes(codes: np.ndarray, qubits: tuple[int, ...]) -> np.ndarray:
    out = np.zeros_like(codes)
    for k, q in enumerate(qubits):
        out |= ((codes >> k) & 1) << q
    return out


def _check_qubits(qubits: Sequence[int]) -> tuple[int, ...]:
    qs = tuple(int(q) for q in qubits)
    if len(set(qs)) != len(qs) or any(q < 0 for q in qs):
        raise DimensionError(f"bad qubit tuple {qs}")
    return qs


@dataclass(frozen=True)
class OracleGate:
    """One oracle placement: XOR the selected input bit into the answer qubit.

    Index values beyond the oracle length act as the identity, so a wide
    index register may address a short input.
    """

    index_qubits: tuple[int, ...]
    answer_qubit: int

    def __post_init__(self) -> None:
        qs = _check_qubits(self.index_qubits)
        object.__setattr__(self, "index_qubits", qs)
        if self.answer_qubit in qs:
            raise DimensionError("answer qubit overlaps the index register")

    def qubits_used(self) -> tuple[int, ...]:
        return self.index_qubits + (self.answer_qubit,)

    def inverse(self) -> "OracleGate":
        return self  # the oracle gate is its own inverse

    def apply(self, amps: np.ndarray, num_qubits: int, oracle: BitOracle) -> np.ndarray:
        idx = np.arange(2**num_qubits)
        j = np.zeros_like(idx)
        for k, q in enumerate(self.index_qubits):
            j |= ((idx >> q) & 1) << k
        bits = oracle.as_array()
        n = bits.shape[0]
        xj = np.where(j < n, bits[np.minimum(j, n - 1)], 0).astype(np.int64)
        gather = idx ^ (xj << self.answer_qubit)  # involution
        return amps[gather]


@dataclass(frozen=True)
class PermutationLayer:
    """Fixed classical-reversible layer: a bijection on a few qubits.

    ``table[g]`` is the image of local code ``g`` (bit k of a code is
    ``qubits[k]``).  Unitary by construction once the table is a bijection.
    """

    qubits: tuple[int, ...]
    table: tuple[int, ...]
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        qs = _check_qubits(self.qubits)
        object.__setattr__(self, "qubits", qs)
        size = 2 ** len(qs)
        tab = tuple(int(v) for v in self.table)
        if sorted(tab) != list(range(size)):
            raise SimulationError("permutation table is not a bijection")
        object.__setattr__(self, "table", tab)

    def qubits_used(self) -> tuple[int, ...]:
        return self.qubits

    def inverse(self) -> "PermutationLayer":
        inv = np.argsort(np.asarray(self.table))
        return PermutationLayer(self.qubits, tuple(int(v) for v in inv))

    def _gather(self, num_qubits: int) -> np.ndarray:
        key = num_qubits
        g = self._cache.get(key)
        if g is None:
            local = _local_codes(num_qubits, self.qubits)
            inv = np.argsort(np.asarray(self.table))
            mask = 0
            for q in self.qubits:
                mask |= 1 << q
            idx = np.arange(2**num_qubits)
            g = (idx & ~mask) | _scatter_codes(inv[local], self.qubits)
            self._cache[key] = g
        return g

    def apply(self, amps: np.ndarray, num_qubits: int) -> np.ndarray:
        return amps[self._gather(num_qubits)]


@dataclass(frozen=True)
class DiagonalLayer:
    """Fixed diagonal layer: per-local-code unit-modulus phases."""

    qubits: tuple[int, ...]
    phases: tuple[complex, ...]
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        qs = _check_qubits(self.qubits)
        object.__setattr__(self, "qubits", qs)
        ph = np.asarray(self.phases, dtype=np.complex128)
        if ph.shape != (2 ** len(qs),):
            raise DimensionError("phase table size mismatch")
        if np.max(np.abs(np.abs(ph) - 1.0)) > STATE_ATOL:
            raise SimulationError("diagonal entries must have unit modulus")
        object.__setattr__(self, "phases", tuple(complex(v) for v in ph))

    def qubits_used(self) -> tuple[int, ...]:
        return self.qubits

    def inverse(self) -> "DiagonalLayer":
        return DiagonalLayer(self.qubits, tuple(np.conj(v) for v in self.phases))

    def _full(self, num_qubits: int) -> np.ndarray:
        f = self._cache.get(num_qubits)
        if f is None:
            local = _local_codes(num_qubits, self.qubits)
            f = np.asarray(self.phases)[local]
            self._cache[num_qubits] = f
        return f

    def apply(self, amps: np.ndarray, num_qubits: int) -> np.ndarray:
        f = self._full(num_qubits)
        if amps.ndim == 2:
            return amps * f[:, None]
        return amps * f


@dataclass(frozen=True)
class LocalUnitaryLayer:
    """Dense unitary on a small subset of qubits (checked on construction)."""

    qubits: tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self) -> None:
        qs = _check_qubits(self.qubits)
        object.__setattr__(self, "qubits", qs)
        mat = np.asarray(self.matrix, dtype=np.complex128)
        dim = 2 ** len(qs)
        if mat.shape != (dim, dim):
            raise DimensionError(f"matrix shape {mat.shape} does not match {len(qs)} qubits")
        defect = np.max(np.abs(mat.conj().T @ mat - np.eye(dim)))
        if defect > STATE_ATOL:
            raise SimulationError(f"layer is not unitary: defect {defect:g}")
        mat = mat.copy()
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    def qubits_used(self) -> tuple[int, ...]:
        return self.qubits

    def inverse(self) -> "LocalUnitaryLayer":
        return LocalUnitaryLayer(self.qubits, self.matrix.conj().T)

    def apply(self, amps: np.ndarray, num_qubits: int) -> np.ndarray:
        k = len(self.qubits)
        batched = amps.ndim == 2
        batch = amps.shape[1] if batched else 1
        shape = (2,) * num_qubits + ((batch,) if batched else ())
        psi = amps.reshape(shape)
        # qubit q lives on axis (num_qubits - 1 - q); local code bit k is qubits[k]
        axes = [num_qubits - 1 - q for q in reversed(self.qubits)]
        psi = np.moveaxis(psi, axes, range(k))
        moved_shape = psi.shape
        psi = psi.reshape(2**k, -1)
        psi = self.matrix @ psi
        psi = psi.reshape(moved_shape)
        psi = np.moveaxis(psi, range(k), axes)
        return psi.reshape(amps.shape)


Layer = OracleGate | PermutationLayer | DiagonalLayer | LocalUnitaryLayer


# ---------------------------------------------------------------------------
# gate constructors

_H = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=np.complex128) / math.sqrt(2.0)
_X_TABLE = (1, 0)


def hadamard_layer(qubits: Sequence[int]) -> LocalUnitaryLayer:
    qs = tuple(qubits)
    mat = np.array([[1.0]], dtype=np.complex128)
    for _ in qs:
        mat = np.kron(mat, _H)
    return LocalUnitaryLayer(qs, mat)


def x_layer(qubit: int) -> PermutationLayer:
    return PermutationLayer((qubit,), _X_TABLE)


def rotation_layer(qubit: int, theta: float) -> LocalUnitaryLayer:
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    return LocalUnitaryLayer((qubit,), np.array([[c, -s], [s, c]], dtype=np.complex128))


def cnot_layer(control: int, target: int) -> PermutationLayer:
    # local code: bit 0 = control, bit 1 = target
    return PermutationLayer((control, target), (0, 3, 2, 1))


def xor_constant_layer(qubits: Sequence[int], value: int) -> PermutationLayer:
    qs = tuple(qubits)
    size = 2 ** len(qs)
    if not 0 <= value < size:
        raise DimensionError(f"xor constant {value} out of range")
    return PermutationLayer(qs, tuple(g ^ value for g in range(size)))


def permutation_from_function(qubits: Sequence[int], fn: Callable[[int], int]) -> PermutationLayer:
    """Build a reversible layer from a bijection on local codes."""
    qs = tuple(qubits)
    size = 2 ** len(qs)
    return PermutationLayer(qs, tuple(fn(g) for g in range(size)))


def diffusion_layer(qubits: Sequence[int]) -> LocalUnitaryLayer:
    """Inversion about the uniform superposition of the given register."""
    qs = tuple(qubits)
    dim = 2 ** len(qs)
    mat = np.full((dim, dim), 2.0 / dim, dtype=np.complex128) - np.eye(dim)
    return LocalUnitaryLayer(qs, mat)


# ---------------------------------------------------------------------------
# networks


@dataclass(frozen=True)
class QueryNetwork:
    """Alternating fixed layers and oracle placements on a fixed register.

    ``layout`` names the registers the network reads and writes; individual
    oracle gates may address other (index, answer) pairs, which is how
    classical-control constructions route answers into result bits.
    """

    num_qubits: int
    layers: tuple[Layer, ...]
    layout: RegisterLayout
    name: str = ""

    def __post_init__(self) -> None:
        if not 1 <= self.num_qubits <= MAX_QUBITS:
            raise DimensionError(
                f"network width {self.num_qubits} outside supported 1..{MAX_QUBITS}"
            )
        if self.layout.width() > self.num_qubits:
            raise DimensionError("layout is wider than the network register")
        object.__setattr__(self, "layers", tuple(self.layers))
        for layer in self.layers:
            if max(layer.qubits_used()) >= self.num_qubits:
                raise DimensionError(f"layer {layer!r} exceeds register width")

    @property
    def query_count(self) -> int:
        return sum(1 for layer in self.layers if isinstance(layer, OracleGate))

    def inverse(self) -> "QueryNetwork":
        inv = tuple(layer.inverse() for layer in reversed(self.layers))
        return QueryNetwork(self.num_qubits, inv, self.layout, name=self.name + "^-1")


def run_layers(
    layers: Iterable[Layer],
    amps: np.ndarray,
    num_qubits: int,
    oracle: BitOracle | None,
) -> np.ndarray:
    """Apply layers to raw amplitudes, shape ``(dim,)`` or ``(dim, batch)``."""
    for layer in layers:
        if isinstance(layer, OracleGate):
            if oracle is None:
                raise SimulationError("network contains oracle gates but no oracle was given")
            amps = layer.apply(amps, num_qubits, oracle)
        else:
            amps = layer.apply(amps, num_qubits)
    return amps


def run_network(
    net: QueryNetwork,
    oracle: BitOracle | None = None,
    initial: StateVector | None = None,
) -> StateVector:
    """Run the network on |0...0> (or ``initial``) and return the final state."""
    if initial is None:
        amps = np.zeros(2**net.num_qubits, dtype=np.complex128)
        amps[0] = 1.0
    else:
        if initial.num_qubits != net.num_qubits:
            raise DimensionError("initial state width does not match the network")
        amps = initial.amplitudes.copy()
    amps = run_layers(net.layers, amps, net.num_qubits, oracle)
    return StateVector(net.num_qubits, amps)


def apply_oracle(state: StateVector, oracle: BitOracle, layout: RegisterLayout) -> StateVector:
    """One oracle application |j,b,w> -> |j, b XOR x_j, w> on a bare state."""
    if layout.width() > state.num_qubits:
        raise DimensionError("layout is wider than the state")
    gate = OracleGate(layout.index_qubits, layout.answer_qubit)
    return StateVector(state.num_qubits, gate.apply(state.amplitudes, state.num_qubits, oracle))


def bit_probability(amps: np.ndarray, qubit: int, value: int = 1) -> float:
    dim = amps.shape[0]
    sel = ((np.arange(dim) >> qubit) & 1) == value
    return float(np.sum(np.abs(amps[sel]) ** 2))


def acceptance_probability(net: QueryNetwork, oracle: BitOracle | None = None) -> float:
    """Exact probability that the output bit of the final state reads 1."""
    final = run_network(net, oracle)
    p = bit_probability(final.amplitudes, int(net.layout.output_qubit))
    if p < -SCALAR_ATOL or p > 1.0 + SCALAR_ATOL:
        raise SimulationError(f"acceptance probability {p!r} outside [0, 1]")
    return min(max(p, 0.0), 1.0)


def euclidean_distance(a: StateVector, b: StateVector) -> float:
    if a.num_qubits != b.num_qubits:
        raise DimensionError("states live on different registers")
    return float(np.linalg.norm(a.amplitudes - b.amplitudes))


@dataclass(frozen=True)
class MeasurementOutcome:
    """Result of reading one bit: P(bit = 1) plus the collapse rule used."""

    probability_one: float
    qubit: int
    rule: str = (
        "projective one-qubit measurement; the post-measurement state is the "
        "renormalized restriction to the observed branch"
    )

    def __post_init__(self) -> None:
        p = self.probability_one
        if p < -SCALAR_ATOL or p > 1.0 + SCALAR_ATOL:
            raise SimulationError(f"probability {p!r} outside [0, 1]")
        object.__setattr__(self, "probability_one", min(max(p, 0.0), 1.0))


def measure_output_bit(state: StateVector, qubit: int) -> MeasurementOutcome:
    return MeasurementOutcome(bit_probability(state.amplitudes, qubit), qubit)


def collapse(state: StateVector, qubit: int, outcome: int) -> StateVector:
    """Renormalized restriction of the state to one measurement branch."""
    amps = state.amplitudes.copy()
    dim = amps.shape[0]
    keep = ((np.arange(dim) >> qubit) & 1) == outcome
    amps[~keep] = 0.0
    norm = np.linalg.norm(amps)
    if norm < math.sqrt(SCALAR_ATOL):
        raise SimulationError(f"branch {outcome} of qubit {qubit} has no amplitude")
    return StateVector(state.num_qubits, amps / norm)


def sample_output_bit(
    state: StateVector, qubit: int, shots: int, seed: int
) -> np.ndarray:
    """Seeded demo sampler; exact probabilities remain the primary interface."""
    p = bit_probability(state.amplitudes, qubit)
    rng = np.random.default_rng(seed)
    return (rng.random(shots) < p).astype(np.int64)


def network_unitary(net: QueryNetwork, oracle: BitOracle | None = None) -> np.ndarray:
    """Dense matrix of the whole network (small registers only)."""
    dim = 2**net.num_qubits
    if net.num_qubits > 10:
        raise DimensionError("dense network matrix limited to 10 qubits")
    cols = run_layers(net.layers, np.eye(dim, dtype=np.complex128), net.num_qubits, oracle)
    return cols
