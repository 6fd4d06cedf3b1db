"""Dense state vectors and unitaries for a handful of qubits.

Qubits are numbered from 1. Basis index ``b`` encodes the bit-string
``b1 b2 ... bn`` with qubit 1 as the most significant bit, so ``|0>_1|1>_2``
is index 1 and ``|1>_1|0>_2`` is index 2.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

MAX_QUBITS = 8
ATOL = 1e-10


class QubitLimitError(ValueError):
    """Raised when an operation would exceed ``MAX_QUBITS``."""


class NonUnitaryResult(ValueError):
    """Raised when a matrix that should be a gate fails U^dagger U = I."""


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=complex)
    array.setflags(write=False)
    return array


def _check_count(n: int) -> None:
    if n < 1:
        raise ValueError("need at least one qubit")
    if n > MAX_QUBITS:
        raise QubitLimitError(f"{n} qubits exceeds the limit of {MAX_QUBITS}")


@dataclass(frozen=True, eq=False)
class StateVector:
    amps: np.ndarray

    def __post_init__(self):
        amps = _frozen(np.ravel(self.amps))
        size = amps.shape[0]
        n = size.bit_length() - 1
        if size < 2 or 1 << n != size:
            raise ValueError(f"amplitude count {size} is not a power of two >= 2")
        _check_count(n)
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > ATOL:
            raise ValueError(f"state is not normalized (norm^2 = {norm!r})")
        object.__setattr__(self, "amps", amps)

    @property
    def n_qubits(self) -> int:
        return self.amps.shape[0].bit_length() - 1

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def __repr__(self):
        return f"StateVector(n_qubits={self.n_qubits}, amps={self.amps!r})"


@dataclass(frozen=True, eq=False)
class Unitary:
    """A ``2**k x 2**k`` matrix checked for unitarity on construction."""

    matrix: np.ndarray

    def __post_init__(self):
        m = _frozen(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"gate matrix must be square, got shape {m.shape}")
        k = m.shape[0].bit_length() - 1
        if m.shape[0] < 2 or 1 << k != m.shape[0]:
            raise ValueError(f"gate dimension {m.shape[0]} is not a power of two >= 2")
        if not np.all(np.isfinite(m)):
            raise ValueError("gate entries must be finite")
        defect = np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0])))
        if defect > ATOL:
            raise NonUnitaryResult(
                f"U^dagger U differs from the identity by {defect:.3g}"
            )
        object.__setattr__(self, "matrix", m)

    @property
    def arity(self) -> int:
        return self.matrix.shape[0].bit_length() - 1

    def dagger(self) -> Unitary:
        return Unitary(self.matrix.conj().T)

    def kron(self, other: Unitary) -> Unitary:
        return Unitary(np.kron(self.matrix, other.matrix))

    def __matmul__(self, other: Unitary) -> Unitary:
        return Unitary(self.matrix @ other.matrix)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)

    def __repr__(self):
        return f"Unitary(arity={self.arity}, matrix={self.matrix!r})"


@dataclass(frozen=True)
class MeasurementOutcome:
    """One branch of a single-qubit computational-basis measurement.

    ``post_state`` is ``None`` for a branch that cannot occur.
    """

    bit: int
    probability: float
    post_state: Optional[StateVector]

    @property
    def possible(self) -> bool:
        return self.post_state is not None


def bits_to_index(bits: Sequence[int]) -> int:
    index = 0
    for b in bits:
        index = (index << 1) | b
    return index


def index_to_bits(index: int, n: int) -> tuple[int, ...]:
    return tuple((index >> (n - 1 - k)) & 1 for k in range(n))


def basis_state(bits: Sequence[int]) -> StateVector:
    bits = list(bits)
    _check_count(len(bits))
    if any(b not in (0, 1) for b in bits):
        raise ValueError(f"bits must be 0 or 1, got {bits}")
    amps = np.zeros(1 << len(bits), dtype=complex)
    amps[bits_to_index(bits)] = 1.0
    return StateVector(amps)


def qubit_state(alpha: complex, beta: complex) -> StateVector:
    """``alpha|0> + beta|1>``, normalized."""
    v = np.array([alpha, beta], dtype=complex)
    return StateVector(v / np.linalg.norm(v))


def tensor(*states: StateVector) -> StateVector:
    _check_count(sum(s.n_qubits for s in states))
    amps = states[0].amps
    for s in states[1:]:
        amps = np.kron(amps, s.amps)
    return StateVector(amps)


def _check_targets(targets: Sequence[int], n: int) -> list[int]:
    targets = list(targets)
    if len(set(targets)) != len(targets):
        raise ValueError(f"duplicate target qubits in {targets}")
    for t in targets:
        if not 1 <= t <= n:
            raise ValueError(f"qubit {t} out of range 1..{n}")
    return targets


def _apply_matrix(m: np.ndarray, targets: list[int], amps: np.ndarray, n: int) -> np.ndarray:
    k = len(targets)
    axes = [t - 1 for t in targets]
    psi = amps.reshape((2,) * n)
    gate = m.reshape((2,) * (2 * k))
    out = np.tensordot(gate, psi, axes=(list(range(k, 2 * k)), axes))
    # tensordot puts the gate's output axes first
    out = np.moveaxis(out, list(range(k)), axes)
    return out.reshape(-1)


def apply(u: Unitary, targets: Sequence[int], s: StateVector) -> StateVector:
    """Apply ``u`` to ``targets``; ``targets[0]`` is u's most significant factor."""
    targets = _check_targets(targets, s.n_qubits)
    if len(targets) != u.arity:
        raise ValueError(f"gate of arity {u.arity} given {len(targets)} targets")
    return StateVector(_apply_matrix(u.matrix, targets, s.amps, s.n_qubits))


def embed(u: Unitary, targets: Sequence[int], n: int) -> Unitary:
    """Full ``2**n`` matrix of ``u`` acting on ``targets``."""
    _check_count(n)
    targets = _check_targets(targets, n)
    if len(targets) != u.arity:
        raise ValueError(f"gate of arity {u.arity} given {len(targets)} targets")
    dim = 1 << n
    cols = [_apply_matrix(u.matrix, targets, np.eye(dim, dtype=complex)[:, c], n) for c in range(dim)]
    return Unitary(np.column_stack(cols))


def inner(a: StateVector, b: StateVector) -> complex:
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"qubit counts differ: {a.n_qubits} vs {b.n_qubits}")
    return complex(np.vdot(a.amps, b.amps))


def fidelity(a: StateVector, b: StateVector) -> float:
    return min(1.0, abs(inner(a, b)) ** 2)


def _project(s: StateVector, qubit: int, bit: int) -> tuple[float, np.ndarray]:
    psi = s.amps.reshape((2,) * s.n_qubits).copy()
    index = [slice(None)] * s.n_qubits
    index[qubit - 1] = 1 - bit
    psi[tuple(index)] = 0.0
    flat = psi.reshape(-1)
    return float(np.vdot(flat, flat).real), flat


def enumerate_branches(s: StateVector, qubit: int) -> list[MeasurementOutcome]:
    """Both outcomes of measuring ``qubit``; impossible ones have no post-state."""
    _check_targets([qubit], s.n_qubits)
    branches = []
    for bit in (0, 1):
        p, flat = _project(s, qubit, bit)
        if p <= ATOL:
            branches.append(MeasurementOutcome(bit, 0.0, None))
        else:
            branches.append(MeasurementOutcome(bit, p, StateVector(flat / np.sqrt(p))))
    return branches


def measure(s: StateVector, qubit: int, draw: float) -> MeasurementOutcome:
    """Measure ``qubit``: outcome 0 iff ``draw < P(0)``, with impossible outcomes forced away."""
    if not 0.0 <= draw < 1.0:
        raise ValueError(f"draw must lie in [0, 1), got {draw}")
    zero, one = enumerate_branches(s, qubit)
    chosen = zero if draw < zero.probability else one
    if not chosen.possible:
        chosen = one if chosen is zero else zero
    return chosen


def drop_qubit(s: StateVector, qubit: int) -> StateVector:
    """Remove a qubit that is in a definite computational-basis state."""
    _check_targets([qubit], s.n_qubits)
    if s.n_qubits == 1:
        raise ValueError("cannot drop the only qubit")
    psi = np.moveaxis(s.amps.reshape((2,) * s.n_qubits), qubit - 1, 0)
    w0 = np.linalg.norm(psi[0]) ** 2
    w1 = np.linalg.norm(psi[1]) ** 2
    if min(w0, w1) > ATOL:
        raise ValueError(f"qubit {qubit} is not in a basis state; measure it first")
    rest = psi[0] if w0 >= w1 else psi[1]
    return StateVector(rest.reshape(-1))


def permute(s: StateVector, order: Sequence[int]) -> StateVector:
    """Reorder qubits so that new qubit ``k`` is old qubit ``order[k-1]``."""
    order = _check_targets(order, s.n_qubits)
    if len(order) != s.n_qubits:
        raise ValueError("order must list every qubit exactly once")
    psi = s.amps.reshape((2,) * s.n_qubits)
    return StateVector(np.transpose(psi, [q - 1 for q in order]).reshape(-1))


def schmidt_coefficients(s: StateVector, n_first: int) -> np.ndarray:
    """Schmidt coefficients across the cut after the first ``n_first`` qubits."""
    if not 1 <= n_first < s.n_qubits:
        raise ValueError(f"cut position {n_first} out of range")
    m = s.amps.reshape(1 << n_first, -1)
    return np.linalg.svd(m, compute_uv=False)


def random_qubit(rng: np.random.Generator) -> StateVector:
    """Haar-random single-qubit state drawn from ``rng``."""
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    return StateVector(v / np.linalg.norm(v))


def random_product(rng: np.random.Generator, n: int) -> tuple[StateVector, list[StateVector]]:
    """A random product state together with its single-qubit factors."""
    factors = [random_qubit(rng) for _ in range(n)]
    return tensor(*factors), factors
