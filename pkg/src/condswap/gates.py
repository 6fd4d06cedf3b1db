"""Gate table, If-Then gate constructor, circuit composition and equivalence."""
from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from functools import reduce
from typing import Callable, Optional, Sequence

import numpy as np

from .statevec import (
    ATOL,
    Unitary,
    basis_state,
    embed,
    index_to_bits,
    bits_to_index,
)

EXACT_TOL = 1e-12

I = Unitary(np.eye(2))
NOT = Unitary([[0, 1], [1, 0]])
H = Unitary(np.array([[1, 1], [1, -1]]) / np.sqrt(2))
Z = Unitary([[1, 0], [0, -1]])


def phase(phi: float) -> Unitary:
    """``|s> -> exp(i s phi)|s>``."""
    return Unitary(np.diag([1, cmath.exp(1j * phi)]))


def _permutation(n: int, mapping: Callable[[tuple[int, ...]], tuple[int, ...]]) -> Unitary:
    dim = 1 << n
    m = np.zeros((dim, dim))
    for col in range(dim):
        m[bits_to_index(mapping(index_to_bits(col, n))), col] = 1
    return Unitary(m)


CNOT = _permutation(2, lambda b: (b[0], b[0] ^ b[1]))
SWAP = _permutation(2, lambda b: (b[1], b[0]))
DCNOT = _permutation(2, lambda b: (b[1], b[0] ^ b[1]))
FREDKIN = _permutation(3, lambda b: (b[0], b[2], b[1]) if b[0] else b)
# qubit 1 takes qubit 3's state, 2 takes 1's, 3 takes 2's
CYCLE3 = _permutation(3, lambda b: (b[2], b[0], b[1]))


def cphase(phi: float) -> Unitary:
    return Unitary(np.diag([1, 1, 1, cmath.exp(1j * phi)]))


def relphase(phi: float) -> Unitary:
    """Phase ``exp(i phi)`` on the basis states whose two bits differ.

    Built through :func:`build_conditional`, so it is the ``U^{|i-j|}``
    form with a pure phase as the conditional action.
    """
    return build_conditional(
        ConditionalGateSpec(2, bits_differ, (I, I), cmath.exp(1j * phi))
    )


_FIXED = {
    "I": I,
    "NOT": NOT,
    "X": NOT,
    "H": H,
    "Z": Z,
    "CNOT": CNOT,
    "SWAP": SWAP,
    "DCNOT": DCNOT,
    "FREDKIN": FREDKIN,
    "CYCLE3": CYCLE3,
}
_PARAMETRIZED = {"PHASE": phase, "CPHASE": cphase, "RELPHASE": relphase}

GATE_NAMES = tuple(sorted([*_FIXED, *_PARAMETRIZED]))


def standard_gate(name: str, phi: Optional[float] = None) -> Unitary:
    key = name.upper()
    if key in _FIXED:
        return _FIXED[key]
    if key in _PARAMETRIZED:
        if phi is None:
            raise ValueError(f"gate {name} needs a phase")
        return _PARAMETRIZED[key](phi)
    raise ValueError(f"unknown gate {name!r}; known: {', '.join(GATE_NAMES)}")


def bits_differ(bits: tuple[int, ...]) -> bool:
    return len(set(bits)) > 1


@dataclass(frozen=True)
class ConditionalGateSpec:
    """If ``condition(bits)`` holds apply ``actions[k]`` to qubit k, else do nothing."""

    n_qubits: int
    condition: Callable[[tuple[int, ...]], bool]
    actions: Sequence[Unitary]
    global_phase_when_true: complex = 1.0

    def __post_init__(self):
        if len(self.actions) != self.n_qubits:
            raise ValueError(f"{self.n_qubits} qubits need {self.n_qubits} actions, got {len(self.actions)}")
        for a in self.actions:
            if a.arity != 1:
                raise ValueError("conditional actions must be single-qubit gates")
        if abs(abs(self.global_phase_when_true) - 1) > ATOL:
            raise ValueError("global_phase_when_true must have modulus 1")


def build_conditional(spec: ConditionalGateSpec) -> Unitary:
    """Literal matrix of an If-Then gate.

    Column ``b`` is ``phase * (actions[0] x ... x actions[n-1]) |b>`` when the
    condition holds on ``b`` and ``|b>`` otherwise. Raises
    :class:`NonUnitaryResult` when that matrix is not a valid gate.
    """
    n = spec.n_qubits
    action = reduce(np.kron, [a.matrix for a in spec.actions])
    dim = 1 << n
    m = np.eye(dim, dtype=complex)
    for col in range(dim):
        if spec.condition(index_to_bits(col, n)):
            m[:, col] = spec.global_phase_when_true * action[:, col]
    return Unitary(m)


def definition1_swap() -> Unitary:
    """Flip both qubits when their states are not equal; leave them otherwise."""
    return build_conditional(ConditionalGateSpec(2, bits_differ, (NOT, NOT)))


def definition2_fredkin() -> Unitary:
    """With the control set to 1, flip both targets when they differ."""
    return build_conditional(
        ConditionalGateSpec(3, lambda b: b[0] == 1 and b[1] != b[2], (I, NOT, NOT))
    )


def definition1_style_3q() -> Unitary:
    """Three-qubit analogue of :func:`definition1_swap`: flip all when not all equal.

    This is the candidate that fails to realize CYCLE3.
    """
    return build_conditional(ConditionalGateSpec(3, bits_differ, (NOT, NOT, NOT)))


def controlled_u(u: Unitary) -> Unitary:
    """``|0><0| x I + |1><1| x u`` with the control on the first qubit."""
    if u.arity != 1:
        raise ValueError(f"controlled_u needs a single-qubit gate, got arity {u.arity}")
    m = np.zeros((4, 4), dtype=complex)
    m[:2, :2] = np.eye(2)
    m[2:, 2:] = u.matrix
    return Unitary(m)


@dataclass
class GateExpr:
    """A circuit: gates listed in the order they act."""

    n_qubits: int
    ops: list[tuple[Unitary, tuple[int, ...]]] = field(default_factory=list)

    def then(self, u: Unitary, *targets: int) -> GateExpr:
        if u.arity != len(targets):
            raise ValueError(f"gate of arity {u.arity} given targets {targets}")
        for t in targets:
            if not 1 <= t <= self.n_qubits:
                raise ValueError(f"qubit {t} out of range 1..{self.n_qubits}")
        self.ops.append((u, tuple(targets)))
        return self


def compose(expr: GateExpr, n_qubits: Optional[int] = None) -> Unitary:
    n = expr.n_qubits if n_qubits is None else n_qubits
    total = np.eye(1 << n, dtype=complex)
    for u, targets in expr.ops:
        total = embed(u, targets, n).matrix @ total
    return Unitary(total)


def three_cnot_swap() -> Unitary:
    return compose(GateExpr(2).then(CNOT, 1, 2).then(CNOT, 2, 1).then(CNOT, 1, 2))


def _same_shape(a: Unitary, b: Unitary) -> None:
    if a.matrix.shape != b.matrix.shape:
        raise ValueError(f"dimension mismatch: {a.matrix.shape} vs {b.matrix.shape}")


def equal_exact(a: Unitary, b: Unitary) -> bool:
    _same_shape(a, b)
    return bool(np.max(np.abs(a.matrix - b.matrix)) <= EXACT_TOL)


def equal_up_to_global_phase(a: Unitary, b: Unitary, tol: float = ATOL) -> bool:
    _same_shape(a, b)
    k = np.unravel_index(np.argmax(np.abs(b.matrix)), b.matrix.shape)
    if abs(a.matrix[k]) <= tol:
        return False
    lam = a.matrix[k] / b.matrix[k]
    if abs(abs(lam) - 1) > tol:
        return False
    return bool(np.max(np.abs(a.matrix - lam * b.matrix)) <= tol)


def is_permutation(u: Unitary) -> bool:
    """Every entry is 0 or 1 to within ``EXACT_TOL``."""
    m = u.matrix
    return bool(np.all((np.abs(m) <= EXACT_TOL) | (np.abs(m - 1) <= EXACT_TOL)))


def truth_table(u: Unitary) -> list[tuple[tuple[int, ...], np.ndarray]]:
    """``(input bits, output amplitudes)`` for every computational basis input."""
    n = u.arity
    return [(index_to_bits(col, n), u.matrix[:, col].copy()) for col in range(1 << n)]


def basis_image(u: Unitary, bits: Sequence[int]) -> np.ndarray:
    return u.matrix @ basis_state(bits).amps
