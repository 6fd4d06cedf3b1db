"""Class 1 / Class 2 classification of two-qubit gates.

A gate is Class 1 when, in the computational basis, it acts conditionally on
one qubit only: ``sum_i |i><i| x U_i`` (control on the first qubit) or
``sum_j U_j x |j><j|`` (control on the second). Anything else needs
conditional action on both qubits and is Class 2.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .gates import equal_up_to_global_phase
from .statevec import ATOL, NonUnitaryResult, Unitary

Blocks = tuple[Unitary, Unitary]


class Verdict(enum.Enum):
    CLASS1 = "Class1"
    CLASS2 = "Class2"


class Side(enum.Enum):
    FIRST = "first"
    SECOND = "second"
    BOTH = "both(diagonal)"


@dataclass(frozen=True)
class GateClass:
    verdict: Verdict
    control_side: Optional[Side] = None
    blocks: Optional[Blocks] = None


def _check_two_qubit(g: Unitary) -> None:
    if g.arity != 2:
        raise ValueError(f"classification needs a two-qubit gate, got arity {g.arity}")


def _as_tensor(g: Unitary) -> np.ndarray:
    # t[a, b, a', b'] = <a b| g |a' b'>
    return g.matrix.reshape(2, 2, 2, 2)


def one_sided_decomposition(g: Unitary, side: Side) -> Optional[Blocks]:
    """Per-control-value blocks ``(U_0, U_1)`` if ``g`` is controlled from ``side``."""
    _check_two_qubit(g)
    t = _as_tensor(g)
    if side is Side.FIRST:
        cross = [t[0, :, 1, :], t[1, :, 0, :]]
        raw = [t[0, :, 0, :], t[1, :, 1, :]]
    elif side is Side.SECOND:
        cross = [t[:, 0, :, 1], t[:, 1, :, 0]]
        raw = [t[:, 0, :, 0], t[:, 1, :, 1]]
    else:
        raise ValueError(f"side must be FIRST or SECOND, got {side}")
    if max(np.max(np.abs(c)) for c in cross) > ATOL:
        return None
    try:
        return Unitary(raw[0]), Unitary(raw[1])
    except NonUnitaryResult:
        return None


def reassemble(blocks: Blocks, side: Side) -> Unitary:
    """Inverse of :func:`one_sided_decomposition`."""
    projectors = [np.diag([1, 0]), np.diag([0, 1])]
    if side is Side.SECOND:
        return Unitary(sum(np.kron(u.matrix, p) for u, p in zip(blocks, projectors)))
    return Unitary(sum(np.kron(p, u.matrix) for u, p in zip(blocks, projectors)))


def single_system_reducible(g: Unitary) -> bool:
    """True when the control is vacuous: both blocks agree up to a global phase."""
    _check_two_qubit(g)
    for side in (Side.FIRST, Side.SECOND):
        blocks = one_sided_decomposition(g, side)
        if blocks is not None and equal_up_to_global_phase(*blocks):
            return True
    return False


def classify(g: Unitary) -> GateClass:
    _check_two_qubit(g)
    first = one_sided_decomposition(g, Side.FIRST)
    second = one_sided_decomposition(g, Side.SECOND)
    if first is not None and second is not None:
        return GateClass(Verdict.CLASS1, Side.BOTH, first)
    if first is not None:
        return GateClass(Verdict.CLASS1, Side.FIRST, first)
    if second is not None:
        return GateClass(Verdict.CLASS1, Side.SECOND, second)
    return GateClass(Verdict.CLASS2)
