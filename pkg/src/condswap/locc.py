"""Two-party LOCC simulation with Bell pairs and a counted classical channel.

Alice and Bob hold disjoint qubits of one joint state. Qubits carry stable
integer ids that are never reused; measured qubits are removed from the
joint state, so ids and positions differ once a protocol has run.
"""
from __future__ import annotations

import copy
import enum
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import gates
from .statevec import (
    StateVector,
    Unitary,
    apply,
    drop_qubit,
    enumerate_branches,
    measure,
    permute,
    tensor,
)

BELL = StateVector(np.array([1, 0, 0, 1]) / np.sqrt(2))
BELL_STATES = {
    "phi+": BELL,
    "phi-": StateVector(np.array([1, 0, 0, -1]) / np.sqrt(2)),
    "psi+": StateVector(np.array([0, 1, 1, 0]) / np.sqrt(2)),
    "psi-": StateVector(np.array([0, 1, -1, 0]) / np.sqrt(2)),
}
MAX_MEASUREMENTS = 16


class Party(enum.Enum):
    ALICE = "Alice"
    BOB = "Bob"

    @property
    def other(self) -> Party:
        return Party.BOB if self is Party.ALICE else Party.ALICE


class OwnershipError(RuntimeError):
    """A party touched a qubit it does not hold."""


@dataclass
class ResourceLedger:
    ebits_consumed: int = 0
    cbits_alice_to_bob: int = 0
    cbits_bob_to_alice: int = 0

    @property
    def cbits_sent(self) -> int:
        return self.cbits_alice_to_bob + self.cbits_bob_to_alice

    @property
    def cbits_by_direction(self) -> tuple[int, int]:
        return self.cbits_alice_to_bob, self.cbits_bob_to_alice

    def totals(self) -> tuple[int, int]:
        """``(ebits, cbits)``."""
        return self.ebits_consumed, self.cbits_sent


@dataclass(frozen=True)
class Event:
    kind: str
    party: Optional[Party]
    qubits: tuple[int, ...]
    detail: str = ""
    outcome: Optional[int] = None
    probability: Optional[float] = None
    ebits: int = 0
    cbits: int = 0

    def record(self) -> dict:
        rec = asdict(self)
        rec["party"] = self.party.value if self.party else None
        rec["qubits"] = list(self.qubits)
        return rec

    def line(self) -> str:
        who = self.party.value if self.party else "-"
        parts = [f"{self.kind:<7}", f"{who:<5}"]
        if self.qubits:
            parts.append("q=" + ",".join(map(str, self.qubits)))
        if self.detail:
            parts.append(self.detail)
        if self.outcome is not None:
            parts.append(f"-> {self.outcome}")
        if self.probability is not None:
            parts.append(f"p={self.probability:.6g}")
        parts.append(f"[ebits={self.ebits} cbits={self.cbits}]")
        return " ".join(parts)


class _Unresolved(Exception):
    def __init__(self, possible: list[int]):
        self.possible = possible


class _Impossible(Exception):
    pass


class LoccSystem:
    """Joint state of both parties plus ledger and transcript for one protocol run.

    Measurement outcomes come from, in order of precedence: an explicit
    ``draw``, a forced outcome script (used by :func:`run_all_branches`), or a
    generator seeded with ``seed``.
    """

    def __init__(self, joint: StateVector, owners: Sequence[Party], seed: Optional[int] = None):
        if len(owners) != joint.n_qubits:
            raise ValueError(f"{joint.n_qubits} qubits but {len(owners)} owners")
        self._joint = joint
        self._ids = list(range(1, joint.n_qubits + 1))
        self._owner = dict(zip(self._ids, owners))
        self._next_id = joint.n_qubits + 1
        self.ledger = ResourceLedger()
        self.transcript: list[Event] = []
        self._rng = np.random.default_rng(seed)
        self._script: Optional[tuple[int, ...]] = None
        self._measured = 0
        self.probability = 1.0

    @classmethod
    def split(cls, alice: StateVector, bob: Optional[StateVector] = None, seed: Optional[int] = None) -> LoccSystem:
        """Alice's qubits first, then Bob's."""
        if bob is None:
            return cls(alice, [Party.ALICE] * alice.n_qubits, seed)
        owners = [Party.ALICE] * alice.n_qubits + [Party.BOB] * bob.n_qubits
        return cls(tensor(alice, bob), owners, seed)

    @property
    def joint(self) -> StateVector:
        return self._joint

    @property
    def qubits(self) -> tuple[int, ...]:
        return tuple(self._ids)

    def owner(self, qubit: int) -> Party:
        return self._owner[qubit]

    def owned(self, party: Party) -> frozenset[int]:
        return frozenset(q for q in self._ids if self._owner[q] is party)

    def state(self, order: Sequence[int]) -> StateVector:
        """The joint state with qubits arranged as listed in ``order``."""
        if sorted(order) != sorted(self._ids):
            raise ValueError(f"order {list(order)} must list every live qubit {self._ids}")
        return permute(self._joint, [self._pos(q) for q in order])

    def _pos(self, qubit: int) -> int:
        try:
            return self._ids.index(qubit) + 1
        except ValueError:
            raise ValueError(f"qubit {qubit} is not in the system") from None

    def _check_owner(self, party: Party, qubits: Sequence[int]) -> None:
        for q in qubits:
            self._pos(q)
            if self._owner[q] is not party:
                raise OwnershipError(f"{party.value} cannot act on qubit {q} held by {self._owner[q].value}")

    def _log(self, kind, party, qubits, **kw) -> None:
        self.transcript.append(
            Event(kind, party, tuple(qubits), ebits=self.ledger.ebits_consumed, cbits=self.ledger.cbits_sent, **kw)
        )

    def create_bell_pair(self, first: Party = Party.ALICE) -> tuple[int, int]:
        """Share ``(|00> + |11>)/sqrt(2)``; returns the halves held by ``first`` and by the other party."""
        joint = tensor(self._joint, BELL)
        a, b = self._next_id, self._next_id + 1
        self._next_id += 2
        self._joint = joint
        self._ids += [a, b]
        self._owner[a], self._owner[b] = first, first.other
        self.ledger.ebits_consumed += 1
        self._log("ebit", first, (a, b), detail=f"{first.value}-{first.other.value}")
        return a, b

    def local_apply(self, party: Party, u: Unitary, targets: Sequence[int], label: str = "") -> None:
        self._check_owner(party, targets)
        self._joint = apply(u, [self._pos(q) for q in targets], self._joint)
        self._log("gate", party, targets, detail=label)

    def _choose(self, pos: int, draw: Optional[float]):
        if draw is not None or self._script is None:
            if draw is None:
                draw = float(self._rng.random())
            return measure(self._joint, pos, draw)
        branches = enumerate_branches(self._joint, pos)
        if self._measured >= len(self._script):
            raise _Unresolved([b.bit for b in branches if b.possible])
        chosen = branches[self._script[self._measured]]
        if not chosen.possible:
            raise _Impossible
        return chosen

    def local_measure(self, party: Party, qubit: int, draw: Optional[float] = None) -> int:
        """Measure in the computational basis and discard the qubit."""
        self._check_owner(party, [qubit])
        pos = self._pos(qubit)
        outcome = self._choose(pos, draw)
        self._measured += 1
        self.probability *= outcome.probability
        self._joint = drop_qubit(outcome.post_state, pos)
        self._ids.remove(qubit)
        del self._owner[qubit]
        self._log("measure", party, [qubit], outcome=outcome.bit, probability=outcome.probability)
        return outcome.bit

    def send_bit(self, sender: Party, bit: int) -> int:
        if bit not in (0, 1):
            raise ValueError(f"not a bit: {bit!r}")
        if sender is Party.ALICE:
            self.ledger.cbits_alice_to_bob += 1
        else:
            self.ledger.cbits_bob_to_alice += 1
        self._log("send", sender, (), detail=f"{sender.value}->{sender.other.value}", outcome=bit)
        return bit


def teleport(sys: LoccSystem, source: int) -> int:
    """Move ``source`` to a fresh qubit at the other party; returns its id."""
    sender = sys.owner(source)
    receiver = sender.other
    mine, theirs = sys.create_bell_pair(first=sender)
    sys.local_apply(sender, gates.CNOT, [source, mine], "CNOT")
    sys.local_apply(sender, gates.H, [source], "H")
    m_phase = sys.send_bit(sender, sys.local_measure(sender, source))
    m_flip = sys.send_bit(sender, sys.local_measure(sender, mine))
    if m_flip:
        sys.local_apply(receiver, gates.NOT, [theirs], "NOT")
    if m_phase:
        sys.local_apply(receiver, gates.Z, [theirs], "Z")
    return theirs


def nonlocal_control_u(sys: LoccSystem, control: int, target: int, u: Unitary) -> None:
    """Controlled-``u`` between qubits held by different parties, one ebit and one cbit each way."""
    ctl_party = sys.owner(control)
    tgt_party = sys.owner(target)
    if ctl_party is tgt_party:
        raise ValueError("control and target belong to the same party; use local_apply")
    cat, relay = sys.create_bell_pair(first=ctl_party)
    # copy the control value into the shared pair
    sys.local_apply(ctl_party, gates.CNOT, [control, cat], "CNOT")
    if sys.send_bit(ctl_party, sys.local_measure(ctl_party, cat)):
        sys.local_apply(tgt_party, gates.NOT, [relay], "NOT")
    sys.local_apply(tgt_party, gates.controlled_u(u), [relay, target], "C-U")
    # disentangle the relay with an X-basis measurement
    sys.local_apply(tgt_party, gates.H, [relay], "H")
    if sys.send_bit(tgt_party, sys.local_measure(tgt_party, relay)):
        sys.local_apply(ctl_party, gates.Z, [control], "Z")


def nonlocal_cnot(sys: LoccSystem, control: int, target: int) -> None:
    nonlocal_control_u(sys, control, target, gates.NOT)


def nonlocal_swap_teleport(sys: LoccSystem, a: int, b: int) -> tuple[int, int]:
    """Exchange the states of ``a`` (Alice) and ``b`` (Bob) with two teleportations.

    Returns the ids now holding Alice's and Bob's halves of the result.
    """
    if sys.owner(a) is not Party.ALICE or sys.owner(b) is not Party.BOB:
        raise OwnershipError("expected a at Alice and b at Bob")
    moved = teleport(sys, a)
    sys.local_apply(Party.BOB, gates.SWAP, [moved, b], "SWAP")
    back = teleport(sys, moved)
    return back, b


def nonlocal_swap_three_cnots(sys: LoccSystem, a: int, b: int) -> tuple[int, int]:
    if sys.owner(a) is not Party.ALICE or sys.owner(b) is not Party.BOB:
        raise OwnershipError("expected a at Alice and b at Bob")
    nonlocal_cnot(sys, a, b)
    nonlocal_cnot(sys, b, a)
    nonlocal_cnot(sys, a, b)
    return a, b


@dataclass
class Branch:
    outcomes: tuple[int, ...]
    probability: float
    state: StateVector
    ledger: ResourceLedger
    transcript: list[Event] = field(repr=False)


Protocol = Callable[[LoccSystem], Sequence[int]]


def _replay(initial: LoccSystem, protocol: Protocol, script: tuple[int, ...]):
    sys = copy.deepcopy(initial)
    sys._script = script
    order = protocol(sys)
    return sys, sys.state(order)


def run_all_branches(initial: LoccSystem, protocol: Protocol) -> list[Branch]:
    """Run ``protocol`` once per possible measurement record.

    ``protocol`` returns the qubit ids in the order its output should be read;
    each branch's state is arranged that way. ``initial`` is left untouched.
    """
    branches = []
    pending = [()]
    while pending:
        script = pending.pop()
        if len(script) > MAX_MEASUREMENTS:
            raise RuntimeError(f"protocol exceeds {MAX_MEASUREMENTS} measurements")
        try:
            sys, final = _replay(initial, protocol, script)
        except _Unresolved as more:
            pending.extend(script + (bit,) for bit in reversed(more.possible))
            continue
        except _Impossible:
            continue
        branches.append(Branch(script, sys.probability, final, sys.ledger, sys.transcript))
    return branches


@dataclass(frozen=True)
class ProtocolSpec:
    """A named protocol on one (teleport) or two data qubits: 1 at Alice, 2 at Bob."""

    name: str
    n_data: int
    run: Protocol
    ideal: Unitary


def _teleport_protocol(sys):
    return (teleport(sys, 1),)


def _cnot_protocol(sys):
    nonlocal_cnot(sys, 1, 2)
    return (1, 2)


PROTOCOLS = {
    p.name: p
    for p in [
        ProtocolSpec("teleport", 1, _teleport_protocol, gates.I),
        ProtocolSpec("nonlocal-cnot", 2, _cnot_protocol, gates.CNOT),
        ProtocolSpec("nonlocal-swap-teleport", 2, lambda s: nonlocal_swap_teleport(s, 1, 2), gates.SWAP),
        ProtocolSpec("nonlocal-swap-3cnot", 2, lambda s: nonlocal_swap_three_cnots(s, 1, 2), gates.SWAP),
    ]
}


def data_system(spec: ProtocolSpec, data: StateVector, seed: Optional[int] = None) -> LoccSystem:
    if data.n_qubits != spec.n_data:
        raise ValueError(f"{spec.name} takes {spec.n_data} data qubits, got {data.n_qubits}")
    return LoccSystem(data, [Party.ALICE, Party.BOB][: spec.n_data], seed)
