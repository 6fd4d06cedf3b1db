"""Named identity checks run by ``condswap verify``."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from . import gates as g
from .classify import Side, Verdict, classify, reassemble, single_system_reducible
from .locc import BELL_STATES, PROTOCOLS, data_system, run_all_branches
from .statevec import (
    NonUnitaryResult,
    apply,
    basis_state,
    fidelity,
    random_product,
    tensor,
)

SEED = 20240229
FIDELITY_TOL = 1e-12
PHI = 0.7


@dataclass(frozen=True)
class Check:
    name: str
    run: Callable[[], bool]


def _maps(u, pairs) -> bool:
    return all(np.allclose(u.matrix @ basis_state(a).amps, basis_state(b).amps, atol=g.EXACT_TOL, rtol=0) for a, b in pairs)


def _definition1_table() -> bool:
    rows = [((0, 0), (0, 0)), ((1, 1), (1, 1)), ((0, 1), (1, 0)), ((1, 0), (0, 1))]
    return _maps(g.definition1_swap(), rows)


def _unknown_qubit_swap() -> bool:
    rng = np.random.default_rng(SEED)
    swap = g.definition1_swap()
    for _ in range(100):
        state, (q1, q2) = random_product(rng, 2)
        if fidelity(apply(swap, [1, 2], state), tensor(q2, q1)) < 1 - FIDELITY_TOL:
            return False
    return True


def _cycle3_reassignment() -> bool:
    rng = np.random.default_rng(SEED + 1)
    for _ in range(100):
        state, (q1, q2, q3) = random_product(rng, 3)
        if fidelity(apply(g.CYCLE3, [1, 2, 3], state), tensor(q3, q1, q2)) < 1 - FIDELITY_TOL:
            return False
    return True


def _three_qubit_disproof() -> bool:
    style = g.definition1_style_3q()
    return any(not np.allclose(style.matrix[:, c], g.CYCLE3.matrix[:, c]) for c in range(8))


def _rejects_hadamard_actions() -> bool:
    try:
        g.build_conditional(g.ConditionalGateSpec(2, g.bits_differ, (g.H, g.H)))
    except NonUnitaryResult:
        return True
    return False


def _verdict(u, expected: Verdict) -> Callable[[], bool]:
    return lambda: classify(u).verdict is expected


def _class1_reassembly() -> bool:
    gate_list = [g.CNOT, g.cphase(PHI), g.relphase(PHI), g.controlled_u(g.H)]
    for u in gate_list:
        c = classify(u)
        side = Side.FIRST if c.control_side is Side.BOTH else c.control_side
        if not np.allclose(reassemble(c.blocks, side).matrix, u.matrix, atol=1e-10, rtol=0):
            return False
    return True


def _protocol_inputs(n_data: int) -> Iterator:
    rng = np.random.default_rng(SEED + 2)
    for _ in range(3):
        yield random_product(rng, n_data)[0]
    if n_data == 2:
        yield from BELL_STATES.values()


def _all_branches_correct(name: str, expected_branches: int) -> Callable[[], bool]:
    spec = PROTOCOLS[name]

    def check() -> bool:
        targets = list(range(1, spec.n_data + 1))
        for data in _protocol_inputs(spec.n_data):
            ideal = apply(spec.ideal, targets, data)
            branches = run_all_branches(data_system(spec, data), spec.run)
            if len(branches) != expected_branches:
                return False
            if abs(sum(b.probability for b in branches) - 1) > 1e-9:
                return False
            if any(fidelity(b.state, ideal) < 1 - FIDELITY_TOL for b in branches):
                return False
        return True

    return check


def ledger_of(name: str) -> tuple[int, int]:
    spec = PROTOCOLS[name]
    data = tensor(*[basis_state([0])] * spec.n_data)
    sys = data_system(spec, data, seed=0)
    spec.run(sys)
    return sys.ledger.totals()


def _dominates() -> bool:
    cnot = ledger_of("nonlocal-cnot")
    return all(ledger_of(name)[k] > cnot[k] for name in ("nonlocal-swap-teleport", "nonlocal-swap-3cnot") for k in (0, 1))


def all_checks() -> list[Check]:
    return [
        Check("definition1 == SWAP", lambda: g.equal_exact(g.definition1_swap(), g.SWAP) and g.is_permutation(g.definition1_swap())),
        Check("definition1 truth table rows", _definition1_table),
        Check("unknown-qubit swap on 100 product states", _unknown_qubit_swap),
        Check("CNOT12 CNOT21 CNOT12 == SWAP", lambda: g.equal_exact(g.three_cnot_swap(), g.SWAP)),
        Check("CNOT12 CNOT21 == DCNOT", lambda: g.equal_exact(g.compose(g.GateExpr(2).then(g.CNOT, 1, 2).then(g.CNOT, 2, 1)), g.DCNOT)),
        Check("definition2 == FREDKIN", lambda: g.equal_exact(g.definition2_fredkin(), g.FREDKIN)),
        Check("CYCLE3 cyclic reassignment on 100 product states", _cycle3_reassignment),
        Check("definition1-style 3-qubit gate != CYCLE3", _three_qubit_disproof),
        Check("conditional with Hadamard actions rejected", _rejects_hadamard_actions),
        Check("classify CNOT -> Class1", _verdict(g.CNOT, Verdict.CLASS1)),
        Check(f"classify CPHASE({PHI}) -> Class1", _verdict(g.cphase(PHI), Verdict.CLASS1)),
        Check(f"classify RELPHASE({PHI}) -> Class1", _verdict(g.relphase(PHI), Verdict.CLASS1)),
        Check("classify SWAP -> Class2", _verdict(g.SWAP, Verdict.CLASS2)),
        Check("classify DCNOT -> Class2", _verdict(g.DCNOT, Verdict.CLASS2)),
        Check("Class1 blocks reassemble the gate", _class1_reassembly),
        Check("I x PHASE is single-system reducible", lambda: single_system_reducible(g.I.kron(g.phase(PHI)))),
        Check("NOT x NOT is not single-system reducible", lambda: not single_system_reducible(g.NOT.kron(g.NOT))),
        Check("teleport correct in all 4 branches", _all_branches_correct("teleport", 4)),
        Check("nonlocal CNOT correct in all 4 branches", _all_branches_correct("nonlocal-cnot", 4)),
        Check("nonlocal SWAP (teleport) correct in all 16 branches", _all_branches_correct("nonlocal-swap-teleport", 16)),
        Check("nonlocal SWAP (3 CNOTs) correct in all 64 branches", _all_branches_correct("nonlocal-swap-3cnot", 64)),
        Check("nonlocal CNOT ledger = (1 ebits, 2 cbits)", lambda: ledger_of("nonlocal-cnot") == (1, 2)),
        Check("nonlocal SWAP ledger = (2 ebits, 4 cbits)", lambda: ledger_of("nonlocal-swap-teleport") == (2, 4)),
        Check("three-CNOT SWAP ledger = (3 ebits, 6 cbits)", lambda: ledger_of("nonlocal-swap-3cnot") == (3, 6)),
        Check("SWAP ledger dominates CNOT ledger", _dominates),
    ]


def run_checks() -> list[tuple[str, bool]]:
    results = []
    for check in all_checks():
        try:
            ok = bool(check.run())
        except Exception:
            ok = False
        results.append((check.name, ok))
    return results
