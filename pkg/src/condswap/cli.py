"""Command line front end.

    condswap truth-table swap
    condswap classify cnot
    condswap classify --file gate.txt
    condswap simulate nonlocal-cnot --all-branches --json
    condswap verify

Exit status: 0 on success, 1 when a verification check fails, 2 on bad usage.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

import numpy as np

from . import gates
from .checks import run_checks
from .classify import classify
from .locc import BELL_STATES, PROTOCOLS, data_system, run_all_branches
from .statevec import NonUnitaryResult, apply, fidelity, index_to_bits, random_product
from .textio import format_amplitude, format_matrix, ket, read_unitary

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2
U64 = 2**64


class UsageError(Exception):
    pass


def _emit(payload: dict, text: str, as_json: bool) -> None:
    if as_json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def _pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _gate(name: str, phase: Optional[float]):
    try:
        return gates.standard_gate(name, phase)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _expand(amps: np.ndarray, n: int) -> list[tuple[tuple[int, ...], complex]]:
    return [(index_to_bits(i, n), complex(z)) for i, z in enumerate(amps) if abs(z) > 1e-12]


def _render_terms(terms) -> str:
    parts = []
    for bits, z in terms:
        coeff = format_amplitude(z)
        parts.append(ket(bits) if coeff == "1" else f"{coeff}{ket(bits)}")
    return " + ".join(parts)


def cmd_truth_table(args) -> int:
    u = _gate(args.gate, args.phase)
    rows = []
    lines = []
    for bits, column in gates.truth_table(u):
        terms = _expand(column, u.arity)
        rows.append({"input": "".join(map(str, bits)),
                     "output": [{"basis": "".join(map(str, b)), "amplitude": _pair(z)} for b, z in terms]})
        lines.append(f"{ket(bits)} -> {_render_terms(terms)}")
    _emit({"command": "truth-table", "gate": args.gate.upper(), "phase": args.phase, "rows": rows},
          "\n".join(lines), args.json)
    return EXIT_OK


def cmd_matrix(args) -> int:
    sys.stdout.write(format_matrix(_gate(args.gate, args.phase)))
    return EXIT_OK


def cmd_classify(args) -> int:
    if (args.gate is None) == (args.file is None):
        raise UsageError("give exactly one of a gate name or --file")
    if args.file is not None:
        try:
            u = read_unitary(args.file)
        except NonUnitaryResult as exc:
            raise UsageError(f"{args.file}: unitarity check failed: {exc}") from None
        except (OSError, ValueError) as exc:
            raise UsageError(f"{args.file}: {exc}") from None
        label = args.file
    else:
        u = _gate(args.gate, args.phase)
        label = args.gate.upper()
    if u.arity != 2:
        raise UsageError(f"classification needs a 4x4 gate, {label} has arity {u.arity}")
    result = classify(u)
    payload = {"command": "classify", "gate": label, "class": result.verdict.value,
               "control_side": result.control_side.value if result.control_side else None,
               "blocks": None}
    lines = [f"{label}: {result.verdict.value}"]
    if result.blocks is not None:
        payload["blocks"] = [[[_pair(z) for z in row] for row in b.matrix] for b in result.blocks]
        lines.append(f"control: {result.control_side.value}")
        for value, block in enumerate(result.blocks):
            lines.append(f"block for control={value}:")
            lines.extend("  " + row for row in format_matrix(block).splitlines())
    _emit(payload, "\n".join(lines), args.json)
    return EXIT_OK


def _data_state(spec, choice: str, seed: int):
    if choice == "random":
        return random_product(np.random.default_rng(seed), spec.n_data)[0]
    if spec.n_data != 2:
        raise UsageError(f"{spec.name} takes one data qubit; Bell inputs need two")
    return BELL_STATES[choice]


def _ledger_dict(ledger) -> dict:
    return {"ebits": ledger.ebits_consumed, "cbits": ledger.cbits_sent,
            "cbits_alice_to_bob": ledger.cbits_alice_to_bob, "cbits_bob_to_alice": ledger.cbits_bob_to_alice}


def _ledger_line(ledger) -> str:
    return (f"ledger: ebits={ledger.ebits_consumed} cbits={ledger.cbits_sent} "
            f"(Alice->Bob {ledger.cbits_alice_to_bob}, Bob->Alice {ledger.cbits_bob_to_alice})")


def cmd_simulate(args) -> int:
    spec = PROTOCOLS.get(args.protocol)
    if spec is None:
        raise UsageError(f"unknown protocol {args.protocol!r}; known: {', '.join(PROTOCOLS)}")
    if not args.all_branches and args.seed is None:
        raise UsageError("sampling mode needs --seed (or use --all-branches)")
    seed = 0 if args.seed is None else args.seed
    if not 0 <= seed < U64:
        raise UsageError("--seed must lie in [0, 2**64)")
    input_seq, draw_seq = np.random.SeedSequence(seed).spawn(2)
    data = _data_state(spec, args.input, input_seq)
    ideal = apply(spec.ideal, list(range(1, spec.n_data + 1)), data)
    payload = {"command": "simulate", "protocol": spec.name, "seed": seed, "input": args.input,
               "input_amplitudes": [_pair(z) for z in data.amps]}
    lines = [f"protocol {spec.name}, input {args.input}, seed {seed}"]

    if args.all_branches:
        branches = run_all_branches(data_system(spec, data), spec.run)
        rows = []
        for b in branches:
            f = fidelity(b.state, ideal)
            rows.append({"outcomes": list(b.outcomes), "probability": b.probability, "fidelity": f})
            lines.append(f"branch {''.join(map(str, b.outcomes))}  p={b.probability:.6g}  fidelity={f:.15g}")
        ledger = branches[0].ledger
        payload.update(mode="all-branches", branches=rows, ledger=_ledger_dict(ledger),
                       probability_total=sum(b.probability for b in branches))
        lines.append(f"{len(branches)} branches")
    else:
        system = data_system(spec, data, seed=draw_seq)
        final = system.state(spec.run(system))
        f = fidelity(final, ideal)
        ledger = system.ledger
        payload.update(mode="sample", transcript=[e.record() for e in system.transcript],
                       fidelity=f, probability=system.probability, ledger=_ledger_dict(ledger))
        lines.extend(e.line() for e in system.transcript)
        lines.append(f"fidelity={f:.15g}")
    lines.append(_ledger_line(ledger))
    _emit(payload, "\n".join(lines), args.json)
    return EXIT_OK


def cmd_verify(args) -> int:
    results = run_checks()
    ok = all(passed for _, passed in results)
    payload = {"command": "verify", "checks": [{"name": n, "pass": p} for n, p in results], "all_pass": ok}
    text = "\n".join(f"{n}: {'PASS' if p else 'FAIL'}" for n, p in results)
    _emit(payload, text, args.json)
    return EXIT_OK if ok else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="condswap", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.set_defaults(func=func)
        return p

    gate_help = "gate name: " + ", ".join(gates.GATE_NAMES)
    p = add("truth-table", cmd_truth_table, "action on every basis state")
    p.add_argument("gate", help=gate_help)
    p.add_argument("--phase", type=float, help="phase in radians for PHASE/CPHASE/RELPHASE")

    p = add("matrix", cmd_matrix, "print a gate in matrix-file format")
    p.add_argument("gate", help=gate_help)
    p.add_argument("--phase", type=float)

    p = add("classify", cmd_classify, "Class 1 / Class 2 verdict for a two-qubit gate")
    p.add_argument("gate", nargs="?", help=gate_help)
    p.add_argument("--file", help="4x4 matrix file, one row per line, entries re+imj")
    p.add_argument("--phase", type=float)

    p = add("simulate", cmd_simulate, "run an LOCC protocol")
    p.add_argument("protocol", help=", ".join(PROTOCOLS))
    p.add_argument("--seed", type=int)
    p.add_argument("--all-branches", action="store_true", help="enumerate every measurement record")
    p.add_argument("--input", default="random", choices=["random", *BELL_STATES],
                   help="random product input (from --seed) or a Bell state")

    add("verify", cmd_verify, "run every identity check")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"condswap: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
