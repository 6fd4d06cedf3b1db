import cmath
import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from condswap import gates as g
from condswap.statevec import (
    NonUnitaryResult,
    Unitary,
    apply,
    basis_state,
    fidelity,
    index_to_bits,
    random_product,
    tensor,
)


def bit_map(u, n):
    """Basis permutation realized by ``u``: input bits -> output bits."""
    out = {}
    for col in range(1 << n):
        (row,) = np.flatnonzero(np.abs(u.matrix[:, col]) > 0.5)
        assert abs(u.matrix[row, col] - 1) < 1e-12
        out[index_to_bits(col, n)] = index_to_bits(row, n)
    return out


def basis(n):
    return list(itertools.product((0, 1), repeat=n))


# oracles on bits alone
def swap_rule(i, j):
    return (j, i)


def cnot_rule(i, j):
    return (i, i ^ j)


def cnot21_rule(i, j):
    return (i ^ j, j)


def dcnot_rule(i, j):
    return (j, i ^ j)


def fredkin_rule(c, a, b):
    return (c, b, a) if c else (c, a, b)


def flip_all_unless_equal(*bits):
    return bits if len(set(bits)) == 1 else tuple(1 - b for b in bits)


def cycle_rule(b1, b2, b3):
    return (b3, b1, b2)


ALL_GATES = [
    g.I, g.NOT, g.H, g.Z, g.phase(0.3), g.CNOT, g.SWAP, g.DCNOT, g.cphase(1.1), g.relphase(0.7),
    g.FREDKIN, g.CYCLE3, g.definition1_swap(), g.definition2_fredkin(), g.definition1_style_3q(),
    g.controlled_u(g.H), g.three_cnot_swap(),
]


@pytest.mark.parametrize("gate, rule, n", [
    (g.SWAP, swap_rule, 2), (g.CNOT, cnot_rule, 2), (g.DCNOT, dcnot_rule, 2),
    (g.FREDKIN, fredkin_rule, 3), (g.CYCLE3, cycle_rule, 3),
])
def test_permutation_gates_match_bit_rules(gate, rule, n):
    assert bit_map(gate, n) == {b: rule(*b) for b in basis(n)}


def test_standard_examples():
    np.testing.assert_array_equal(apply(g.SWAP, [1, 2], basis_state([0, 1])).amps, basis_state([1, 0]).amps)
    phi = 0.9
    out = apply(g.phase(phi), [1], basis_state([1]))
    np.testing.assert_allclose(out.amps, [0, cmath.exp(1j * phi)])
    np.testing.assert_array_equal(apply(g.DCNOT, [1, 2], basis_state([1, 0])).amps, basis_state([0, 1]).amps)


def test_standard_gate_lookup():
    assert g.equal_exact(g.standard_gate("swap"), g.SWAP)
    assert g.equal_exact(g.standard_gate("RELPHASE", 0.7), g.relphase(0.7))
    np.testing.assert_allclose(np.diag(g.relphase(0.7).matrix), [1, cmath.exp(0.7j), cmath.exp(0.7j), 1])
    with pytest.raises(ValueError, match="unknown gate"):
        g.standard_gate("toffoli")
    with pytest.raises(ValueError, match="needs a phase"):
        g.standard_gate("CPHASE")


def test_definition1_truth_table():
    assert bit_map(g.definition1_swap(), 2) == {(0, 0): (0, 0), (1, 1): (1, 1), (0, 1): (1, 0), (1, 0): (0, 1)}
    assert g.equal_exact(g.definition1_swap(), g.SWAP)
    assert g.is_permutation(g.definition1_swap())


def test_always_false_condition_is_identity():
    spec = g.ConditionalGateSpec(2, lambda b: False, (g.H, g.NOT))
    assert g.equal_exact(g.build_conditional(spec), Unitary(np.eye(4)))


def test_hadamard_actions_not_unitary():
    # Hand-built columns: |00>, |11> fixed; |01> -> (H|0>)(H|1>), |10> -> (H|1>)(H|0>).
    c00 = np.array([1, 0, 0, 0])
    c01 = np.array([1, -1, 1, -1]) / 2
    assert np.vdot(c00, c01) != 0
    with pytest.raises(NonUnitaryResult):
        g.build_conditional(g.ConditionalGateSpec(2, g.bits_differ, (g.H, g.H)))


def test_spec_validation():
    with pytest.raises(ValueError):
        g.ConditionalGateSpec(2, g.bits_differ, (g.NOT,))
    with pytest.raises(ValueError):
        g.ConditionalGateSpec(1, g.bits_differ, (g.CNOT,))
    with pytest.raises(ValueError):
        g.ConditionalGateSpec(2, g.bits_differ, (g.NOT, g.NOT), 2.0)


def test_definition2_matches_fredkin():
    assert bit_map(g.definition2_fredkin(), 3) == {b: fredkin_rule(*b) for b in basis(3)}
    assert bit_map(g.definition2_fredkin(), 3)[(1, 0, 1)] == (1, 1, 0)
    assert g.equal_exact(g.definition2_fredkin(), g.FREDKIN)


def test_definition1_style_3q_rule_and_disproof():
    table = bit_map(g.definition1_style_3q(), 3)
    assert table == {b: flip_all_unless_equal(*b) for b in basis(3)}
    assert table[(0, 0, 0)] == (0, 0, 0)
    assert table[(0, 1, 1)] == (1, 0, 0)
    assert cycle_rule(0, 1, 1) == (1, 0, 1)
    disagree = [b for b in basis(3) if flip_all_unless_equal(*b) != cycle_rule(*b)]
    assert (0, 1, 1) in disagree
    assert not g.equal_exact(g.definition1_style_3q(), g.CYCLE3)


def test_controlled_u():
    assert g.equal_exact(g.controlled_u(g.NOT), g.CNOT)
    assert g.equal_exact(g.controlled_u(g.I), Unitary(np.eye(4)))
    phi = 1.3
    out = apply(g.controlled_u(g.phase(phi)), [1, 2], basis_state([1, 1]))
    np.testing.assert_allclose(out.amps, [0, 0, 0, cmath.exp(1j * phi)])
    with pytest.raises(ValueError):
        g.controlled_u(g.CNOT)


def test_compose_examples():
    assert g.equal_exact(g.three_cnot_swap(), g.SWAP)
    assert g.equal_exact(g.compose(g.GateExpr(1).then(g.NOT, 1).then(g.NOT, 1)), g.I)
    two = g.compose(g.GateExpr(2).then(g.CNOT, 1, 2).then(g.CNOT, 2, 1))
    # circuit order: CNOT(1,2) acts first, then CNOT(2,1)
    assert bit_map(two, 2) == {b: cnot21_rule(*cnot_rule(*b)) for b in basis(2)}
    assert g.equal_exact(two, g.DCNOT)


def test_compose_is_circuit_order():
    expr = g.GateExpr(1).then(g.H, 1).then(g.Z, 1)
    np.testing.assert_allclose(g.compose(expr).matrix, g.Z.matrix @ g.H.matrix)


def test_gate_expr_validation():
    with pytest.raises(ValueError):
        g.GateExpr(2).then(g.CNOT, 1)
    with pytest.raises(ValueError):
        g.GateExpr(2).then(g.NOT, 3)


def test_cycle3_from_swaps():
    expr = g.GateExpr(3).then(g.SWAP, 2, 3).then(g.SWAP, 1, 2)
    assert g.equal_exact(g.compose(expr), g.CYCLE3)


def test_equality_helpers():
    u = g.relphase(0.4) @ g.H.kron(g.phase(0.2))
    assert g.equal_up_to_global_phase(u, Unitary(cmath.exp(1j * np.pi / 7) * u.matrix))
    assert not g.equal_exact(u, Unitary(cmath.exp(1j * np.pi / 7) * u.matrix))
    assert not g.equal_exact(g.SWAP, g.CNOT)
    assert not g.equal_up_to_global_phase(g.SWAP, g.CNOT)
    with pytest.raises(ValueError):
        g.equal_exact(g.NOT, g.CNOT)


@pytest.mark.parametrize("gate", ALL_GATES)
def test_reversibility(gate):
    m = gate.matrix
    np.testing.assert_allclose(m.conj().T @ m, np.eye(m.shape[0]), atol=1e-10)
    images = m  # column c is the image of basis state c
    gram = images.conj().T @ images
    np.testing.assert_allclose(gram - np.diag(np.diag(gram)), 0, atol=1e-10)


def test_unknown_qubit_swap_100_states():
    rng = np.random.default_rng(7)
    swap = g.definition1_swap()
    for _ in range(100):
        state, (q1, q2) = random_product(rng, 2)
        assert fidelity(apply(swap, [1, 2], state), tensor(q2, q1)) >= 1 - 1e-12


def test_cycle3_reassigns_coefficients():
    rng = np.random.default_rng(8)
    for _ in range(100):
        state, (q1, q2, q3) = random_product(rng, 3)
        out = apply(g.CYCLE3, [1, 2, 3], state)
        np.testing.assert_allclose(out.amps, tensor(q3, q1, q2).amps, atol=1e-12)


@given(st.lists(st.booleans(), min_size=4, max_size=4), st.floats(0, 2 * np.pi))
def test_build_conditional_with_phase_only_actions_is_diagonal_unitary(truth, phi):
    spec = g.ConditionalGateSpec(2, lambda b: truth[2 * b[0] + b[1]], (g.I, g.I), cmath.exp(1j * phi))
    u = g.build_conditional(spec)
    expected = [cmath.exp(1j * phi) if t else 1 for t in truth]
    np.testing.assert_allclose(u.matrix, np.diag(expected), atol=1e-12)


@given(st.lists(st.booleans(), min_size=8, max_size=8),
       st.lists(st.sampled_from(["I", "NOT", "H", "Z"]), min_size=3, max_size=3))
def test_build_conditional_returns_only_unitaries(truth, names):
    spec = g.ConditionalGateSpec(3, lambda b: truth[4 * b[0] + 2 * b[1] + b[2]],
                                 [g.standard_gate(n) for n in names])
    try:
        u = g.build_conditional(spec)
    except NonUnitaryResult:
        return
    np.testing.assert_allclose(u.matrix.conj().T @ u.matrix, np.eye(8), atol=1e-10)
