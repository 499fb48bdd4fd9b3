import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from revqfft.arith import build_adder, build_shift, Direction
from revqfft.circuit import (
    CNOT, PERES, SWAP, TOFFOLI, X,
    Circuit, CircuitError, Gate, GateKind, Register,
    count, deserialize, expand_three_qubit_template, from_dict, invert, serialize, to_dict,
)
from revqfft.compiler import build_qfft
from revqfft.simulator import run_basis, run_batch, small_unitary, permutation_matrix


def test_append_builds_circuit():
    c = Circuit(2).append(CNOT(0, 1))
    assert len(c) == 1
    assert c.gates[0] == Gate(GateKind.CNOT, (0, 1))


def test_append_out_of_range_qubit():
    with pytest.raises(CircuitError):
        Circuit(4).append(X(9))


def test_double_x_is_identity():
    c = Circuit(1).append(X(0)).append(X(0))
    assert run_basis(c, 0) == 0


@pytest.mark.parametrize("gate", [lambda: Gate(GateKind.CNOT, (1, 1)), lambda: Gate(GateKind.X, (0, 1)),
                                  lambda: Gate(GateKind.SWAP, (-1, 0))])
def test_bad_gates_rejected(gate):
    with pytest.raises(CircuitError):
        gate()


def test_register_overlap_rejected():
    c = Circuit(4, registers=[Register("a", (0, 1))])
    with pytest.raises(CircuitError):
        c.add_register(Register("b", (1, 2)))
    with pytest.raises(CircuitError):
        c.add_register(Register("a", (2, 3)))


def test_invert_reverses_order():
    c = Circuit(2, [CNOT(0, 1), X(1)])
    assert invert(c).gates == [X(1), CNOT(0, 1)]


def test_invert_swaps_peres_for_its_dagger():
    c = Circuit(3, [PERES(0, 1, 2)])
    assert invert(c).gates == [Gate(GateKind.PERES_DG, (0, 1, 2))]
    both = Circuit(3, c.gates + invert(c).gates)
    assert all(run_basis(both, s) == s for s in range(8))


gate_strategy = st.one_of(
    st.builds(X, st.integers(0, 4)),
    st.lists(st.integers(0, 4), min_size=2, max_size=2, unique=True).map(lambda q: CNOT(*q)),
    st.lists(st.integers(0, 4), min_size=2, max_size=2, unique=True).map(lambda q: SWAP(*q)),
    st.lists(st.integers(0, 4), min_size=3, max_size=3, unique=True).map(lambda q: TOFFOLI(*q)),
    st.lists(st.integers(0, 4), min_size=3, max_size=3, unique=True).map(lambda q: PERES(*q)),
)


@given(st.lists(gate_strategy, max_size=30))
def test_invert_is_involution(gates):
    c = Circuit(5, gates)
    assert invert(invert(c)) == c


@given(st.lists(gate_strategy, max_size=30), st.integers(0, 31))
def test_circuit_then_inverse_is_identity(gates, state):
    c = Circuit(5, gates)
    assert run_basis(invert(c), run_basis(c, state)) == state


def test_qfft_then_inverse_on_random_states():
    c, layout = build_qfft(4, 3, 5)
    rng = np.random.default_rng(3)
    bits = rng.integers(0, 2, size=(c.num_qubits, 20), dtype=np.uint8)
    assert np.array_equal(run_batch(invert(c), run_batch(c, bits)), bits)


def test_counts_adder_and_shift():
    assert count(build_adder(range(5), range(5, 10))).expanded_count == 51
    assert count(build_shift(range(6), 1, Direction.LEFT)).expanded_count == 13


def test_counts_empty():
    stats = count(Circuit(3))
    assert stats.expanded_count == 0
    assert all(v == 0 for v in stats.logical_counts.values())


def test_weights():
    c = Circuit(3, [X(0), CNOT(0, 1), SWAP(0, 1), TOFFOLI(0, 1, 2), PERES(0, 1, 2)])
    assert count(c).expanded_count == 1 + 1 + 3 + 5 + 4


@pytest.mark.parametrize("kind,size", [(GateKind.TOFFOLI, 5), (GateKind.PERES, 4), (GateKind.PERES_DG, 4)])
def test_templates_match_permutations(kind, size):
    ops = expand_three_qubit_template(kind)
    assert len(ops) == size
    assert np.abs(small_unitary(ops) - permutation_matrix(kind)).max() < 1e-12


def test_peres_template_then_dagger_is_identity():
    ops = expand_three_qubit_template(GateKind.PERES) + expand_three_qubit_template(GateKind.PERES_DG)
    assert np.abs(small_unitary(ops) - np.eye(8)).max() < 1e-12


def test_no_template_for_two_qubit_gates():
    with pytest.raises(CircuitError):
        expand_three_qubit_template(GateKind.CNOT)


@given(st.lists(gate_strategy, max_size=20))
def test_serialize_round_trip(gates):
    c = Circuit(5, gates, [Register("a", (0, 1)), Register("b", (2,))], {"note": "x"})
    assert deserialize(serialize(c)) == c


def test_qfft_serialize_round_trip_is_deterministic():
    c, _ = build_qfft(4, 2, 4)
    blob = serialize(c)
    assert deserialize(blob) == c
    assert serialize(build_qfft(4, 2, 4)[0]) == blob


def test_missing_num_qubits():
    doc = to_dict(Circuit(2, [CNOT(0, 1)]))
    del doc["num_qubits"]
    with pytest.raises(CircuitError):
        from_dict(doc)


def test_unknown_gate_kind():
    doc = to_dict(Circuit(2))
    doc["gates"] = [{"kind": "FOO", "qubits": [0]}]
    with pytest.raises(CircuitError):
        deserialize(json.dumps(doc))


def test_bad_version_and_malformed_json():
    doc = to_dict(Circuit(1))
    doc["version"] = 99
    with pytest.raises(CircuitError):
        from_dict(doc)
    with pytest.raises(CircuitError):
        deserialize(b"{not json")
