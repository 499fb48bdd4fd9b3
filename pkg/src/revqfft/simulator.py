"""Classical simulation of reversible circuits.

Every gate in the IR is a permutation of basis states, so a circuit is run
by applying truth tables.  Basis states are Python ints (bit ``q`` holds
qubit ``q``).  :func:`run_batch` pushes many basis states through at once
with numpy; :func:`small_unitary` builds dense matrices for the controlled-V
templates only.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .circuit import Circuit, GateKind, TwoQubitOp

V = 0.5 * (1 + 1j) * np.array([[1, -1j], [-1j, 1]])
V_DG = V.conj().T
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)

_X, _CNOT, _SWAP, _TOF, _PER, _PDG = range(6)
_CODES = {
    GateKind.X: _X,
    GateKind.CNOT: _CNOT,
    GateKind.SWAP: _SWAP,
    GateKind.TOFFOLI: _TOF,
    GateKind.PERES: _PER,
    GateKind.PERES_DG: _PDG,
}


class SimulationError(ValueError):
    pass


def _compiled(circuit: Circuit) -> list[tuple]:
    return [(_CODES[g.kind], *g.qubits) for g in circuit.gates]


def _check_state(circuit: Circuit, state: int) -> None:
    if state < 0 or state >> circuit.num_qubits:
        raise SimulationError(
            f"basis state does not fit in {circuit.num_qubits} qubits"
        )


def bits_of(state: int, num_qubits: int) -> list[int]:
    return [(state >> q) & 1 for q in range(num_qubits)]


def int_of(bits: Sequence[int]) -> int:
    return sum(b << q for q, b in enumerate(bits) if b)


def run_basis(circuit: Circuit, state: int) -> int:
    """Apply ``circuit`` to one basis state and return the image."""
    _check_state(circuit, state)
    s = bits_of(state, circuit.num_qubits)
    for op in _compiled(circuit):
        code = op[0]
        if code == _CNOT:
            s[op[2]] ^= s[op[1]]
        elif code == _PER:
            a, b, c = op[1], op[2], op[3]
            s[c] ^= s[a] & s[b]
            s[b] ^= s[a]
        elif code == _TOF:
            s[op[3]] ^= s[op[1]] & s[op[2]]
        elif code == _X:
            s[op[1]] ^= 1
        elif code == _SWAP:
            s[op[1]], s[op[2]] = s[op[2]], s[op[1]]
        else:
            a, b, c = op[1], op[2], op[3]
            s[b] ^= s[a]
            s[c] ^= s[a] & s[b]
    return int_of(s)


def run_batch(circuit: Circuit, bits: np.ndarray) -> np.ndarray:
    """Run a batch of basis states given as a ``(num_qubits, batch)`` 0/1 array."""
    bits = np.array(bits, dtype=np.uint8, copy=True)
    if bits.ndim != 2 or bits.shape[0] != circuit.num_qubits:
        raise SimulationError(
            f"expected bit array with {circuit.num_qubits} rows, got shape {bits.shape}"
        )
    s = bits
    for op in _compiled(circuit):
        code = op[0]
        if code == _CNOT:
            s[op[2]] ^= s[op[1]]
        elif code == _PER:
            a, b, c = op[1], op[2], op[3]
            s[c] ^= s[a] & s[b]
            s[b] ^= s[a]
        elif code == _TOF:
            s[op[3]] ^= s[op[1]] & s[op[2]]
        elif code == _X:
            s[op[1]] ^= 1
        elif code == _SWAP:
            s[[op[1], op[2]]] = s[[op[2], op[1]]]
        else:
            a, b, c = op[1], op[2], op[3]
            s[b] ^= s[a]
            s[c] ^= s[a] & s[b]
    return s


def zeros(num_qubits: int, batch: int) -> np.ndarray:
    return np.zeros((num_qubits, batch), dtype=np.uint8)


def write_words(bits: np.ndarray, qubits: Sequence[int], values: Iterable[int]) -> None:
    """Store two's-complement ``values`` (one per batch column) into ``qubits``."""
    values = np.asarray(list(values), dtype=np.int64)
    w = len(qubits)
    mask = (1 << w) - 1
    raw = values & mask
    for j, q in enumerate(qubits):
        bits[q] = (raw >> j) & 1


def read_words(bits: np.ndarray, qubits: Sequence[int], signed: bool = True) -> np.ndarray:
    w = len(qubits)
    raw = np.zeros(bits.shape[1], dtype=np.int64)
    for j, q in enumerate(qubits):
        raw |= bits[q].astype(np.int64) << j
    if signed:
        raw = np.where(raw >= (1 << (w - 1)), raw - (1 << w), raw)
    return raw


def get_word(state: int, qubits: Sequence[int], signed: bool = True) -> int:
    raw = 0
    for j, q in enumerate(qubits):
        raw |= ((state >> q) & 1) << j
    w = len(qubits)
    if signed and raw >> (w - 1):
        raw -= 1 << w
    return raw


def set_word(state: int, qubits: Sequence[int], value: int) -> int:
    for j, q in enumerate(qubits):
        bit = (value >> j) & 1
        state = (state & ~(1 << q)) | (bit << q)
    return state


@dataclass(frozen=True)
class SparseState:
    """Superposition of basis states with complex amplitudes."""

    terms: Mapping[int, complex]
    num_qubits: int

    def __post_init__(self):
        terms = {int(k): complex(v) for k, v in self.terms.items() if v != 0}
        if not terms:
            raise SimulationError("state has no terms")
        for k in terms:
            if k < 0 or k >> self.num_qubits:
                raise SimulationError("basis label does not fit in num_qubits")
        norm = sum(abs(a) ** 2 for a in terms.values())
        if abs(norm - 1.0) > 1e-9:
            raise SimulationError(f"state is not normalised (norm^2 = {norm})")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def basis(cls, state: int, num_qubits: int) -> SparseState:
        return cls({state: 1.0}, num_qubits)

    def __len__(self) -> int:
        return len(self.terms)


def run(circuit: Circuit, state: SparseState) -> SparseState:
    """Apply ``circuit`` term by term; amplitudes ride along unchanged."""
    if state.num_qubits != circuit.num_qubits:
        raise SimulationError("state and circuit disagree on qubit count")
    labels = list(state.terms)
    bits = np.array([bits_of(k, circuit.num_qubits) for k in labels], dtype=np.uint8).T
    out = run_batch(circuit, bits)
    weights = [1 << q for q in range(circuit.num_qubits)]
    images = [sum(w for w, b in zip(weights, col) if b) for col in out.T.tolist()]
    return SparseState(
        {img: state.terms[k] for k, img in zip(labels, images)}, circuit.num_qubits
    )


_TWO_QUBIT = {"CNOT": PAULI_X, "CV": V, "CV_DG": V_DG}


def small_unitary(ops: Sequence[TwoQubitOp], num_qubits: int = 3) -> np.ndarray:
    """Dense unitary of a controlled-gate network, ops applied in list order.

    Basis index bit ``q`` is local qubit ``q``.
    """
    if num_qubits > 4:
        raise SimulationError("small_unitary is limited to 4 qubits")
    dim = 1 << num_qubits
    total = np.eye(dim, dtype=complex)
    for op in ops:
        u = _TWO_QUBIT[op.name]
        m = np.zeros((dim, dim), dtype=complex)
        for col in range(dim):
            if not (col >> op.control) & 1:
                m[col, col] = 1
                continue
            t = (col >> op.target) & 1
            for t2 in (0, 1):
                row = (col & ~(1 << op.target)) | (t2 << op.target)
                m[row, col] = u[t2, t]
        total = m @ total
    return total


def permutation_matrix(kind: GateKind) -> np.ndarray:
    """8x8 matrix of a three-qubit logical gate acting on local qubits 0, 1, 2."""
    m = np.zeros((8, 8))
    for col in range(8):
        out = kind.apply(tuple((col >> q) & 1 for q in range(3)))
        m[sum(b << q for q, b in enumerate(out)), col] = 1
    return m


def amplitudes_close(a: SparseState, b: SparseState, tol: float = 1e-12) -> bool:
    if set(a.terms) != set(b.terms):
        return False
    return all(math.isclose(abs(a.terms[k] - b.terms[k]), 0, abs_tol=tol) for k in a.terms)


def encode(data: Sequence[int], layout) -> int:
    """Basis state holding integer samples ``data`` at their bit-reversed slots.

    Each sample sits in the real word of slot ``layout.input_order[j]`` as
    ``x_j * 2^A``; imaginary words, ancillas and any auxiliary bank are zero.
    """
    if len(data) != layout.N:
        raise SimulationError(f"expected {layout.N} samples, got {len(data)}")
    state = 0
    for j, x in enumerate(data):
        x = int(x)
        if not 0 <= x < (1 << layout.m):
            raise SimulationError(f"sample {x} outside [0, {(1 << layout.m) - 1}]")
        slot = layout.slots[layout.input_order[j]]
        state = set_word(state, slot.real.qubits, x << layout.A)
    return state


def encode_batch(data: np.ndarray, layout) -> np.ndarray:
    """Column-per-case version of :func:`encode` for a ``(batch, N)`` array."""
    data = np.asarray(data, dtype=np.int64)
    if data.ndim != 2 or data.shape[1] != layout.N:
        raise SimulationError(f"expected shape (batch, {layout.N})")
    if data.min(initial=0) < 0 or data.max(initial=0) >= (1 << layout.m):
        raise SimulationError("sample outside the m-bit input range")
    bits = zeros(layout.num_qubits, data.shape[0])
    for j in range(layout.N):
        slot = layout.slots[layout.input_order[j]]
        write_words(bits, slot.real.qubits, data[:, j] << layout.A)
    return bits


def slot_words(state: int, slots) -> list[tuple[int, int]]:
    return [(get_word(state, s.real.qubits), get_word(state, s.imag.qubits)) for s in slots]


def decode_words(state: int, layout, order: str = "spectrum", bank: str = "data") -> list[tuple[int, int]]:
    """Raw (real, imag) words in natural index order.

    ``order="spectrum"`` reads slot k as X_k; ``order="signal"`` reads the
    bit-reversed slots that hold x_j before the transform (and after the
    inverse).
    """
    slots = layout.slots if bank == "data" else layout.aux_slots
    words = slot_words(state, slots)
    if order == "spectrum":
        return words
    return [words[layout.input_order[j]] for j in range(layout.N)]


def decode(state: int, layout, order: str = "spectrum", bank: str = "data") -> list[complex]:
    scale = 1 << layout.A
    return [complex(r / scale, i / scale) for r, i in decode_words(state, layout, order, bank)]


def decode_batch(bits: np.ndarray, layout, order: str = "spectrum", bank: str = "data") -> np.ndarray:
    """Integer words as an array of shape ``(batch, N, 2)``."""
    slots = layout.slots if bank == "data" else layout.aux_slots
    words = np.stack(
        [np.stack([read_words(bits, s.real.qubits), read_words(bits, s.imag.qubits)], axis=-1) for s in slots],
        axis=1,
    )
    if order == "signal":
        words = words[:, list(layout.input_order)]
    return words
