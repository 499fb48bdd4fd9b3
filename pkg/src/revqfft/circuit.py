"""Reversible circuit IR: gate kinds, registers, inversion, counting and JSON I/O.

Qubit ``q`` of a basis state is bit ``q`` of its integer label, and every
register lists its qubits least-significant first.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterable, NamedTuple

FORMAT_VERSION = 1


class CircuitError(ValueError):
    """Raised for invalid gates, registers or circuit documents."""


class GateKind(Enum):
    """Logical reversible gates; controls are always listed before targets.

    ``PERES`` on ``(a, b, c)`` maps to ``(a, a^b, (a&b)^c)``; ``PERES_DG`` is
    its inverse, ``(a, a^b, (a&(a^b))^c)``.
    """

    X = "X"
    CNOT = "CNOT"
    SWAP = "SWAP"
    TOFFOLI = "TOFFOLI"
    PERES = "PERES"
    PERES_DG = "PERES_DG"

    @property
    def arity(self) -> int:
        return self._arity

    @property
    def weight(self) -> int:
        """Cost in two-qubit "quantum gates" (NOT and CNOT both count 1)."""
        return self._weight

    @property
    def inverse(self) -> GateKind:
        if self is GateKind.PERES:
            return GateKind.PERES_DG
        if self is GateKind.PERES_DG:
            return GateKind.PERES
        return self

    def apply(self, bits: tuple[int, ...]) -> tuple[int, ...]:
        """Truth-table action on the gate's own bits, in qubit order."""
        if self is GateKind.X:
            return (bits[0] ^ 1,)
        if self is GateKind.CNOT:
            return (bits[0], bits[1] ^ bits[0])
        if self is GateKind.SWAP:
            return (bits[1], bits[0])
        a, b, c = bits
        if self is GateKind.TOFFOLI:
            return (a, b, c ^ (a & b))
        if self is GateKind.PERES:
            return (a, a ^ b, c ^ (a & b))
        b ^= a
        return (a, b, c ^ (a & b))


_ARITY = {
    GateKind.X: 1,
    GateKind.CNOT: 2,
    GateKind.SWAP: 2,
    GateKind.TOFFOLI: 3,
    GateKind.PERES: 3,
    GateKind.PERES_DG: 3,
}

_WEIGHT = {
    GateKind.X: 1,
    GateKind.CNOT: 1,
    GateKind.SWAP: 3,
    GateKind.TOFFOLI: 5,
    GateKind.PERES: 4,
    GateKind.PERES_DG: 4,
}

# plain attributes: Gate validation runs for every emitted gate and enum
# hashing in a dict lookup is comparatively slow
for _kind in GateKind:
    _kind._arity = _ARITY[_kind]
    _kind._weight = _WEIGHT[_kind]


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    qubits: tuple[int, ...]

    def __post_init__(self):
        qubits = tuple(map(int, self.qubits))
        object.__setattr__(self, "qubits", qubits)
        n = len(qubits)
        if n != self.kind._arity:
            raise CircuitError(
                f"{self.kind.value} acts on {self.kind.arity} qubits, got {n}"
            )
        if len(set(qubits)) != n:
            raise CircuitError(f"duplicate qubit in {self.kind.value}{qubits}")
        if min(qubits) < 0:
            raise CircuitError(f"negative qubit index in {self.kind.value}{qubits}")

    def inverse(self) -> Gate:
        return Gate(self.kind.inverse, self.qubits)


def X(q: int) -> Gate:
    return Gate(GateKind.X, (q,))


def CNOT(control: int, target: int) -> Gate:
    return Gate(GateKind.CNOT, (control, target))


def SWAP(a: int, b: int) -> Gate:
    return Gate(GateKind.SWAP, (a, b))


def TOFFOLI(c1: int, c2: int, target: int) -> Gate:
    return Gate(GateKind.TOFFOLI, (c1, c2, target))


def PERES(a: int, b: int, c: int) -> Gate:
    return Gate(GateKind.PERES, (a, b, c))


@dataclass(frozen=True)
class Register:
    name: str
    qubits: tuple[int, ...]

    def __post_init__(self):
        qubits = tuple(int(q) for q in self.qubits)
        object.__setattr__(self, "qubits", qubits)
        if not qubits:
            raise CircuitError(f"register {self.name!r} is empty")
        if len(set(qubits)) != len(qubits):
            raise CircuitError(f"register {self.name!r} repeats a qubit")

    @property
    def width(self) -> int:
        return len(self.qubits)

    @property
    def sign(self) -> int:
        return self.qubits[-1]

    def __len__(self) -> int:
        return len(self.qubits)

    def __getitem__(self, i):
        return self.qubits[i]


@dataclass
class Circuit:
    """An ordered gate list over ``num_qubits`` qubits with named registers."""

    num_qubits: int
    gates: list[Gate] = field(default_factory=list)
    registers: list[Register] = field(default_factory=list)
    metadata: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.num_qubits < 0:
            raise CircuitError("num_qubits must be non-negative")
        gates, self.gates = list(self.gates), []
        for gate in gates:
            self.append(gate)
        regs, self.registers = list(self.registers), []
        for reg in regs:
            self.add_register(reg)

    def _check(self, qubits: Iterable[int], what: str) -> None:
        for q in qubits:
            if q >= self.num_qubits:
                raise CircuitError(
                    f"{what} uses qubit {q} but circuit has {self.num_qubits} qubits"
                )

    def append(self, gate: Gate) -> Circuit:
        self._check(gate.qubits, f"{gate.kind.value}{gate.qubits}")
        self.gates.append(gate)
        return self

    def extend(self, gates: Iterable[Gate]) -> Circuit:
        for gate in gates:
            self.append(gate)
        return self

    def compose(self, other: Circuit) -> Circuit:
        """Append all gates of ``other`` (which must fit in this circuit)."""
        if other.num_qubits > self.num_qubits:
            raise CircuitError("cannot compose a wider circuit into a narrower one")
        self.gates.extend(other.gates)
        return self

    def add_register(self, reg: Register) -> Circuit:
        self._check(reg.qubits, f"register {reg.name!r}")
        aliased = set(self.metadata.get("aliases", ()))
        if reg.name not in aliased:
            used = {q for r in self.registers if r.name not in aliased for q in r.qubits}
            if used.intersection(reg.qubits):
                raise CircuitError(f"register {reg.name!r} overlaps an existing register")
        if any(r.name == reg.name for r in self.registers):
            raise CircuitError(f"duplicate register name {reg.name!r}")
        self.registers.append(reg)
        return self

    def register(self, name: str) -> Register:
        for reg in self.registers:
            if reg.name == name:
                return reg
        raise KeyError(name)

    def inverse(self) -> Circuit:
        return invert(self)

    def __len__(self) -> int:
        return len(self.gates)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Circuit):
            return NotImplemented
        return (
            self.num_qubits == other.num_qubits
            and self.gates == other.gates
            and self.registers == other.registers
            and self.metadata == other.metadata
        )


def append(circuit: Circuit, gate: Gate) -> Circuit:
    return circuit.append(gate)


def invert(circuit: Circuit) -> Circuit:
    """Reverse the gate order and replace each gate by its inverse."""
    return Circuit(
        circuit.num_qubits,
        [g.inverse() for g in reversed(circuit.gates)],
        list(circuit.registers),
        dict(circuit.metadata),
    )


@dataclass(frozen=True)
class CircuitStats:
    logical_counts: dict[GateKind, int]
    expanded_count: int
    num_qubits: int
    num_ancilla: int

    @property
    def total_logical(self) -> int:
        return sum(self.logical_counts.values())

    def to_dict(self) -> dict[str, Any]:
        return {
            "logical_counts": {k.value: v for k, v in self.logical_counts.items()},
            "expanded_count": self.expanded_count,
            "num_qubits": self.num_qubits,
            "num_ancilla": self.num_ancilla,
        }


def count_gates(gates: Iterable[Gate]) -> int:
    return sum(g.kind._weight for g in gates)


def count(circuit: Circuit) -> CircuitStats:
    tally = Counter(g.kind for g in circuit.gates)
    logical = {kind: tally.get(kind, 0) for kind in GateKind}
    ancilla = sum(r.width for r in circuit.registers if r.name.startswith("ancilla"))
    return CircuitStats(
        logical_counts=logical,
        expanded_count=sum(kind.weight * n for kind, n in logical.items()),
        num_qubits=circuit.num_qubits,
        num_ancilla=ancilla,
    )


class TwoQubitOp(NamedTuple):
    """Controlled two-qubit unitary: ``name`` is CNOT, CV or CV_DG."""

    name: str
    control: int
    target: int


# local qubits: 0, 1 = controls (a, b), 2 = target c
_TEMPLATES = {
    GateKind.TOFFOLI: (
        TwoQubitOp("CV", 1, 2),
        TwoQubitOp("CNOT", 0, 1),
        TwoQubitOp("CV_DG", 1, 2),
        TwoQubitOp("CNOT", 0, 1),
        TwoQubitOp("CV", 0, 2),
    ),
    GateKind.PERES: (
        TwoQubitOp("CV", 0, 2),
        TwoQubitOp("CV", 1, 2),
        TwoQubitOp("CNOT", 0, 1),
        TwoQubitOp("CV_DG", 1, 2),
    ),
    GateKind.PERES_DG: (
        TwoQubitOp("CV", 1, 2),
        TwoQubitOp("CNOT", 0, 1),
        TwoQubitOp("CV_DG", 1, 2),
        TwoQubitOp("CV_DG", 0, 2),
    ),
}


def expand_three_qubit_template(kind: GateKind) -> list[TwoQubitOp]:
    """Controlled-V network realising a three-qubit gate on local qubits 0, 1, 2."""
    try:
        return list(_TEMPLATES[kind])
    except KeyError:
        raise CircuitError(f"no controlled-V template for {kind.value}") from None


def to_dict(circuit: Circuit) -> dict[str, Any]:
    return {
        "version": FORMAT_VERSION,
        "num_qubits": circuit.num_qubits,
        "registers": [{"name": r.name, "qubits": list(r.qubits)} for r in circuit.registers],
        "gates": [{"kind": g.kind.value, "qubits": list(g.qubits)} for g in circuit.gates],
        "metadata": circuit.metadata,
    }


def from_dict(doc: Any) -> Circuit:
    if not isinstance(doc, dict):
        raise CircuitError("circuit document must be a JSON object")
    for key in ("version", "num_qubits", "gates"):
        if key not in doc:
            raise CircuitError(f"circuit document missing {key!r}")
    if doc["version"] != FORMAT_VERSION:
        raise CircuitError(f"unsupported circuit format version {doc['version']!r}")
    num_qubits = doc["num_qubits"]
    if not isinstance(num_qubits, int) or isinstance(num_qubits, bool):
        raise CircuitError("num_qubits must be an integer")
    gates = []
    for entry in doc["gates"]:
        try:
            kind = GateKind(entry["kind"])
        except (KeyError, TypeError, ValueError):
            raise CircuitError(f"bad gate entry {entry!r}") from None
        gates.append(Gate(kind, tuple(entry.get("qubits", ()))))
    metadata = doc.get("metadata", {})
    if not isinstance(metadata, dict):
        raise CircuitError("metadata must be an object")
    circuit = Circuit(num_qubits, metadata=metadata)
    circuit.extend(gates)
    for entry in doc.get("registers", []):
        circuit.add_register(Register(entry["name"], tuple(entry["qubits"])))
    return circuit


def serialize(circuit: Circuit) -> bytes:
    return json.dumps(to_dict(circuit), sort_keys=True, separators=(",", ":")).encode()


def deserialize(data: bytes | str) -> Circuit:
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise CircuitError(f"malformed circuit document: {exc}") from None
    return from_dict(doc)
