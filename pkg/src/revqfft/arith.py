"""Garbage-free reversible arithmetic on two's-complement registers.

The ``*_gates`` functions emit gate lists over caller-supplied qubit indices
so the compiler can splice them together; the ``build_*`` functions wrap them
in a stand-alone :class:`~revqfft.circuit.Circuit`.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from enum import Enum
from typing import Sequence

from .circuit import CNOT, PERES, SWAP, TOFFOLI, X, Circuit, CircuitError, Gate, Register

Qubits = Sequence[int]


class Variant(Enum):
    A_MINUS_B = "a-b"
    B_MINUS_A = "b-a"


class Direction(Enum):
    LEFT = "left"
    RIGHT = "right"


class Sign(Enum):
    ADD = 1
    SUB = -1


@dataclass(frozen=True)
class FixedPointFormat:
    """``total_bits``-bit two's-complement word scaled by ``2**-frac_bits``."""

    total_bits: int
    frac_bits: int

    def __post_init__(self):
        if self.total_bits < 2:
            raise ValueError("a word needs at least 2 bits")
        if not 0 <= self.frac_bits < self.total_bits:
            raise ValueError("frac_bits must lie in [0, total_bits)")

    @property
    def min_int(self) -> int:
        return -(1 << (self.total_bits - 1))

    @property
    def max_int(self) -> int:
        return (1 << (self.total_bits - 1)) - 1

    def contains(self, word: int) -> bool:
        return self.min_int <= word <= self.max_int

    def wrap(self, word: int) -> int:
        """Reduce an integer to the signed range mod 2**total_bits."""
        w = self.total_bits
        word &= (1 << w) - 1
        return word - (1 << w) if word >> (w - 1) else word

    def to_float(self, word: int) -> float:
        return word / (1 << self.frac_bits)

    def from_int(self, value: int) -> int:
        return value << self.frac_bits


def wrap(word: int, w: int) -> int:
    word &= (1 << w) - 1
    return word - (1 << w) if word >> (w - 1) else word


def _check_disjoint(*regs: Qubits) -> None:
    seen: set[int] = set()
    for reg in regs:
        if seen.intersection(reg):
            raise CircuitError("registers overlap")
        seen.update(reg)


def _same_width(a: Qubits, b: Qubits) -> int:
    if len(a) != len(b):
        raise CircuitError(f"register widths differ ({len(a)} vs {len(b)})")
    w = len(a)
    if w < 2:
        raise CircuitError("arithmetic needs words of at least 2 bits")
    return w


def sign_extend_gates(src: Qubits, extra: Qubits) -> list[Gate]:
    _check_disjoint(src, extra)
    return [CNOT(src[-1], q) for q in extra]


def adder_gates(a: Qubits, b: Qubits) -> list[Gate]:
    """|a>|b> -> |a>|a+b mod 2^w> with no ancilla; cost 13w-14.

    Ripple-carry design: the carries run up through ``a`` (layers 1-3) and
    are uncomputed by Peres gates that also write the sum bits (layers 4-6).
    """
    return list(_adder(tuple(a), tuple(b)))


@lru_cache(maxsize=4096)
def _adder(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[Gate, ...]:
    w = _same_width(a, b)
    _check_disjoint(a, b)
    gates = [CNOT(a[i], b[i]) for i in range(1, w)]
    gates += [CNOT(a[i], a[i + 1]) for i in range(w - 2, 0, -1)]
    gates += [TOFFOLI(a[i], b[i], a[i + 1]) for i in range(w - 1)]
    gates.append(CNOT(a[w - 1], b[w - 1]))
    gates += [PERES(a[i], b[i], a[i + 1]) for i in range(w - 2, -1, -1)]
    gates += [CNOT(a[i], a[i + 1]) for i in range(1, w - 1)]
    gates += [CNOT(a[i], b[i]) for i in range(1, w)]
    return tuple(gates)


def subtractor_gates(a: Qubits, b: Qubits, variant: Variant) -> list[Gate]:
    """Target ``b`` receives ``a-b`` (A_MINUS_B) or ``b-a`` (B_MINUS_A).

    Uses ``~(~x + y) = x - y``: A_MINUS_B complements ``a`` around the adder
    and ``b`` afterwards (3w NOTs); B_MINUS_A complements ``b`` on both sides
    (2w NOTs).
    """
    add = adder_gates(a, b)
    if variant is Variant.A_MINUS_B:
        flip_a = [X(q) for q in a]
        return flip_a + add + flip_a + [X(q) for q in b]
    flip_b = [X(q) for q in b]
    return flip_b + add + flip_b


def negate_gates(b: Qubits, borrow: Qubits) -> list[Gate]:
    """|b>|g> -> |-b mod 2^w>|g> for any value g of the borrowed register.

    Computes b <- g - (b + g).  Negation is an odd permutation of the w
    qubits it acts on, so it cannot be built from X/CNOT/Toffoli gates on
    those qubits alone for w >= 4; the borrowed register is returned intact.
    """
    _same_width(b, borrow)
    return adder_gates(borrow, b) + subtractor_gates(borrow, b, Variant.A_MINUS_B)


def shift_gates(reg: Qubits, p: int, direction: Direction) -> list[Gate]:
    """In-place arithmetic shift by ``p`` (p unit shifts of 3w-5 each).

    LEFT doubles the word and requires its top p+1 bits to be sign fill.
    RIGHT is the exact inverse: the dropped low bits are XORed into the
    fill positions just below the sign, so the low w-1-p bits plus the sign
    bit read as floor(a / 2^p).  See :func:`fill_decoded`.
    """
    w = len(reg)
    if w < 2:
        raise CircuitError("shift needs at least 2 bits")
    if not 0 < p < w:
        raise CircuitError(f"shift amount must satisfy 0 < p < w (p={p}, w={w})")
    unit = [CNOT(reg[w - 1], reg[w - 2])]
    unit += [SWAP(reg[i], reg[i - 1]) for i in range(w - 2, 0, -1)]
    if direction is Direction.RIGHT:
        unit = [g.inverse() for g in reversed(unit)]
    return unit * p


def fill_decoded(word: int, w: int, p: int) -> int:
    """Signed value of a right-shifted word, ignoring its p polluted fill bits."""
    keep = w - 1 - p
    sign = (word >> (w - 1)) & 1
    low = word & ((1 << keep) - 1)
    return low - (1 << keep) if sign else low


def _shifted_operand(a: Qubits, p: int, ancilla: Qubits) -> list[int]:
    """Qubits reading as floor(a * 2^-p) (p > 0) or a * 2^|p| (p < 0)."""
    w = len(a)
    if p >= 0:
        return list(a[p:]) + list(ancilla[:p])
    q = -p
    return list(ancilla[:q]) + list(a[: w - q])


def mac_gates(
    a: Qubits,
    b: Qubits,
    digits: Sequence[tuple[int, Sign]],
    ancilla: Qubits = (),
) -> list[Gate]:
    """b <- b + sum(sign * floor(a * 2^-p)) over ``digits``; ``a`` read only.

    Positive p reads ``a`` through p sign copies held in ``ancilla``; negative
    p reads a left-shifted copy padded with zeroed ancillas.  The sign copies
    are made once for the whole chain, and all subtracting digits share one
    pair of complements of ``b``.  Every ancilla returns to |0>.
    """
    w = _same_width(a, b)
    _check_disjoint(a, b, ancilla)
    for p, _ in digits:
        if p <= -w:
            raise CircuitError(f"left shift {-p} out of range for width {w}")
    # floor(a / 2^p) is the same word for every p >= w - 1
    digits = [(min(int(p), w - 1), Sign(s)) for p, s in digits]
    right = max((p for p, _ in digits if p > 0), default=0)
    left = max((-p for p, _ in digits if p < 0), default=0)
    if right + left > len(ancilla):
        raise CircuitError(
            f"need {right + left} ancilla qubits, pool has {len(ancilla)}"
        )
    fill, pad = list(ancilla[:right]), list(ancilla[right : right + left])

    def operand(p: int) -> list[int]:
        return _shifted_operand(a, p, fill if p >= 0 else pad)

    copies = [CNOT(a[-1], q) for q in fill]
    gates = list(copies)
    for p, s in digits:
        if s is Sign.ADD:
            gates += adder_gates(operand(p), b)
    subs = [p for p, s in digits if s is Sign.SUB]
    if subs:
        flip = [X(q) for q in b]
        gates += flip
        for p in subs:
            gates += adder_gates(operand(p), b)
        gates += flip
    gates += copies
    return gates


def _registers_circuit(*regs: Register, extra: int = 0) -> Circuit:
    n = max((q for r in regs for q in r.qubits), default=-1) + 1
    return Circuit(n + extra, registers=list(regs))


def _as_register(name: str, reg) -> Register:
    return reg if isinstance(reg, Register) else Register(name, tuple(reg))


def _pool(circuit_regs: list[Register], size: int, name: str = "ancilla") -> Register | None:
    if size <= 0:
        return None
    start = max(q for r in circuit_regs for q in r.qubits) + 1
    return Register(name, tuple(range(start, start + size)))


def build_sign_extend(src, extra) -> Circuit:
    src, extra = _as_register("src", src), _as_register("extra", extra)
    c = _registers_circuit(src, extra)
    return c.extend(sign_extend_gates(src.qubits, extra.qubits))


def build_adder(a, b) -> Circuit:
    a, b = _as_register("a", a), _as_register("b", b)
    c = _registers_circuit(a, b)
    return c.extend(adder_gates(a.qubits, b.qubits))


def build_subtractor(a, b, variant: Variant = Variant.A_MINUS_B) -> Circuit:
    a, b = _as_register("a", a), _as_register("b", b)
    c = _registers_circuit(a, b)
    return c.extend(subtractor_gates(a.qubits, b.qubits, Variant(variant)))


def build_negate(b, borrow=None) -> Circuit:
    """Negation circuit; without ``borrow`` a w-qubit borrowed register is added."""
    b = _as_register("b", b)
    if borrow is None:
        borrow = _pool([b], b.width, "borrow")
    borrow = _as_register("borrow", borrow)
    c = _registers_circuit(b, borrow)
    return c.extend(negate_gates(b.qubits, borrow.qubits))


def build_shift(reg, p: int, direction: Direction) -> Circuit:
    reg = _as_register("reg", reg)
    c = _registers_circuit(reg)
    return c.extend(shift_gates(reg.qubits, p, Direction(direction)))


def build_const_mac(a, b, digits: Sequence[tuple[int, Sign]], ancilla=None) -> Circuit:
    """Chain of shift-adds with its own ancilla pool unless one is given."""
    a, b = _as_register("a", a), _as_register("b", b)
    need = max((p for p, _ in digits if p > 0), default=0) + max(
        (-p for p, _ in digits if p < 0), default=0
    )
    if ancilla is None:
        ancilla = _pool([a, b], need)
    regs = [a, b]
    if ancilla is not None:
        ancilla = _as_register("ancilla", ancilla)
        regs.append(ancilla)
    c = _registers_circuit(*regs)
    return c.extend(mac_gates(a.qubits, b.qubits, digits, ancilla.qubits if ancilla else ()))


def build_shift_add(a, b, p: int, sign: Sign = Sign.ADD, ancilla=None) -> Circuit:
    a = _as_register("a", a)
    if not 0 <= p < a.width:
        raise CircuitError(f"shift-add needs 0 <= p < w (p={p}, w={a.width})")
    return build_const_mac(a, b, [(p, Sign(sign))], ancilla)
