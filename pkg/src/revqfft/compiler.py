"""Twiddle rotations, butterflies and the full basis-encoded FFT network.

Each of the N complex slots holds a real and an imaginary word of
``w = m + n + A + 1`` bits with ``A`` fraction bits (n = log2 N): the input
needs m integer bits, every butterfly layer can double magnitudes, and one
bit is the sign.  A shared pool of ``A`` zeroed ancillas feeds the shifted
operands of every shift-add.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Sequence

from .arith import (
    Direction,
    FixedPointFormat,
    Sign,
    Variant,
    adder_gates,
    mac_gates,
    negate_gates,
    shift_gates,
    subtractor_gates,
)
from .circuit import SWAP, Circuit, CircuitError, Gate, Register, invert

Digit = tuple[int, Sign]


class Branch(Enum):
    IDENTITY = "identity"
    UP = "up"
    DOWN = "down"


def is_power_of_two(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


def log2_exact(N: int) -> int:
    if not is_power_of_two(N) or N < 2:
        raise CircuitError("N must be a power of two")
    return N.bit_length() - 1


def bit_reverse(j: int, bits: int) -> int:
    return int(format(j, f"0{bits}b")[::-1], 2) if bits else 0


@dataclass(frozen=True)
class Slot:
    real: Register
    imag: Register


@dataclass(frozen=True)
class RegisterLayout:
    """Qubit assignment for one or two banks of N complex slots."""

    N: int
    m: int
    A: int
    w: int
    slots: tuple[Slot, ...]
    ancilla: Register
    input_order: tuple[int, ...]
    aux_slots: tuple[Slot, ...] = ()
    spill: tuple[Register, ...] = ()

    @property
    def n(self) -> int:
        return log2_exact(self.N)

    @property
    def fmt(self) -> FixedPointFormat:
        return FixedPointFormat(self.w, self.A)

    @property
    def num_qubits(self) -> int:
        regs = self.registers()
        return max(q for r in regs for q in r.qubits) + 1

    def registers(self) -> list[Register]:
        regs = [r for s in self.slots for r in (s.real, s.imag)]
        regs.append(self.ancilla)
        regs += [r for s in self.aux_slots for r in (s.real, s.imag)]
        regs += list(self.spill)
        return regs

    def to_dict(self) -> dict[str, Any]:
        doc = {
            "N": self.N,
            "m": self.m,
            "A": self.A,
            "w": self.w,
            "slots": [{"real": list(s.real.qubits), "imag": list(s.imag.qubits)} for s in self.slots],
            "ancilla": list(self.ancilla.qubits),
            "input_order": list(self.input_order),
        }
        if self.aux_slots:
            doc["aux_slots"] = [
                {"real": list(s.real.qubits), "imag": list(s.imag.qubits)} for s in self.aux_slots
            ]
        if self.spill:
            doc["spill"] = [list(r.qubits) for r in self.spill]
        return doc

    @classmethod
    def from_dict(cls, doc: dict[str, Any]) -> RegisterLayout:
        def slots(key: str, prefix: str) -> tuple[Slot, ...]:
            return tuple(
                Slot(Register(f"{prefix}{j}.re", s["real"]), Register(f"{prefix}{j}.im", s["imag"]))
                for j, s in enumerate(doc.get(key, []))
            )

        return cls(
            N=doc["N"],
            m=doc["m"],
            A=doc["A"],
            w=doc["w"],
            slots=slots("slots", "x"),
            ancilla=Register("ancilla", doc["ancilla"]),
            input_order=tuple(doc["input_order"]),
            aux_slots=slots("aux_slots", "aux"),
            spill=tuple(Register(f"spill{i}", q) for i, q in enumerate(doc.get("spill", []))),
        )


def make_layout(N: int, m: int, A: int, aux: bool = False) -> RegisterLayout:
    n = log2_exact(N)
    if m < 1 or A < 1:
        raise CircuitError("m and A must be positive")
    w = m + n + A + 1
    nxt = 0

    def take(name: str, size: int) -> Register:
        nonlocal nxt
        reg = Register(name, tuple(range(nxt, nxt + size)))
        nxt += size
        return reg

    slots = tuple(Slot(take(f"x{j}.re", w), take(f"x{j}.im", w)) for j in range(N))
    ancilla = take("ancilla", A)
    aux_slots: tuple[Slot, ...] = ()
    spill: tuple[Register, ...] = ()
    if aux:
        aux_slots = tuple(Slot(take(f"aux{j}.re", w), take(f"aux{j}.im", w)) for j in range(N))
        per_bank = 2 * (N // 2) * n
        spill = (take("spill.data", per_bank), take("spill.aux", per_bank))
    return RegisterLayout(
        N=N,
        m=m,
        A=A,
        w=w,
        slots=slots,
        ancilla=ancilla,
        input_order=tuple(bit_reverse(j, n) for j in range(N)),
        aux_slots=aux_slots,
        spill=spill,
    )


def quantize(c: float, A: int) -> tuple[int, list[Digit]]:
    """Round |c| * 2^A to nearest (ties toward zero) and expand it in binary.

    Returns the signed integer and digits ``(p, sign)`` with p increasing,
    one per set bit of weight 2^-p.
    """
    x = abs(c) * (1 << A)
    q = math.floor(x)
    if x - q > 0.5:
        q += 1
    sign = Sign.SUB if c < 0 else Sign.ADD
    digits = [(A - j, sign) for j in range(q.bit_length() - 1, -1, -1) if (q >> j) & 1]
    return (-q if c < 0 else q), digits


@dataclass(frozen=True)
class RotationPlan:
    """Lifting-scheme factorisation of multiplication by W_N^k = exp(-2*pi*i*k/N).

    UP:   a_r += t*a_i; a_i += s*a_r; a_r += t*a_i   with t = (cos-1)/sin
    DOWN: [[-1, u], [0, 1]] [[1, 0], [s, -1]] [[1, u], [0, 1]] with
          u = (cos+1)/sin, realised as a_r += u*a_i; a_i -= s*a_r;
          a_r += u*a_i followed by negating both words
    ``outer`` quantises t (or u), ``inner`` quantises s = sin(theta).
    """

    k: int
    N: int
    A: int
    branch: Branch
    theta: float
    coefficients: dict[str, float] = field(default_factory=dict)
    quantized: dict[str, int] = field(default_factory=dict)
    outer_digits: tuple[Digit, ...] = ()
    inner_digits: tuple[Digit, ...] = ()


def plan_rotation(k: int, N: int, A: int) -> RotationPlan:
    if not 0 <= k < N // 2:
        raise CircuitError(f"twiddle index k={k} outside [0, {N // 2})")
    if A < 1:
        raise CircuitError("A must be positive")
    theta = -2 * math.pi * k / N
    if k == 0:
        return RotationPlan(k, N, A, Branch.IDENTITY, theta)
    cos, sin = math.cos(theta), math.sin(theta)
    if 4 * k <= N:
        branch, name, outer = Branch.UP, "t", (cos - 1) / sin
    else:
        branch, name, outer = Branch.DOWN, "u", (cos + 1) / sin
    q_outer, d_outer = quantize(outer, A)
    q_inner, d_inner = quantize(sin, A)
    return RotationPlan(
        k,
        N,
        A,
        branch,
        theta,
        coefficients={name: outer, "s": sin},
        quantized={name: q_outer, "s": q_inner},
        outer_digits=tuple(d_outer),
        inner_digits=tuple(d_inner),
    )


def _flip(digits: Sequence[Digit]) -> list[Digit]:
    return [(p, Sign.SUB if s is Sign.ADD else Sign.ADD) for p, s in digits]


def shear_gates(real: Register, imag: Register, plan: RotationPlan, ancilla: Register) -> list[Gate]:
    """The three shift-add shears of a plan, applied right to left.

    UP shears rotate by theta.  DOWN's two -1 diagonal entries commute out
    of the product, leaving shears (u, -s, u) that rotate by theta + pi,
    i.e. they compute -W_N^k * a; the caller owns that sign.
    """
    if plan.A > ancilla.width:
        raise CircuitError("ancilla pool smaller than the plan's accuracy")
    if plan.branch is Branch.IDENTITY:
        return []
    re, im, anc = real.qubits, imag.qubits, ancilla.qubits
    outer = plan.outer_digits
    inner = plan.inner_digits if plan.branch is Branch.UP else _flip(plan.inner_digits)
    return (
        mac_gates(im, re, outer, anc)
        + mac_gates(re, im, inner, anc)
        + mac_gates(im, re, outer, anc)
    )


def rotation_gates(real: Register, imag: Register, plan: RotationPlan, ancilla: Register) -> list[Gate]:
    """Multiply the complex word (real, imag) by W_N^k in place."""
    gates = shear_gates(real, imag, plan, ancilla)
    if plan.branch is Branch.DOWN:
        gates += negate_gates(real.qubits, imag.qubits)
        gates += negate_gates(imag.qubits, real.qubits)
    return gates


def build_rotation(real: Register, imag: Register, plan: RotationPlan, layout: RegisterLayout) -> Circuit:
    if plan.A != layout.A:
        raise CircuitError("plan accuracy does not match layout")
    c = Circuit(layout.num_qubits, registers=layout.registers())
    return c.extend(rotation_gates(real, imag, plan, layout.ancilla))


def sum_diff_gates(
    a: Sequence[int], b: Sequence[int], spill: int | None = None, negated: bool = False
) -> list[Gate]:
    """(a, b) -> (a+b, a-b): a += b; b <<= 1; b <- a - b.

    ``negated`` gives (a-b, a+b) instead: a -= b; b <<= 1; b += a.  With
    ``spill`` the low bit of the doubled word is swapped with a zeroed
    qubit, a no-op here that lets the inverse circuit park the bit its
    halving would otherwise lose.
    """
    if negated:
        gates = subtractor_gates(b, a, Variant.B_MINUS_A)
    else:
        gates = adder_gates(b, a)
    gates += shift_gates(b, 1, Direction.LEFT)
    if spill is not None:
        gates.append(SWAP(b[0], spill))
    if negated:
        return gates + adder_gates(a, b)
    return gates + subtractor_gates(a, b, Variant.A_MINUS_B)


def build_butterfly_sum_diff(a_slot: Slot, b_slot: Slot, layout: RegisterLayout) -> Circuit:
    c = Circuit(layout.num_qubits, registers=layout.registers())
    c.extend(sum_diff_gates(a_slot.real.qubits, b_slot.real.qubits))
    return c.extend(sum_diff_gates(a_slot.imag.qubits, b_slot.imag.qubits))


def butterfly_gates(
    a_slot: Slot,
    b_slot: Slot,
    plan: RotationPlan,
    ancilla: Register,
    spill: Sequence[int] | None = None,
) -> list[Gate]:
    """Rotate ``b_slot`` by W_N^k, then (a, b) -> (a + Wb, a - Wb).

    DOWN shears leave -Wb in ``b_slot``; the sum/diff swaps its roles to
    absorb the sign instead of negating both words.
    """
    s_re, s_im = (spill[0], spill[1]) if spill is not None else (None, None)
    neg = plan.branch is Branch.DOWN
    gates = shear_gates(b_slot.real, b_slot.imag, plan, ancilla)
    gates += sum_diff_gates(a_slot.real.qubits, b_slot.real.qubits, s_re, neg)
    gates += sum_diff_gates(a_slot.imag.qubits, b_slot.imag.qubits, s_im, neg)
    return gates


def build_butterfly(a_slot: Slot, b_slot: Slot, k: int, N: int, layout: RegisterLayout) -> Circuit:
    plan = plan_rotation(k, N, layout.A)
    c = Circuit(layout.num_qubits, registers=layout.registers())
    return c.extend(butterfly_gates(a_slot, b_slot, plan, layout.ancilla))


def schedule(N: int) -> list[tuple[int, int, int, int]]:
    """Radix-2 decimation-in-time butterflies as (stage, top, bottom, k).

    Slots hold the input in bit-reversed order; after the last stage slot j
    holds X_j.
    """
    n = log2_exact(N)
    out = []
    for t in range(1, n + 1):
        size, half = 1 << t, 1 << (t - 1)
        for start in range(0, N, size):
            for j in range(half):
                out.append((t, start + j, start + j + half, j * (N // size)))
    return out


def qfft_gates(layout: RegisterLayout, slots: Sequence[Slot], spill: Register | None = None) -> list[Gate]:
    gates: list[Gate] = []
    plans: dict[int, RotationPlan] = {}
    for i, (_, top, bot, k) in enumerate(schedule(layout.N)):
        plan = plans.setdefault(k, plan_rotation(k, layout.N, layout.A))
        pair = None if spill is None else spill.qubits[2 * i : 2 * i + 2]
        gates += butterfly_gates(slots[top], slots[bot], plan, layout.ancilla, pair)
    return gates


def _metadata(kind: str, layout: RegisterLayout, **extra) -> dict[str, Any]:
    n = layout.n
    return {
        "kind": kind,
        "N": layout.N,
        "m": layout.m,
        "A": layout.A,
        "w": layout.w,
        "butterflies": (layout.N // 2) * n,
        "layout": layout.to_dict(),
        **extra,
    }


def build_qfft(N: int, m: int, A: int) -> tuple[Circuit, RegisterLayout]:
    layout = make_layout(N, m, A)
    c = Circuit(layout.num_qubits, registers=layout.registers(), metadata=_metadata("qfft", layout))
    c.extend(qfft_gates(layout, layout.slots))
    return c, layout


def build_iqfft(N: int, m: int, A: int) -> tuple[Circuit, RegisterLayout]:
    """Gate-exact inverse of :func:`build_qfft`: spectrum in slot order -> signal."""
    forward, layout = build_qfft(N, m, A)
    inverse = invert(forward)
    inverse.metadata = _metadata("iqfft", layout)
    return inverse, layout


def build_filter(N: int, m: int, A: int, cutoff: int) -> tuple[Circuit, RegisterLayout]:
    """Split a signal into low- and high-pass parts around frequency ``cutoff``.

    Forward transform on the data bank, swap spectrum slots cutoff..N-1 into
    the zeroed auxiliary bank, then run the inverse transform on each bank.
    The inverses halve arbitrary words, so each halving parks its lost bit
    in that bank's spill register.
    """
    if not 1 <= cutoff <= N:
        raise CircuitError(f"cutoff must lie in [1, {N}]")
    layout = make_layout(N, m, A, aux=True)
    c = Circuit(
        layout.num_qubits,
        registers=layout.registers(),
        metadata=_metadata("filter", layout, cutoff=cutoff),
    )
    c.extend(qfft_gates(layout, layout.slots))
    for k in range(cutoff, N):
        for src, dst in (
            (layout.slots[k].real, layout.aux_slots[k].real),
            (layout.slots[k].imag, layout.aux_slots[k].imag),
        ):
            c.extend(SWAP(p, q) for p, q in zip(src.qubits, dst.qubits))
    for bank, spill in ((layout.slots, layout.spill[0]), (layout.aux_slots, layout.spill[1])):
        c.extend(g.inverse() for g in reversed(qfft_gates(layout, bank, spill)))
    return c, layout


def gate_bound(N: int, w: int, A: int) -> int:
    """Upper bound on the expanded gate count of the whole transform."""
    return (32 * w - 33 + A * (45 * w - 42)) * (N // 2) * log2_exact(N)
