"""Plain-integer reference for the compiled circuits, plus a float DFT.

The fixed-point routines repeat the compiler's schedule step for step
(same stage order, digit lists and sign handling) using Python integers,
so a simulated circuit must agree with them word for word.  Range
violations are recorded as overflow flags rather than raised.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence

from .arith import Sign
from .compiler import Branch, RotationPlan, plan_rotation


@dataclass(frozen=True)
class FixedComplex:
    re: int
    im: int

    def to_complex(self, frac_bits: int) -> complex:
        scale = 1 << frac_bits
        return complex(self.re / scale, self.im / scale)


@dataclass
class Flags:
    """Overflow events collected while running the reference."""

    w: int
    events: list[str] = field(default_factory=list)

    @property
    def overflow(self) -> bool:
        return bool(self.events)

    def fit(self, value: int, what: str) -> int:
        lo, hi = -(1 << (self.w - 1)), (1 << (self.w - 1)) - 1
        if not lo <= value <= hi:
            self.events.append(f"{what}: {value} outside [{lo}, {hi}]")
            value &= (1 << self.w) - 1
            if value > hi:
                value -= 1 << self.w
        return value


def _term(source: int, p: int) -> int:
    return source >> p if p >= 0 else source << -p


def oracle_shear(target: int, source: int, digits: Sequence[tuple[int, Sign]], flags: Flags) -> int:
    """target + sum(sign * floor(source / 2^p)), adding digits before subtracting."""
    for p, s in digits:
        if Sign(s) is Sign.ADD:
            target = flags.fit(target + _term(source, p), "shear add")
    for p, s in digits:
        if Sign(s) is Sign.SUB:
            target = flags.fit(target - _term(source, p), "shear sub")
    return target


def oracle_unshear(target: int, source: int, digits: Sequence[tuple[int, Sign]], flags: Flags) -> int:
    total = sum(Sign(s).value * _term(source, p) for p, s in digits)
    return flags.fit(target - total, "inverse shear")


def _negated_digits(digits):
    return [(p, Sign(-Sign(s).value)) for p, s in digits]


def _shear_digits(plan: RotationPlan):
    inner = plan.inner_digits if plan.branch is Branch.UP else _negated_digits(plan.inner_digits)
    return plan.outer_digits, inner


def oracle_shears(plan: RotationPlan, re: int, im: int, flags: Flags) -> tuple[int, int]:
    if plan.branch is Branch.IDENTITY:
        return re, im
    outer, inner = _shear_digits(plan)
    re = oracle_shear(re, im, outer, flags)
    im = oracle_shear(im, re, inner, flags)
    re = oracle_shear(re, im, outer, flags)
    return re, im


def oracle_unshears(plan: RotationPlan, re: int, im: int, flags: Flags) -> tuple[int, int]:
    if plan.branch is Branch.IDENTITY:
        return re, im
    outer, inner = _shear_digits(plan)
    re = oracle_unshear(re, im, outer, flags)
    im = oracle_unshear(im, re, inner, flags)
    re = oracle_unshear(re, im, outer, flags)
    return re, im


def oracle_negate(x: int, flags: Flags) -> int:
    return flags.fit(-x, "negate")


def oracle_rotation(plan: RotationPlan, re: int, im: int, flags: Flags) -> tuple[int, int]:
    """Stand-alone rotation: shears, then both words negated on the DOWN branch."""
    re, im = oracle_shears(plan, re, im, flags)
    if plan.branch is Branch.DOWN:
        re, im = oracle_negate(re, flags), oracle_negate(im, flags)
    return re, im


def _double(b: int, flags: Flags) -> int:
    half = 1 << (flags.w - 2)
    if not -half <= b < half:
        flags.events.append(f"left shift: {b} has no spare sign bit")
    return flags.fit(2 * b, "left shift")


def oracle_sum_diff(a: int, b: int, flags: Flags, negated: bool = False) -> tuple[int, int]:
    if negated:
        a = flags.fit(a - b, "sum/diff sub")
        b = _double(b, flags)
        return a, flags.fit(a + b, "sum/diff add")
    a = flags.fit(a + b, "sum/diff add")
    b = _double(b, flags)
    return a, flags.fit(a - b, "sum/diff sub")


def oracle_sum_diff_inverse(a: int, b: int, flags: Flags, negated: bool = False) -> tuple[int, int, int]:
    """Inverse of :func:`oracle_sum_diff` that floors odd halvings.

    Returns (a, b, lost_bit).
    """
    if negated:
        b = flags.fit(b - a, "inverse add")
        lost = b & 1
        b >>= 1
        return flags.fit(a + b, "inverse sub"), b, lost
    b = flags.fit(a - b, "inverse sub")
    lost = b & 1
    b >>= 1
    return flags.fit(a - b, "inverse add"), b, lost


def _stages(N: int):
    n = N.bit_length() - 1
    for t in range(1, n + 1):
        size = 1 << t
        half = size // 2
        for start in range(0, N, size):
            for j in range(half):
                yield start + j, start + j + half, j * (N // size)


def _bitrev(j: int, n: int) -> int:
    out = 0
    for _ in range(n):
        out = (out << 1) | (j & 1)
        j >>= 1
    return out


def _check_shape(N: int, m: int, A: int) -> int:
    if N < 2 or N & (N - 1):
        raise ValueError("N must be a power of two")
    if m < 1 or A < 1:
        raise ValueError("m and A must be positive")
    return N.bit_length() - 1


def oracle_fft_words(
    words: Sequence[tuple[int, int]], N: int, A: int, w: int, flags: Flags
) -> list[tuple[int, int]]:
    """Forward transform of slot-ordered words (input already bit-reversed)."""
    slots = [list(p) for p in words]
    plans: dict[int, RotationPlan] = {}
    for top, bot, k in _stages(N):
        plan = plans.setdefault(k, plan_rotation(k, N, A))
        neg = plan.branch is Branch.DOWN
        br, bi = oracle_shears(plan, slots[bot][0], slots[bot][1], flags)
        ar, br = oracle_sum_diff(slots[top][0], br, flags, neg)
        ai, bi = oracle_sum_diff(slots[top][1], bi, flags, neg)
        slots[top], slots[bot] = [ar, ai], [br, bi]
    return [tuple(s) for s in slots]


def oracle_ifft_words(
    words: Sequence[tuple[int, int]], N: int, A: int, w: int, flags: Flags
) -> tuple[list[tuple[int, int]], list[int]]:
    """Undo :func:`oracle_fft_words` stage by stage, flooring odd halvings.

    Returns slot-ordered words and the lost low bits in butterfly order
    (real part first).
    """
    slots = [list(p) for p in words]
    order = list(_stages(N))
    lost = [0] * (2 * len(order))
    for i in range(len(order) - 1, -1, -1):
        top, bot, k = order[i]
        plan = plan_rotation(k, N, A)
        neg = plan.branch is Branch.DOWN
        ai, bi, lost[2 * i + 1] = oracle_sum_diff_inverse(slots[top][1], slots[bot][1], flags, neg)
        ar, br, lost[2 * i] = oracle_sum_diff_inverse(slots[top][0], slots[bot][0], flags, neg)
        br, bi = oracle_unshears(plan, br, bi, flags)
        slots[top], slots[bot] = [ar, ai], [br, bi]
    return [tuple(s) for s in slots], lost


def _load(data: Sequence[int], N: int, m: int, A: int) -> list[tuple[int, int]]:
    n = _check_shape(N, m, A)
    if len(data) != N:
        raise ValueError(f"expected {N} samples")
    slots = [(0, 0)] * N
    for j, x in enumerate(data):
        if not 0 <= x < (1 << m):
            raise ValueError(f"sample {x} outside the {m}-bit range")
        slots[_bitrev(j, n)] = (int(x) << A, 0)
    return slots


def oracle_qfft(data: Sequence[int], N: int, m: int, A: int) -> tuple[list[FixedComplex], Flags]:
    """Spectrum words X_0..X_{N-1} (scaled by 2^A) and the overflow record."""
    n = _check_shape(N, m, A)
    w = m + n + A + 1
    flags = Flags(w)
    out = oracle_fft_words(_load(data, N, m, A), N, A, w, flags)
    return [FixedComplex(r, i) for r, i in out], flags


def oracle_filter(data: Sequence[int], N: int, m: int, A: int, cutoff: int):
    """Low- and high-pass words (signal order) for the two-bank filter circuit."""
    n = _check_shape(N, m, A)
    w = m + n + A + 1
    flags = Flags(w)
    spectrum = oracle_fft_words(_load(data, N, m, A), N, A, w, flags)
    low = [spectrum[k] if k < cutoff else (0, 0) for k in range(N)]
    high = [(0, 0) if k < cutoff else spectrum[k] for k in range(N)]
    low_s, low_lost = oracle_ifft_words(low, N, A, w, flags)
    high_s, high_lost = oracle_ifft_words(high, N, A, w, flags)
    rev = [_bitrev(j, n) for j in range(N)]
    return (
        [FixedComplex(*low_s[rev[j]]) for j in range(N)],
        [FixedComplex(*high_s[rev[j]]) for j in range(N)],
        (low_lost, high_lost),
        flags,
    )


def float_dft(data: Sequence[complex]) -> list[complex]:
    """X_k = sum_j exp(-2 pi i jk / N) x_j by direct summation."""
    N = len(data)
    return [
        sum(complex(x) * cmath.exp(-2j * math.pi * j * k / N) for j, x in enumerate(data))
        for k in range(N)
    ]


def float_idft(spectrum: Sequence[complex]) -> list[complex]:
    N = len(spectrum)
    return [
        sum(complex(X) * cmath.exp(2j * math.pi * j * k / N) for k, X in enumerate(spectrum)) / N
        for j in range(N)
    ]


@dataclass(frozen=True)
class ErrorMetrics:
    l_inf: float
    l2: float
    rel_l_inf: float


def error_metrics(fixed: Sequence[complex], reference: Sequence[complex]) -> ErrorMetrics:
    if not fixed or len(fixed) != len(reference):
        raise ValueError("need two non-empty sequences of equal length")
    diffs = [abs(complex(a) - complex(b)) for a, b in zip(fixed, reference)]
    l_inf = max(diffs)
    scale = max(abs(complex(b)) for b in reference)
    return ErrorMetrics(
        l_inf=l_inf,
        l2=math.sqrt(sum(d * d for d in diffs)),
        rel_l_inf=l_inf / scale if scale else (0.0 if l_inf == 0 else math.inf),
    )
