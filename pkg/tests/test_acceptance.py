"""Acceptance criteria 1-12.

Each criterion is a function returning (ok, detail).  Under pytest every one
prints a ``criterion N: PASS|FAIL`` line (even with output capture on) and
asserts; ``python tests/test_acceptance.py`` prints the same lines alone.
Wall-clock limits are part of each criterion.
"""
import math
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from revqfft.arith import (  # noqa: E402
    Direction, Sign, Variant, build_adder, build_negate, build_shift, build_shift_add,
    build_subtractor, fill_decoded,
)
from revqfft.circuit import GateKind, Register, count, count_gates, expand_three_qubit_template  # noqa: E402
from revqfft.compiler import (  # noqa: E402
    Slot, build_filter, build_iqfft, build_qfft, butterfly_gates, gate_bound, plan_rotation,
    sum_diff_gates,
)
from revqfft.oracle import error_metrics, float_dft, oracle_qfft  # noqa: E402
from revqfft.simulator import (  # noqa: E402
    SparseState, decode, decode_batch, encode, encode_batch, permutation_matrix, read_words, run,
    run_basis, run_batch, small_unitary,
)

from helpers import other_qubits, run_words, signed_range, wrap  # noqa: E402

SEED = 20240601


def criterion_1():
    bad = [w for w in range(4, 17) if count(build_adder(range(w), range(w, 2 * w))).expanded_count != 13 * w - 14]
    return not bad, f"adder 13w-14 exact for w=4..16; mismatches at {bad}"


def criterion_2():
    bad = []
    for w in range(4, 17):
        a, b = range(w), range(w, 2 * w)
        for v in Variant:
            if count(build_subtractor(a, b, v)).expanded_count > 16 * w - 14:
                bad.append(("sub", v.value, w))
        for d in Direction:
            if count(build_shift(a, 1, d)).expanded_count != 3 * w - 5:
                bad.append(("shift", d.value, w))
    return not bad, f"subtractors <= 16w-14, unit shift = 3w-5 for w=4..16; failures {bad}"


def _free_slots(w, A):
    regs = [Register(f"r{j}", tuple(range(j * w, (j + 1) * w))) for j in range(4)]
    pool = Register("ancilla", tuple(range(4 * w, 4 * w + A)))
    return Slot(regs[0], regs[1]), Slot(regs[2], regs[3]), pool


def criterion_3():
    worst, bad = 0.0, []
    for w in range(6, 17):
        sd = count_gates(sum_diff_gates(range(w), range(w, 2 * w)))
        if sd > 32 * w - 33:
            bad.append(("sum/diff", w, sd))
        for A in (4, 8, 12):
            a, b, pool = _free_slots(w, A)
            bound = 32 * w - 33 + A * (45 * w - 42)
            # the 16-point twiddles include every 2-, 4- and 8-point one
            for N in (16,):
                for k in range(N // 2):
                    n = count_gates(butterfly_gates(a, b, plan_rotation(k, N, A), pool))
                    worst = max(worst, n / bound)
                    if n > bound:
                        bad.append(("butterfly", w, A, N, k, n, bound))
    return not bad, f"w=6..16, A in {{4,8,12}}, all 16-point twiddles; worst count/bound {worst:.3f}; failures {bad[:3]}"


def criterion_4():
    rows, ok = [], True
    for N in (2, 4, 8):
        for m, A in ((2, 6), (4, 10)):
            c, layout = build_qfft(N, m, A)
            total, bound = count(c).expanded_count, gate_bound(N, layout.w, A)
            flies = c.metadata["butterflies"]
            ok &= total <= bound and flies == N // 2 * int(math.log2(N))
            rows.append(f"N={N},m={m},A={A}:{total}/{bound},bf={flies}")
    return ok, "; ".join(rows)


def _truth_tables(w):
    a, b = np.meshgrid(signed_range(w), signed_range(w), indexing="ij")
    return a.ravel(), b.ravel()


def _check_pair(circuit, w, a, b, want_b, want_a=None):
    ra_, rb_ = range(w), range(w, 2 * w)
    (ra, rb), out = run_words(circuit, [ra_, rb_], [a, b])
    clean = not out[other_qubits(circuit, ra_, rb_)].any()
    return clean and np.array_equal(ra, a if want_a is None else want_a) and np.array_equal(rb, wrap(want_b, w))


def criterion_5():
    rng = np.random.default_rng(SEED)
    failures = []

    def check(name, ok):
        if not ok:
            failures.append(name)

    for w, a, b in [(4, *_truth_tables(4))] + [
        (w, rng.integers(-(1 << (w - 1)), 1 << (w - 1), 1000), rng.integers(-(1 << (w - 1)), 1 << (w - 1), 1000))
        for w in (8, 12)
    ]:
        ra_, rb_ = range(w), range(w, 2 * w)
        check(f"adder w={w}", _check_pair(build_adder(ra_, rb_), w, a, b, a + b))
        check(f"a-b w={w}", _check_pair(build_subtractor(ra_, rb_, Variant.A_MINUS_B), w, a, b, a - b))
        check(f"b-a w={w}", _check_pair(build_subtractor(ra_, rb_, Variant.B_MINUS_A), w, a, b, b - a))
        # negate b, borrowing the a register (which must come back unchanged)
        check(f"negate w={w}", _check_pair(build_negate(rb_, ra_), w, a, b, -b))
        for p in range(1, w):
            reg = list(rb_)
            (x,), _ = run_words(build_shift(reg, p, Direction.RIGHT), [reg], [b], signed=False)
            check(f"right{p} w={w}", [fill_decoded(int(v), w, p) for v in x] == list(b >> p))
            small = b[(b >= -(1 << (w - 1 - p))) & (b < (1 << (w - 1 - p)))]
            (y,), _ = run_words(build_shift(reg, p, Direction.LEFT), [reg], [small])
            check(f"left{p} w={w}", np.array_equal(y, small << p))
        pmax = 3 if w == 4 else w - 1
        for p in range(pmax + 1):
            for s in Sign:
                c = build_shift_add(ra_, rb_, p, s)
                check(f"shift-add p={p} {s.name} w={w}", _check_pair(c, w, a, b, b + s.value * (a >> p)))
    a, b = _truth_tables(6)
    for p in range(4):
        for s in Sign:
            c = build_shift_add(range(6), range(6, 12), p, s)
            check(f"shift-add p={p} {s.name} w=6", _check_pair(c, 6, a, b, b + s.value * (a >> p)))
    return not failures, f"exhaustive w=4 (w=6 shift-add p<=3), 1000 random at w=8,12; failures {failures}"


def criterion_6():
    errs = {}
    for kind, size in ((GateKind.TOFFOLI, 5), (GateKind.PERES, 4)):
        ops = expand_three_qubit_template(kind)
        errs[kind.value] = (len(ops), float(np.abs(small_unitary(ops) - permutation_matrix(kind)).max()))
    ok = errs["TOFFOLI"][0] == 5 and errs["PERES"][0] == 4 and all(e < 1e-12 for _, e in errs.values())
    return ok, f"(gates, max error): {errs}"


def criterion_7():
    rng = np.random.default_rng(SEED)
    mismatches = overflows = dirty = cases = 0
    for N in (2, 4, 8):
        for m in (2, 4):
            for A in (6, 10):
                c, layout = build_qfft(N, m, A)
                data = rng.integers(0, 1 << m, size=(50, N))
                bits = run_batch(c, encode_batch(data, layout))
                dirty += int(read_words(bits, layout.ancilla.qubits, signed=False).any())
                words = decode_batch(bits, layout)
                for row, x in zip(words.tolist(), data.tolist()):
                    ref, flags = oracle_qfft(x, N, m, A)
                    cases += 1
                    overflows += flags.overflow
                    mismatches += [tuple(p) for p in row] != [(f.re, f.im) for f in ref]
    ok = mismatches == 0 and overflows == 0 and dirty == 0
    return ok, f"{cases} cases; mismatches {mismatches}, overflow flags {overflows}, dirty ancilla {dirty}"


def criterion_8():
    c, layout = build_qfft(4, 3, 6)
    got = decode(run_basis(c, encode([1, 2, 3, 4], layout)), layout)
    want = [10, -2 + 2j, -2, -2 - 2j]
    err = max(abs(g - w) for g, w in zip(got, want))
    return err == 0, f"decoded {got}, max error {err}"


def criterion_9():
    rng = np.random.default_rng(SEED)
    bad = 0
    for N in (2, 4, 8):
        fwd, layout = build_qfft(N, 4, 8)
        inv, _ = build_iqfft(N, 4, 8)
        states = rng.integers(0, 2, size=(fwd.num_qubits, 20), dtype=np.uint8)
        bad += int(np.any(run_batch(inv, run_batch(fwd, states)) != states, axis=0).sum())
    return bad == 0, f"60 random basis states over N=2,4,8; {bad} not restored"


def criterion_10():
    rng = np.random.default_rng(SEED)
    data = rng.integers(0, 16, size=(10, 8))
    refs = [float_dft(x) for x in data.tolist()]
    errs, rel = [], []
    for A in (4, 6, 8, 10, 12):
        c, layout = build_qfft(8, 4, A)
        words = decode_batch(run_batch(c, encode_batch(data, layout)), layout) / (1 << A)
        metrics = [error_metrics([complex(r, i) for r, i in row], ref) for row, ref in zip(words.tolist(), refs)]
        errs.append(max(e.l_inf for e in metrics))
        rel.append(max(e.rel_l_inf for e in metrics))
    monotone = all(b <= a for a, b in zip(errs, errs[1:]))
    ok = monotone and rel[-1] < 1e-2
    return ok, f"l_inf over A=4..12: {[f'{e:.4g}' for e in errs]}; rel l_inf at A=12 {rel[-1]:.2e}"


def criterion_11():
    c, layout = build_qfft(8, 3, 6)
    x, y = encode([1, 2, 3, 4, 5, 6, 7, 0], layout), encode([7, 7, 0, 1, 0, 3, 2, 2], layout)
    out = run(c, SparseState({x: 0.6, y: 0.8}, layout.num_qubits))
    want = {run_basis(c, x): 0.6, run_basis(c, y): 0.8}
    return out.terms == want, f"output amplitudes {sorted(abs(a) for a in out.terms.values())}"


def criterion_12():
    rng = np.random.default_rng(SEED)
    worst, ok = 0.0, True
    m, A = 4, 8
    for N in (4, 8):
        for cutoff in (1, N // 2):
            c, layout = build_filter(N, m, A, cutoff)
            data = rng.integers(0, 1 << m, size=(20, N))
            bits = run_batch(c, encode_batch(data, layout))
            low = decode_batch(bits, layout, order="signal", bank="data")
            high = decode_batch(bits, layout, order="signal", bank="aux")
            total = (low + high) / (1 << A)
            err = np.hypot(total[..., 0] - data, total[..., 1]).max(axis=1)
            tol = 2.0 ** (-A + 4) * N * np.maximum(data.max(axis=1), 1)
            ok &= bool(np.all(err <= tol))
            worst = max(worst, float((err / tol).max()))
    return ok, f"N=4,8, cutoff 1 and N/2, m={m}, A={A}; worst error/tolerance {worst:.3f}"


CRITERIA = [
    (1, criterion_1, 1.0),
    (2, criterion_2, 1.0),
    (3, criterion_3, 1.0),
    (4, criterion_4, 5.0),
    (5, criterion_5, 30.0),
    (6, criterion_6, 1.0),
    (7, criterion_7, 60.0),
    (8, criterion_8, 1.0),
    (9, criterion_9, 10.0),
    (10, criterion_10, None),
    (11, criterion_11, 5.0),
    (12, criterion_12, 10.0),
]


def evaluate(fn, limit):
    start = time.perf_counter()
    ok, detail = fn()
    elapsed = time.perf_counter() - start
    in_time = limit is None or elapsed < limit
    limit_text = "no limit" if limit is None else f"limit {limit:g}s"
    return ok and in_time, f"{detail} [{elapsed:.2f}s, {limit_text}]"


@pytest.mark.parametrize("number,fn,limit", CRITERIA, ids=[f"criterion_{n}" for n, _, _ in CRITERIA])
def test_criterion(number, fn, limit, capsys):
    ok, detail = evaluate(fn, limit)
    with capsys.disabled():
        print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for number, fn, limit in CRITERIA:
        ok, detail = evaluate(fn, limit)
        failed += not ok
        print(f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}")
    sys.exit(1 if failed else 0)
