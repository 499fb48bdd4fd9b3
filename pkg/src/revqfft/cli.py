"""Command-line front end: build, stats, fft, verify, filter.

Exit codes: 0 success, 1 validation error, 2 verification mismatch or
bound failure, 3 I/O error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .circuit import CircuitError, X, count, deserialize, serialize
from .compiler import build_filter, build_iqfft, build_qfft, gate_bound, log2_exact
from .oracle import error_metrics, float_dft, oracle_qfft
from .simulator import (
    SimulationError,
    SparseState,
    bits_of,
    decode,
    decode_batch,
    encode,
    encode_batch,
    int_of,
    read_words,
    run,
    run_batch,
)

EXIT_OK, EXIT_INVALID, EXIT_MISMATCH, EXIT_IO = 0, 1, 2, 3
DEFAULT_SEED = 2024


class UsageError(Exception):
    """Bad configuration or data; maps to exit code 1."""


@dataclass(frozen=True)
class RunConfig:
    command: str
    N: int | None = None
    m: int | None = None
    A: int | None = None
    cutoff: int | None = None
    input_path: Path | None = None
    output_path: Path | None = None
    seed: int = DEFAULT_SEED
    superposition: bool = False
    cases: int = 50
    inject_fault: bool = False

    def shape(self) -> tuple[int, int, int]:
        for name, value in (("--n", self.N), ("--width", self.m), ("--accuracy", self.A)):
            if value is None:
                raise UsageError(f"{name} is required for {self.command}")
        try:
            log2_exact(self.N)
        except (CircuitError, ValueError) as exc:
            raise UsageError(str(exc)) from None
        if self.m < 1 or self.A < 1:
            raise UsageError("--width and --accuracy must be at least 1")
        return self.N, self.m, self.A


def _read_json(path: Path | None) -> Any:
    if path is None:
        raise UsageError("--in is required")
    try:
        text = path.read_text()
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from None


def _emit(doc: Any, path: Path | None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if path is None:
        sys.stdout.write(text)
        return
    try:
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from None


def _pairs(values: Sequence[complex]) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in values]


def cmd_build(cfg: RunConfig) -> int:
    N, m, A = cfg.shape()
    circuit, _ = build_qfft(N, m, A)
    blob = serialize(circuit)
    if cfg.output_path is None:
        sys.stdout.write(blob.decode() + "\n")
    else:
        try:
            cfg.output_path.write_bytes(blob)
        except OSError as exc:
            raise OSError(f"cannot write {cfg.output_path}: {exc.strerror}") from None
    print(
        f"built QFFT N={N} m={m} A={A}: {circuit.num_qubits} qubits, "
        f"{len(circuit)} gates, {circuit.metadata['butterflies']} butterflies",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_stats(cfg: RunConfig) -> int:
    if cfg.input_path is None:
        raise UsageError("--in is required")
    try:
        blob = cfg.input_path.read_bytes()
    except OSError as exc:
        raise OSError(f"cannot read {cfg.input_path}: {exc.strerror}") from None
    try:
        circuit = deserialize(blob)
    except CircuitError as exc:
        raise UsageError(str(exc)) from None
    stats = count(circuit)
    for kind, n in stats.logical_counts.items():
        print(f"{kind.value:<9}{n:>10}")
    print(f"{'expanded':<9}{stats.expanded_count:>10}")
    print(f"{'qubits':<9}{stats.num_qubits:>10}")
    print(f"{'ancilla':<9}{stats.num_ancilla:>10}")
    meta = circuit.metadata
    if not all(k in meta for k in ("N", "w", "A")):
        print("bound     n/a (no layout metadata)")
        return EXIT_OK
    bound = gate_bound(meta["N"], meta["w"], meta["A"])
    verdict = "PASS" if stats.expanded_count <= bound else "FAIL"
    print(f"{'bound':<9}{bound:>10}  {verdict}")
    return EXIT_OK if verdict == "PASS" else EXIT_MISMATCH


def _samples(doc: Any, key: str = "data") -> list[int]:
    values = doc.get(key) if isinstance(doc, dict) else None
    if not isinstance(values, list) or not all(
        isinstance(v, int) and not isinstance(v, bool) for v in values
    ):
        raise UsageError(f"{key!r} must be a list of integers")
    return values


def _shape_from(cfg: RunConfig, doc: dict, data: Sequence[int]) -> tuple[int, int, int]:
    N = cfg.N if cfg.N is not None else doc.get("N", len(data))
    m = cfg.m if cfg.m is not None else doc.get("m")
    cfg = RunConfig(cfg.command, N, m, cfg.A)
    N, m, A = cfg.shape()
    if len(data) != N:
        raise UsageError(f"expected {N} samples, got {len(data)}")
    bad = [x for x in data if not 0 <= x < (1 << m)]
    if bad:
        raise UsageError(f"sample {bad[0]} outside [0, {(1 << m) - 1}]")
    return N, m, A


def _spectrum_report(data: Sequence[int], spectrum: list[complex], N: int, m: int, A: int) -> dict:
    words, flags = oracle_qfft(data, N, m, A)
    reference = float_dft(data)
    metrics = error_metrics(spectrum, reference)
    return {
        "spectrum": _pairs(spectrum),
        "oracle_spectrum": _pairs([f.to_complex(A) for f in words]),
        "oracle_overflow": flags.overflow,
        "float_dft": _pairs(reference),
        "metrics": {"l_inf": metrics.l_inf, "l2": metrics.l2, "rel_l_inf": metrics.rel_l_inf},
    }


def cmd_fft(cfg: RunConfig) -> int:
    doc = _read_json(cfg.input_path)
    if not isinstance(doc, dict):
        raise UsageError("input must be a JSON object")
    if cfg.superposition or "terms" in doc:
        return _fft_superposition(cfg, doc)
    data = _samples(doc)
    N, m, A = _shape_from(cfg, doc, data)
    circuit, layout = build_qfft(N, m, A)
    out = run(circuit, SparseState.basis(encode(data, layout), layout.num_qubits))
    (state,) = out.terms
    report = {"N": N, "m": m, "A": A}
    report.update(_spectrum_report(data, decode(state, layout), N, m, A))
    _emit(report, cfg.output_path)
    return EXIT_OK


def _fft_superposition(cfg: RunConfig, doc: dict) -> int:
    terms = doc.get("terms")
    if not isinstance(terms, list) or not terms:
        raise UsageError("superposition input needs a non-empty 'terms' list")
    parsed = []
    for t in terms:
        if not isinstance(t, dict):
            raise UsageError("each term must be an object")
        amp = t.get("amplitude")
        if not (isinstance(amp, list) and len(amp) == 2):
            raise UsageError("amplitude must be [re, im]")
        parsed.append((complex(amp[0], amp[1]), _samples(t)))
    N, m, A = _shape_from(cfg, doc, parsed[0][1])
    for _, data in parsed[1:]:
        _shape_from(cfg, {"N": N, "m": m}, data)
    circuit, layout = build_qfft(N, m, A)
    labels = [encode(data, layout) for _, data in parsed]
    if len(set(labels)) != len(labels):
        raise UsageError("superposition terms must be distinct inputs")
    try:
        state = SparseState({k: a for k, (a, _) in zip(labels, parsed)}, layout.num_qubits)
    except SimulationError as exc:
        raise UsageError(str(exc)) from None
    out = run(circuit, state)
    image = {k: img for k, img in zip(labels, _images(circuit, labels))}
    report_terms = []
    for label, (_, data) in zip(labels, parsed):
        img = image[label]
        entry = {"amplitude": [out.terms[img].real, out.terms[img].imag], "data": data}
        entry.update(_spectrum_report(data, decode(img, layout), N, m, A))
        report_terms.append(entry)
    _emit({"N": N, "m": m, "A": A, "terms": report_terms}, cfg.output_path)
    return EXIT_OK


def _images(circuit, labels: Sequence[int]) -> list[int]:
    bits = np.array([bits_of(k, circuit.num_qubits) for k in labels], dtype=np.uint8).T
    return [int_of(col) for col in run_batch(circuit, bits).T.tolist()]


def cmd_filter(cfg: RunConfig) -> int:
    doc = _read_json(cfg.input_path)
    data = _samples(doc)
    N, m, A = _shape_from(cfg, doc, data)
    if cfg.cutoff is None or not 1 <= cfg.cutoff <= N - 1:
        raise UsageError(f"--cutoff must lie in [1, {N - 1}]")
    circuit, layout = build_filter(N, m, A, cfg.cutoff)
    (state,) = run(circuit, SparseState.basis(encode(data, layout), layout.num_qubits)).terms
    low = decode(state, layout, order="signal", bank="data")
    high = decode(state, layout, order="signal", bank="aux")
    total = [lo + hi for lo, hi in zip(low, high)]
    err = max(abs(t - x) for t, x in zip(total, data))
    tol = 2.0 ** (-A + 4) * N * max(max(data), 1)
    _emit(
        {
            "N": N,
            "m": m,
            "A": A,
            "cutoff": cfg.cutoff,
            "input": list(data),
            "low_pass": _pairs(low),
            "high_pass": _pairs(high),
            "sum": _pairs(total),
            "reconstruction_error": err,
            "tolerance": tol,
        },
        cfg.output_path,
    )
    return EXIT_OK


VERIFY_N = (2, 4, 8)
VERIFY_M = (2, 4)
VERIFY_A = (6, 10)
SWEEP_A = (4, 6, 8, 10, 12)


def _inject(circuit, layout) -> None:
    # one stray NOT half-way through, on a bit of the first real word
    circuit.gates.insert(len(circuit.gates) // 2, X(layout.slots[0].real[layout.A]))


def _check_oracle(cfg: RunConfig, rng: np.random.Generator) -> tuple[list[str], dict | None]:
    rows, failure = [], None
    for N in VERIFY_N:
        for m in VERIFY_M:
            for A in VERIFY_A:
                circuit, layout = build_qfft(N, m, A)
                if cfg.inject_fault:
                    _inject(circuit, layout)
                data = rng.integers(0, 1 << m, size=(cfg.cases, N))
                bits = run_batch(circuit, encode_batch(data, layout))
                words = decode_batch(bits, layout)
                dirty = read_words(bits, layout.ancilla.qubits, signed=False) if layout.ancilla else None
                bad = overflow = 0
                for i, x in enumerate(data.tolist()):
                    ref, flags = oracle_qfft(x, N, m, A)
                    overflow += flags.overflow
                    got = [tuple(p) for p in words[i].tolist()]
                    clean = dirty is None or dirty[i] == 0
                    if got != [(f.re, f.im) for f in ref] or not clean:
                        bad += 1
                        if failure is None:
                            failure = {
                                "check": "oracle", "N": N, "m": m, "A": A, "data": x,
                                "circuit": [list(p) for p in got],
                                "oracle": [[f.re, f.im] for f in ref],
                                "ancilla_clean": bool(clean),
                            }
                ok = bad == 0 and overflow == 0
                rows.append(
                    f"oracle    N={N:<2} m={m} A={A:<2} cases={cfg.cases:<4} "
                    f"mismatches={bad} overflow={overflow}  {'PASS' if ok else 'FAIL'}"
                )
                if overflow and failure is None:
                    failure = {"check": "overflow", "N": N, "m": m, "A": A}
    return rows, failure


def _check_roundtrip(cfg: RunConfig, rng: np.random.Generator) -> tuple[list[str], dict | None]:
    rows, failure = [], None
    m, A = 4, 8
    for N in VERIFY_N:
        fwd, layout = build_qfft(N, m, A)
        inv, _ = build_iqfft(N, m, A)
        if cfg.inject_fault:
            _inject(fwd, layout)
        bits = encode_batch(rng.integers(0, 1 << m, size=(20, N)), layout)
        back = run_batch(inv, run_batch(fwd, bits))
        bad = int(np.any(back != bits, axis=0).sum())
        rows.append(f"roundtrip N={N:<2} m={m} A={A:<2} cases=20   mismatches={bad}  {'PASS' if not bad else 'FAIL'}")
        if bad and failure is None:
            col = int(np.argmax(np.any(back != bits, axis=0)))
            failure = {"check": "roundtrip", "N": N, "m": m, "A": A,
                       "data": decode_batch(bits[:, [col]], layout, order="signal")[0, :, 0].tolist()}
    return rows, failure


def _check_bounds() -> tuple[list[str], dict | None]:
    rows, failure = [], None
    for N in VERIFY_N:
        for m in VERIFY_M:
            for A in VERIFY_A:
                circuit, layout = build_qfft(N, m, A)
                total = count(circuit).expanded_count
                bound = gate_bound(N, layout.w, A)
                flies = circuit.metadata["butterflies"]
                ok = total <= bound and flies == N * log2_exact(N) // 2
                rows.append(f"bound     N={N:<2} m={m} A={A:<2} gates={total:<7} bound={bound:<7} {'PASS' if ok else 'FAIL'}")
                if not ok and failure is None:
                    failure = {"check": "bound", "N": N, "m": m, "A": A, "gates": total, "bound": bound}
    return rows, failure


def _check_sweep(rng: np.random.Generator) -> tuple[list[str], dict | None]:
    N, m = 8, 4
    inputs = rng.integers(0, 1 << m, size=(10, N))
    references = [float_dft(x) for x in inputs.tolist()]
    errors, rel = [], []
    for A in SWEEP_A:
        circuit, layout = build_qfft(N, m, A)
        words = decode_batch(run_batch(circuit, encode_batch(inputs, layout)), layout) / (1 << A)
        metrics = [
            error_metrics([complex(r, i) for r, i in spectrum], ref)
            for spectrum, ref in zip(words.tolist(), references)
        ]
        errors.append(max(e.l_inf for e in metrics))
        rel.append(max(e.rel_l_inf for e in metrics))
    monotone = all(b <= a for a, b in zip(errors, errors[1:]))
    ok = monotone and rel[-1] < 1e-2
    rows = [f"accuracy  N={N} m={m} A={A:<2} l_inf={e:.6f} rel_l_inf={r:.2e}" for A, e, r in zip(SWEEP_A, errors, rel)]
    rows.append(f"accuracy  non-increasing={monotone} rel_l_inf(A=12)<1e-2={rel[-1] < 1e-2}  {'PASS' if ok else 'FAIL'}")
    failure = None if ok else {"check": "accuracy", "l_inf": errors, "rel_l_inf": rel}
    return rows, failure


def cmd_verify(cfg: RunConfig) -> int:
    if cfg.cases < 1:
        raise UsageError("--cases must be positive")
    rng = np.random.default_rng(cfg.seed)
    print(f"seed {cfg.seed}")
    start = time.perf_counter()
    failures = []
    for rows, failure in (
        _check_oracle(cfg, rng),
        _check_roundtrip(cfg, rng),
        _check_bounds(),
        _check_sweep(rng),
    ):
        for row in rows:
            print(row)
        if failure is not None:
            failures.append(failure)
    elapsed = time.perf_counter() - start
    print(f"elapsed {elapsed:.1f}s", file=sys.stderr)
    if failures:
        print("first failing case:")
        print(json.dumps(failures[0], sort_keys=True))
        print("verify FAIL")
        return EXIT_MISMATCH
    print("verify PASS")
    return EXIT_OK


COMMANDS = {
    "build": cmd_build,
    "stats": cmd_stats,
    "fft": cmd_fft,
    "verify": cmd_verify,
    "filter": cmd_filter,
}


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="revqfft",
        description="Garbage-free reversible FFT circuits on basis-encoded data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, shape: bool = True, io: bool = True):
        if shape:
            p.add_argument("--n", dest="N", type=int, help="transform size (power of two)")
            p.add_argument("--width", dest="m", type=int, help="input sample width m")
            p.add_argument("--accuracy", dest="A", type=int, help="fraction bits A")
        if io:
            p.add_argument("--in", dest="input_path", type=Path, help="input file")
            p.add_argument("--out", dest="output_path", type=Path, help="output file")
        return p

    common(sub.add_parser("build", help="compile a QFFT circuit to JSON"))
    common(sub.add_parser("stats", help="gate counts of a circuit file"), shape=False)
    common(sub.add_parser("fft", help="run a QFFT on data from --in")).add_argument(
        "--superposition", action="store_true", help="input lists amplitude-weighted terms"
    )
    common(sub.add_parser("filter", help="split data into low and high pass")).add_argument(
        "--cutoff", type=int, help="first frequency routed to the high-pass bank"
    )
    v = common(sub.add_parser("verify", help="seeded cross-check suite"), shape=False, io=False)
    v.add_argument("--seed", type=int, default=DEFAULT_SEED)
    v.add_argument("--cases", type=int, default=50, help="random inputs per configuration")
    v.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    fields = RunConfig.__dataclass_fields__
    return RunConfig(**{k: v for k, v in vars(ns).items() if k in fields})


def main(argv: Sequence[str] | None = None) -> int:
    parser = make_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INVALID
    cfg = config_from_args(ns)
    try:
        return COMMANDS[cfg.command](cfg)
    except (UsageError, CircuitError, SimulationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
