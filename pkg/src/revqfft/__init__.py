"""Garbage-free reversible circuits for the FFT on basis-encoded data."""
from .arith import FixedPointFormat, Sign, Variant, Direction
from .circuit import Circuit, CircuitError, Gate, GateKind, Register, count, deserialize, invert, serialize
from .compiler import RegisterLayout, build_filter, build_iqfft, build_qfft, gate_bound, make_layout, plan_rotation
from .oracle import error_metrics, float_dft, float_idft, oracle_qfft
from .simulator import SparseState, decode, encode, run, run_basis, run_batch

__version__ = "0.1.0"

__all__ = [
    "Circuit", "CircuitError", "Direction", "FixedPointFormat", "Gate", "GateKind",
    "Register", "RegisterLayout", "Sign", "SparseState", "Variant",
    "build_filter", "build_iqfft", "build_qfft", "count", "decode", "deserialize",
    "encode", "error_metrics", "float_dft", "float_idft", "gate_bound", "invert",
    "make_layout", "oracle_qfft", "plan_rotation", "run", "run_basis", "run_batch",
    "serialize",
]
