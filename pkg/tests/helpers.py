"""Word-level wrappers around the bit-array simulator, shared by the tests."""
import numpy as np

from revqfft.simulator import read_words, run_batch, write_words, zeros


def run_words(circuit, regs, values, signed=True):
    """Run ``circuit`` on columns of register values; return values afterwards.

    ``regs`` is a list of qubit sequences and ``values`` a matching list of
    integer arrays (one entry per case).  Qubits outside ``regs`` start at 0.
    Returns (list of output arrays, full output bit array).
    """
    batch = len(values[0])
    bits = zeros(circuit.num_qubits, batch)
    for reg, vals in zip(regs, values):
        write_words(bits, list(reg), vals)
    out = run_batch(circuit, bits)
    return [read_words(out, list(reg), signed) for reg in regs], out


def other_qubits(circuit, *regs):
    used = {q for r in regs for q in r}
    return [q for q in range(circuit.num_qubits) if q not in used]


def signed_range(w):
    return np.arange(-(1 << (w - 1)), 1 << (w - 1))


def wrap(x, w):
    x = np.asarray(x, dtype=np.int64) & ((1 << w) - 1)
    return np.where(x >= (1 << (w - 1)), x - (1 << w), x)
