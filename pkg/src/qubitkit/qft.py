"""Quantum Fourier transform as a gate circuit, plus an O(n^2) reference DFT.

Forward kernel is ``exp(+2*pi*i*j*k / 2**m) / sqrt(2**m)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .gates import Circuit, ControlledPhase, Hadamard, apply_circuit, swap
from .statevec import StateVector


@dataclass(frozen=True)
class QftSpec:
    start: int
    width: int
    inverse: bool = False

    def __post_init__(self):
        if self.width < 1:
            raise ValueError(f"QFT width must be >= 1, got {self.width}")
        if self.start < 0:
            raise ValueError(f"QFT span start must be >= 0, got {self.start}")

    @property
    def span(self) -> range:
        return range(self.start, self.start + self.width)


def qft_circuit(m: int, inverse: bool = False, offset: int = 0, num_qubits: int | None = None) -> Circuit:
    """Hadamards and controlled phases ``pi/2**k``, then the bit reversal
    as CNOT-built swaps. Qubits ``offset .. offset+m-1`` of a register of
    ``num_qubits`` (default ``offset + m``)."""
    if m < 1:
        raise ValueError(f"QFT width must be >= 1, got {m}")
    gates = []
    for j in reversed(range(m)):
        gates.append(Hadamard(offset + j))
        for k in reversed(range(j)):
            gates.append(ControlledPhase(offset + k, offset + j, math.pi / (1 << (j - k))))
    for k in range(m // 2):
        gates.extend(swap(offset + k, offset + m - 1 - k))
    c = Circuit(num_qubits if num_qubits is not None else offset + m, gates)
    return c.inverse() if inverse else c


def apply_qft(s: StateVector, spec: QftSpec) -> StateVector:
    if spec.start + spec.width > s.num_qubits:
        raise ValueError(f"QFT span {spec.span} does not fit {s.num_qubits} qubits")
    c = qft_circuit(spec.width, spec.inverse, spec.start, s.num_qubits)
    return apply_circuit(s, c)


@lru_cache(maxsize=16)
def dft_matrix(n: int, inverse: bool = False) -> np.ndarray:
    """Read-only ``n x n`` unitary DFT matrix (cached per size)."""
    sign = -1.0 if inverse else 1.0
    # reducing jk mod n keeps the exponent small and the phases accurate
    jk = np.outer(np.arange(n), np.arange(n)) % n
    m = np.exp(sign * 2j * np.pi * jk / n) / np.sqrt(n)
    m.setflags(write=False)
    return m


def dft_reference(amplitudes, inverse: bool = False) -> np.ndarray:
    """Direct unitary DFT by explicit summation, for checking circuits."""
    a = np.asarray(amplitudes, dtype=np.complex128)
    n = a.size
    if n < 1 or n & (n - 1):
        raise ValueError(f"length must be a power of two, got {n}")
    return dft_matrix(n, inverse) @ a
