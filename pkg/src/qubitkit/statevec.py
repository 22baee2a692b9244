"""Dense state-vector register and the projective measurement postulate.

Basis index ``n`` encodes the register in binary with qubit 0 as the least
significant bit, so qubit ``q`` of basis state ``n`` is ``(n >> q) & 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

NORM_TOL = 1e-9
MEASURE_NORM_TOL = 1e-6
# branches below this probability are never selected
IMPOSSIBLE_PROB = 1e-300


@dataclass
class StateVector:
    """An ``l``-qubit register holding ``2**l`` complex amplitudes."""

    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.num_qubits < 1:
            raise ValueError(f"register needs at least one qubit, got {self.num_qubits}")
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != (1 << self.num_qubits,):
            raise ValueError(
                f"expected {1 << self.num_qubits} amplitudes for {self.num_qubits} qubits, "
                f"got shape {self.amplitudes.shape}"
            )

    @classmethod
    def from_amplitudes(cls, amplitudes: Sequence[complex]) -> "StateVector":
        amps = np.asarray(amplitudes, dtype=np.complex128)
        n = amps.size.bit_length() - 1
        if amps.ndim != 1 or amps.size < 2 or (1 << n) != amps.size:
            raise ValueError(f"amplitude count must be a power of two >= 2, got {amps.size}")
        return cls(n, amps)

    @property
    def dim(self) -> int:
        return 1 << self.num_qubits

    def norm(self) -> float:
        """Sum of squared moduli."""
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def copy(self) -> "StateVector":
        return StateVector(self.num_qubits, self.amplitudes.copy())


@dataclass(frozen=True)
class MeasurementOutcome:
    basis_index: int
    bits: tuple[int, ...]

    @classmethod
    def from_index(cls, n: int, num_qubits: int) -> "MeasurementOutcome":
        return cls(n, tuple((n >> q) & 1 for q in range(num_qubits)))


def new_basis_state(num_qubits: int, index: int) -> StateVector:
    if num_qubits < 1:
        raise ValueError(f"register needs at least one qubit, got {num_qubits}")
    if not 0 <= index < (1 << num_qubits):
        raise ValueError(f"basis index {index} out of range for {num_qubits} qubits")
    amps = np.zeros(1 << num_qubits, dtype=np.complex128)
    amps[index] = 1.0
    return StateVector(num_qubits, amps)


def uniform_superposition(num_qubits: int) -> StateVector:
    if num_qubits < 1:
        raise ValueError(f"register needs at least one qubit, got {num_qubits}")
    dim = 1 << num_qubits
    return StateVector(num_qubits, np.full(dim, 1.0 / np.sqrt(dim), dtype=np.complex128))


def random_state(num_qubits: int, rng: np.random.Generator) -> StateVector:
    """Haar-random pure state, mostly for tests."""
    dim = 1 << num_qubits
    amps = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return StateVector(num_qubits, amps / np.linalg.norm(amps))


def fidelity(a: StateVector, b: StateVector) -> float:
    """Overlap ``|<a|b>|**2``; blind to global phase."""
    if a.num_qubits != b.num_qubits:
        raise ValueError(f"qubit count mismatch: {a.num_qubits} vs {b.num_qubits}")
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2)


def _check_measurable(s: StateVector) -> np.ndarray:
    probs = s.probabilities()
    total = float(probs.sum())
    if abs(total - 1.0) > MEASURE_NORM_TOL:
        raise ValueError(f"cannot measure unnormalized state (norm {total!r})")
    return probs


def _sample(probs: np.ndarray, rng: np.random.Generator) -> int:
    probs = np.where(probs < IMPOSSIBLE_PROB, 0.0, probs)
    cdf = np.cumsum(probs)
    k = int(np.searchsorted(cdf, rng.random() * cdf[-1], side="right"))
    # guard against landing on a trailing zero-probability entry
    k = min(k, probs.size - 1)
    while probs[k] == 0.0:
        k -= 1
    return k


def measure_all(s: StateVector, rng: np.random.Generator) -> tuple[MeasurementOutcome, StateVector]:
    """Measure every qubit; the returned state is the observed basis state."""
    probs = _check_measurable(s)
    n = _sample(probs, rng)
    return MeasurementOutcome.from_index(n, s.num_qubits), new_basis_state(s.num_qubits, n)


def subset_key(num_qubits: int, qubits: Sequence[int]) -> np.ndarray:
    """For each basis index, the integer formed by the bits at ``qubits``
    (``qubits[0]`` is the least significant)."""
    idx = np.arange(1 << num_qubits)
    key = np.zeros_like(idx)
    for k, q in enumerate(qubits):
        key |= ((idx >> q) & 1) << k
    return key


def _validate_subset(num_qubits: int, qubits: Iterable[int]) -> tuple[int, ...]:
    qubits = tuple(int(q) for q in qubits)
    if not qubits:
        raise ValueError("measurement needs at least one qubit")
    if len(set(qubits)) != len(qubits):
        raise ValueError(f"duplicate qubit indices in {qubits}")
    for q in qubits:
        if not 0 <= q < num_qubits:
            raise ValueError(f"qubit {q} out of range for {num_qubits} qubits")
    return qubits


def marginal_distribution(s: StateVector, qubits: Sequence[int]) -> np.ndarray:
    """Exact outcome distribution of measuring ``qubits`` (no sampling)."""
    qubits = _validate_subset(s.num_qubits, qubits)
    key = subset_key(s.num_qubits, qubits)
    return np.bincount(key, weights=s.probabilities(), minlength=1 << len(qubits))


def measure_subset(
    s: StateVector, qubits: Sequence[int], rng: np.random.Generator
) -> tuple[tuple[int, ...], StateVector]:
    """Measure some qubits, collapse and renormalize the rest.

    Returns the observed bits (in the order of ``qubits``) and the
    post-measurement state.
    """
    qubits = _validate_subset(s.num_qubits, qubits)
    probs = _check_measurable(s)
    key = subset_key(s.num_qubits, qubits)
    marginal = np.bincount(key, weights=probs, minlength=1 << len(qubits))
    outcome = _sample(marginal, rng)
    amps = np.where(key == outcome, s.amplitudes, 0.0)
    amps /= np.sqrt(marginal[outcome])
    bits = tuple((outcome >> k) & 1 for k in range(len(qubits)))
    return bits, StateVector(s.num_qubits, amps)


def bits_to_int(bits: Sequence[int]) -> int:
    return sum(int(b) << k for k, b in enumerate(bits))


def dump(s: StateVector, tol: float = 0.0) -> str:
    """Tab-separated ``index re im`` lines for every nonzero amplitude."""
    lines = []
    for n in np.flatnonzero(np.abs(s.amplitudes) > tol):
        c = s.amplitudes[n]
        lines.append(f"{n}\t{float(c.real)!r}\t{float(c.imag)!r}")
    return "\n".join(lines) + ("\n" if lines else "")


def load_dump(text: str, num_qubits: int | None = None) -> StateVector:
    """Parse the dump format; '#' lines and blank lines are skipped.

    Without ``num_qubits`` the register is the smallest one holding the
    largest index (at least one qubit).
    """
    entries = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise ValueError(f"line {lineno}: expected 'index re [im]', got {line!r}")
        im = float(parts[2]) if len(parts) == 3 else 0.0
        entries.append((int(parts[0]), complex(float(parts[1]), im)))
    if num_qubits is None:
        top = max((n for n, _ in entries), default=0)
        num_qubits = max(1, top.bit_length())
    amps = np.zeros(1 << num_qubits, dtype=np.complex128)
    for n, c in entries:
        if not 0 <= n < amps.size:
            raise ValueError(f"index {n} out of range for {num_qubits} qubits")
        amps[n] = c
    return StateVector(num_qubits, amps)
