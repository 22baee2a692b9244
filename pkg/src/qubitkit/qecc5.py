"""The five-qubit perfect code.

Stabilizer generators (character ``i`` acts on qubit ``i``)::

    XZZXI  IXZZX  XIXZZ  ZXIXZ

|0_L> is the normalized projection of |00000> onto the +1 eigenspace of all
four, |1_L> that of |11111>. Syndrome bit ``g`` is 1 when generator ``g``
anticommutes with the error; syndrome 0 means no error.

Syndrome reading uses a 32x32 unitary sending ``E|b_L>`` to the basis state
with qubit 0 = ``b`` and qubits 1..4 = the syndrome of ``E``, so measuring
qubits 1..4 reads the error without touching the logical content.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
import math

import numpy as np

from .statevec import StateVector, bits_to_int, measure_subset

NUM_QUBITS = 5
DIM = 1 << NUM_QUBITS
STABILIZERS = ("XZZXI", "IXZZX", "XIXZZ", "ZXIXZ")
SYNDROME_QUBITS = (1, 2, 3, 4)

_PAULI = {
    "I": np.eye(2, dtype=np.complex128),
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


def pauli_operator(word: str) -> np.ndarray:
    """Dense matrix of a Pauli word; ``word[i]`` acts on qubit ``i``."""
    m = np.ones((1, 1), dtype=np.complex128)
    # qubit 0 is the least significant bit, so it is the rightmost factor
    for ch in word:
        m = np.kron(_PAULI[ch], m)
    return m


@dataclass(frozen=True)
class PauliError:
    kind: str  # "I", "X", "Z" or "Y"
    qubit: int = 0

    def __post_init__(self):
        if self.kind not in ("I", "X", "Z", "Y"):
            raise ValueError(f"unknown Pauli kind {self.kind!r}")
        if not 0 <= self.qubit < NUM_QUBITS:
            raise ValueError(f"qubit {self.qubit} out of range")
        if self.kind == "I" and self.qubit:
            object.__setattr__(self, "qubit", 0)

    @classmethod
    def parse(cls, label: str) -> "PauliError":
        label = label.strip().upper()
        if label == "I":
            return cls("I")
        if len(label) != 2 or not label[1].isdigit():
            raise ValueError(f"error label must look like X2, Z0, Y4 or I, got {label!r}")
        return cls(label[0], int(label[1]))

    @property
    def word(self) -> str:
        w = ["I"] * NUM_QUBITS
        w[self.qubit] = self.kind
        return "".join(w)

    @property
    def label(self) -> str:
        return "I" if self.kind == "I" else f"{self.kind}{self.qubit}"

    def matrix(self) -> np.ndarray:
        return _pauli_cached(self.word)

    def __str__(self) -> str:
        return self.label


@lru_cache(maxsize=None)
def _pauli_cached(word: str) -> np.ndarray:
    m = pauli_operator(word)
    m.setflags(write=False)
    return m


ERRORS: tuple[PauliError, ...] = (
    (PauliError("I"),)
    + tuple(PauliError("X", i) for i in range(NUM_QUBITS))
    + tuple(PauliError("Z", i) for i in range(NUM_QUBITS))
    + tuple(PauliError("Y", i) for i in range(NUM_QUBITS))
)


@dataclass(frozen=True)
class Syndrome:
    bits: tuple[int, int, int, int]

    @property
    def value(self) -> int:
        return bits_to_int(self.bits)

    @classmethod
    def from_value(cls, v: int) -> "Syndrome":
        if not 0 <= v < 16:
            raise ValueError(f"syndrome value {v} out of range")
        return cls(tuple((v >> g) & 1 for g in range(4)))


@dataclass(frozen=True)
class LogicalQubit:
    alpha: complex
    beta: complex

    def __post_init__(self):
        n = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(n - 1) > 1e-12:
            raise ValueError(f"logical qubit not normalized (|a|^2+|b|^2 = {n!r})")

    @classmethod
    def random(cls, rng: np.random.Generator) -> "LogicalQubit":
        v = rng.normal(size=2) + 1j * rng.normal(size=2)
        v /= np.linalg.norm(v)
        return cls(complex(v[0]), complex(v[1]))

    def state(self) -> StateVector:
        return StateVector(1, np.array([self.alpha, self.beta]))


@dataclass(frozen=True)
class NoiseModel:
    """Independent per-qubit Pauli noise: with probability ``p`` a qubit
    gets X, Z or Y drawn from ``kinds`` (weights for X, Z, Y)."""

    p: float
    kinds: tuple[float, float, float] = (1 / 3, 1 / 3, 1 / 3)

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")
        if min(self.kinds) < 0 or abs(sum(self.kinds) - 1.0) > 1e-12:
            raise ValueError(f"kind distribution must be non-negative and sum to 1, got {self.kinds}")


def syndrome_of(word: str) -> int:
    """Syndrome of a Pauli word from its commutation with the generators."""
    v = 0
    for g, stab in enumerate(STABILIZERS):
        anti = sum(1 for a, b in zip(word, stab) if a != "I" and b != "I" and a != b)
        v |= (anti & 1) << g
    return v


@lru_cache(maxsize=None)
def _code():
    stabs = [pauli_operator(w) for w in STABILIZERS]
    proj = np.eye(DIM, dtype=np.complex128)
    for m in stabs:
        proj = proj @ (np.eye(DIM) + m) / 2
    zero = proj[:, 0] / np.linalg.norm(proj[:, 0])
    one = proj[:, DIM - 1] / np.linalg.norm(proj[:, DIM - 1])
    logical = np.stack([zero, one], axis=1)

    table = {}
    for e in ERRORS:
        v = syndrome_of(e.word)
        if v in table:
            raise RuntimeError(f"syndrome {v} shared by {table[v]} and {e}")
        table[v] = e
    # column b + 2*s of the inverse map is E_s|b_L>
    cols = np.empty((DIM, DIM), dtype=np.complex128)
    for v, e in table.items():
        cols[:, (v << 1) | 0] = e.matrix() @ zero
        cols[:, (v << 1) | 1] = e.matrix() @ one
    reader = cols.conj().T
    for a in (proj, logical, reader):
        a.setflags(write=False)
    return stabs, proj, logical, table, reader


def stabilizer_matrices() -> list[np.ndarray]:
    return list(_code()[0])


def code_projector() -> np.ndarray:
    return _code()[1]


def logical_basis() -> np.ndarray:
    """32x2 matrix whose columns are |0_L> and |1_L>."""
    return _code()[2]


def syndrome_table() -> dict[int, PauliError]:
    return dict(_code()[3])


def syndrome_reader() -> np.ndarray:
    """The unitary mapping error images onto (logical bit, syndrome) basis states."""
    return _code()[4]


def _as_amps(state) -> np.ndarray:
    amps = state.amplitudes if isinstance(state, StateVector) else np.asarray(state)
    if amps.shape != (DIM,):
        raise ValueError(f"expected a 5-qubit state, got shape {amps.shape}")
    return amps


def encode(q: LogicalQubit) -> StateVector:
    basis = logical_basis()
    return StateVector(NUM_QUBITS, basis[:, 0] * q.alpha + basis[:, 1] * q.beta)


def apply_pauli(state: StateVector, word: str) -> StateVector:
    return StateVector(NUM_QUBITS, _pauli_cached(word) @ _as_amps(state))


def apply_error(state: StateVector, e: PauliError) -> StateVector:
    return apply_pauli(state, e.word)


def syndrome_extract(state: StateVector, rng: np.random.Generator) -> tuple[Syndrome, StateVector]:
    """Run the reading unitary and measure qubits 1..4.

    The returned state is still in the (logical bit, syndrome) frame;
    :func:`recover` maps it back.
    """
    rotated = StateVector(NUM_QUBITS, syndrome_reader() @ _as_amps(state))
    bits, collapsed = measure_subset(rotated, SYNDROME_QUBITS, rng)
    return Syndrome(bits), collapsed


def recover(collapsed: StateVector, syn: Syndrome) -> StateVector:
    """Undo the reading unitary, then undo the error the syndrome names."""
    back = syndrome_reader().conj().T @ _as_amps(collapsed)
    e = syndrome_table()[syn.value]
    return StateVector(NUM_QUBITS, e.matrix() @ back)


def code_defect(state: StateVector) -> float:
    """Norm of the component outside the code subspace."""
    amps = _as_amps(state)
    return float(np.linalg.norm(amps - code_projector() @ amps))


def stabilizer_expectations(state: StateVector) -> np.ndarray:
    amps = _as_amps(state)
    return np.array([np.vdot(amps, m @ amps).real for m in stabilizer_matrices()])


def decode(c: StateVector, tol: float = 1e-6) -> LogicalQubit:
    """Logical amplitudes with the global phase fixed so alpha is real, >= 0."""
    defect = code_defect(c)
    if defect > tol:
        raise ValueError(f"state is outside the code subspace (projection defect {defect:.3g})")
    coeffs = logical_basis().conj().T @ _as_amps(c)
    coeffs /= np.linalg.norm(coeffs)
    if abs(coeffs[0]) > 0:
        coeffs *= abs(coeffs[0]) / coeffs[0]
    return LogicalQubit(complex(coeffs[0]), complex(coeffs[1]))


def sample_noise_word(nm: NoiseModel, rng: np.random.Generator) -> str:
    hit = rng.random(NUM_QUBITS) < nm.p
    kinds = rng.choice(3, size=NUM_QUBITS, p=nm.kinds)
    return "".join("XZY"[k] if h else "I" for h, k in zip(hit, kinds))


def apply_noise(c: StateVector, nm: NoiseModel, rng: np.random.Generator) -> StateVector:
    return apply_pauli(c, sample_noise_word(nm, rng))


def logical_fidelity(q: LogicalQubit, out: LogicalQubit) -> float:
    return float(abs(np.conj(q.alpha) * out.alpha + np.conj(q.beta) * out.beta) ** 2)


def correction_trial(word: str, rng: np.random.Generator) -> float:
    """Encode a random qubit, apply ``word``, correct, decode; return fidelity."""
    q = LogicalQubit.random(rng)
    noisy = apply_pauli(encode(q), word)
    syn, collapsed = syndrome_extract(noisy, rng)
    return logical_fidelity(q, decode(recover(collapsed, syn)))


def logical_error_rate(p: float, trials: int, rng: np.random.Generator,
                       kinds: tuple[float, float, float] = (1 / 3, 1 / 3, 1 / 3),
                       forced_single: bool = False) -> tuple[float, float]:
    """Monte-Carlo rate of logical failure (fidelity < 1 - 1e-6) and its
    binomial standard error.

    Trial ``i`` draws from its own stream seeded by ``(base, i)``, where
    ``base`` comes from ``rng``. ``forced_single`` replaces the noise model
    with exactly one uniformly chosen non-identity error per trial.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    nm = NoiseModel(p, kinds)
    base = int(rng.integers(2**63))
    failures = 0
    for i in range(trials):
        trial_rng = np.random.default_rng([base, i])
        if forced_single:
            word = ERRORS[1 + int(trial_rng.integers(15))].word
        else:
            word = sample_noise_word(nm, trial_rng)
        if correction_trial(word, trial_rng) < 1 - 1e-6:
            failures += 1
    rate = failures / trials
    return rate, math.sqrt(rate * (1 - rate) / trials)
