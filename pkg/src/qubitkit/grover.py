"""Unstructured search against a single-solution black-box oracle."""

from __future__ import annotations

import math

import numpy as np

from .statevec import StateVector, measure_all, uniform_superposition


class SearchOracle:
    """Black box over ``2**n`` inputs returning 1 on exactly one of them.

    Every evaluation, classical or as a phase flip, counts as one query.
    """

    def __init__(self, n: int, marked: int):
        if n < 1:
            raise ValueError(f"need at least one qubit, got {n}")
        if not 0 <= marked < (1 << n):
            raise ValueError(f"marked index {marked} out of range for {n} qubits")
        self.n = n
        self._marked = marked
        self._queries = 0

    @property
    def queries(self) -> int:
        return self._queries

    def query(self, x: int) -> int:
        self._queries += 1
        return int(x == self._marked)

    def _flip(self, amps: np.ndarray) -> None:
        self._queries += 1
        amps[self._marked] *= -1


def oracle_phase_flip(s: StateVector, oracle: SearchOracle) -> StateVector:
    if s.num_qubits != oracle.n:
        raise ValueError(f"oracle acts on {oracle.n} qubits, state has {s.num_qubits}")
    out = s.copy()
    oracle._flip(out.amplitudes)
    return out


def diffusion(s: StateVector) -> StateVector:
    """Reflection about the uniform superposition: ``c -> 2*mean(c) - c``."""
    amps = 2.0 * s.amplitudes.mean() - s.amplitudes
    return StateVector(s.num_qubits, amps)


def optimal_iterations(n: int) -> int:
    return math.floor(math.pi / 4 * math.sqrt(1 << n))


def success_probability(n: int, k: int) -> float:
    theta = math.asin(2.0 ** (-n / 2))
    return math.sin((2 * k + 1) * theta) ** 2


def grover_state(oracle: SearchOracle, iterations: int) -> StateVector:
    s = uniform_superposition(oracle.n)
    for _ in range(iterations):
        s = diffusion(oracle_phase_flip(s, oracle))
    return s


def grover_search(oracle: SearchOracle, rng: np.random.Generator, iterations: int | None = None) -> int:
    """Run ``iterations`` rounds (default ``floor(pi/4 * sqrt(2**n))``) and
    measure. The caller checks the answer with ``oracle.query``."""
    if oracle.n < 2:
        raise ValueError("search needs at least 2 qubits")
    k = optimal_iterations(oracle.n) if iterations is None else iterations
    outcome, _ = measure_all(grover_state(oracle, k), rng)
    return outcome.basis_index
