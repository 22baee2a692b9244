"""Period finding for ``a**x mod N`` and classical post-processing to factors."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Sequence

import numpy as np

from .gates import ReversibleFunction, apply_function_xor
from .qft import QftSpec, apply_qft
from .statevec import (
    StateVector,
    bits_to_int,
    marginal_distribution,
    measure_subset,
)

MAX_QUBITS = 24


class CapacityError(ValueError):
    def __init__(self, required: int, limit: int = MAX_QUBITS):
        super().__init__(f"instance needs {required} qubits, simulator limit is {limit}")
        self.required = required
        self.limit = limit


class FactoringFailure(Exception):
    """Raised when a period does not yield factors; ``reason`` is
    ``"odd-period"`` or ``"trivial-root"``. Retry with another base."""

    def __init__(self, reason: str, detail: str = ""):
        super().__init__(f"{reason}: {detail}" if detail else reason)
        self.reason = reason


class AttemptsExhausted(RuntimeError):
    def __init__(self, N: int, attempts: list):
        super().__init__(f"no factor of {N} found in {len(attempts)} attempts")
        self.attempts = attempts


def _integer_root(n: int, k: int) -> int:
    r = round(n ** (1.0 / k))
    for c in (r - 1, r, r + 1):
        if c > 1 and c**k == n:
            return c
    return 0


def prime_power_base(N: int) -> int:
    """Return ``b`` if ``N == b**k`` for some ``k >= 2``, else 0."""
    for k in range(2, N.bit_length() + 1):
        b = _integer_root(N, k)
        if b:
            return b
    return 0


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


@dataclass(frozen=True)
class FactoringInstance:
    N: int
    a: int
    x_width: int = 0
    f_width: int = 0

    def __post_init__(self):
        N, a = self.N, self.a
        if N < 3 or N % 2 == 0:
            raise ValueError(f"N must be odd and > 2, got {N}")
        if not 1 < a < N:
            raise ValueError(f"need 1 < a < N, got a={a}")
        if math.gcd(a, N) != 1:
            raise ValueError(f"gcd({a}, {N}) = {math.gcd(a, N)} is already a factor")
        bits = (N - 1).bit_length()
        if not self.f_width:
            object.__setattr__(self, "f_width", bits)
        if not self.x_width:
            # 2**l >= N**2 > r**2
            object.__setattr__(self, "x_width", 2 * bits)

    @property
    def num_qubits(self) -> int:
        return self.x_width + self.f_width

    @property
    def x_span(self) -> range:
        return range(0, self.x_width)

    @property
    def f_span(self) -> range:
        return range(self.x_width, self.x_width + self.f_width)


@dataclass
class PeriodEstimate:
    period: int | None
    measurements: list[int]
    convergents: list[Fraction] = field(default_factory=list)


@lru_cache(maxsize=32)
def _prepared_amplitudes(inst: FactoringInstance) -> np.ndarray:
    amps = np.zeros(1 << inst.num_qubits, dtype=np.complex128)
    amps[: 1 << inst.x_width] = 1.0 / math.sqrt(1 << inst.x_width)
    s = StateVector(inst.num_qubits, amps)
    f = ReversibleFunction.modexp(inst.a, inst.N, inst.x_width)
    out = apply_function_xor(s, f, inst.x_span, inst.f_span).amplitudes
    out.setflags(write=False)
    return out


def prepare_register(inst: FactoringInstance) -> StateVector:
    """``sum_x |x, a**x mod N> / sqrt(2**l)`` (before any measurement)."""
    if inst.num_qubits > MAX_QUBITS:
        raise CapacityError(inst.num_qubits)
    return StateVector(inst.num_qubits, _prepared_amplitudes(inst).copy())


def run_period_finding(inst: FactoringInstance, rng: np.random.Generator,
                       premeasure: bool = True) -> int:
    """One quantum run; returns the measured x-register index after the QFT."""
    s = prepare_register(inst)
    if premeasure:
        _, s = measure_subset(s, list(inst.f_span), rng)
    s = apply_qft(s, QftSpec(0, inst.x_width))
    bits, _ = measure_subset(s, list(inst.x_span), rng)
    return bits_to_int(bits)


def outcome_distribution(inst: FactoringInstance, premeasure: bool = True) -> np.ndarray:
    """Exact probability of each x-register outcome.

    With ``premeasure`` the distribution is the Born-weighted mixture over
    every second-register outcome, each branch run through the QFT separately.
    """
    s = prepare_register(inst)
    if not premeasure:
        s = apply_qft(s, QftSpec(0, inst.x_width))
        return marginal_distribution(s, list(inst.x_span))
    f_probs = marginal_distribution(s, list(inst.f_span))
    total = np.zeros(1 << inst.x_width)
    for value in np.flatnonzero(f_probs > 0):
        total += f_probs[value] * conditioned_distribution(s, inst, int(value))
    return total


def conditioned_register(s: StateVector, inst: FactoringInstance, f_value: int) -> StateVector:
    """Project the second register onto ``f_value`` and renormalize."""
    idx = np.arange(s.dim)
    amps = np.where((idx >> inst.x_width) == f_value, s.amplitudes, 0.0)
    return StateVector(s.num_qubits, amps / np.linalg.norm(amps))


def conditioned_distribution(s: StateVector, inst: FactoringInstance, f_value: int) -> np.ndarray:
    branch = apply_qft(conditioned_register(s, inst, f_value), QftSpec(0, inst.x_width))
    return marginal_distribution(branch, list(inst.x_span))


def convergents(frac: Fraction) -> list[Fraction]:
    """Continued-fraction convergents of a non-negative rational."""
    out = []
    h0, h1, k0, k1 = 0, 1, 1, 0
    num, den = frac.numerator, frac.denominator
    while den:
        q, r = divmod(num, den)
        h0, h1 = h1, q * h1 + h0
        k0, k1 = k1, q * k1 + k0
        out.append(Fraction(h1, k1))
        num, den = den, r
    return out


def extract_period(measurements: Sequence[int], x_width: int, N: int, a: int) -> PeriodEstimate:
    """Smallest verified period among convergent denominators (< N) of
    ``m / 2**x_width`` and the lcms of denominators from different runs."""
    dens: set[int] = set()
    used = []
    for m in measurements:
        if m == 0:
            continue
        for c in convergents(Fraction(int(m), 1 << x_width)):
            if 1 <= c.denominator < N:
                dens.add(c.denominator)
                used.append(c)
    candidates = set(dens)
    ordered = sorted(dens)
    for k in range(2, len(ordered) + 1):
        for combo in combinations(ordered, k):
            lcm = math.lcm(*combo)
            if lcm <= N:
                candidates.add(lcm)
    for r in sorted(candidates):
        if pow(a, r, N) == 1:
            return PeriodEstimate(r, list(measurements), used)
    return PeriodEstimate(None, list(measurements), used)


def extract_factors(N: int, a: int, r: int) -> tuple[int, int]:
    if pow(a, r, N) != 1:
        raise ValueError(f"{a}**{r} mod {N} != 1; not a period")
    if r % 2:
        raise FactoringFailure("odd-period", f"r={r}")
    half = pow(a, r // 2, N)
    if half == N - 1:
        raise FactoringFailure("trivial-root", f"{a}**{r // 2} = -1 mod {N}")
    p, q = math.gcd(half - 1, N), math.gcd(half + 1, N)
    if not (1 < p < N and 1 < q < N):
        raise FactoringFailure("trivial-root", f"gcds {p}, {q}")
    return p, q


def _result(N: int, p: int) -> tuple[int, int]:
    assert N % p == 0 and 1 < p < N
    return tuple(sorted((p, N // p)))


def factor(N: int, rng: np.random.Generator, max_attempts: int = 20,
           premeasure: bool = True, log: list | None = None,
           base: int | None = None) -> tuple[int, int]:
    """Split ``N`` into two nontrivial factors ``(p, q)``, ``p <= q``.

    Each attempt draws a fresh base unless ``base`` pins it. Attempt
    records (dicts with ``a``, ``measured``, ``period``, ``outcome``) are
    appended to ``log`` if given.
    """
    if base is not None and not 1 < base < N:
        raise ValueError(f"need 1 < a < N, got a={base}")
    attempts = log if log is not None else []
    if N < 4 or is_prime(N):
        raise ValueError(f"{N} is not composite")
    if N % 2 == 0:
        attempts.append({"a": None, "measured": None, "period": None, "outcome": "even"})
        return _result(N, 2)
    b = prime_power_base(N)
    if b:
        attempts.append({"a": None, "measured": None, "period": None, "outcome": "prime-power"})
        return _result(N, b)
    needed = 3 * (N - 1).bit_length()
    if needed > MAX_QUBITS:
        raise CapacityError(needed)
    for _ in range(max_attempts):
        a = int(rng.integers(2, N)) if base is None else base
        g = math.gcd(a, N)
        if g > 1:
            attempts.append({"a": a, "measured": None, "period": None, "outcome": "lucky-gcd"})
            return _result(N, g)
        inst = FactoringInstance(N, a)
        m = run_period_finding(inst, rng, premeasure)
        est = extract_period([m], inst.x_width, N, a)
        record = {"a": a, "measured": m, "period": est.period, "outcome": "no-period"}
        attempts.append(record)
        if est.period is None:
            continue
        try:
            p, _ = extract_factors(N, a, est.period)
        except FactoringFailure as exc:
            record["outcome"] = exc.reason
            continue
        record["outcome"] = "success"
        return _result(N, p)
    raise AttemptsExhausted(N, attempts)
