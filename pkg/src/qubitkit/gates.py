"""Gate set, circuits, and reversible-function application.

Gates act on the amplitude array through a ``[2] * l`` tensor view, so
qubit ``q`` lives on axis ``l - 1 - q``. Every kernel touches each
amplitude a constant number of times whichever qubits are targeted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .statevec import StateVector

UNITARY_TOL = 1e-12
_SQRT_HALF = 1.0 / math.sqrt(2.0)
HADAMARD_MATRIX = np.array([[1, 1], [1, -1]], dtype=np.complex128) * _SQRT_HALF


@dataclass(frozen=True)
class NOT:
    target: int

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.target,)

    def inverse(self) -> "NOT":
        return self


@dataclass(frozen=True)
class CNOT:
    control: int
    target: int

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.control, self.target)

    def inverse(self) -> "CNOT":
        return self


@dataclass(frozen=True)
class CCNOT:
    control1: int
    control2: int
    target: int

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.control1, self.control2, self.target)

    def inverse(self) -> "CCNOT":
        return self


@dataclass(frozen=True)
class Hadamard:
    target: int

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.target,)

    def inverse(self) -> "Hadamard":
        return self


@dataclass(frozen=True)
class ControlledPhase:
    """Multiplies the ``|11>`` component of (control, target) by ``exp(i*angle)``."""

    control: int
    target: int
    angle: float

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.control, self.target)

    def inverse(self) -> "ControlledPhase":
        return ControlledPhase(self.control, self.target, -self.angle)


@dataclass(frozen=True, eq=False)
class U2:
    """Arbitrary single-qubit unitary, checked once at construction."""

    target: int
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.complex128)
        if m.shape != (2, 2):
            raise ValueError(f"U2 matrix must be 2x2, got shape {m.shape}")
        defect = np.max(np.abs(m.conj().T @ m - np.eye(2)))
        if defect >= UNITARY_TOL:
            raise ValueError(f"U2 matrix is not unitary (defect {defect:.3g})")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.target,)

    def inverse(self) -> "U2":
        return U2(self.target, self.matrix.conj().T)

    def __eq__(self, other):
        return (
            isinstance(other, U2)
            and self.target == other.target
            and np.array_equal(self.matrix, other.matrix)
        )

    def __hash__(self):
        return hash((self.target, self.matrix.tobytes()))


GateOp = Union[NOT, CNOT, CCNOT, Hadamard, ControlledPhase, U2]


def swap(a: int, b: int) -> list[GateOp]:
    """SWAP as three CNOTs."""
    return [CNOT(a, b), CNOT(b, a), CNOT(a, b)]


def _check_indices(gate: GateOp, num_qubits: int) -> None:
    qs = gate.qubits
    if len(set(qs)) != len(qs):
        raise ValueError(f"{gate}: qubit indices must be distinct")
    for q in qs:
        if not 0 <= q < num_qubits:
            raise ValueError(f"{gate}: qubit {q} out of range for {num_qubits} qubits")


def _select(num_qubits: int, fixed: dict[int, int]) -> tuple:
    idx = [slice(None)] * num_qubits
    for q, bit in fixed.items():
        idx[num_qubits - 1 - q] = bit
    return (*idx, Ellipsis)


def _apply_inplace(amps: np.ndarray, num_qubits: int, gate: GateOp) -> None:
    t = amps.reshape([2] * num_qubits)
    n = num_qubits
    if isinstance(gate, NOT):
        i0, i1 = _select(n, {gate.target: 0}), _select(n, {gate.target: 1})
        tmp = t[i0].copy()
        t[i0] = t[i1]
        t[i1] = tmp
    elif isinstance(gate, (CNOT, CCNOT)):
        ctrl = {gate.control: 1} if isinstance(gate, CNOT) else {gate.control1: 1, gate.control2: 1}
        i0 = _select(n, {**ctrl, gate.target: 0})
        i1 = _select(n, {**ctrl, gate.target: 1})
        tmp = t[i0].copy()
        t[i0] = t[i1]
        t[i1] = tmp
    elif isinstance(gate, ControlledPhase):
        t[_select(n, {gate.control: 1, gate.target: 1})] *= np.exp(1j * gate.angle)
    elif isinstance(gate, Hadamard):
        i0, i1 = _select(n, {gate.target: 0}), _select(n, {gate.target: 1})
        a0 = t[i0].copy()
        a1 = t[i1]
        a0 += a1
        a0 *= _SQRT_HALF
        # (a0 - a1)/sqrt2 == a0_new - sqrt2*a1, updated in place
        a1 *= -math.sqrt(2.0)
        a1 += a0
        t[i0] = a0
    elif isinstance(gate, U2):
        (u00, u01), (u10, u11) = gate.matrix
        i0, i1 = _select(n, {gate.target: 0}), _select(n, {gate.target: 1})
        a0 = t[i0].copy()
        a1 = t[i1].copy()
        t[i0] = u00 * a0 + u01 * a1
        t[i1] = u10 * a0 + u11 * a1
    else:
        raise TypeError(f"unknown gate {gate!r}")


def apply_gate(s: StateVector, gate: GateOp) -> StateVector:
    _check_indices(gate, s.num_qubits)
    out = s.copy()
    _apply_inplace(out.amplitudes, out.num_qubits, gate)
    return out


@dataclass
class Circuit:
    num_qubits: int
    gates: list = field(default_factory=list)

    def __post_init__(self):
        if self.num_qubits < 1:
            raise ValueError("circuit needs at least one qubit")
        for g in self.gates:
            _check_indices(g, self.num_qubits)

    def append(self, gate: GateOp) -> "Circuit":
        _check_indices(gate, self.num_qubits)
        self.gates.append(gate)
        return self

    def extend(self, gates: Sequence[GateOp]) -> "Circuit":
        for g in gates:
            self.append(g)
        return self

    def inverse(self) -> "Circuit":
        return Circuit(self.num_qubits, [g.inverse() for g in reversed(self.gates)])

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)


def apply_circuit(s: StateVector, circuit: Circuit) -> StateVector:
    if circuit.num_qubits != s.num_qubits:
        raise ValueError(
            f"circuit declares {circuit.num_qubits} qubits, state has {s.num_qubits}"
        )
    out = s.copy()
    for g in circuit.gates:
        _apply_inplace(out.amplitudes, out.num_qubits, g)
    return out


# --- text format -----------------------------------------------------------

def parse_circuit(text: str, num_qubits: int | None = None) -> Circuit:
    """Read the one-gate-per-line format (``NOT q``, ``CNOT c t``,
    ``CCNOT c1 c2 t``, ``H q``, ``CPHASE c t angle``, ``U2 q <8 floats>``)."""
    gates: list[GateOp] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        name, *args = line.split()
        name = name.upper()
        try:
            if name == "NOT" and len(args) == 1:
                gates.append(NOT(int(args[0])))
            elif name == "CNOT" and len(args) == 2:
                gates.append(CNOT(int(args[0]), int(args[1])))
            elif name == "CCNOT" and len(args) == 3:
                gates.append(CCNOT(int(args[0]), int(args[1]), int(args[2])))
            elif name == "H" and len(args) == 1:
                gates.append(Hadamard(int(args[0])))
            elif name == "CPHASE" and len(args) == 3:
                gates.append(ControlledPhase(int(args[0]), int(args[1]), float(args[2])))
            elif name == "U2" and len(args) == 9:
                v = [float(a) for a in args[1:]]
                m = np.array([complex(v[i], v[i + 1]) for i in range(0, 8, 2)]).reshape(2, 2)
                gates.append(U2(int(args[0]), m))
            else:
                raise ValueError(f"unrecognized gate line {raw!r}")
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    if num_qubits is None:
        num_qubits = max((q for g in gates for q in g.qubits), default=0) + 1
    return Circuit(num_qubits, gates)


def format_gate(g: GateOp) -> str:
    if isinstance(g, NOT):
        return f"NOT {g.target}"
    if isinstance(g, CNOT):
        return f"CNOT {g.control} {g.target}"
    if isinstance(g, CCNOT):
        return f"CCNOT {g.control1} {g.control2} {g.target}"
    if isinstance(g, Hadamard):
        return f"H {g.target}"
    if isinstance(g, ControlledPhase):
        return f"CPHASE {g.control} {g.target} {float(g.angle)!r}"
    if isinstance(g, U2):
        vals = " ".join(f"{float(c.real)!r} {float(c.imag)!r}" for c in g.matrix.ravel())
        return f"U2 {g.target} {vals}"
    raise TypeError(f"unknown gate {g!r}")


def format_circuit(c: Circuit) -> str:
    return "".join(format_gate(g) + "\n" for g in c.gates)


# --- reversible functions --------------------------------------------------

@dataclass(frozen=True, eq=False)
class ReversibleFunction:
    """A classical function on ``domain_bits``-bit inputs, applied
    reversibly as ``|x, y> -> |x, y XOR f(x)>``.

    Build with :meth:`from_table` (a bijection, optionally with garbage
    output) or :meth:`modexp`.
    """

    domain_bits: int
    values: np.ndarray
    output_bits: int
    garbage: np.ndarray | None = None
    garbage_bits: int = 0
    modulus: tuple[int, int] | None = None  # (a, N) for modular exponentiation

    @classmethod
    def from_table(cls, table: Sequence[int], garbage: Sequence[int] | None = None,
                   garbage_bits: int | None = None) -> "ReversibleFunction":
        values = np.asarray(table, dtype=np.int64)
        d = values.size.bit_length() - 1
        if values.ndim != 1 or (1 << d) != values.size:
            raise ValueError(f"table length must be a power of two, got {values.size}")
        if not np.array_equal(np.sort(values), np.arange(values.size)):
            raise ValueError("table is not a permutation of its domain")
        g = None
        gb = 0
        if garbage is not None:
            g = np.asarray(garbage, dtype=np.int64)
            if g.shape != values.shape or (g < 0).any():
                raise ValueError("garbage table must be non-negative and match the domain")
            gb = garbage_bits if garbage_bits is not None else max(1, int(g.max()).bit_length())
            if int(g.max()) >= (1 << gb):
                raise ValueError(f"garbage values exceed {gb} bits")
        return cls(d, values, d, g, gb)

    @classmethod
    def modexp(cls, a: int, N: int, domain_bits: int) -> "ReversibleFunction":
        if N < 2 or not 1 < a < N:
            raise ValueError(f"need 1 < a < N, got a={a}, N={N}")
        if math.gcd(a, N) != 1:
            raise ValueError(f"gcd({a}, {N}) != 1")
        values = np.array([pow(a, x, N) for x in range(1 << domain_bits)], dtype=np.int64)
        return cls(domain_bits, values, (N - 1).bit_length(), modulus=(a, N))

    def __call__(self, x: int) -> int:
        return int(self.values[x])


def _span_range(span) -> range:
    r = span if isinstance(span, range) else range(span[0], span[0] + span[1])
    if r.step != 1:
        raise ValueError("qubit spans must be contiguous")
    return r


def _xor_permutation(num_qubits: int, values: np.ndarray, in_span: range,
                     out_span: range) -> np.ndarray:
    idx = np.arange(1 << num_qubits, dtype=np.int64)
    x = (idx >> in_span.start) & ((1 << len(in_span)) - 1)
    return idx ^ (values[x] << out_span.start)


def apply_function_xor(s: StateVector, f: ReversibleFunction, input_range, output_range) -> StateVector:
    """Basis map ``|x, y> -> |x, y XOR f(x)>`` on the given qubit spans.

    Spans are ``range`` objects or ``(start, width)`` pairs.
    """
    inp, out = _span_range(input_range), _span_range(output_range)
    if set(inp) & set(out):
        raise ValueError(f"input span {inp} overlaps output span {out}")
    for r in (inp, out):
        if r.start < 0 or r.stop > s.num_qubits or len(r) == 0:
            raise ValueError(f"span {r} does not fit a {s.num_qubits}-qubit register")
    if len(inp) != f.domain_bits:
        raise ValueError(f"input span has {len(inp)} qubits, function expects {f.domain_bits}")
    if int(f.values.max()) >= (1 << len(out)):
        raise ValueError(f"output span of {len(out)} qubits too narrow for max value {int(f.values.max())}")
    perm = _xor_permutation(s.num_qubits, f.values, inp, out)
    amps = np.empty_like(s.amplitudes)
    amps[perm] = s.amplitudes
    return StateVector(s.num_qubits, amps)


@dataclass(frozen=True)
class RegisterLayout:
    """Qubit spans for the compute / copy / uncompute pattern."""

    x: range
    work: range
    garbage: range
    save: range

    def __post_init__(self):
        spans = [_span_range(v) for v in (self.x, self.work, self.garbage, self.save)]
        for name, r in zip(("x", "work", "garbage", "save"), spans):
            object.__setattr__(self, name, r)
        seen: set[int] = set()
        for r in spans:
            if seen & set(r):
                raise ValueError("layout spans overlap")
            seen |= set(r)
        if len(self.save) != len(self.work):
            raise ValueError("save span must match the work span width")

    @property
    def num_qubits(self) -> int:
        return max(r.stop for r in (self.x, self.work, self.garbage, self.save))


def ancilla_leakage(s: StateVector, spans: Sequence[range]) -> float:
    """Probability mass on basis states with any nonzero bit in ``spans``."""
    mask = 0
    for r in spans:
        for q in r:
            mask |= 1 << q
    idx = np.arange(s.dim)
    return float(s.probabilities()[(idx & mask) != 0].sum())


def copy_circuit(layout: RegisterLayout, num_qubits: int | None = None) -> Circuit:
    """Fan-out of the work register into the save register, one CNOT per bit."""
    return Circuit(num_qubits or layout.num_qubits,
                   [CNOT(w, v) for w, v in zip(layout.work, layout.save)])


def compute_copy_uncompute(s: StateVector, f: ReversibleFunction, layout: RegisterLayout) -> StateVector:
    """``|x,0,0,0> -> |x,f,g,0> -> |x,f,g,f> -> |x,0,0,f>``.

    ``f.values`` lands in the work span and ``f.garbage`` (if any) in the
    garbage span; only the save span keeps a copy afterwards.
    """
    if s.num_qubits < layout.num_qubits:
        raise ValueError(f"layout needs {layout.num_qubits} qubits, state has {s.num_qubits}")
    if len(layout.x) != f.domain_bits:
        raise ValueError(f"x span has {len(layout.x)} qubits, function expects {f.domain_bits}")
    if f.garbage is not None and f.garbage_bits > len(layout.garbage):
        raise ValueError(f"garbage needs {f.garbage_bits} qubits, span has {len(layout.garbage)}")
    leak = ancilla_leakage(s, [layout.work, layout.garbage, layout.save])
    if leak > 1e-9:
        raise ValueError(f"ancilla registers not cleared (mass {leak:.3g} on nonzero settings)")

    # compute: work/garbage packed as one output word, garbage above work
    if f.garbage is not None and len(layout.garbage):
        if layout.garbage.start != layout.work.stop:
            compute = [(f.values, layout.work), (f.garbage, layout.garbage)]
        else:
            packed = f.values | (f.garbage << len(layout.work))
            compute = [(packed, range(layout.work.start, layout.garbage.stop))]
    else:
        compute = [(f.values, layout.work)]

    amps = s.amplitudes
    perms = [_xor_permutation(s.num_qubits, vals, layout.x, span) for vals, span in compute]
    for p in perms:
        step = np.empty_like(amps)
        step[p] = amps
        amps = step
    state = StateVector(s.num_qubits, amps)
    state = apply_circuit(state, copy_circuit(layout, s.num_qubits))
    # uncompute: the compute permutations inverted, in reverse order
    amps = state.amplitudes
    for p in reversed(perms):
        amps = amps[p]
    return StateVector(s.num_qubits, amps)

