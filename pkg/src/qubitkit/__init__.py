"""State-vector quantum computer simulator: gates, QFT, Shor, Grover,
split-operator Hamiltonian simulation and the five-qubit code."""

__version__ = "0.1.0"

from .statevec import (
    MeasurementOutcome,
    StateVector,
    fidelity,
    measure_all,
    measure_subset,
    new_basis_state,
    uniform_superposition,
)
from .gates import (
    CCNOT,
    CNOT,
    NOT,
    U2,
    Circuit,
    ControlledPhase,
    Hadamard,
    RegisterLayout,
    ReversibleFunction,
    apply_circuit,
    apply_function_xor,
    apply_gate,
    compute_copy_uncompute,
)
from .qft import QftSpec, apply_qft, dft_reference, qft_circuit

__all__ = [
    "MeasurementOutcome", "StateVector", "fidelity", "measure_all", "measure_subset",
    "new_basis_state", "uniform_superposition",
    "CCNOT", "CNOT", "NOT", "U2", "Circuit", "ControlledPhase", "Hadamard",
    "RegisterLayout", "ReversibleFunction", "apply_circuit", "apply_function_xor",
    "apply_gate", "compute_copy_uncompute",
    "QftSpec", "apply_qft", "dft_reference", "qft_circuit",
]
