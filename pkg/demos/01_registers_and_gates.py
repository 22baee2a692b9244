# Registers, gates and measurement on a small state vector.
import numpy as np

from qubitkit import statevec as sv
from qubitkit.gates import CNOT, CCNOT, Circuit, Hadamard, NOT, apply_circuit, format_circuit

rng = np.random.default_rng(1)

# |000>, qubit 0 is the low bit
s = sv.new_basis_state(3, 0)
print(sv.dump(s))

# Bell pair on qubits 0 and 1, then a Toffoli onto qubit 2
bell = Circuit(3, [Hadamard(0), CNOT(0, 1), CCNOT(0, 1, 2)])
print(format_circuit(bell))
s = apply_circuit(s, bell)
print(sv.dump(s, tol=1e-15))

# measure qubit 0 only; qubits 1 and 2 follow it
bits, after = sv.measure_subset(s, [0], rng)
print("qubit 0 ->", bits, " remaining state:")
print(sv.dump(after, tol=1e-15))

# NOT is its own inverse, so applying the circuit and its inverse is the identity
c = Circuit(3, [NOT(2), Hadamard(1), CNOT(1, 0)])
x = sv.random_state(3, rng)
back = apply_circuit(apply_circuit(x, c), c.inverse())
print("fidelity after c then c^-1:", sv.fidelity(x, back))

# sampling statistics on the uniform state
counts = np.zeros(8, dtype=int)
u = sv.uniform_superposition(3)
for _ in range(8000):
    outcome, _ = sv.measure_all(u, rng)
    counts[outcome.basis_index] += 1
print("counts over 8000 shots:", counts)
