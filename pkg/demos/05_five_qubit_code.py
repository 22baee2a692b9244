# Five-qubit code: encode, corrupt with a Pauli error, read the syndrome, repair.
import numpy as np

from qubitkit import qecc5

rng = np.random.default_rng(5)

print("syndrome table:")
for v, e in sorted(qecc5.syndrome_table().items()):
    print(f"  {v:2d} {qecc5.Syndrome.from_value(v).bits} -> {e}")

q = qecc5.LogicalQubit.random(rng)
c = qecc5.encode(q)
print("stabilizer expectations of the codeword:", qecc5.stabilizer_expectations(c))

for label in ("I", "X0", "Z3", "Y4"):
    noisy = qecc5.apply_error(c, qecc5.PauliError.parse(label))
    syn, collapsed = qecc5.syndrome_extract(noisy, rng)
    out = qecc5.decode(qecc5.recover(collapsed, syn))
    print(f"{label:>2}: syndrome {syn.value:2d}, fidelity {qecc5.logical_fidelity(q, out):.12f}")

# two errors land on the wrong correction
noisy = qecc5.apply_pauli(c, "XIXII")
syn, collapsed = qecc5.syndrome_extract(noisy, rng)
print("XIXII -> corrected as", qecc5.syndrome_table()[syn.value],
      "fidelity", round(qecc5.logical_fidelity(q, qecc5.decode(qecc5.recover(collapsed, syn))), 6))

# logical failure rate grows like p**2
for p in (0.02, 0.05, 0.1):
    rate, err = qecc5.logical_error_rate(p, 4000, rng)
    print(f"p={p}: rate {rate:.4f} +- {err:.4f}   10 p^2 = {10 * p * p:.4f}")
