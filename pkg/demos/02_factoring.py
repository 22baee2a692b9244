# Period finding for 7**x mod 15 and the classical steps that turn it into factors.
from fractions import Fraction

import numpy as np

from qubitkit import shor

inst = shor.FactoringInstance(15, 7)
print(f"N=15, a=7: {inst.x_width} x-qubits + {inst.f_width} f-qubits")

probs = shor.outcome_distribution(inst)
peaks = np.flatnonzero(probs > 1e-9)
print("outcomes with nonzero probability:", peaks.tolist())
print("their probabilities:", np.round(probs[peaks], 6).tolist())

# each peak m gives m / 2**l close to j / r
for m in peaks[1:]:
    cf = shor.convergents(Fraction(int(m), 1 << inst.x_width))
    print(m, "convergents:", [str(c) for c in cf])

est = shor.extract_period([64, 192], inst.x_width, 15, 7)
print("period from {64, 192}:", est.period)
print("factors from r=4:", shor.extract_factors(15, 7, est.period))

# full loop with random bases
rng = np.random.default_rng(2)
for n in (15, 21, 33):
    log = []
    print(n, "=", shor.factor(n, rng, log=log), " attempts:", [r["outcome"] for r in log])

# small N often hit a shared factor by luck; pin a coprime base to force the quantum path
log = []
print("21 with a=2:", shor.factor(21, rng, base=2, log=log), log)
