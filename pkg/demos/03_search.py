# Grover search: the success probability oscillates with the iteration count.
import numpy as np

from qubitkit import grover

n, marked = 6, 41
theta = np.arcsin(2 ** (-n / 2))
print(f"n={n}: optimal k = {grover.optimal_iterations(n)}")

for k in range(0, 15):
    oracle = grover.SearchOracle(n, marked)
    p = grover.grover_state(oracle, k).probabilities()[marked]
    bar = "#" * int(round(40 * p))
    print(f"k={k:2d} queries={oracle.queries:2d} P={p:.4f} {bar}")

# success at the optimum for growing registers
for n in range(2, 13):
    k = grover.optimal_iterations(n)
    print(n, k, round(grover.success_probability(n, k), 6))

rng = np.random.default_rng(3)
oracle = grover.SearchOracle(10, 777)
found = grover.grover_search(oracle, rng)
print("found", found, "after", oracle.queries, "queries")
