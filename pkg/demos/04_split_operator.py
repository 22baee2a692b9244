# Wave packet in a harmonic well, advanced with split-operator steps.
import numpy as np

from qubitkit import hamsim

grid = hamsim.Grid1D(m=7, length=20.0, dt=0.01)
V = hamsim.harmonic_potential(grid)
h = hamsim.SplitHamiltonian(V)
psi = hamsim.init_wavefunction(grid, hamsim.gaussian_packet(grid, x0=7.0, sigma=1.0))

# <x> should follow 10 - 3 cos(t) for a unit-frequency oscillator
rows = []


def sample(i, s):
    if i % 50 == 0:
        rows.append((i * grid.dt, hamsim.observables(s, grid, h)))


hamsim.evolve(psi, h, grid, 628, order="strang", callback=sample)
for t, obs in rows:
    print(f"t={t:5.2f}  <x>={obs['mean_x']:7.4f}  expected={10 - 3 * np.cos(t):7.4f}  "
          f"<p>={obs['mean_p']:7.4f}  E={obs['energy']:.6f}")

# first-order vs second-order splitting at the same dt
for order in ("lie", "strang"):
    out = hamsim.evolve(psi, h, grid, 314, order=order)
    print(order, "<x> at t=3.14:", round(hamsim.observables(out, grid)["mean_x"], 6))
