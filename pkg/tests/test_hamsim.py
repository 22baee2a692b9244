import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st

from qubitkit.hamsim import (
    Grid1D,
    SplitHamiltonian,
    apply_phase_function,
    evolve,
    gaussian_packet,
    harmonic_potential,
    init_wavefunction,
    observables,
    strang_step,
    trotter_step,
)
from qubitkit.statevec import StateVector, fidelity, new_basis_state, random_state, uniform_superposition


def physical_momenta(grid):
    k = np.arange(grid.points)
    k = np.where(k < grid.points // 2, k, k - grid.points)
    return 2 * np.pi * k / grid.length


def dense_hamiltonian(grid, V, kinetic=lambda p: p**2 / 2):
    """H = diag(V) + sum_k T(p_k) |p_k><p_k| with |p_k> the normalized
    on-grid plane wave exp(i p_k x_j)."""
    x = grid.positions()
    waves = np.exp(1j * np.outer(x, physical_momenta(grid))) / math.sqrt(grid.points)
    return np.diag(V) + waves @ np.diag(kinetic(physical_momenta(grid))) @ waves.conj().T


def exact_evolution(grid, V, psi, t):
    return scipy.linalg.expm(-1j * dense_hamiltonian(grid, V) * t) @ psi


class TestGrid:
    @pytest.mark.parametrize("m, L, dt", [(2, 1, 0.1), (4, 0, 0.1), (4, 1, 0)])
    def test_invalid(self, m, L, dt):
        with pytest.raises(ValueError):
            Grid1D(m, L, dt)

    def test_momentum_grid(self):
        g = Grid1D(3, 4.0, 0.1)
        k = np.array([0, 1, 2, 3, -4, -3, -2, -1])
        np.testing.assert_allclose(g.wavenumbers(), 2 * np.pi * k / 4.0)
        assert g.dx == 0.5


class TestInit:
    def test_delta(self):
        g = Grid1D(4, 8.0, 0.1)
        samples = np.zeros(16)
        samples[0] = 3.0
        np.testing.assert_array_equal(init_wavefunction(g, samples).amplitudes, new_basis_state(4, 0).amplitudes)

    def test_constant(self):
        g = Grid1D(4, 8.0, 0.1)
        np.testing.assert_allclose(init_wavefunction(g, np.full(16, 2.0)).amplitudes,
                                   uniform_superposition(4).amplitudes)

    def test_gaussian_normalized(self):
        g = Grid1D(6, 20.0, 0.1)
        raw = np.exp(-((g.positions() - 10) ** 2) / 2)
        s = init_wavefunction(g, raw)
        assert abs(s.norm() - 1) < 1e-12
        np.testing.assert_allclose(s.amplitudes, raw / math.sqrt(np.sum(raw**2)))

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            init_wavefunction(Grid1D(3, 1.0, 0.1), np.zeros(8))


class TestPhaseFunction:
    def test_zero(self, rng):
        s = random_state(4, rng)
        np.testing.assert_array_equal(apply_phase_function(s, np.zeros(16)).amplitudes, s.amplitudes)

    def test_global_phase(self, rng):
        s = random_state(4, rng)
        assert fidelity(apply_phase_function(s, lambda j: np.full(j.shape, np.pi)), s) == pytest.approx(1, abs=1e-12)

    def test_non_finite(self, rng):
        f = np.zeros(8)
        f[5] = np.inf
        with pytest.raises(ValueError, match="index 5"):
            apply_phase_function(random_state(3, rng), f)

    @settings(max_examples=30)
    @given(st.integers(0, 2**32 - 1))
    def test_moduli_unchanged(self, seed):
        r = np.random.default_rng(seed)
        s = random_state(5, r)
        out = apply_phase_function(s, r.uniform(-50, 50, 32))
        np.testing.assert_allclose(np.abs(out.amplitudes), np.abs(s.amplitudes), rtol=1e-14)

    def test_potential_kick(self):
        g = Grid1D(6, 20.0, 0.5)
        s = init_wavefunction(g, gaussian_packet(g, 8.0, 1.0))
        out = apply_phase_function(s, -harmonic_potential(g) * g.dt)
        before, after = observables(s, g), observables(out, g)
        np.testing.assert_allclose(after["position_density"], before["position_density"], atol=1e-15)
        assert np.max(np.abs(after["momentum_density"] - before["momentum_density"])) > 1e-3


class TestTrotterStep:
    @pytest.mark.parametrize("m", range(3, 9))
    def test_free_plane_waves(self, m):
        g = Grid1D(m, 7.5, 0.013)
        h = SplitHamiltonian(np.zeros(g.points))
        worst = 0.0
        for p in physical_momenta(g):
            s = init_wavefunction(g, np.exp(1j * p * g.positions()))
            expected = StateVector(m, s.amplitudes * np.exp(-1j * p**2 / 2 * g.dt))
            out = trotter_step(s, h, g)
            worst = max(worst, 1 - fidelity(out, expected), np.max(np.abs(out.amplitudes - expected.amplitudes)))
        assert worst <= 1e-10

    def test_momentum_sign(self):
        # T(p) = p generates a translation by +dt
        g = Grid1D(6, 20.0, 0.25)
        h = SplitHamiltonian(np.zeros(64), kinetic=lambda p: p)
        s = init_wavefunction(g, gaussian_packet(g, 6.0, 1.0))
        out = evolve(s, h, g, 8)
        assert observables(out, g)["mean_x"] == pytest.approx(8.0, abs=1e-9)

    def test_boosted_packet_momentum(self):
        g = Grid1D(7, 40.0, 0.01)
        s = init_wavefunction(g, gaussian_packet(g, 20.0, 2.0, 1.5))
        assert observables(s, g)["mean_p"] == pytest.approx(1.5, abs=1e-6)

    def test_no_kinetic_keeps_density(self, rng):
        g = Grid1D(5, 10.0, 0.1)
        h = SplitHamiltonian(rng.uniform(0, 5, 32), kinetic=lambda p: np.zeros_like(p))
        s = random_state(5, rng)
        out = trotter_step(s, h, g)
        np.testing.assert_allclose(out.probabilities(), s.probabilities(), atol=1e-13)

    def test_harmonic_ground_state(self):
        g = Grid1D(5, 12.0, 0.01)
        V = harmonic_potential(g)
        s = init_wavefunction(g, gaussian_packet(g, 6.0, 1.0))
        # the grid ground state is the lowest eigenvector of the dense oracle
        _, vecs = np.linalg.eigh(dense_hamiltonian(g, V))
        ground = StateVector(5, vecs[:, 0])
        assert fidelity(ground, s) > 1 - 1e-6
        out = evolve(ground, SplitHamiltonian(V), g, 200)
        assert np.max(np.abs(out.probabilities() - ground.probabilities())) < 10 * g.dt**2

    def test_norm(self, rng):
        g = Grid1D(5, 10.0, 0.05)
        h = SplitHamiltonian(harmonic_potential(g))
        out = trotter_step(random_state(5, rng), h, g)
        assert abs(out.norm() - 1) <= 1e-12

    def test_grid_mismatch(self, rng):
        with pytest.raises(ValueError):
            trotter_step(random_state(4, rng), SplitHamiltonian(np.zeros(32)), Grid1D(5, 1.0, 0.1))

    def test_non_finite_potential(self):
        with pytest.raises(ValueError, match="index 3"):
            SplitHamiltonian(np.array([0, 0, 0, np.nan]))


class TestEvolve:
    def setup_method(self):
        self.grid = Grid1D(5, 10.0, 0.01)
        self.V = harmonic_potential(self.grid)
        self.h = SplitHamiltonian(self.V)
        self.psi = init_wavefunction(self.grid, gaussian_packet(self.grid, 4.0, 1.0, 0.5))

    def test_zero_steps(self):
        with pytest.raises(ValueError):
            evolve(self.psi, self.h, self.grid, 0)

    def test_unknown_order(self):
        with pytest.raises(ValueError):
            evolve(self.psi, self.h, self.grid, 1, order="yoshida")

    def test_one_lie_step(self):
        a = evolve(self.psi, self.h, self.grid, 1)
        b = trotter_step(self.psi, self.h, self.grid)
        np.testing.assert_array_equal(a.amplitudes, b.amplitudes)

    def test_converges_to_exact(self):
        t = 0.5
        exact = exact_evolution(self.grid, self.V, self.psi.amplitudes, t)
        out = evolve(self.psi, self.h, self.grid, 50, order="strang")
        assert np.linalg.norm(out.amplitudes - exact) < 1e-4

    @pytest.mark.parametrize("order, slope", [("lie", 1.0), ("strang", 2.0)])
    def test_error_order(self, order, slope):
        dts = [0.02, 0.01, 0.005]
        errs = []
        for dt in dts:
            g = Grid1D(5, 10.0, dt)
            out = evolve(self.psi, self.h, g, round(1.0 / dt), order=order)
            errs.append(np.linalg.norm(out.amplitudes - exact_evolution(g, self.V, self.psi.amplitudes, 1.0)))
        fitted = np.polyfit(np.log(dts), np.log(errs), 1)[0]
        assert abs(fitted - slope) <= 0.2

    def test_time_reversal(self):
        fwd = evolve(self.psi, self.h, self.grid, 100, order="strang")
        back = evolve(fwd, self.h, self.grid, 100, order="strang", dt=-self.grid.dt)
        assert fidelity(back, self.psi) >= 1 - 1e-10
        one = strang_step(strang_step(self.psi, self.h, self.grid), self.h, self.grid, -self.grid.dt)
        assert fidelity(one, self.psi) >= 1 - 1e-12

    def test_callback(self):
        seen = []
        evolve(self.psi, self.h, self.grid, 4, callback=lambda i, s: seen.append(i))
        assert seen == [1, 2, 3, 4]

    def test_norm_over_many_steps(self):
        out = evolve(self.psi, self.h, self.grid, 2000)
        assert abs(out.norm() - 1) <= 1e-8


class TestObservables:
    def test_uniform(self):
        g = Grid1D(4, 8.0, 0.1)
        obs = observables(uniform_superposition(4), g)
        np.testing.assert_allclose(obs["position_density"], 1 / 16)
        assert obs["mean_p"] == pytest.approx(0, abs=1e-14)

    @pytest.mark.parametrize("j", [0, 3, 11])
    def test_basis_position(self, j):
        g = Grid1D(4, 8.0, 0.1)
        assert observables(new_basis_state(4, j), g)["mean_x"] == pytest.approx(j * 0.5)

    def test_energy_matches_dense(self, rng):
        g = Grid1D(5, 10.0, 0.1)
        V = harmonic_potential(g)
        s = random_state(5, rng)
        e = observables(s, g, SplitHamiltonian(V))["energy"]
        H = dense_hamiltonian(g, V)
        assert e == pytest.approx(np.vdot(s.amplitudes, H @ s.amplitudes).real, rel=1e-12)

    def test_energy_conserved_strang(self):
        energies = {}
        for dt in (0.04, 0.02):
            g = Grid1D(5, 10.0, dt)
            h = SplitHamiltonian(harmonic_potential(g))
            psi = init_wavefunction(g, gaussian_packet(g, 4.0, 1.0))
            e0 = observables(psi, g, h)["energy"]
            drift = []
            evolve(psi, h, g, round(2.0 / dt), "strang",
                   callback=lambda i, s: drift.append(abs(observables(s, g, h)["energy"] - e0)))
            energies[dt] = max(drift)
        assert energies[0.04] < 0.01
        # second order: halving dt cuts the drift by ~4
        assert 3.0 < energies[0.04] / energies[0.02] < 5.0
