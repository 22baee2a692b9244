"""Split-operator evolution of a 1-D wavefunction stored in register amplitudes.

Units: hbar = 1. The grid is periodic with points ``x_j = j * dx``. Momentum
space is reached with the forward QFT; output index ``k`` of that transform
carries momentum ``-2*pi*k'/L`` where ``k'`` is ``k`` wrapped into
``[-2**(m-1), 2**(m-1))``. The minus sign comes from the ``exp(+i...)``
kernel (a plane wave ``exp(i p x)`` lands on index ``-p L / 2 pi``).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .qft import QftSpec, apply_qft
from .statevec import StateVector


@dataclass(frozen=True)
class Grid1D:
    m: int
    length: float
    dt: float

    def __post_init__(self):
        if self.m < 3:
            raise ValueError(f"grid needs at least 3 qubits (8 points), got {self.m}")
        if not self.length > 0:
            raise ValueError(f"length must be positive, got {self.length}")
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")

    @property
    def points(self) -> int:
        return 1 << self.m

    @property
    def dx(self) -> float:
        return self.length / self.points

    def positions(self) -> np.ndarray:
        return np.arange(self.points) * self.dx

    def wavenumbers(self) -> np.ndarray:
        """``2*pi*k'/L`` for each index, with wrap-around negative frequencies."""
        k = np.arange(self.points)
        k = np.where(k < self.points // 2, k, k - self.points)
        return 2 * np.pi * k / self.length

    def momenta(self) -> np.ndarray:
        """Physical momentum of each forward-QFT output index."""
        return -self.wavenumbers()


def free_kinetic(mass: float = 1.0) -> Callable[[np.ndarray], np.ndarray]:
    return lambda p: p**2 / (2.0 * mass)


@dataclass(frozen=True, eq=False)
class SplitHamiltonian:
    """``H = T(p) + V(x)`` with ``V`` sampled on the grid."""

    potential: np.ndarray
    kinetic: Callable[[np.ndarray], np.ndarray] | None = None
    mass: float = 1.0

    def __post_init__(self):
        v = np.asarray(self.potential, dtype=float)
        bad = np.flatnonzero(~np.isfinite(v))
        if bad.size:
            raise ValueError(f"potential not finite at grid index {bad[0]}")
        object.__setattr__(self, "potential", v)
        if self.kinetic is None:
            object.__setattr__(self, "kinetic", free_kinetic(self.mass))

    def kinetic_on(self, grid: Grid1D) -> np.ndarray:
        t = np.asarray(self.kinetic(grid.momenta()), dtype=float)
        bad = np.flatnonzero(~np.isfinite(t))
        if bad.size:
            raise ValueError(f"kinetic term not finite at momentum index {bad[0]}")
        return t


def harmonic_potential(grid: Grid1D, omega: float = 1.0, mass: float = 1.0,
                       center: float | None = None) -> np.ndarray:
    c = grid.length / 2 if center is None else center
    return 0.5 * mass * omega**2 * (grid.positions() - c) ** 2


def gaussian_packet(grid: Grid1D, x0: float, sigma: float, p0: float = 0.0) -> np.ndarray:
    x = grid.positions()
    return np.exp(-((x - x0) ** 2) / (2 * sigma**2) + 1j * p0 * x)


def init_wavefunction(grid: Grid1D, samples) -> StateVector:
    psi = np.asarray(samples, dtype=np.complex128)
    if psi.shape != (grid.points,):
        raise ValueError(f"expected {grid.points} samples, got shape {psi.shape}")
    norm = np.linalg.norm(psi)
    if norm == 0 or not np.isfinite(norm):
        raise ValueError("wavefunction samples have zero or non-finite norm")
    return StateVector(grid.m, psi / norm)


def apply_phase_function(s: StateVector, f) -> StateVector:
    """``c_j -> exp(i f(j)) c_j``; ``f`` is an array over indices or a
    callable taking the index array."""
    idx = np.arange(s.dim)
    vals = np.asarray(f(idx) if callable(f) else f, dtype=float)
    if vals.shape != (s.dim,):
        raise ValueError(f"phase function must give {s.dim} values, got shape {vals.shape}")
    bad = np.flatnonzero(~np.isfinite(vals))
    if bad.size:
        raise ValueError(f"phase function not finite at index {bad[0]}")
    return StateVector(s.num_qubits, s.amplitudes * np.exp(1j * vals))


def _to_momentum(s: StateVector) -> StateVector:
    return apply_qft(s, QftSpec(0, s.num_qubits))


def _to_position(s: StateVector) -> StateVector:
    return apply_qft(s, QftSpec(0, s.num_qubits, inverse=True))


def _check(s: StateVector, grid: Grid1D) -> None:
    if s.num_qubits != grid.m:
        raise ValueError(f"state has {s.num_qubits} qubits, grid has {grid.m}")


def trotter_step(s: StateVector, h: SplitHamiltonian, grid: Grid1D,
                 dt: float | None = None) -> StateVector:
    """Potential phase, forward QFT, kinetic phase, inverse QFT.

    ``dt`` overrides ``grid.dt`` (negative values run backwards in time).
    """
    _check(s, grid)
    dt = grid.dt if dt is None else dt
    s = apply_phase_function(s, -h.potential * dt)
    s = _to_momentum(s)
    s = apply_phase_function(s, -h.kinetic_on(grid) * dt)
    return _to_position(s)


def strang_step(s: StateVector, h: SplitHamiltonian, grid: Grid1D,
                dt: float | None = None) -> StateVector:
    _check(s, grid)
    dt = grid.dt if dt is None else dt
    half = -h.potential * dt / 2
    s = apply_phase_function(s, half)
    s = _to_momentum(s)
    s = apply_phase_function(s, -h.kinetic_on(grid) * dt)
    s = _to_position(s)
    return apply_phase_function(s, half)


def evolve(s: StateVector, h: SplitHamiltonian, grid: Grid1D, steps: int,
           order: str = "lie", dt: float | None = None,
           callback: Callable[[int, StateVector], None] | None = None) -> StateVector:
    """Repeat ``steps`` split steps; ``callback(step, state)`` after each."""
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    if order == "lie":
        step = trotter_step
    elif order == "strang":
        step = strang_step
    else:
        raise ValueError(f"order must be 'lie' or 'strang', got {order!r}")
    for i in range(1, steps + 1):
        s = step(s, h, grid, dt)
        if callback is not None:
            callback(i, s)
    return s


def observables(s: StateVector, grid: Grid1D, h: SplitHamiltonian | None = None) -> dict:
    """Simulator-side diagnostics: densities in both bases and their means.

    ``energy`` is ``<V> + <T>``, present only when ``h`` is given.
    """
    _check(s, grid)
    rho_x = s.probabilities()
    rho_p = _to_momentum(s).probabilities()
    out = {
        "position_density": rho_x,
        "momentum_density": rho_p,
        "norm": float(rho_x.sum()),
        "mean_x": float(rho_x @ grid.positions()),
        "mean_p": float(rho_p @ grid.momenta()),
    }
    if h is not None:
        out["energy"] = float(rho_x @ h.potential + rho_p @ h.kinetic_on(grid))
    return out
