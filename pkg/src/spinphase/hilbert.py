"""Computational-basis states of N qubits.

Bit ``k`` of a basis index encodes site ``k``: 0 is ``|+>`` (sigma_z = +1) and
1 is ``|->``.  The magnetization of index ``i`` is therefore
``N - 2 * popcount(i)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ConfigError

NORM_TOL = 1e-12


@dataclass(frozen=True, init=False)
class ProductStateSpec:
    """Bloch angles ``(theta_i, phi_i)`` of a separable pure state, one pair per site."""

    sites: tuple[tuple[float, float], ...]

    def __init__(self, sites: Sequence[Sequence[float]]):
        pairs = tuple((float(th), float(ph)) for th, ph in sites)
        if not pairs:
            raise ConfigError("product state needs at least one site")
        for i, (th, ph) in enumerate(pairs):
            if not (math.isfinite(th) and math.isfinite(ph)):
                raise ConfigError(f"site {i}: non-finite angle ({th}, {ph})")
            if not 0.0 <= th <= math.pi:
                raise ConfigError(f"site {i}: theta={th} outside [0, pi]")
            if not 0.0 <= ph < 2 * math.pi:
                raise ConfigError(f"site {i}: phi={ph} outside [0, 2pi)")
        object.__setattr__(self, "sites", pairs)

    @property
    def n_sites(self) -> int:
        return len(self.sites)

    @property
    def thetas(self) -> np.ndarray:
        return np.array([th for th, _ in self.sites])

    @property
    def phis(self) -> np.ndarray:
        return np.array([ph for _, ph in self.sites])

    def replace_site(self, k: int, theta: float | None = None, phi: float | None = None):
        sites = list(self.sites)
        th, ph = sites[k]
        sites[k] = (th if theta is None else theta, ph if phi is None else phi)
        return ProductStateSpec(sites)


@dataclass(frozen=True)
class StateVector:
    """Normalized state of ``n_sites`` qubits as a dense complex vector."""

    n_sites: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).ravel()
        if self.n_sites < 1:
            raise ConfigError("n_sites must be positive")
        if amps.size != 2**self.n_sites:
            raise ConfigError(f"expected {2**self.n_sites} amplitudes, got {amps.size}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise ConfigError(f"state is not normalized (norm={norm!r})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def normalized(cls, amplitudes) -> "StateVector":
        amps = np.asarray(amplitudes, dtype=complex).ravel()
        n = int(round(math.log2(amps.size)))
        return cls(n, amps / np.linalg.norm(amps))

    def phase_shifted(self, chi: float) -> "StateVector":
        return StateVector(self.n_sites, np.exp(1j * chi) * self.amplitudes)


@dataclass(frozen=True)
class SingleSiteDensity:
    matrix: np.ndarray = field(repr=False)
    coherence: np.ndarray

    @property
    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))


def spin_coherent(theta: float, phi: float) -> np.ndarray:
    return np.array([math.cos(theta / 2), np.exp(1j * phi) * math.sin(theta / 2)])


def build_product_state(spec: ProductStateSpec) -> StateVector:
    psi = np.ones(1, dtype=complex)
    # later sites are more significant bits
    for theta, phi in spec.sites:
        psi = np.kron(spin_coherent(theta, phi), psi)
    return StateVector(spec.n_sites, psi)


def inner_product(a: StateVector, b: StateVector) -> complex:
    """<a|b>, conjugating ``a``."""
    if a.n_sites != b.n_sites:
        raise ConfigError(f"dimension mismatch: {a.n_sites} vs {b.n_sites} sites")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def reduce_to_site(state: StateVector, k: int) -> SingleSiteDensity:
    """Partial trace onto site ``k`` by strided index arithmetic."""
    n = state.n_sites
    if not 0 <= k < n:
        raise IndexError(f"site {k} out of range for {n} sites")
    a = state.amplitudes.reshape(2 ** (n - 1 - k), 2, 2**k)
    rho = np.einsum("hsl,htl->st", a, a.conj())
    rho = (rho + rho.conj().T) / 2
    vx = 2 * rho[0, 1].real
    vy = -2 * rho[0, 1].imag
    vz = (rho[0, 0] - rho[1, 1]).real
    return SingleSiteDensity(rho, np.array([vx, vy, vz]))
