"""Heisenberg ring Hamiltonian and its magnetization-sector spectrum.

The interaction term uses Pauli matrices, ``H_I = sum_i sigma_i . sigma_{i+1}``,
so every matrix element is an integer.  For a two-site chain the single bond
is counted once.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import ConfigError

MAX_SITES = 14
MAX_DENSE_SITES = 12


@dataclass(frozen=True)
class ChainConfig:
    n_sites: int
    coupling_j: float = 1.0
    field_b: float = 0.0
    hbar: float = 1.0
    periodic: bool = True

    def __post_init__(self):
        if int(self.n_sites) != self.n_sites or self.n_sites < 1:
            raise ConfigError(f"n_sites must be a positive integer, got {self.n_sites}")
        if self.n_sites > MAX_SITES:
            raise ConfigError(f"n_sites={self.n_sites} exceeds the supported maximum {MAX_SITES}")
        if self.periodic and self.n_sites < 2:
            raise ConfigError("a periodic chain needs at least 2 sites")
        if not self.hbar > 0:
            raise ConfigError("hbar must be positive")
        for name in ("coupling_j", "field_b", "hbar"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigError(f"{name} must be finite")

    @property
    def bonds(self) -> list[tuple[int, int]]:
        n = self.n_sites
        if n == 2 or not self.periodic:
            return [(i, i + 1) for i in range(n - 1)]
        return [(i, (i + 1) % n) for i in range(n)]


@dataclass(frozen=True)
class MagnetizationSector:
    m_value: int
    basis_indices: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.basis_indices)


def magnetization(index: int, n_sites: int) -> int:
    return n_sites - 2 * bin(index).count("1")


def enumerate_sectors(n_sites: int) -> list[MagnetizationSector]:
    """Sectors of S^z ordered by M descending; basis indices ascending within each."""
    if n_sites < 1:
        raise ConfigError("n_sites must be positive")
    idx = np.arange(2**n_sites)
    pop = np.array([bin(i).count("1") for i in idx])
    return [
        MagnetizationSector(n_sites - 2 * k, idx[pop == k])
        for k in range(n_sites + 1)
    ]


def _apply_bonds(config: ChainConfig, index: int):
    """Yield (target_index, element) of H_I acting on basis state ``index``."""
    diag = 0
    for i, j in config.bonds:
        bi = (index >> i) & 1
        bj = (index >> j) & 1
        if bi == bj:
            diag += 1
        else:
            diag -= 1
            yield index ^ ((1 << i) | (1 << j)), 2
    yield index, diag


def heisenberg_block(config: ChainConfig, sector: MagnetizationSector) -> np.ndarray:
    """Dense block of H_I restricted to one magnetization sector."""
    idx = sector.basis_indices
    pos = {int(b): p for p, b in enumerate(idx)}
    h = np.zeros((len(idx), len(idx)))
    for col, b in enumerate(idx):
        for target, elem in _apply_bonds(config, int(b)):
            h[pos[target], col] += elem
    return h


def build_heisenberg(config: ChainConfig) -> np.ndarray:
    """Full dense H_I (capped at MAX_DENSE_SITES sites; use sector blocks beyond)."""
    if config.n_sites > MAX_DENSE_SITES:
        raise ConfigError(f"full dense H_I limited to {MAX_DENSE_SITES} sites")
    dim = 2**config.n_sites
    h = np.zeros((dim, dim))
    for b in range(dim):
        for target, elem in _apply_bonds(config, b):
            h[target, b] += elem
    return h


def total_sz(n_sites: int) -> np.ndarray:
    """Diagonal of S^z = sum_i sigma_i^z."""
    return np.array([magnetization(i, n_sites) for i in range(2**n_sites)], dtype=float)


def build_hamiltonian(config: ChainConfig) -> np.ndarray:
    """Full dense H = J H_I + B S^z."""
    return config.coupling_j * build_heisenberg(config) + config.field_b * np.diag(
        total_sz(config.n_sites)
    )


@dataclass(frozen=True)
class SectorSpectrum:
    """Eigenpairs of H_I inside one sector; ``vectors[:, n]`` is block-local."""

    sector: MagnetizationSector
    energies: np.ndarray
    vectors: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class EigenMode:
    energy: float
    magnetization: int
    vector: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class EigenSystem:
    config: ChainConfig
    sectors: tuple[SectorSpectrum, ...]

    @property
    def dim(self) -> int:
        return 2**self.config.n_sites

    @cached_property
    def energies(self) -> np.ndarray:
        return np.concatenate([s.energies for s in self.sectors])

    @cached_property
    def magnetizations(self) -> np.ndarray:
        return np.concatenate([np.full(len(s.energies), s.sector.m_value) for s in self.sectors])

    @property
    def spectral_scale(self) -> float:
        return max(1.0, float(np.max(np.abs(self.energies))))

    def modes(self):
        """Iterate modes embedded in the full space (M desc, E asc)."""
        for s in self.sectors:
            for n, e in enumerate(s.energies):
                v = np.zeros(self.dim)
                v[s.sector.basis_indices] = s.vectors[:, n]
                yield EigenMode(float(e), s.sector.m_value, v)


def _fix_sign(vectors: np.ndarray) -> np.ndarray:
    # first component above noise is made positive
    out = vectors.copy()
    for n in range(out.shape[1]):
        col = out[:, n]
        nz = np.flatnonzero(np.abs(col) > 1e-10)
        if nz.size and col[nz[0]] < 0:
            out[:, n] = -col
    return out


def spectral_decompose(config: ChainConfig) -> EigenSystem:
    spectra = []
    for sector in enumerate_sectors(config.n_sites):
        block = heisenberg_block(config, sector)
        try:
            energies, vectors = np.linalg.eigh(block)
        except np.linalg.LinAlgError as exc:
            raise RuntimeError(
                f"eigensolver failed in sector M={sector.m_value} (size {sector.size}): {exc}"
            ) from exc
        vectors = _fix_sign(vectors)
        energies.setflags(write=False)
        vectors.setflags(write=False)
        spectra.append(SectorSpectrum(sector, energies, vectors))
    return EigenSystem(config, tuple(spectra))
