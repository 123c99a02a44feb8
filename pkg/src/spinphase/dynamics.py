"""Closed-form evolution in the joint (E, M) eigenbasis and cyclic-time search.

The initial state is split into its projections onto the distinct (E, M)
eigenspaces of H_I.  Each projection rotates with a single angular frequency
``omega = (J E + B M) / hbar``, so the arbitrary basis chosen by the
eigensolver inside a degenerate block never enters any result.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from typing import Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import ConfigError, IncommensurateSpectrum, NoReturnFound
from .hilbert import ProductStateSpec, StateVector, build_product_state
from .model import ChainConfig, EigenSystem

AMPLITUDE_THRESHOLD = 1e-12
ENERGY_GROUP_TOL = 1e-9


@dataclass(frozen=True)
class Component:
    """Projection of the initial state onto one (E, M) eigenspace."""

    energy: float
    magnetization: int
    omega: float
    weight: float
    basis_indices: np.ndarray = field(repr=False)
    projection: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class EvolutionContext:
    config: ChainConfig
    eigensystem: EigenSystem = field(repr=False)
    initial: StateVector = field(repr=False)
    components: tuple[Component, ...]
    dropped: tuple[tuple[float, int, float], ...] = ()
    product_spec: ProductStateSpec | None = None

    @cached_property
    def omegas(self) -> np.ndarray:
        return np.array([c.omega for c in self.components])

    @cached_property
    def weights(self) -> np.ndarray:
        return np.array([c.weight for c in self.components])

    @property
    def mean_omega(self) -> float:
        """<H>/hbar, conserved along the evolution."""
        return float(np.dot(self.weights, self.omegas))

    @cached_property
    def support(self) -> np.ndarray:
        """Basis indices that can carry amplitude at any time."""
        return np.unique(np.concatenate([c.basis_indices for c in self.components]))

    @cached_property
    def _support_matrix(self) -> np.ndarray:
        # rows: components, columns: support indices
        pos = {int(b): p for p, b in enumerate(self.support)}
        mat = np.zeros((len(self.components), len(self.support)), dtype=complex)
        for g, c in enumerate(self.components):
            mat[g, [pos[int(b)] for b in c.basis_indices]] = c.projection
        return mat

    def overlap(self, t):
        """<psi(0)|psi(t)>; ``t`` may be an array."""
        t = np.asarray(t, dtype=float)
        phases = np.exp(-1j * np.multiply.outer(t, self.omegas))
        return phases @ self.weights

    def support_amplitudes(self, ts) -> np.ndarray:
        """Evolved amplitudes restricted to ``support``, one row per time."""
        ts = np.atleast_1d(np.asarray(ts, dtype=float))
        phases = np.exp(-1j * np.multiply.outer(ts, self.omegas))
        return phases @ self._support_matrix


def _group_energies(energies: np.ndarray, tol: float) -> list[np.ndarray]:
    groups, start = [], 0
    for n in range(1, len(energies) + 1):
        if n == len(energies) or energies[n] - energies[n - 1] > tol:
            groups.append(np.arange(start, n))
            start = n
    return groups


def prepare_evolution(
    config: ChainConfig,
    eigensystem: EigenSystem,
    initial: StateVector | ProductStateSpec,
    amplitude_threshold: float = AMPLITUDE_THRESHOLD,
) -> EvolutionContext:
    spec = None
    if isinstance(initial, ProductStateSpec):
        spec = initial
        initial = build_product_state(spec)
    if initial.n_sites != config.n_sites:
        raise ConfigError(
            f"state has {initial.n_sites} sites but the chain has {config.n_sites}"
        )
    if eigensystem.config.n_sites != config.n_sites or eigensystem.config.bonds != config.bonds:
        raise ConfigError("eigensystem was built for a different chain geometry")

    tol = ENERGY_GROUP_TOL * eigensystem.spectral_scale
    psi = initial.amplitudes
    kept, dropped = [], []
    for spec_s in eigensystem.sectors:
        idx = spec_s.sector.basis_indices
        local = psi[idx]
        if not np.any(local):
            continue
        coeffs = spec_s.vectors.T @ local
        for grp in _group_energies(spec_s.energies, tol):
            proj = spec_s.vectors[:, grp] @ coeffs[grp]
            norm = float(np.linalg.norm(proj))
            energy = float(np.mean(spec_s.energies[grp]))
            m = spec_s.sector.m_value
            if norm < amplitude_threshold:
                if norm > 0:
                    dropped.append((energy, m, norm))
                continue
            omega = (config.coupling_j * energy + config.field_b * m) / config.hbar
            proj.setflags(write=False)
            kept.append(Component(energy, m, omega, norm**2, idx, proj))
    assert kept, "a normalized state must overlap some eigenmode"
    return EvolutionContext(config, eigensystem, initial, tuple(kept), tuple(dropped), spec)


def evolve_at(ctx: EvolutionContext, t: float) -> StateVector:
    psi = np.zeros(ctx.eigensystem.dim, dtype=complex)
    for c in ctx.components:
        psi[c.basis_indices] += np.exp(-1j * c.omega * t) * c.projection
    return StateVector(ctx.config.n_sites, psi)


@dataclass(frozen=True)
class CyclicOptions:
    max_denominator: int = 4096
    rational_tol: float = 1e-10
    default_horizon: float | None = None
    t_max: float | None = None
    grid_points: int = 200_000
    quasi_tolerance: float = 1e-3


@dataclass(frozen=True)
class CyclicTime:
    tau: float
    kind: str
    return_fidelity: float
    integers: tuple[int, ...] | None = None
    every_time_cyclic: bool = False


def _default_horizon(config: ChainConfig, options: CyclicOptions) -> float:
    if options.default_horizon is not None:
        return options.default_horizon
    b = abs(config.field_b)
    return math.pi * config.hbar / b if b > 0 else 2 * math.pi * config.hbar


def _distinct_omegas(ctx: EvolutionContext) -> np.ndarray:
    tol = ENERGY_GROUP_TOL * max(1.0, float(np.max(np.abs(ctx.omegas))))
    om = np.sort(ctx.omegas)
    keep = [om[0]]
    for w in om[1:]:
        if w - keep[-1] > tol:
            keep.append(w)
    return np.array(keep)


def _exact_period(diffs: np.ndarray, options: CyclicOptions) -> float:
    """Smallest tau with every ``diffs * tau`` in 2 pi Z, or raise."""
    ref = diffs[0]
    fracs = []
    for d in diffs:
        r = d / ref
        f = Fraction(r).limit_denominator(options.max_denominator)
        if abs(r - float(f)) > options.rational_tol * abs(r):
            raise IncommensurateSpectrum(
                f"frequency ratio {r!r} has no rational form with denominator "
                f"<= {options.max_denominator}"
            )
        fracs.append(f)
    lcm_den = reduce(math.lcm, (f.denominator for f in fracs), 1)
    nums = [int(f * lcm_den) for f in fracs]
    g = reduce(math.gcd, (abs(n) for n in nums))
    unit = g * abs(ref) / lcm_den
    return 2 * math.pi / unit


def find_cyclic_time(
    ctx: EvolutionContext, mode: str = "exact", options: CyclicOptions | None = None
) -> CyclicTime:
    options = options or CyclicOptions()
    if mode == "quasi":
        return find_common_cyclic_time([ctx], options)
    if mode != "exact":
        raise ConfigError(f"unknown cyclic mode {mode!r}")
    distinct = _distinct_omegas(ctx)
    if len(distinct) == 1:
        tau = _default_horizon(ctx.config, options)
        return CyclicTime(tau, "exact", float(abs(ctx.overlap(tau))), (), every_time_cyclic=True)
    tau = _exact_period(distinct[1:] - distinct[0], options)
    ref = ctx.components[0].omega
    raw = [tau * (ref - c.omega) / (2 * math.pi) for c in ctx.components[1:]]
    integers = tuple(int(round(p)) for p in raw)
    assert all(abs(p - q) < 1e-8 for p, q in zip(raw, integers)), raw
    return CyclicTime(tau, "exact", float(abs(ctx.overlap(tau))), integers)


def find_common_cyclic_time(
    contexts: Sequence[EvolutionContext], options: CyclicOptions | None = None
) -> CyclicTime:
    """Earliest quasi-return shared by every context.

    The return fidelity is the minimum of |<psi(0)|psi(t)>| over the contexts;
    a candidate must be a local maximum of it on the grid, refined with a
    bounded scalar search, and reach ``1 - quasi_tolerance``.
    """
    options = options or CyclicOptions()
    config = contexts[0].config
    t_max = options.t_max
    if t_max is None:
        if config.field_b == 0:
            raise ConfigError("quasi search needs t_max when B = 0")
        t_max = 200 * math.pi * config.hbar / abs(config.field_b)
    threshold = 1.0 - options.quasi_tolerance

    def fidelity(t):
        return np.min([np.abs(c.overlap(t)) for c in contexts], axis=0)

    n = options.grid_points
    grid = np.linspace(0.0, t_max, n + 1)
    chunk = 20_000
    values = np.concatenate([fidelity(grid[i : i + chunk]) for i in range(0, n + 1, chunk)])
    inner = np.arange(1, n)
    is_max = (values[inner] >= values[inner - 1]) & (values[inner] >= values[inner + 1])
    # loose pre-filter: a peak between grid points may sit well above its samples
    floor = 1.0 - max(2 * options.quasi_tolerance, 1e-2)
    candidates = inner[is_max & (values[inner] >= floor)]
    for i in candidates:
        res = minimize_scalar(
            lambda t: -float(fidelity(t)),
            bounds=(grid[i - 1], grid[i + 1]),
            method="bounded",
            options={"xatol": 1e-12},
        )
        tau, fid = float(res.x), float(-res.fun)
        if fid < values[i]:
            tau, fid = float(grid[i]), float(values[i])
        if fid >= threshold:
            return CyclicTime(tau, "quasi", fid)
    raise NoReturnFound(
        f"no return with fidelity >= {threshold} for t in (0, {t_max}]"
    )
