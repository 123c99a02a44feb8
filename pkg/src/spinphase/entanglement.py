"""Meyer-Wallach global entanglement, instantaneous and time-averaged."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import simpson

from .dynamics import EvolutionContext
from .errors import ConfigError
from .hilbert import StateVector, reduce_to_site


@dataclass(frozen=True)
class EntanglementReport:
    window: tuple[float, float] | float
    q_instant: float | None = None
    q_avg: float | None = None
    quadrature_intervals: int = 0
    estimated_quadrature_error: float = 0.0
    converged: bool = True


def global_entanglement(state: StateVector) -> float:
    """Q = 2[1 - (1/N) sum_k Tr rho_k^2], with Tr rho^2 = (1 + |v|^2)/2."""
    n = state.n_sites
    purity = sum((1 + float(np.dot(r.coherence, r.coherence))) / 2
                 for r in (reduce_to_site(state, k) for k in range(n)))
    return max(2 * (1 - purity / n), 0.0)


@lru_cache(maxsize=64)
def _site_tables(support: tuple[int, ...], n_sites: int):
    pos = {b: p for p, b in enumerate(support)}
    sup = np.array(support)
    tables = []
    for k in range(n_sites):
        zsign = 1.0 - 2.0 * ((sup >> k) & 1)
        lo, hi = [], []
        for p, b in enumerate(support):
            if not (b >> k) & 1 and (b | (1 << k)) in pos:
                lo.append(p)
                hi.append(pos[b | (1 << k)])
        tables.append((zsign, np.array(lo, dtype=int), np.array(hi, dtype=int)))
    return tables


def global_entanglement_batch(amplitudes: np.ndarray, support, n_sites: int) -> np.ndarray:
    """Q for each row of ``amplitudes``, given on the basis indices ``support``.

    Amplitudes outside ``support`` are taken to be zero.
    """
    amplitudes = np.atleast_2d(amplitudes)
    tables = _site_tables(tuple(int(b) for b in support), n_sites)
    prob = np.abs(amplitudes) ** 2
    v2 = np.zeros(amplitudes.shape[0])
    for zsign, lo, hi in tables:
        vz = prob @ zsign
        rho01 = np.sum(amplitudes[:, lo] * amplitudes[:, hi].conj(), axis=1)
        v2 += vz**2 + 4 * np.abs(rho01) ** 2
    return np.maximum(1.0 - v2 / n_sites, 0.0)


def entanglement_at(ctx: EvolutionContext, t) -> np.ndarray:
    amps = ctx.support_amplitudes(t)
    return global_entanglement_batch(amps, ctx.support, ctx.config.n_sites)


def _simpson_mean(ctx: EvolutionContext, tau: float, intervals: int) -> float:
    ts = np.linspace(0.0, tau, intervals + 1)
    chunk = 8192
    q = np.concatenate([entanglement_at(ctx, ts[i : i + chunk]) for i in range(0, len(ts), chunk)])
    return float(simpson(q, x=ts)) / tau


def average_global_entanglement(
    ctx: EvolutionContext,
    window_end: float,
    intervals: int = 2048,
    rel_tol: float = 1e-6,
    max_intervals: int = 2**20,
) -> EntanglementReport:
    """(1/tau) int_0^tau Q(psi(t)) dt by composite Simpson with interval doubling."""
    if not window_end > 0:
        raise ConfigError("averaging window must be positive")
    if intervals < 2 or intervals % 2:
        raise ConfigError("Simpson needs an even number of intervals >= 2")
    coarse = _simpson_mean(ctx, window_end, intervals)
    n = 2 * intervals
    fine = _simpson_mean(ctx, window_end, n)
    err = abs(fine - coarse)
    while err > rel_tol * max(abs(fine), 1e-12) and 2 * n <= max_intervals:
        coarse, n = fine, 2 * n
        fine = _simpson_mean(ctx, window_end, n)
        err = abs(fine - coarse)
    converged = err <= rel_tol * max(abs(fine), 1e-12)
    if not converged:
        warnings.warn(f"Q average not converged: error {err:.2e} with {n} intervals")
    return EntanglementReport((0.0, window_end), q_avg=fine, quadrature_intervals=n,
                              estimated_quadrature_error=err, converged=converged)


def g_factor(coupling_j: float, tau: float, hbar: float = 1.0) -> float:
    """(1/tau) int_0^tau sin^2(4 J t / hbar) dt."""
    x = 8 * coupling_j * tau / hbar
    if x == 0:
        return 0.0
    return 0.5 - math.sin(x) / (2 * x)


def qmed_from_beta_i(beta_i, field_b, coupling_j, p, tau, hbar=1.0):
    """Two-spin prediction Q_med = (B / (2 pi p J))^2 g(tau) beta_I^2."""
    if coupling_j == 0:
        raise ConfigError("Q_med prediction degenerates at J = 0")
    if not p > 0:
        raise ConfigError("winding p must be positive")
    scale = field_b / (2 * math.pi * p * coupling_j)
    return scale**2 * g_factor(coupling_j, tau, hbar) * np.asarray(beta_i) ** 2
