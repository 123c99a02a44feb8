"""Total, dynamic and geometric phases, and their free/interaction split.

Mukunda-Simon quantities are principal values in (-pi, pi].  Aharonov-Anandan
quantities are the real numbers produced by the eigen-expansion formula with
the canonical reference mode (largest M, then lowest E among the populated
components); they are meaningful modulo 2 pi but kept unwrapped so sweeps stay
continuous.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import CyclicTime, EvolutionContext
from .errors import ConfigError, OrthogonalOverlap, WindingError
from .hilbert import ProductStateSpec

OVERLAP_FLOOR = 1e-10
WINDING_TOL = 1e-8
POLE_TOL = 1e-12


def wrap(x):
    """Map angles onto (-pi, pi]."""
    return math.pi - np.mod(math.pi - np.asarray(x, dtype=float), 2 * math.pi)


def phase_distance(a, b):
    """Chord distance |e^{ia} - e^{ib}| on the unit circle."""
    return np.abs(np.exp(1j * np.asarray(a)) - np.exp(1j * np.asarray(b)))


@dataclass(frozen=True)
class PhaseReport:
    t: float
    kind: str
    total_phase: float
    dynamic_phase: float
    geometric_phase: float
    free_part: float | None = None
    interaction_part: float | None = None
    cyclic: CyclicTime | None = None
    reference_index: int | None = None


def total_phase(ctx: EvolutionContext, t: float, overlap_floor: float = OVERLAP_FLOOR) -> float:
    ov = complex(ctx.overlap(t))
    if abs(ov) < overlap_floor:
        raise OrthogonalOverlap(
            f"|<psi(0)|psi(t)>| = {abs(ov):.3g} below floor at t={t}", "composite", abs(ov)
        )
    return float(np.angle(ov))


def dynamic_phase(ctx: EvolutionContext, t: float) -> float:
    """-(1/hbar) int_0^t <H> dt', exact because <H> is conserved."""
    return -t * ctx.mean_omega


def ms_phase(ctx: EvolutionContext, t: float, overlap_floor: float = OVERLAP_FLOOR) -> PhaseReport:
    phi = total_phase(ctx, t, overlap_floor)
    phi_d = dynamic_phase(ctx, t)
    return PhaseReport(t, "ms", phi, phi_d, float(wrap(phi - phi_d)))


def _reference_frequency(ctx, cyclic, reference, reference_omega) -> float:
    if reference_omega is None:
        if not 0 <= reference < len(ctx.components):
            raise IndexError(f"reference mode {reference} not among {len(ctx.components)} components")
        return ctx.components[reference].omega
    if cyclic.kind == "exact":
        cycles = cyclic.tau * (reference_omega - ctx.omegas) / (2 * math.pi)
        if np.max(np.abs(cycles - np.round(cycles))) > WINDING_TOL:
            raise ConfigError("reference frequency does not return in phase with the state at tau")
    return reference_omega


def aa_phase(
    ctx: EvolutionContext,
    cyclic: CyclicTime,
    reference: int = 0,
    reference_omega: float | None = None,
) -> PhaseReport:
    """beta = (tau/hbar)[-(J E_n + B M_n) + <H>] with mode ``reference`` as n.

    ``reference_omega`` substitutes an explicit (J E_n + B M_n)/hbar, e.g. one
    shared across a sweep whose mode is unpopulated at some points; for exact
    cyclic times it must return in phase with every populated mode.
    """
    omega_ref = _reference_frequency(ctx, cyclic, reference, reference_omega)
    tau = cyclic.tau
    phi = -omega_ref * tau
    phi_d = dynamic_phase(ctx, tau)
    ref = reference if reference_omega is None else None
    return PhaseReport(tau, "aa", phi, phi_d, phi - phi_d, cyclic=cyclic, reference_index=ref)


def free_spin_overlap(theta: float, field_b: float, hbar: float, t: float) -> complex:
    w = field_b * t / hbar
    return complex(np.exp(-1j * w) * math.cos(theta / 2) ** 2 + np.exp(1j * w) * math.sin(theta / 2) ** 2)


def free_spin_ms_phase(
    theta: float, phi: float, field_b: float, hbar: float, t: float,
    overlap_floor: float = OVERLAP_FLOOR,
) -> float:
    """MS phase of a lone spin precessing in the field; independent of ``phi``."""
    ov = free_spin_overlap(theta, field_b, hbar, t)
    if abs(ov) < overlap_floor:
        raise OrthogonalOverlap(f"free spin visibility {abs(ov):.3g} below floor", "site", abs(ov))
    return float(wrap(np.angle(ov) + field_b * t * math.cos(theta) / hbar))


def free_spin_aa_phase(theta: float, field_b: float, hbar: float, tau: float) -> float:
    """-pi p (1 - cos theta) with winding p = B tau / (pi hbar), left unrounded."""
    return -field_b * tau * (1.0 - math.cos(theta)) / hbar


def _require_spec(ctx: EvolutionContext) -> ProductStateSpec:
    if ctx.product_spec is None:
        raise ConfigError("interaction phases need a context prepared from a ProductStateSpec")
    return ctx.product_spec


def interaction_ms_phase(
    ctx: EvolutionContext, t: float, overlap_floor: float = OVERLAP_FLOOR
) -> PhaseReport:
    spec = _require_spec(ctx)
    cfg = ctx.config
    base = ms_phase(ctx, t, overlap_floor)
    free = 0.0
    for j, (theta, phi) in enumerate(spec.sites):
        try:
            free += free_spin_ms_phase(theta, phi, cfg.field_b, cfg.hbar, t, overlap_floor)
        except OrthogonalOverlap as exc:
            raise OrthogonalOverlap(str(exc), f"site {j}", exc.visibility) from None
    return PhaseReport(
        t, "ms", base.total_phase, base.dynamic_phase, base.geometric_phase,
        free_part=float(wrap(free)),
        interaction_part=float(wrap(base.geometric_phase - free)),
    )


def winding_number(field_b: float, hbar: float, tau: float) -> float:
    return field_b * tau / (math.pi * hbar)


def interaction_aa_phase(
    ctx: EvolutionContext,
    cyclic: CyclicTime,
    reference: int = 0,
    reference_omega: float | None = None,
) -> PhaseReport:
    """Split beta into the free-spin sum and the interaction remainder.

    For an exact cyclic time every spin off the poles must wind an integer
    number of times; otherwise WindingError.  Quasi-cyclic times keep the
    unrounded winding.
    """
    spec = _require_spec(ctx)
    cfg = ctx.config
    report = aa_phase(ctx, cyclic, reference, reference_omega)
    p = winding_number(cfg.field_b, cfg.hbar, cyclic.tau)
    off_pole = [
        j for j, th in enumerate(spec.thetas)
        if POLE_TOL < th < math.pi - POLE_TOL
    ]
    if cyclic.kind == "exact" and off_pole and abs(p - round(p)) > WINDING_TOL:
        raise WindingError(
            f"free winding B tau/(pi hbar) = {p!r} is not an integer for sites {off_pole}"
        )
    free = sum(free_spin_aa_phase(th, cfg.field_b, cfg.hbar, cyclic.tau) for th in spec.thetas)
    return PhaseReport(
        report.t, "aa", report.total_phase, report.dynamic_phase, report.geometric_phase,
        free_part=free, interaction_part=report.geometric_phase - free,
        cyclic=cyclic, reference_index=report.reference_index,
    )
