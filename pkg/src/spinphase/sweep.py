"""Parameter sweeps over one initial-state angle or the evolution time."""
from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import phases
from .analysis import unwrap_column
from .dynamics import (CyclicOptions, CyclicTime, EvolutionContext, find_common_cyclic_time,
                       find_cyclic_time, prepare_evolution)
from .entanglement import average_global_entanglement, entanglement_at
from .errors import ConfigError, IncommensurateSpectrum, OrthogonalOverlap, WindingError
from .hilbert import ProductStateSpec
from .model import ChainConfig, spectral_decompose

AA_QUANTITIES = ("aa_total", "aa_dynamic", "aa_beta", "aa_beta_f", "aa_beta_i")
MS_QUANTITIES = ("ms_total", "ms_dynamic", "ms_gamma", "ms_gamma_int")
QUANTITIES = AA_QUANTITIES + MS_QUANTITIES + ("q_instant", "q_avg")
WRAPPED = frozenset({"ms_total", "ms_gamma", "ms_gamma_int"})
_AXIS = re.compile(r"^(theta|phi)_?(\d+)$|^t$")


@dataclass(frozen=True)
class SweepSpec:
    axis: str
    start: float
    stop: float
    count: int
    quantities: tuple[str, ...]

    def __post_init__(self):
        if not _AXIS.match(self.axis):
            raise ConfigError(f"unknown sweep axis {self.axis!r} (use theta<i>, phi<i> or t)")
        if not self.start < self.stop:
            raise ConfigError("sweep needs start < stop")
        if self.count < 2:
            raise ConfigError("sweep needs count >= 2")
        unknown = [q for q in self.quantities if q not in QUANTITIES]
        if unknown or not self.quantities:
            raise ConfigError(f"unknown quantities {unknown}; choose from {', '.join(QUANTITIES)}")

    @property
    def target(self) -> tuple[str, int | None]:
        """(``"theta"`` | ``"phi"`` | ``"t"``, zero-based site or None)."""
        m = _AXIS.match(self.axis)
        if m.group(1) is None:
            return "t", None
        return m.group(1), int(m.group(2)) - 1

    def points(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class RunSettings:
    chain: ChainConfig
    state: ProductStateSpec
    sweep: SweepSpec
    mode: str = "aa"
    t: float | None = None
    quasi: bool = False
    cyclic: CyclicOptions = field(default_factory=CyclicOptions)
    unwrap: bool = False
    jump_threshold: float = math.pi / 2
    overlap_floor: float = phases.OVERLAP_FLOOR
    intervals: int = 2048

    def __post_init__(self):
        if self.mode not in ("aa", "ms"):
            raise ConfigError(f"mode must be 'aa' or 'ms', got {self.mode!r}")
        if self.state.n_sites != self.chain.n_sites:
            raise ConfigError(
                f"state lists {self.state.n_sites} sites, chain has {self.chain.n_sites}"
            )
        kind, site = self.sweep.target
        if site is not None and not 0 <= site < self.chain.n_sites:
            raise ConfigError(f"sweep axis {self.sweep.axis} names a missing site")
        if kind == "t" and self.mode == "aa":
            raise ConfigError("a time sweep needs mode=ms")
        if self.mode == "ms" and kind != "t" and self.t is None:
            raise ConfigError("mode=ms needs a fixed time t")
        asked = set(self.sweep.quantities)
        if self.mode == "ms" and asked & set(AA_QUANTITIES):
            raise ConfigError("aa_* quantities need mode=aa")
        if self.mode == "aa" and asked & set(MS_QUANTITIES) and self.t is None:
            raise ConfigError("ms_* quantities need a fixed time t")
        if "q_instant" in asked and self.mode == "aa" and self.t is None:
            raise ConfigError("q_instant needs a fixed time t")


@dataclass
class SweepResult:
    columns: list[str]
    rows: list[dict[str, float | str | None]]


def _state_at(settings: RunSettings, value: float) -> tuple[ProductStateSpec, float | None]:
    kind, site = settings.sweep.target
    if kind == "theta":
        return settings.state.replace_site(site, theta=value), settings.t
    if kind == "phi":
        return settings.state.replace_site(site, phi=value), settings.t
    return settings.state, value


def _sweep_reference(contexts: list[EvolutionContext]) -> float:
    """Frequency of the largest-M, then lowest-E, mode populated at most sweep points."""
    counts: Counter = Counter()
    omega = {}
    for ctx in contexts:
        for c in ctx.components:
            key = (c.magnetization, round(c.energy, 8))
            counts[key] += 1
            omega[key] = c.omega
    majority = [k for k, n in counts.items() if 2 * n > len(contexts)] or list(counts)
    best = max(majority, key=lambda k: (k[0], -k[1]))
    return omega[best]


def _cyclic_times(settings: RunSettings, contexts) -> list[CyclicTime]:
    try:
        return [find_cyclic_time(ctx, "exact", settings.cyclic) for ctx in contexts]
    except IncommensurateSpectrum:
        if not settings.quasi:
            raise
    common = find_common_cyclic_time(contexts, settings.cyclic)
    return [common] * len(contexts)


def _flag_for(exc: OrthogonalOverlap) -> str:
    if exc.factor.startswith("site "):
        return f"orthogonal:site{int(exc.factor.split()[1]) + 1}"
    return "orthogonal:composite"


def _aa_values(ctx, cyc, omega_ref, flags):
    try:
        rep = phases.aa_phase(ctx, cyc, reference_omega=omega_ref)
    except ConfigError:
        omega_ref = None
        rep = phases.aa_phase(ctx, cyc)
    out = {"aa_total": rep.total_phase, "aa_dynamic": rep.dynamic_phase, "aa_beta": rep.geometric_phase}
    try:
        split = phases.interaction_aa_phase(ctx, cyc, reference_omega=omega_ref)
        out["aa_beta_f"], out["aa_beta_i"] = split.free_part, split.interaction_part
    except WindingError:
        flags.append("winding")
    return out


def _ms_values(ctx, t, settings, flags):
    out = {"ms_dynamic": phases.dynamic_phase(ctx, t)}
    try:
        rep = phases.ms_phase(ctx, t, settings.overlap_floor)
    except OrthogonalOverlap as exc:
        flags.append(_flag_for(exc))
        return out
    out["ms_total"], out["ms_gamma"] = rep.total_phase, rep.geometric_phase
    try:
        out["ms_gamma_int"] = phases.interaction_ms_phase(ctx, t, settings.overlap_floor).interaction_part
    except OrthogonalOverlap as exc:
        flags.append(_flag_for(exc))
    return out


def run_sweep(settings: RunSettings) -> SweepResult:
    """Evaluate the requested quantities at every sweep point, in order.

    Failures confined to one point (vanishing visibility, non-integer free
    winding) leave empty cells and a flag; spectrum-level failures raise.
    """
    chain = settings.chain
    eig = spectral_decompose(chain)
    points = settings.sweep.points()
    states = [_state_at(settings, x) for x in points]
    contexts = [prepare_evolution(chain, eig, spec) for spec, _ in states]
    asked = settings.sweep.quantities

    cyclic = omega_ref = None
    if settings.mode == "aa":
        cyclic = _cyclic_times(settings, contexts)
        omega_ref = _sweep_reference(contexts)

    rows = []
    for i, (x, ctx) in enumerate(zip(points, contexts)):
        t = states[i][1]
        flags: list[str] = []
        vals: dict[str, float] = {}
        if settings.mode == "aa" and set(asked) & set(AA_QUANTITIES):
            vals.update(_aa_values(ctx, cyclic[i], omega_ref, flags))
        if set(asked) & set(MS_QUANTITIES):
            vals.update(_ms_values(ctx, t, settings, flags))
        if "q_instant" in asked:
            vals["q_instant"] = float(entanglement_at(ctx, t)[0])
        if "q_avg" in asked:
            window = cyclic[i].tau if settings.mode == "aa" else t
            if window > 0:
                rep = average_global_entanglement(ctx, window, settings.intervals)
                vals["q_avg"] = rep.q_avg
                if not rep.converged:
                    flags.append("quadrature")
            else:
                flags.append("window")
        row = {settings.sweep.axis: float(x)}
        row.update({q: vals.get(q) for q in asked})
        if settings.mode == "aa":
            row["tau"] = cyclic[i].tau
            row["cyclic"] = cyclic[i].kind
        row["flag"] = flags
        rows.append(row)

    if settings.unwrap:
        for q in asked:
            if q not in WRAPPED:
                continue
            col = [np.nan if r[q] is None else r[q] for r in rows]
            unwrapped, jumps = unwrap_column(col, settings.jump_threshold)
            for r, v in zip(rows, unwrapped):
                if r[q] is not None:
                    r[q] = float(v)
            for j in jumps:
                rows[j]["flag"].append(f"jump:{q}")

    for r in rows:
        r["flag"] = ";".join(r["flag"])
    columns = [settings.sweep.axis, *asked]
    if settings.mode == "aa":
        columns += ["tau", "cyclic"]
    columns.append("flag")
    return SweepResult(columns, rows)
