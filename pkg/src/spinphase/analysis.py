"""Post-processing of sweep columns: unwrapping, jump flags, monotone segments."""
from __future__ import annotations

import math

import numpy as np
from scipy.stats import spearmanr


def unwrap_column(values, jump_threshold: float = math.pi / 2):
    """Nearest-branch continuation along a sweep, skipping missing (NaN) cells.

    Returns the unwrapped values and the row indices whose step from the
    previous valid row still exceeds ``jump_threshold`` after continuation.
    """
    values = np.asarray(values, dtype=float)
    out = values.copy()
    jumps = []
    prev = None
    for i, v in enumerate(values):
        if not math.isfinite(v):
            continue
        if prev is not None:
            v = v + 2 * math.pi * round((out[prev] - v) / (2 * math.pi))
            if abs(v - out[prev]) > jump_threshold:
                jumps.append(i)
        out[i] = v
        prev = i
    return out, jumps


def monotone_segments(values) -> list[tuple[int, int]]:
    """Maximal index ranges ``(start, stop)`` (inclusive) on which ``values`` is monotone.

    Adjacent segments share their turning point.  NaN entries split segments.
    """
    values = np.asarray(values, dtype=float)
    segments = []
    finite = np.isfinite(values)
    i, n = 0, len(values)
    while i < n:
        if not finite[i]:
            i += 1
            continue
        start, direction = i, 0
        j = i
        while j + 1 < n and finite[j + 1]:
            step = np.sign(values[j + 1] - values[j])
            if direction == 0:
                direction = step
            elif step != 0 and step != direction:
                break
            j += 1
        if j > start:
            segments.append((start, j))
        if j + 1 >= n or not finite[j + 1]:
            i = j + 1
        else:
            i = j
    return segments


def segment_spearman(x, y, min_points: int = 3) -> list[tuple[int, int, float]]:
    """Spearman rho of ``y`` against ``x`` on each monotone segment of ``x``.

    Segments shorter than ``min_points`` carry no rank information and are
    skipped.  A segment on which ``y`` is constant yields NaN.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    out = []
    for a, b in monotone_segments(x):
        if b - a + 1 < min_points:
            continue
        xs, ys = x[a : b + 1], y[a : b + 1]
        ok = np.isfinite(ys)
        if ok.sum() < min_points or np.ptp(ys[ok]) == 0:
            out.append((a, b, float("nan")))
            continue
        out.append((a, b, float(spearmanr(xs[ok], ys[ok])[0])))
    return out


def fit_scale(a, b) -> tuple[float, float]:
    """Least-squares ``k`` minimizing sum (k a_i - b_i)^2, and the RMS residual."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    ok = np.isfinite(a) & np.isfinite(b)
    a, b = a[ok], b[ok]
    if len(a) < 2:
        raise ValueError("need at least two finite rows")
    denom = float(np.dot(a, a))
    if denom == 0:
        raise ValueError("degenerate column: all zeros")
    k = float(np.dot(a, b)) / denom
    return k, float(np.sqrt(np.mean((k * a - b) ** 2)))
