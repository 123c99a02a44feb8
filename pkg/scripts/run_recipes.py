#!/usr/bin/env python3
"""Run every recipe in scripts/recipes, write CSVs, and summarize phase/entanglement trends.

    python3 scripts/run_recipes.py [--out results] [--only three_spin_aa ...]

For each recipe the geometric-phase column is split into monotone segments and
the Spearman rank correlation against each entanglement column is reported.
"""
import argparse
import logging
import time
from pathlib import Path

import numpy as np

from spinphase.analysis import fit_scale, segment_spearman
from spinphase.cli import build_settings, format_csv, read_config
from spinphase.sweep import run_sweep

HERE = Path(__file__).resolve().parent
PHASE_COLUMNS = ("aa_beta_i", "ms_gamma_int", "ms_gamma")
ENTANGLEMENT_COLUMNS = ("q_instant", "q_avg")

log = logging.getLogger("run_recipes")


def column(result, name):
    return np.array([np.nan if r[name] is None else r[name] for r in result.rows], dtype=float)


def summarize(name, result):
    flagged = sum(1 for r in result.rows if r["flag"])
    print(f"{name}: {len(result.rows)} rows, {flagged} flagged")
    for phase in PHASE_COLUMNS:
        if phase not in result.columns:
            continue
        x = column(result, phase)
        if np.isnan(x).all():
            print(f"  {phase}: no valid values")
            continue
        for q in ENTANGLEMENT_COLUMNS:
            if q not in result.columns:
                continue
            rhos = [f"[{a}:{b}] {rho:+.4f}" for a, b, rho in segment_spearman(x, column(result, q))]
            print(f"  spearman({phase}, {q}): {', '.join(rhos) or 'no segments'}")
    if "aa_beta_i" in result.columns and "q_avg" in result.columns:
        k, rms = fit_scale(column(result, "aa_beta_i") ** 2, column(result, "q_avg"))
        print(f"  fit q_avg ~ k aa_beta_i^2: k={k:.6g}, rms={rms:.3g}")


def main():
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("--out", type=Path, default=Path("results"))
    parser.add_argument("--only", nargs="*", help="recipe stems to run")
    args = parser.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    args.out.mkdir(parents=True, exist_ok=True)
    for recipe in sorted((HERE / "recipes").glob("*.cfg")):
        if args.only and recipe.stem not in args.only:
            continue
        start = time.perf_counter()
        result = run_sweep(build_settings(read_config(recipe)))
        target = args.out / f"{recipe.stem}.csv"
        target.write_text(format_csv(result), newline="\n")
        log.info("wrote %s in %.1fs", target, time.perf_counter() - start)
        summarize(recipe.stem, result)


if __name__ == "__main__":
    main()
