"""Command-line front end.

    spinphase run --config recipe.cfg [--key value ...]
    spinphase fit-scale results.csv aa_beta_i^2 q_avg

Recipe files hold ``key = value`` lines (``#`` starts a comment); flags
given on the command line override them.  Numbers may be written as exact
multiples of pi, e.g. ``pi/3``, ``3pi/4`` or ``2*pi``.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from fractions import Fraction
from pathlib import Path

from .analysis import fit_scale
from .dynamics import CyclicOptions
from .errors import ConfigError, IncommensurateSpectrum, NoReturnFound
from .hilbert import ProductStateSpec
from .model import ChainConfig
from .sweep import RunSettings, SweepSpec, run_sweep

EXIT_CONFIG = 1
EXIT_PHYSICS = 2

KEYS = {
    "n": int, "j": "num", "b": "num", "hbar": "num", "periodic": "bool",
    "state": str, "mode": str, "t": "num", "sweep": str, "quantities": str,
    "quasi": "bool", "quasi_tolerance": "num", "t_max": "num", "grid_points": int,
    "max_denominator": int, "unwrap": "bool", "jump_threshold": "num",
    "overlap_floor": "num", "intervals": int, "output": str,
}


def parse_number(text: str) -> float:
    """Parse a product/quotient of decimals and ``pi``, keeping the rational part exact."""
    s = text.strip().lower().replace(" ", "")
    if not s:
        raise ConfigError("empty number")
    sign = 1
    if s[0] in "+-":
        sign, s = (-1 if s[0] == "-" else 1), s[1:]
    coef, pi_power = Fraction(sign), 0
    for i, part in enumerate(s.replace("/", "*/").split("*")):
        divide = part.startswith("/")
        part = part.lstrip("/")
        if part.endswith("pi"):
            power, part = 1, part[:-2]
            factor = Fraction(part) if part else Fraction(1)
        else:
            power = 0
            try:
                factor = Fraction(part)
            except (ValueError, ZeroDivisionError):
                raise ConfigError(f"cannot parse number {text!r}") from None
        if divide:
            if factor == 0:
                raise ConfigError(f"division by zero in {text!r}")
            coef, pi_power = coef / factor, pi_power - power
        else:
            coef, pi_power = coef * factor, pi_power + power
    return float(coef) * math.pi**pi_power


def parse_bool(text: str) -> bool:
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


def _convert(key: str, raw: str):
    kind = KEYS[key]
    if kind == "num":
        return parse_number(raw)
    if kind == "bool":
        return parse_bool(raw)
    if kind is int:
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"{key} must be an integer, got {raw!r}") from None
    return raw.strip().strip('"').strip("'")


def read_config(path: str | Path) -> dict:
    values = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, raw = (s.strip() for s in line.split("=", 1))
        if key not in KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = _convert(key, raw)
    return values


def parse_state(text: str) -> ProductStateSpec:
    sites = []
    for item in text.split(","):
        theta, _, phi = item.partition(":")
        sites.append((parse_number(theta), parse_number(phi) if phi else 0.0))
    return ProductStateSpec(sites)


def parse_sweep(text: str, quantities: str) -> SweepSpec:
    parts = text.split(":")
    if len(parts) != 4:
        raise ConfigError("sweep must read axis:start:stop:count")
    axis, start, stop, count = parts
    try:
        count = int(count)
    except ValueError:
        raise ConfigError(f"sweep count must be an integer, got {count!r}") from None
    qs = tuple(q.strip() for q in quantities.split(",") if q.strip())
    return SweepSpec(axis.strip(), parse_number(start), parse_number(stop), count, qs)


def build_settings(values: dict) -> RunSettings:
    for key in ("n", "state", "sweep", "quantities"):
        if key not in values:
            raise ConfigError(f"missing required setting {key!r}")
    chain = ChainConfig(
        values["n"], values.get("j", 1.0), values.get("b", 0.0),
        values.get("hbar", 1.0), values.get("periodic", True),
    )
    defaults = CyclicOptions()
    cyclic = CyclicOptions(
        max_denominator=values.get("max_denominator", defaults.max_denominator),
        t_max=values.get("t_max"),
        grid_points=values.get("grid_points", defaults.grid_points),
        quasi_tolerance=values.get("quasi_tolerance", defaults.quasi_tolerance),
    )
    extra = {k: values[k] for k in ("jump_threshold", "overlap_floor", "intervals") if k in values}
    return RunSettings(
        chain=chain,
        state=parse_state(values["state"]),
        sweep=parse_sweep(values["sweep"], values["quantities"]),
        mode=values.get("mode", "aa"),
        t=values.get("t"),
        quasi=values.get("quasi", False),
        cyclic=cyclic,
        unwrap=values.get("unwrap", False),
        **extra,
    )


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    return format(value, ".17g")


def format_csv(result) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(result.columns)
    for row in result.rows:
        writer.writerow([_cell(row[c]) for c in result.columns])
    return buf.getvalue()


def _column(rows, name):
    square = name.endswith("^2")
    key = name[:-2] if square else name
    if rows and key not in rows[0]:
        raise ConfigError(f"no column {key!r}")
    out = []
    for r in rows:
        v = float(r[key]) if r[key] != "" else math.nan
        out.append(v * v if square else v)
    return out


def cmd_run(args) -> int:
    values = read_config(args.config) if args.config else {}
    for key in KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = _convert(key, flag)
    result = run_sweep(build_settings(values))
    text = format_csv(result)
    if values.get("output"):
        Path(values["output"]).write_text(text, newline="\n")
    else:
        sys.stdout.write(text)
    return 0


def cmd_fit_scale(args) -> int:
    with open(args.csv, newline="") as fh:
        rows = list(csv.DictReader(fh))
    try:
        k, rms = fit_scale(_column(rows, args.col_a), _column(rows, args.col_b))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    sys.stdout.write(f"k,rms\n{k:.17g},{rms:.17g}\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spinphase", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="evaluate a sweep and write CSV")
    run.add_argument("--config", help="key = value recipe file")
    for key in KEYS:
        run.add_argument("--" + key.replace("_", "-"), dest=key, metavar="VALUE")
    run.set_defaults(func=cmd_run)
    fit = sub.add_parser("fit-scale", help="least-squares k with k*a ~ b")
    fit.add_argument("csv")
    fit.add_argument("col_a", help="column name, optionally suffixed ^2")
    fit.add_argument("col_b")
    fit.set_defaults(func=cmd_fit_scale)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, OSError) as exc:
        print(f"spinphase: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (IncommensurateSpectrum, NoReturnFound) as exc:
        print(f"spinphase: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PHYSICS


if __name__ == "__main__":
    sys.exit(main())
