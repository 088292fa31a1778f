"""Command-line front end (``mod1``).

Exit codes: 0 success / converges, 2 configuration error, 3 diverges,
4 indeterminate, 5 I/O failure.
"""

from __future__ import annotations

import argparse
import hashlib
import io
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from . import convolution_engine as ce
from .benford import Metric, benford_digit_probabilities, digits_of, distance_to_benford
from .density_core import spectrum
from .distributions import pareto_mantissa_cdf, pareto_mantissa_density
from .errors import ConfigError, DomainError
from .families import make_family, parse_sequence
from .montecarlo import ExperimentConfig, simulate_product_digits

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DIVERGES = 3
EXIT_INDETERMINATE = 4
EXIT_IO = 5

VERDICT_EXIT = {
    ce.VerdictState.CONVERGES: EXIT_OK,
    ce.VerdictState.DIVERGES: EXIT_DIVERGES,
    ce.VerdictState.INDETERMINATE: EXIT_INDETERMINATE,
}


def fmt(v):
    """Fixed CSV number format: integers verbatim, reals to 12 significant digits."""
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    return format(float(v), ".12g")


def render_csv(header, rows):
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join("" if v is None else (v if isinstance(v, str) else fmt(v)) for v in row) + "\n")
    return buf.getvalue()


def parse_base(text):
    t = str(text).strip().lower()
    if t in ("e", "euler"):
        return math.e
    try:
        b = int(t)
    except ValueError as exc:
        raise ConfigError(f"base must be an integer >= 2 or 'euler', got {text!r}") from exc
    if b < 2:
        raise ConfigError("base must be >= 2")
    return b


def emit(text, out, command, config, started):
    """Write ``text`` to ``out`` (plus a manifest) or to stdout."""
    if out is None:
        sys.stdout.write(text)
        return
    path = Path(out)
    data = text.encode()
    path.write_bytes(data)
    manifest = {
        "command": command,
        "config": config,
        "seed": config.get("seed"),
        "version": __version__,
        "outputs": [{"path": str(path), "sha256": hashlib.sha256(data).hexdigest()}],
        "wall_ms": round((time.perf_counter() - started) * 1000.0, 3),
    }
    manifest_path(path).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def manifest_path(path):
    path = Path(path)
    return path.with_name(path.name + ".manifest.json")


def cmd_spectrum(args):
    started = time.perf_counter()
    fam = make_family(args.family, args.params, parse_base(args.base))
    if args.max_n < 1:
        raise ConfigError("--max-n must be >= 1")
    s = spectrum(fam.first(), args.max_n)
    rows = []
    for n in range(args.max_n + 1):
        c = s[n]
        rows.append((n, c.real, c.imag, abs(c)))
    text = render_csv(["n", "re", "im", "modulus"], rows)
    config = {"family": args.family, "params": args.params, "max_n": args.max_n, "seed": None}
    emit(text, args.out, "spectrum", config, started)
    return EXIT_OK


def cmd_verdict(args):
    fam = parse_sequence(args.sequence, parse_base(args.base))
    if args.max_n < 1 or args.horizon < 1:
        raise ConfigError("--max-n and --horizon must be >= 1")
    if not 0 < args.threshold < 1:
        raise ConfigError("--threshold must lie in (0, 1)")
    v = ce.convergence_verdict(fam.sequence, args.max_n, args.horizon, args.threshold)
    print(json.dumps(v.as_dict()))
    return VERDICT_EXIT[v.state]


def cmd_benford(args):
    started = time.perf_counter()
    cfg = ExperimentConfig(base=parse_base(args.base), factors=args.factors, trials=args.trials,
                           seed=args.seed, family=args.family, params=args.params,
                           out=args.out, threads=args.threads)
    make_family(cfg.family, cfg.params, cfg.base)  # fail fast on a bad family
    dd = simulate_product_digits(cfg)
    benf = benford_digit_probabilities(cfg.base).probabilities
    rows = [(int(j), float(p), float(b), abs(float(p) - float(b)))
            for j, p, b in zip(digits_of(cfg.base), dd.probabilities, benf)]
    rows += [
        ("l1", distance_to_benford(dd, Metric.L1), None, None),
        ("sup", distance_to_benford(dd, Metric.SUP), None, None),
        ("chi_square", distance_to_benford(dd, Metric.CHI_SQUARE), None, None),
    ]
    text = render_csv(["digit", "empirical_freq", "benford_prob", "abs_diff"], rows)
    emit(text, args.out, "benford", cfg.resolved(), started)
    return EXIT_OK


def cmd_pareto_table(args):
    started = time.perf_counter()
    if not args.alpha > 1:
        raise ConfigError("--alpha must exceed 1 (the mantissa series diverge otherwise)")
    if args.terms < 1 or args.points < 1:
        raise ConfigError("--terms and --points must be >= 1")
    rows = []
    for k in range(args.points):
        s = 1.0 + (math.e - 1.0) * k / args.points
        F, tf = pareto_mantissa_cdf(args.alpha, s, args.terms)
        f, td = pareto_mantissa_density(args.alpha, s, args.terms)
        rows.append((s, F, f, max(tf, td)))
    text = render_csv(["s", "cdf", "density", "tail_bound"], rows)
    config = {"alpha": args.alpha, "terms": args.terms, "points": args.points, "seed": None}
    emit(text, args.out, "pareto-table", config, started)
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="mod1", description="Sums modulo 1, Fourier coefficients and Benford's law.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", help="Fourier coefficients of one factor law")
    sp.add_argument("--family", required=True)
    sp.add_argument("--params", default="")
    sp.add_argument("--max-n", type=int, default=8)
    sp.add_argument("--base", default="10")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_spectrum)

    vp = sub.add_parser("verdict", help="does the sum modulo 1 equidistribute?")
    vp.add_argument("--sequence", required=True)
    vp.add_argument("--max-n", type=int, default=ce.DEFAULT_N)
    vp.add_argument("--horizon", type=int, default=ce.DEFAULT_HORIZON)
    vp.add_argument("--threshold", type=float, default=ce.DEFAULT_THRESHOLD)
    vp.add_argument("--base", default="10")
    vp.set_defaults(func=cmd_verdict)

    bp = sub.add_parser("benford", help="simulate first digits of products")
    bp.add_argument("--family", required=True)
    bp.add_argument("--params", default="")
    bp.add_argument("--factors", type=int, default=1)
    bp.add_argument("--trials", type=int, default=1000)
    bp.add_argument("--base", default="10")
    bp.add_argument("--seed", type=int, default=0)
    bp.add_argument("--threads", type=int, default=None)
    bp.add_argument("--out")
    bp.set_defaults(func=cmd_benford)

    pp = sub.add_parser("pareto-table", help="mantissa CDF and density of the modified Pareto law")
    pp.add_argument("--alpha", type=float, required=True)
    pp.add_argument("--terms", type=int, default=10_000)
    pp.add_argument("--points", type=int, default=20)
    pp.add_argument("--out")
    pp.set_defaults(func=cmd_pareto_table)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (ConfigError, DomainError) as exc:
        print(f"mod1 {args.command}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"mod1 {args.command}: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
