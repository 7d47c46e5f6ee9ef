"""Command-line front end.

``classcoupler run`` draws from a preset or a JSON-configured model and writes
a JSON summary (``--format json``) or one CSV row per draw (``--format csv``).
``classcoupler imh-demo`` runs perfect IMH on a finite target and reports the
distance of the empirical distribution from the exact one.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time

import numpy as np

from . import __version__
from .driver import RunResult, run_draws
from .estimator import bct_summary, summarize
from .imh import ImhTarget
from .models import SingleMeanModel, TwoSampleModel
from .presets import PRESETS, ConfigError, build_model, load_config


def coordinate_names(model) -> list[str]:
    if isinstance(model, SingleMeanModel):
        return ["mu"] if model.known_variance is not None else ["mu", "v"]
    if isinstance(model, TwoSampleModel):
        return ["mu1", "mu2"] + {0: [], 1: ["v"], 2: ["v1", "v2"]}[model.n_variances]
    return ["state"]


def _coupler_summary(label: str, model, result: RunResult, args) -> dict:
    out = {
        "model": label,
        "seed": args.seed,
        "draws_requested": args.draws,
        "max_horizon": args.max_horizon,
        "horizon_failures": len(result.horizon_failures),
    }
    if result.outcomes:
        s = summarize(result.draws, result.bcts, bins=args.bins)
        out.update(s.to_dict())
        out["mh_steps_mean"] = float(np.mean([o.mh_steps for o in result.outcomes]))
    return out


def _imh_summary(label: str, target: ImhTarget, weights, result: RunResult, args) -> dict:
    w = np.asarray(weights, dtype=float)
    exact = w / w.sum()
    counts = np.bincount([int(d) for d in result.draws], minlength=w.size)
    empirical = counts / max(1, counts.sum())
    mean, tmin, tmax = bct_summary(result.bcts)
    return {
        "model": label,
        "seed": args.seed,
        "draws_requested": args.draws,
        "n_draws": int(counts.sum()),
        "horizon_failures": len(result.horizon_failures),
        "exact": exact.tolist(),
        "empirical": empirical.tolist(),
        "tv_distance": float(0.5 * np.abs(empirical - exact).sum()),
        "bct": {"mean": mean, "min": tmin, "max": tmax},
    }


def _draw_rows(model, result: RunResult):
    names = coordinate_names(model)
    yield ["draw_index", "atom", *names, "bct", "mh_steps"]
    for o in result.outcomes:
        if isinstance(o.draw, (int, np.integer)):
            yield [o.index, "", int(o.draw), o.bct, o.mh_steps]
        else:
            yield [o.index, int(o.draw.atom), *(repr(float(x)) for x in o.draw.values), o.bct, o.mh_steps]


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _execute(label: str, config: dict, args) -> int:
    model = build_model(config)
    started = time.perf_counter()
    result = run_draws(model, args.draws, args.seed, args.max_horizon, args.workers)
    elapsed = time.perf_counter() - started

    if args.format == "csv":
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(_draw_rows(model, result))
        _write(args.out, buf.getvalue())
    else:
        if isinstance(model, ImhTarget):
            summary = _imh_summary(label, model, config["weights"], result, args)
        else:
            summary = _coupler_summary(label, model, result, args)
        if args.timings:
            summary["diagnostics"] = {"elapsed_seconds": elapsed, "workers": args.workers}
        _write(args.out, json.dumps(summary, indent=2, sort_keys=True) + "\n")

    if args.hist_out and result.outcomes and not isinstance(model, ImhTarget):
        s = summarize(result.draws, result.bcts, bins=args.bins)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["quantity", "bin_left", "bin_right", "count"])
        for name, h in s.histograms.items():
            for lo, hi, c in zip(h.edges[:-1], h.edges[1:], h.counts):
                w.writerow([name, repr(lo), repr(hi), c])
        _write(args.hist_out, buf.getvalue())

    if result.horizon_failures:
        print(f"warning: {len(result.horizon_failures)} draws exceeded the horizon",
              file=sys.stderr)
        return 3
    return 0


def _add_run_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--draws", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-horizon", type=int, default=1_000_000)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default=None, help="output file (default: stdout)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--hist-out", default=None, help="write histogram bins as CSV")
    p.add_argument("--bins", type=int, default=50)
    p.add_argument("--timings", action="store_true",
                   help="add a diagnostics block with wall-clock time")
    # also accepted after the subcommand; SUPPRESS keeps a leading -v intact
    p.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="classcoupler", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="perfect draws from a preset or configured model")
    src = run.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", choices=sorted(PRESETS))
    src.add_argument("--config", help="JSON model configuration")
    _add_run_options(run)

    demo = sub.add_parser("imh-demo", help="perfect IMH on a finite target")
    demo.add_argument("--weights", default="1,2,3,4,5",
                      help="comma-separated unnormalized target weights")
    _add_run_options(demo)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    if args.draws < 1 or args.workers < 1:
        print("error: --draws and --workers must be positive", file=sys.stderr)
        return 2
    try:
        if args.command == "imh-demo":
            weights = [float(x) for x in args.weights.split(",")]
            return _execute("imh-demo", {"model": "imh_discrete", "weights": weights}, args)
        if args.preset:
            return _execute(args.preset, PRESETS[args.preset], args)
        return _execute(args.config, load_config(args.config), args)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
