"""Command-line interface.

Four subcommands share one input pipeline (price CSV -> calendar alignment
-> returns -> volatility config):

  sentiment   per-ticker sentiment series + pooled alphas
  compare     yardstick vs CAPM point clouds, diagonal comparison,
              conditional densities
  dist        pooled-sentiment histogram, Laplace fit, sign-symmetry test
  synth       generate a synthetic market from a spec file and run the
              bias recovery check against its ground truth

Flags can also be supplied through a declarative JSON or TOML config file
(--config); explicit flags win over config values. Outputs are plain CSV
and JSON files written under --out, byte-identical across reruns on equal
inputs. Every failure prints a single machine-parseable line to stderr:

    ERROR:<ExceptionName>: <message>

and exits nonzero (2 for usage errors, 1 otherwise). Exit code 0 means
every requested output file was written.
"""

from __future__ import annotations

import argparse
import csv
import datetime as dt
import json
import os
import sys
from dataclasses import replace
from typing import IO, Sequence

import numpy as np

from . import capm as capm_mod
from . import distributions as dist_mod
from . import market_data as md
from . import synth as synth_mod
from . import yardstick as ys
from .errors import ParseError, RelsentError, SpecError

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

_CONFIG_KEYS = {
    "input",
    "out",
    "window",
    "returns",
    "align",
    "max_fill_gap",
    "seed",
    "spec",
    "pool",
}

_fmt = md._fmt


class _Parser(argparse.ArgumentParser):
    """argparse with the ERROR:<code>: protocol on usage errors."""

    def error(self, message):  # noqa: A002 - argparse API
        print(f"ERROR:UsageError: {message}", file=sys.stderr)
        raise SystemExit(2)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="price panel CSV (date,<TICKER>,...)")
    common.add_argument("--out", help="output directory (default: current)")
    common.add_argument(
        "--window", help="volatility window: an integer >= 2 or 'full' (default 20)"
    )
    common.add_argument("--returns", choices=md.RETURN_MODES, help="return mode")
    common.add_argument(
        "--align", choices=("strict", "ffill"), help="missing-data policy"
    )
    common.add_argument(
        "--max-fill-gap",
        type=int,
        dest="max_fill_gap",
        help="longest run forward-fill may bridge (align=ffill)",
    )
    common.add_argument("--seed", type=int, help="override the generator seed")
    common.add_argument("--config", help="JSON/TOML file of flag defaults")

    parser = _Parser(prog="relsent", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser(
        "sentiment", parents=[common], help="per-ticker sentiment series"
    )
    sub.add_parser(
        "compare", parents=[common], help="yardstick vs CAPM comparison"
    )
    p_dist = sub.add_parser(
        "dist", parents=[common], help="pooled sentiment distribution diagnostics"
    )
    p_dist.add_argument(
        "--pool", help="alpha pool CSV from a prior sentiment run (skips --input)"
    )
    p_synth = sub.add_parser(
        "synth", parents=[common], help="synthetic market + bias recovery"
    )
    p_synth.add_argument("--spec", help="synthetic market spec (.toml or .json)")
    return parser


# ---------------------------------------------------------------------------
# config resolution
# ---------------------------------------------------------------------------


def _load_config(path: str) -> dict:
    if path.endswith(".toml"):
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    else:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    if not isinstance(raw, dict):
        raise ParseError(f"{path}: config must be a table/object")
    unknown = set(raw) - _CONFIG_KEYS
    if unknown:
        raise ParseError(f"{path}: unknown config keys {sorted(unknown)}")
    return raw


class Options:
    """Flag values merged over config values merged over defaults."""

    def __init__(self, args: argparse.Namespace) -> None:
        config = _load_config(args.config) if args.config else {}

        def pick(name: str, default=None):
            value = getattr(args, name, None)
            if value is not None:
                return value
            return config.get(name, default)

        self.command: str = args.command
        self.input: str | None = pick("input")
        self.out: str = pick("out", ".")
        self.returns: str = pick("returns", "simple")
        self.align: str = pick("align", "strict")
        self.max_fill_gap: int = int(pick("max_fill_gap", 5))
        seed = pick("seed")
        self.seed: int | None = None if seed is None else int(seed)
        self.spec: str | None = pick("spec")
        self.pool: str | None = pick("pool")
        window = pick("window", ys.DEFAULT_WINDOW)
        if isinstance(window, str) and window.strip().lower() in ("full", "full-sample"):
            self.vol_cfg = ys.VolatilityConfig(mode="full")
        else:
            try:
                length = int(window)
            except (TypeError, ValueError):
                raise ParseError(
                    f"--window must be an integer >= 2 or 'full', got {window!r}"
                ) from None
            self.vol_cfg = ys.VolatilityConfig(mode="rolling", window=length)


def _load_returns(opts: Options) -> md.ReturnPanel:
    if not opts.input:
        raise ParseError(f"{opts.command} needs --input (flag or config)")
    panel = md.parse_price_csv(opts.input)
    policy = md.AlignmentPolicy(method=opts.align, max_fill_gap=opts.max_fill_gap)
    aligned = md.align_calendar(panel, policy)
    return md.compute_returns(aligned, opts.returns)


# ---------------------------------------------------------------------------
# deterministic writers
# ---------------------------------------------------------------------------


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    print(f"wrote {path}")


def _write_json(path: str, obj) -> None:
    _write_text(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _points_csv(points) -> str:
    lines = ["date,ticker,x,y"]
    for p in points:
        lines.append(f"{p.date.isoformat()},{p.ticker},{_fmt(p.x)},{_fmt(p.y)}")
    return "\n".join(lines) + "\n"


def _hist_csv(hist: dist_mod.Histogram) -> str:
    lines = ["bin_left,bin_right,count,density"]
    for left, right, count, density in zip(
        hist.edges[:-1], hist.edges[1:], hist.counts, hist.density
    ):
        lines.append(f"{_fmt(left)},{_fmt(right)},{int(count)},{_fmt(density)}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_sentiment(opts: Options) -> None:
    panel = _load_returns(opts)
    pool_lines = ["date,ticker,alpha"]
    for i, ticker in enumerate(panel.tickers):
        series = ys.sentiment(panel, i, opts.vol_cfg)
        lines = ["date,alpha,cumulative"]
        for date, alpha, cume in zip(series.dates, series.alpha, series.cumulative):
            lines.append(f"{date.isoformat()},{_fmt(alpha)},{_fmt(cume)}")
        _write_text(
            os.path.join(opts.out, f"sentiment_{ticker}.csv"), "\n".join(lines) + "\n"
        )
        for date, alpha in zip(series.dates, series.alpha):
            pool_lines.append(f"{date.isoformat()},{ticker},{_fmt(alpha)}")
    _write_text(os.path.join(opts.out, "alpha_pool.csv"), "\n".join(pool_lines) + "\n")


def cmd_compare(opts: Options) -> None:
    panel = _load_returns(opts)
    yard = ys.yardstick_points(panel, opts.vol_cfg)
    base = capm_mod.capm_points(panel, capm_mod.IndexSpec(), opts.vol_cfg)
    report = capm_mod.compare_fits(yard, base)
    _write_text(os.path.join(opts.out, "yardstick_points.csv"), _points_csv(yard))
    _write_text(os.path.join(opts.out, "capm_points.csv"), _points_csv(base))
    _write_json(os.path.join(opts.out, "comparison.json"), report.to_json_dict())
    lines = ["x_target,tolerance,n_sample,peak,bin_left,bin_right,count,density"]
    for target in dist_mod.default_x_targets(yard):
        pdf = dist_mod.conditional_pdf(yard, target)
        hist = pdf.histogram
        for left, right, count, density in zip(
            hist.edges[:-1], hist.edges[1:], hist.counts, hist.density
        ):
            lines.append(
                f"{_fmt(pdf.x_target)},{_fmt(pdf.tolerance)},{pdf.n_sample},"
                f"{_fmt(pdf.peak)},{_fmt(left)},{_fmt(right)},{int(count)},{_fmt(density)}"
            )
    _write_text(
        os.path.join(opts.out, "conditional_pdfs.csv"), "\n".join(lines) + "\n"
    )


def _read_pool(path: str) -> np.ndarray:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: empty pool file") from None
        if [c.strip() for c in header] != ["date", "ticker", "alpha"]:
            raise ParseError(f"{path}: pool header must be date,ticker,alpha")
        values = []
        for line, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 3:
                raise ParseError(f"{path}: line {line}: expected 3 fields")
            try:
                values.append(float(row[2]))
            except ValueError as exc:
                raise ValueError(
                    f"{path}: line {line}: non-numeric alpha {row[2]!r}"
                ) from exc
    return np.asarray(values, dtype=np.float64)


def cmd_dist(opts: Options) -> None:
    if opts.pool:
        alphas = _read_pool(opts.pool)
    else:
        panel = _load_returns(opts)
        matrix = ys.alpha_matrix(panel, opts.vol_cfg)
        alphas = matrix.T[np.isfinite(matrix.T)]  # ticker-major pooling order
    hist = dist_mod.sentiment_histogram(alphas)
    fit = dist_mod.fit_laplace(alphas)
    sym = dist_mod.symmetry_test(alphas)
    _write_text(os.path.join(opts.out, "alpha_hist.csv"), _hist_csv(hist))
    _write_json(os.path.join(opts.out, "laplace_fit.json"), fit.to_json_dict())
    _write_json(os.path.join(opts.out, "symmetry.json"), sym.to_json_dict())


def cmd_synth(opts: Options) -> None:
    if not opts.spec:
        raise SpecError("synth needs --spec (flag or config)")
    spec = synth_mod.SynthSpec.from_file(opts.spec)
    if opts.seed is not None:
        spec = replace(spec, seed=opts.seed)
    panel, truth = synth_mod.generate_market(spec)
    recovery = synth_mod.recover_bias(panel, truth, opts.vol_cfg)
    _write_text(
        os.path.join(opts.out, "synth_panel.csv"), md.serialize_return_csv(panel)
    )
    _write_json(os.path.join(opts.out, "ground_truth.json"), truth.to_json_dict())
    _write_json(os.path.join(opts.out, "recovery.json"), recovery.to_json_dict())


_COMMANDS = {
    "sentiment": cmd_sentiment,
    "compare": cmd_compare,
    "dist": cmd_dist,
    "synth": cmd_synth,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        opts = Options(args)
        os.makedirs(opts.out, exist_ok=True)
        _COMMANDS[opts.command](opts)
    except (RelsentError, ValueError, OSError) as exc:
        print(f"ERROR:{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
