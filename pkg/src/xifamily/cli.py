"""Command-line interface: compute | test | rank | simulate.

Exit codes: 0 ok, 2 usage or parse error, 3 degenerate data, 4 numeric
failure. All randomness flows from --seed (default 0), so output is
deterministic given the flags.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .cdf import resolve_dist_spec
from .errors import DegenerateDataError, NumericError, QuadratureError
from .estimator import (
    PairedSample,
    chatterjee_reference,
    xi_plugin,
    xi_rank,
    xi_simplified,
)
from .inference import independence_test
from .kernels import parse_kernel_spec
from .simulate import (
    ModelSpec,
    format_cell,
    iter_replicates,
    parse_method_spec,
    parse_sigma,
    replicate,
)

__all__ = ["CsvTable", "load_csv", "main", "run"]


@dataclass(frozen=True)
class CsvTable:
    headers: list
    columns: dict
    n_rows: int


def load_csv(path) -> CsvTable:
    """Read a rectangular numeric CSV with a header row."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ValueError(f"{path}: empty file")
    headers = [h.strip() for h in rows[0]]
    width = len(headers)
    data = [[] for _ in headers]
    for r, row in enumerate(rows[1:], start=2):
        if len(row) != width:
            raise ValueError(f"{path}: row {r} has {len(row)} cells, expected {width}")
        for c, cell in enumerate(row):
            try:
                value = float(cell)
            except ValueError:
                raise ValueError(
                    f"{path}: non-numeric cell at row {r}, column {headers[c]!r}: {cell!r}"
                ) from None
            if not math.isfinite(value):
                raise ValueError(
                    f"{path}: non-finite cell at row {r}, column {headers[c]!r}: {cell!r}"
                )
            data[c].append(value)
    columns = {h: np.asarray(col, dtype=float) for h, col in zip(headers, data)}
    return CsvTable(headers=headers, columns=columns, n_rows=len(rows) - 1)


def _column(table: CsvTable, name: str) -> np.ndarray:
    if name not in table.columns:
        raise ValueError(f"column {name!r} not found; available: {', '.join(table.headers)}")
    return table.columns[name]


@contextlib.contextmanager
def _open_out(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _coefficient(sample, variant, kernel, f_spec, tie_seed):
    if variant == "plugin":
        return xi_plugin(sample, kernel, resolve_dist_spec(f_spec, sample.ys), tie_seed)
    if variant == "rank":
        return xi_rank(sample, kernel, tie_seed)
    if variant == "simplified":
        return xi_simplified(sample, kernel, tie_seed)
    if variant == "chatterjee":
        return chatterjee_reference(sample, tie_seed)
    raise ValueError(f"unknown variant {variant!r}")


def cmd_compute(args) -> int:
    table = load_csv(args.file)
    sample = PairedSample(xs=_column(table, args.x_col), ys=_column(table, args.y_col))
    kernel = parse_kernel_spec(args.h)
    result = _coefficient(sample, args.variant, kernel, args.f, args.seed)
    with _open_out(args.out) as out:
        print(f"xi={result.xi!r}", file=out)
        print(f"zeta={result.zeta!r}", file=out)
        print(f"normalization={result.normalization!r}", file=out)
        print(f"variant={result.variant}", file=out)
        print(f"n={result.n}", file=out)
        print(f"tie_seed={result.tie_seed}", file=out)
    return 0


def cmd_test(args) -> int:
    table = load_csv(args.file)
    sample = PairedSample(xs=_column(table, args.x_col), ys=_column(table, args.y_col))
    if sample.n < 3:
        raise DegenerateDataError("need n >= 3 for variance")
    kernel = parse_kernel_spec(args.h)
    dist = resolve_dist_spec(args.f, sample.ys) if args.variant == "plugin" else None
    result = independence_test(
        sample,
        kernel,
        variant=args.variant,
        dist=dist,
        tie_seed=args.seed,
        continuous_y=args.continuous_y,
    )
    with _open_out(args.out) as out:
        print(f"z={result.z!r}", file=out)
        print(f"sigma2={result.sigma2_used.sigma2!r}", file=out)
        print(f"sigma2_source={result.sigma2_used.source}", file=out)
        print(f"p_one_sided={result.p_one_sided!r}", file=out)
        print(f"p_two_sided={result.p_two_sided!r}", file=out)
        print(f"variant={result.variant}", file=out)
        print(f"n={sample.n}", file=out)
    return 0


def cmd_rank(args) -> int:
    table = load_csv(args.file)
    if args.x_col is not None:
        xs = _column(table, args.x_col)
    else:
        xs = np.arange(1, table.n_rows + 1, dtype=float)
    if args.y_col is not None:
        names = [c.strip() for c in args.y_col.split(",")]
        for name in names:
            _column(table, name)
    else:
        names = [h for h in table.headers if h != args.x_col]
    if not names:
        raise ValueError("no series to rank")
    kernel = parse_kernel_spec(args.h)

    scored = []
    degenerate = []
    for name in names:
        sample = PairedSample(xs=xs, ys=table.columns[name])
        try:
            value = _coefficient(sample, args.variant, kernel, args.f, args.seed).xi
        except DegenerateDataError:
            degenerate.append(name)
            continue
        scored.append((name, value))
    # descending by coefficient, ties broken by name for determinism
    scored.sort(key=lambda item: (-item[1], item[0]))
    with _open_out(args.out) as out:
        writer = csv.writer(out)
        writer.writerow(["name", "xi", "rank"])
        for position, (name, value) in enumerate(scored, start=1):
            writer.writerow([name, repr(value), position])
        for name in sorted(degenerate):
            writer.writerow([name, "nan", ""])
    if degenerate:
        print(f"warning: {len(degenerate)} degenerate series reported as NaN", file=sys.stderr)
    return 0


def cmd_simulate(args) -> int:
    sigmas = [parse_sigma(s) for s in args.sigma.split(",")]
    sizes = [int(n) for n in args.n.split(",")]
    methods = [parse_method_spec(m) for m in args.method]
    dump_dir = Path(args.dump_dir) if args.dump_dir else None
    manifest = []

    cells = {}
    for method in methods:
        for sigma in sigmas:
            for n in sizes:
                spec = ModelSpec(model=args.model, sigma=sigma, n=n, seed=0)
                summary = replicate(spec, method, args.reps, args.seed, keep_per_rep=True)
                cells[(method.row_label(), sigma, n)] = format_cell(summary)
                if dump_dir is not None:
                    _dump_reps(dump_dir, args.model, sigma, n, args.reps, args.seed,
                               method, summary, manifest)

    with _open_out(args.out) as out:
        writer = csv.writer(out)
        col_keys = [(s, n) for s in sigmas for n in sizes]
        writer.writerow(["method", "kernel"] + [f"sigma={s} n={n}" for s, n in col_keys])
        for method in methods:
            label = method.row_label()
            writer.writerow(list(label) + [cells[(label, s, n)] for s, n in col_keys])

    if dump_dir is not None:
        with open(dump_dir / "reps.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["method", "kernel", "sigma", "n", "rep", "seed", "file", "value"])
            writer.writerows(manifest)
    return 0


def _dump_reps(dump_dir, model, sigma, n, reps, base_seed, method, summary, manifest):
    dump_dir.mkdir(parents=True, exist_ok=True)
    label = method.row_label()
    for i, seed, sample in iter_replicates(model, sigma, n, reps, base_seed):
        name = f"sample_s{sigma}_n{n}_rep{i}.csv"
        path = dump_dir / name
        if not path.exists():
            with open(path, "w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(["x", "y"])
                for x, y in zip(sample.xs, sample.ys):
                    writer.writerow([repr(float(x)), repr(float(y))])
        manifest.append(
            [label[0], label[1], sigma, n, i, seed, name, repr(summary.per_rep[i])]
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xifamily",
        description="Kernel-generalized rank correlation coefficients",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_shared(p, f_default="std-normal"):
        p.add_argument("--file", required=True, help="input CSV with a header row")
        p.add_argument("--h", default="power:1", help="kernel spec: power:G | exp:B | expsq")
        p.add_argument("--f", default=f_default,
                       help="F spec: std-normal | fit-normal[:MU,SIGMA] | empirical | uniform:A,B")
        p.add_argument("--variant", default="plugin",
                       choices=["plugin", "rank", "simplified", "chatterjee"])
        p.add_argument("--seed", type=int, default=0, help="tie-break seed")
        p.add_argument("--out", default=None, help="output path (default stdout)")

    p = sub.add_parser("compute", help="one coefficient from two CSV columns")
    add_shared(p)
    p.add_argument("--x-col", required=True)
    p.add_argument("--y-col", required=True)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("test", help="independence test from two CSV columns")
    add_shared(p)
    p.add_argument("--x-col", required=True)
    p.add_argument("--y-col", required=True)
    p.add_argument("--continuous-y", action="store_true",
                   help="declare y continuous, enabling the closed-form null variance")
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("rank", help="rank many series by dependence on x")
    add_shared(p, f_default="fit-normal")
    p.add_argument("--x-col", default=None, help="default: row index 1..n")
    p.add_argument("--y-col", default=None,
                   help="comma-separated series names (default: all other columns)")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("simulate", help="replicate a synthetic model and emit a table cell")
    p.add_argument("--model", required=True, choices=["linear", "quadratic", "sinusoidal"])
    p.add_argument("--sigma", default="0", help="comma-separated noise levels; 'inf' = pure noise")
    p.add_argument("--n", default="100", help="comma-separated sample sizes")
    p.add_argument("--reps", type=int, default=100)
    p.add_argument("--method", action="append", required=True,
                   help="VARIANT[,KERNEL[,F]], e.g. plugin,power:2,std-normal (repeatable)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.add_argument("--dump-dir", default=None,
                   help="also write per-rep samples and a manifest of stored coefficients")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except DegenerateDataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (QuadratureError, NumericError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def run():
    raise SystemExit(main())
