"""Command-line interface: generate streams, run algorithms, compare, sweep."""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import os
import sys
import tempfile
import time

import numpy as np

from . import datagen, evaluation
from .csschh import CascadeSketch, ChhParams, ParameterError, plan_capacities
from .datagen import PairFileError, StreamSpec
from .evaluation import EmptyStreamError, InfeasibleSpaceError
from .mgchh import NestedMgSketch
from .mgchh import plan_capacities as plan_mg_capacities
from .oracle import DEFAULT_DISTINCT_PAIR_CAP, ExactCounts


class UsageError(ValueError):
    pass


def _atomic_write(path: str, text: str) -> None:
    # Write to a sibling temp file and rename, so readers never see a
    # partial report.
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".chh-tmp-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        with contextlib.suppress(OSError):
            os.unlink(tmp)
        raise


def _emit(text: str, out_path) -> None:
    if out_path is None or out_path == "-":
        sys.stdout.write(text)
    else:
        _atomic_write(out_path, text)


def _input_chunks(path: str, fmt: str):
    if fmt == "binary":
        fh = sys.stdin.buffer if path == "-" else open(path, "rb")
        reader = datagen.read_pairs_binary
    elif fmt == "csv":
        fh = sys.stdin if path == "-" else open(path, "r")
        reader = datagen.read_pairs_csv
    else:
        raise UsageError(f"unknown input format {fmt!r}")
    try:
        yield from reader(fh)
    finally:
        if path != "-":
            fh.close()


def _resolve_thresholds(args) -> tuple:
    if args.phi1 is None or args.phi2 is None:
        raise UsageError("--phi1 and --phi2 are required")
    return args.phi1, args.phi2


def _sizing_mode(args) -> str:
    modes = []
    if args.eps1 is not None or args.eps2 is not None:
        modes.append("eps")
    if args.k1 is not None or args.k2 is not None:
        modes.append("counters")
    if args.s1 is not None or args.s2 is not None:
        modes.append("mg-counters")
    if args.space_bytes is not None:
        modes.append("space")
    if len(modes) != 1:
        raise UsageError(
            "supply exactly one sizing mode: --eps1/--eps2, --k1/--k2, "
            "--s1/--s2 or --space-bytes")
    return modes[0]


def _make_sketch(algo: str, args, phi1: float, phi2: float):
    if algo == "exact":
        return ExactCounts()
    mode = _sizing_mode(args)
    if mode == "eps":
        if args.eps1 is None or args.eps2 is None:
            raise UsageError("--eps1 and --eps2 must be given together")
        params = ChhParams(phi1=phi1, phi2=phi2, eps1=args.eps1, eps2=args.eps2)
        if algo == "csschh":
            return CascadeSketch.from_params(params)
        return NestedMgSketch.from_params(params, seed=args.seed or 0)
    if mode == "space":
        cfg = evaluation.equal_space_config(args.space_bytes)
        if algo == "csschh":
            return CascadeSketch(cfg.k1, cfg.k2, phi1=phi1, phi2=phi2)
        return NestedMgSketch(cfg.s1, cfg.s2, seed=args.seed or 0)
    if algo == "csschh":
        if mode != "counters" or args.k1 is None or args.k2 is None:
            raise UsageError("csschh needs --k1 and --k2 (or --eps*/--space-bytes)")
        return CascadeSketch(args.k1, args.k2, phi1=phi1, phi2=phi2)
    if mode != "mg-counters" or args.s1 is None or args.s2 is None:
        raise UsageError("mgchh needs --s1 and --s2 (or --eps*/--space-bytes)")
    return NestedMgSketch(args.s1, args.s2, seed=args.seed or 0)


def _feed(sketch, chunks) -> int:
    n = 0
    for xs, ys in chunks:
        if isinstance(sketch, ExactCounts):
            sketch.ingest_many(xs.tolist(), ys.tolist())
        elif isinstance(sketch, CascadeSketch):
            sketch.update_many(xs, ys)
        else:
            sketch.update_many(xs.tolist(), ys.tolist())
        n += len(xs)
    return n


def cmd_generate(args) -> int:
    spec = StreamSpec(n=args.n, rho=args.rho, m1=args.m1, m2=args.m2,
                      seed=args.seed or 0, correlated=not args.plain)
    pairs = datagen.generate_stream(spec)
    if args.format == "binary":
        datagen.write_pairs_binary(args.out, pairs)
    else:
        datagen.write_pairs_csv(args.out, pairs)
    return 0


def cmd_run(args) -> int:
    phi1, phi2 = _resolve_thresholds(args)
    sketch = _make_sketch(args.algo, args, phi1, phi2)
    _feed(sketch, _input_chunks(args.input, args.format))
    if isinstance(sketch, ExactCounts):
        if len(sketch.fxy) > DEFAULT_DISTINCT_PAIR_CAP:
            print(f"warning: {len(sketch.fxy)} distinct pairs held in memory",
                  file=sys.stderr)
        report = sketch.query(phi1, phi2)
    else:
        report = sketch.query(phi1, phi2)
    if args.output == "csv":
        _emit(report.to_csv(), args.out)
    else:
        _emit(report.to_json() + "\n", args.out)
    return 0


_COMPARE_COLUMNS = ["algorithm", "recall", "precision", "abs_err_max",
                    "abs_err_mean", "rel_err_max", "rel_err_mean",
                    "updates_per_ms", "space_bytes_model"]


def _timed_feed(sketch, chunks) -> tuple:
    n = 0
    elapsed = 0.0
    for xs, ys in chunks:
        xs = xs.tolist()
        ys = ys.tolist()
        start = time.perf_counter()
        sketch.update_many(xs, ys)
        elapsed += time.perf_counter() - start
        n += len(xs)
    return n, elapsed


def cmd_compare(args) -> int:
    phi1, phi2 = _resolve_thresholds(args)
    algos = [a.strip() for a in args.algos.split(",") if a.strip()]
    for a in algos:
        if a not in ("csschh", "mgchh"):
            raise UsageError(f"unknown algorithm {a!r}")
    sketches = {a: _make_sketch(a, args, phi1, phi2) for a in algos}
    oracle = ExactCounts()
    elapsed = {a: 0.0 for a in algos}
    n = 0
    for xs, ys in _input_chunks(args.input, args.format):
        xl = xs.tolist()
        yl = ys.tolist()
        oracle.ingest_many(xl, yl)
        for a in algos:
            sk = sketches[a]
            start = time.perf_counter()
            if isinstance(sk, CascadeSketch):
                sk.update_many(xs, ys)
            else:
                sk.update_many(xl, yl)
            elapsed[a] += time.perf_counter() - start
        n += len(xl)
    if n == 0:
        raise EmptyStreamError("input stream is empty")
    truth = oracle.query(phi1, phi2)
    rows = []
    for a in algos:
        sk = sketches[a]
        result = evaluation.score(sk.query(phi1, phi2), truth)
        result.updates_per_ms = n / (elapsed[a] * 1000.0)
        if a == "csschh":
            result.space_bytes_model = evaluation.cascade_space_bytes(sk.k1, sk.k2)
        else:
            result.space_bytes_model = evaluation.nested_mg_space_bytes(sk.s1, sk.s2)
        rows.append({"algorithm": a, **result.to_dict()})
    if args.output == "csv":
        out = io.StringIO()
        writer = csv.DictWriter(out, fieldnames=_COMPARE_COLUMNS,
                                lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        _emit(out.getvalue(), args.out)
    else:
        _emit(json.dumps(rows, indent=2) + "\n", args.out)
    return 0


_SWEEP_AXES = ("n", "rho", "space", "phi1", "phi2")


def cmd_sweep(args) -> int:
    if args.axis not in _SWEEP_AXES:
        raise UsageError(f"unknown sweep axis {args.axis!r}")
    values = [float(v) for v in args.values.split(",")]
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["axis", "value", "seed", "algorithm",
                     "recall", "precision", "abs_err_max", "abs_err_mean",
                     "rel_err_max", "rel_err_mean", "updates_per_ms",
                     "space_bytes_model"])
    for value in values:
        n = int(value * 1e6) if args.axis == "n" else args.n
        rho = value if args.axis == "rho" else args.rho
        space = int(value) if args.axis == "space" else args.space_bytes
        phi1 = value if args.axis == "phi1" else args.phi1
        phi2 = value if args.axis == "phi2" else args.phi2
        if phi1 is None or phi2 is None:
            raise UsageError("--phi1 and --phi2 are required (or swept)")
        if space is None:
            raise UsageError("sweep needs --space-bytes (or axis=space)")
        cfg = evaluation.equal_space_config(space)
        for trial in range(args.trials):
            seed = (args.seed or 0) + trial
            spec = StreamSpec(n=n, rho=rho, m1=args.m1, m2=args.m2, seed=seed)
            pairs = datagen.generate_stream(spec)
            xs = pairs[:, 0]
            ys = pairs[:, 1]
            xl = xs.tolist()
            yl = ys.tolist()
            oracle = ExactCounts()
            oracle.ingest_many(xl, yl)
            truth = oracle.query(phi1, phi2)
            runs = {
                "csschh": CascadeSketch(cfg.k1, cfg.k2, phi1=phi1, phi2=phi2),
                "mgchh": NestedMgSketch(cfg.s1, cfg.s2, seed=seed),
            }
            for name, sketch in runs.items():
                start = time.perf_counter()
                if isinstance(sketch, CascadeSketch):
                    sketch.update_many(xs, ys)
                else:
                    sketch.update_many(xl, yl)
                elapsed = time.perf_counter() - start
                result = evaluation.score(sketch.query(phi1, phi2), truth)
                result.updates_per_ms = len(xs) / (elapsed * 1000.0)
                result.space_bytes_model = (
                    evaluation.cascade_space_bytes(cfg.k1, cfg.k2)
                    if name == "csschh"
                    else evaluation.nested_mg_space_bytes(cfg.s1, cfg.s2))
                writer.writerow([args.axis, value, seed, name,
                                 result.recall, result.precision,
                                 result.abs_err_max, result.abs_err_mean,
                                 result.rel_err_max, result.rel_err_mean,
                                 result.updates_per_ms,
                                 result.space_bytes_model])
    _emit(out.getvalue(), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chh",
        description="Mine correlated heavy hitters from two-dimensional streams")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write a synthetic Zipf pair stream")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--rho", type=float, default=1.0)
    gen.add_argument("--m1", type=int, default=2 ** 20)
    gen.add_argument("--m2", type=int, default=2 ** 20)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--plain", action="store_true",
                     help="plain-independent secondary model")
    gen.add_argument("--format", choices=("binary", "csv"), default="binary")
    gen.add_argument("--out", required=True)
    gen.set_defaults(func=cmd_generate)

    def common_io(p):
        p.add_argument("--input", default="-", help="pair file, or - for stdin")
        p.add_argument("--format", choices=("binary", "csv"), default="binary")
        p.add_argument("--phi1", type=float)
        p.add_argument("--phi2", type=float)
        p.add_argument("--eps1", type=float)
        p.add_argument("--eps2", type=float)
        p.add_argument("--k1", type=int)
        p.add_argument("--k2", type=int)
        p.add_argument("--s1", type=int)
        p.add_argument("--s2", type=int)
        p.add_argument("--space-bytes", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--out", default="-")
        p.add_argument("--output", choices=("json", "csv"), default="json")

    run = sub.add_parser("run", help="run one algorithm over a pair stream")
    run.add_argument("--algo", choices=("csschh", "mgchh", "exact"),
                     required=True)
    common_io(run)
    run.set_defaults(func=cmd_run)

    cmp_ = sub.add_parser("compare",
                          help="score algorithms against the exact oracle")
    cmp_.add_argument("--algos", default="csschh,mgchh")
    common_io(cmp_)
    cmp_.set_defaults(func=cmd_compare)

    sweep = sub.add_parser("sweep", help="sweep one experiment axis")
    sweep.add_argument("--axis", choices=_SWEEP_AXES, required=True)
    sweep.add_argument("--values", required=True,
                       help="comma-separated axis values (n in millions)")
    sweep.add_argument("--n", type=int, default=10 ** 6)
    sweep.add_argument("--rho", type=float, default=1.4)
    sweep.add_argument("--m1", type=int, default=2 ** 20)
    sweep.add_argument("--m2", type=int, default=2 ** 20)
    sweep.add_argument("--phi1", type=float)
    sweep.add_argument("--phi2", type=float)
    sweep.add_argument("--space-bytes", type=int)
    sweep.add_argument("--trials", type=int, default=10)
    sweep.add_argument("--seed", type=int, default=0)
    sweep.add_argument("--out", default="-")
    sweep.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (PairFileError, InfeasibleSpaceError, EmptyStreamError,
            ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
