"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 file-format error, 3 invariant
failure.  Commands validate all inputs before writing anything, so a
failing invocation leaves no partial single-file outputs.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import io as hio
from .errors import FormatError, HadapipeError, InternalInconsistencyError
from .memory import bench_table
from .ordering import (
    OrderingScheme,
    index_ordering,
    mpcgi_sequence,
    natural_sequence,
    rd_sequence,
    scheme_milestones,
    thdc_permutation,
    RowPermutation,
)
from .pipeline import Traversal, canonical_position, generate, natural_row_index
from .selfcheck import run_suite
from .signmatrix import Convention, upscale
from .simulate import GaussianNoise, acquire, metrics, reconstruct

_SCHEMES = {s.value: s for s in OrderingScheme}
_CONVENTIONS = {c.value: c for c in Convention}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # exit code 1 for usage problems (argparse defaults to 2)
    def error(self, message):
        raise _UsageError(message)


def _build_parser():
    parser = _Parser(prog="hadapipe",
                     description="Hadamard-derived pattern generation, ordering, "
                                 "and ghost-imaging simulation")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a pattern sequence")
    g.add_argument("--level", type=int, required=True)
    g.add_argument("--scheme", choices=sorted(_SCHEMES), required=True)
    g.add_argument("--convention", choices=sorted(_CONVENTIONS))
    g.add_argument("--traversal", choices=["breadth", "depth"], default="breadth")
    g.add_argument("--format", choices=["hpc1", "pbm-dir"], default="hpc1")
    g.add_argument("--out", required=True)

    o = sub.add_parser("order", help="export an ordering permutation as CSV")
    o.add_argument("--k", type=int, required=True, help="matrix order exponent K")
    o.add_argument("--scheme", choices=["mpcgi", "rd"], required=True)
    o.add_argument("--method", choices=["pipeline", "thdc", "index"], required=True)
    o.add_argument("--out", required=True)

    s = sub.add_parser("simulate", help="acquire and reconstruct an object image")
    s.add_argument("--object", required=True, help="P5 PGM, square power-of-two side")
    s.add_argument("--scheme", choices=sorted(_SCHEMES), required=True)
    s.add_argument("--level", type=int, required=True)
    s.add_argument("--ratio", type=float)
    s.add_argument("--milestones", help="comma-separated ascending prefix lengths")
    s.add_argument("--noise-sigma", type=float, default=0.0)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out-dir", required=True)

    b = sub.add_parser("bench", help="emit the memory-model table as CSV")
    b.add_argument("--max-k", type=int, required=True)
    b.add_argument("--out", required=True)

    v = sub.add_parser("verify", help="run the invariant suites")
    v.add_argument("--level", type=int, required=True)

    return parser


def _cmd_gen(args):
    if args.level < 0:
        raise _UsageError("--level must be nonnegative")
    scheme = _SCHEMES[args.scheme]
    if args.convention is not None and scheme is not OrderingScheme.NATURAL:
        raise _UsageError("--convention applies to the natural scheme only")
    if args.traversal == "depth":
        if scheme is OrderingScheme.NATURAL:
            raise _UsageError("depth traversal applies to pipeline schemes only")
        if args.format != "pbm-dir":
            raise _UsageError("depth traversal emits out of sequence order; "
                              "it requires --format pbm-dir")
    convention = _CONVENTIONS[args.convention or "left"]
    side = 2 ** args.level
    total = 4 ** args.level
    width = len(str(total))

    if args.traversal == "depth":
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        for p in generate(args.level, Traversal.DEPTH_FIRST):
            idx = canonical_position(p.rule_path)
            hio.write_pbm(out_dir / f"pattern_{idx:0{width}d}.pbm", upscale(p, side))
        return 0

    if scheme is OrderingScheme.NATURAL:
        seq = natural_sequence(args.level, convention)
    elif scheme is OrderingScheme.MPCGI:
        seq = mpcgi_sequence(args.level)
    else:
        seq = rd_sequence(args.level)

    if args.format == "hpc1":
        hio.write_patterns(seq, args.out)
    else:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        for idx, p in enumerate(seq.items, start=1):
            hio.write_pbm(out_dir / f"pattern_{idx:0{width}d}.pbm", p)
    return 0


def _cmd_order(args):
    if args.k < 0:
        raise _UsageError("--k must be nonnegative")
    scheme = _SCHEMES[args.scheme]
    if args.method == "pipeline":
        if args.k % 2:
            raise _UsageError("the pipeline realizes square patterns only; "
                              "--k must be even for --method pipeline")
        level = args.k // 2
        indices = tuple(natural_row_index(p.rule_path, level)
                        for p in generate(level))
        perm = RowPermutation(2 ** args.k, indices)
    elif args.method == "thdc":
        perm = thdc_permutation(args.k, scheme)
    else:
        perm = index_ordering(args.k, scheme)
    hio.write_permutation_csv(perm, args.out)
    return 0


def _parse_milestones(args, total):
    if args.ratio is not None and args.milestones is not None:
        raise _UsageError("--ratio and --milestones are mutually exclusive")
    if args.ratio is not None:
        if not 0 < args.ratio <= 1:
            raise _UsageError("--ratio must lie in (0, 1]")
        return [max(1, round(args.ratio * total))]
    if args.milestones is not None:
        try:
            ms = [int(tok) for tok in args.milestones.split(",")]
        except ValueError:
            raise _UsageError("--milestones must be comma-separated integers") from None
        if not ms or any(b <= a for a, b in zip(ms, ms[1:])):
            raise _UsageError("--milestones must be strictly ascending")
        if ms[0] < 1 or ms[-1] > total:
            raise _UsageError(f"--milestones must lie in 1..{total}")
        return ms
    return [total]


def _cmd_simulate(args):
    if args.level < 0:
        raise _UsageError("--level must be nonnegative")
    if args.noise_sigma < 0:
        raise _UsageError("--noise-sigma must be nonnegative")
    obj = hio.read_pgm(args.object)
    side = 2 ** args.level
    if obj.side != side:
        raise _UsageError(f"object side {obj.side} does not match --level {args.level} "
                          f"(needs {side})")
    scheme = _SCHEMES[args.scheme]
    if scheme is OrderingScheme.NATURAL:
        seq = natural_sequence(args.level)
    elif scheme is OrderingScheme.MPCGI:
        seq = mpcgi_sequence(args.level)
    else:
        seq = rd_sequence(args.level)
    total = len(seq.items)
    milestones = _parse_milestones(args, total)
    noise = GaussianNoise(args.noise_sigma, args.seed) if args.noise_sigma > 0 else None

    records = acquire(seq, obj, noise)
    recons = [reconstruct(records, seq, m) for m in milestones]
    quality = [metrics(r, obj) for r in recons]

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    width = len(str(total))
    metric_rows = []
    rescale_rows = []
    for m, rec, q in zip(milestones, recons, quality):
        stem = f"recon_m{m:0{width}d}"
        lo = float(rec.values.min())
        hi = float(rec.values.max())
        if hi > lo:
            levels = np.rint((rec.values - lo) / (hi - lo) * 255).astype(np.int64)
            scale = (hi - lo) / 255.0
        else:
            levels = np.zeros_like(rec.values, dtype=np.int64)
            scale = 0.0
        hio.write_pgm(out_dir / f"{stem}.pgm", levels, maxval=255)
        hio.write_values_csv(rec.values, out_dir / f"{stem}.csv")
        rescale_rows.append((m, repr(scale), repr(lo)))
        metric_rows.append((m, m / total, repr(q.mse), repr(q.psnr_db), repr(q.pearson)))
    hio.write_metrics_csv(metric_rows, out_dir / "metrics.csv")
    hio.write_rescale_csv(rescale_rows, out_dir / "rescale.csv")
    return 0


def _cmd_bench(args):
    if args.max_k < 2:
        raise _UsageError("--max-k must be at least 2")
    hio.write_bench_csv(bench_table(args.max_k), args.out)
    return 0


def _cmd_verify(args):
    if args.level < 0:
        raise _UsageError("--level must be nonnegative")
    results = run_suite(args.level)
    failed = 0
    for r in results:
        if r.passed:
            print(f"ok   {r.name}")
        else:
            failed += 1
            print(f"FAIL {r.name}: {r.detail}")
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 0 if failed == 0 else 3


_HANDLERS = {
    "gen": _cmd_gen,
    "order": _cmd_order,
    "simulate": _cmd_simulate,
    "bench": _cmd_bench,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _HANDLERS[args.command](args)
    except _UsageError as exc:
        print(f"hadapipe: {exc}", file=sys.stderr)
        return 1
    except FormatError as exc:
        print(f"hadapipe: {exc}", file=sys.stderr)
        return 2
    except InternalInconsistencyError as exc:
        print(f"hadapipe: {exc}", file=sys.stderr)
        return 3
    except HadapipeError as exc:
        print(f"hadapipe: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
