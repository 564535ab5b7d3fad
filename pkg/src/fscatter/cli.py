"""Command-line front end.

    scatter extract --input a.wav b.wav --layers 2 --q 8,1 --j 5,3 \
        --eps 1e-6 --format json --out features.json
    scatter bench --sizes 12..18 --q 16,1 --j 5,3 --eps 1e-4 --out bench.csv
    scatter bank-stats --n 65536 --q 16 --j 9 --eps 1e-4

Exit codes: 0 success, 1 total failure, 2 partial failure (some inputs
skipped).
"""

from __future__ import annotations

import argparse
import json
import sys

from .engine import ScatterConfig
from .filters import generate_filterbank
from .pipeline import PipelineConfig, export_features, run_bench, run_extract


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(p) for p in text.split(","))


def _size_sweep(text: str) -> tuple[int, ...]:
    """'12..18' -> exponents 12..18 inclusive; '12,14,16' also accepted."""
    if ".." in text:
        a, b = text.split("..", 1)
        return tuple(range(int(a), int(b) + 1))
    return _int_list(text)


def _scatter_config(args) -> ScatterConfig:
    qs, js = _int_list(args.q), _int_list(args.j)
    depth = args.layers if hasattr(args, "layers") else len(qs)
    return ScatterConfig(depth=depth, qs=qs, js=js, epsilon=args.eps)


def _cmd_extract(args) -> int:
    config = PipelineConfig(
        scatter=_scatter_config(args),
        inputs=tuple(args.input),
        out_path=args.out,
        fmt=args.format,
    )
    records, failures = run_extract(config)
    if records:
        export_features(records, config.fmt, args.out)
    if not records:
        print("scatter: all inputs failed", file=sys.stderr)
        return 1
    return 2 if failures else 0


def _cmd_bench(args) -> int:
    config = PipelineConfig(
        scatter=_scatter_config(args),
        bench_sizes=_size_sweep(args.sizes),
        bench_repeats=args.repeats,
        seed=args.seed,
    )
    report = run_bench(config)
    text = report.to_json() if args.format == "json" else report.to_csv()
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)
    return 0


def _cmd_bank_stats(args) -> int:
    bank = generate_filterbank(args.n, args.q, args.j, args.eps, normalize=True)
    doc = bank.describe()
    doc["sparsity_percent"] = bank.sparsity_percent()
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scatter",
        description="Translation-invariant scattering/dispersion features "
        "of 1-D signals, computed in the Fourier domain.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="compute features for WAV files")
    p.add_argument("--input", nargs="+", required=True, metavar="FILE")
    p.add_argument("--layers", type=int, default=2)
    p.add_argument("--q", default="2,1", help="wavelets per octave, one per layer")
    p.add_argument("--j", default="3,3", help="octaves, one per layer")
    p.add_argument("--eps", type=float, default=1e-6)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", default="-", help="output path, '-' for stdout")
    p.set_defaults(fn=_cmd_extract)

    p = sub.add_parser("bench", help="size sweep: timings, nonzeros, sparsity")
    p.add_argument("--sizes", default="12..18", help="exponent sweep, e.g. 12..18")
    p.add_argument("--q", default="16,1")
    p.add_argument("--j", default="5,3")
    p.add_argument("--eps", type=float, default=1e-4)
    p.add_argument("--layers", type=int, default=2)
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--seed", type=int, default=2016)
    p.add_argument("--format", choices=("json", "csv"), default="csv")
    p.add_argument("--out", default="-")
    p.set_defaults(fn=_cmd_bench)

    p = sub.add_parser("bank-stats", help="scale set, supports, sparsity of one bank")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--eps", type=float, default=1e-4)
    p.set_defaults(fn=_cmd_bank_stats)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, OSError) as exc:
        print(f"scatter: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
