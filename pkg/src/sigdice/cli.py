"""Command-line interface.

Exit codes: 0 on success, 1 if any embedded expected-value check fails,
2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import sys

from .errors import SigdiceError
from .harness import OUT_DIR_ENV, RunConfig, resolve_out_path, run


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n-samples", type=int, default=1000, help="base signal length (default 1000)")
    p.add_argument("--amplitude", type=float, default=1.0, help="base sine amplitude (default 1.0)")
    p.add_argument("--periods", type=float, default=1.0, help="base sine periods (default 1.0)")
    p.add_argument("--epsilon", type=float, default=1e-8, help="sdsc denominator epsilon (default 1e-8)")
    p.add_argument("--gamma", type=float, default=1.0, help="soft-dtw smoothing (default 1.0)")
    p.add_argument("--seed", type=int, default=0, help="seed for noise/jitter fixtures (default 0)")
    p.add_argument(
        "--format", choices=("csv", "markdown", "ndjson"), default="csv", dest="fmt", help="output format"
    )
    p.add_argument("--out", default=None, help=f"output path (default: ${OUT_DIR_ENV}/<command>.<ext> or stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sigdice",
        description="Structure-aware signal similarity tables: metric panel, gradient sensitivity, stats.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table1", help="metric panel over the seven reconstructed toy cases")
    _add_common(p)

    p = sub.add_parser("sensitivity", help="gradient-norm table (mse / mae / exact-subgradient sdsc)")
    _add_common(p)

    p = sub.add_parser("alpha-sweep", help="sigmoid sdsc-loss gradient norms across an alpha ladder")
    _add_common(p)
    p.add_argument(
        "--alpha",
        type=float,
        action="append",
        default=None,
        help="alpha value, repeatable (default: 1 10 100)",
    )

    p = sub.add_parser("stats", help="pearson + band dispersion over paired (mse, sdsc) samples")
    _add_common(p)
    p.add_argument("--samples", default=None, help="CSV of paired samples with header mse,sdsc")
    p.add_argument("--synthetic", type=int, default=0, help="generate N synthetic pairs instead of reading a file")
    p.add_argument("--band-center", type=float, default=1.5, help="mse band center (default 1.5)")
    p.add_argument("--band-eps", type=float, default=0.05, help="mse band half-width (default 0.05)")

    p = sub.add_parser("compare", help="metric panel over two signal CSV files")
    _add_common(p)
    p.add_argument("file_e", help="reference signal CSV")
    p.add_argument("file_r", help="candidate signal CSV")
    p.add_argument("--grads", action="store_true", help="also report gradient norms")
    p.add_argument("--lambda-sdsc", type=float, default=0.5, help="hybrid weight for the sdsc loss")
    p.add_argument("--lambda-mse", type=float, default=0.5, help="hybrid weight for mse")

    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    alphas = (1.0, 10.0, 100.0)
    if getattr(args, "alpha", None):
        alphas = tuple(args.alpha)
    return RunConfig(
        command=args.command,
        n_samples=args.n_samples,
        amplitude=args.amplitude,
        periods=args.periods,
        alphas=alphas,
        lambda_sdsc=getattr(args, "lambda_sdsc", 0.5),
        lambda_mse=getattr(args, "lambda_mse", 0.5),
        epsilon=args.epsilon,
        gamma=args.gamma,
        seed=args.seed,
        fmt=args.fmt,
        out=args.out,
        samples_path=getattr(args, "samples", None),
        synthetic_n=getattr(args, "synthetic", 0),
        band_center=getattr(args, "band_center", 1.5),
        band_eps=getattr(args, "band_eps", 0.05),
        file_e=getattr(args, "file_e", None),
        file_r=getattr(args, "file_r", None),
        with_grads=getattr(args, "grads", False),
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = config_from_args(args)
    try:
        report, text = run(cfg)
    except (SigdiceError, OSError) as exc:
        print(f"sigdice: error: {exc}", file=sys.stderr)
        return 2
    path = resolve_out_path(cfg)
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        print(f"wrote {path}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return 1 if report.failed else 0


if __name__ == "__main__":
    raise SystemExit(main())
