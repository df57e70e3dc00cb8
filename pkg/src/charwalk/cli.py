"""Command-line front end.

    charwalk walk-exact --kind rademacher --k 2 --m 3 --format json
    charwalk char-dist --p 7 --poly 0,1 --m 2 --stat signed
    charwalk verify --level fast

Exit status: 0 success, 1 a verdict failed, 2 invalid input or config,
3 resource limit.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import InvalidInputError, ResourceLimitError
from .experiments import run_experiment
from .report import DEFAULT_SEED, ExperimentConfig

EXIT_OK, EXIT_VERDICT, EXIT_CONFIG, EXIT_RESOURCE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="charwalk", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", help="write the payload here instead of stdout")
    common.add_argument("--threads", type=int, help="worker cap (default $CHARWALK_THREADS or 1)")
    common.add_argument("--seed", type=lambda s: int(s, 0), default=DEFAULT_SEED)

    p = sub.add_parser("walk-exact", parents=[common], help="exact k-step law on Z/mZ")
    p.add_argument("--kind", choices=("rademacher", "bernoulli01"), default="rademacher")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, required=True)

    p = sub.add_parser("walk-mc", parents=[common], help="Monte Carlo variance sum")
    p.add_argument("--kind", choices=("rademacher", "bernoulli01"), default="rademacher")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--trials", type=int, default=100000)
    p.add_argument("--mc-sigmas", dest="mc_sigmas", type=float, default=4.0)

    p = sub.add_parser("char-dist", parents=[common], help="residue counts of S_p, R_p or N_p")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--poly", required=True, help="coefficients, lowest degree first")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--stat", choices=("signed", "residue", "nonresidue"), default="signed")
    p.add_argument("--budget", type=float, default=10.0)

    p = sub.add_parser("block-census", parents=[common], help="length-L sign pattern census")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--poly", required=True)
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--tolerance", type=float, default=0.05)

    p = sub.add_parser("prime-walk", parents=[common], help="walks chi_p(q_1..q_k) over p <= N")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--gap-tolerance", dest="gap_tolerance", type=float, default=0.01)
    p.add_argument("--pattern-tolerance", dest="pattern_tolerance", type=float, default=0.10)

    p = sub.add_parser("weil-check", parents=[common], help="mixed sum against its Weil bound")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--P1", required=True)
    p.add_argument("--P2", default="")
    p.add_argument("--start", type=int, default=0)
    p.add_argument("--length", type=int)

    p = sub.add_parser("verify", parents=[common], help="run the acceptance suite")
    p.add_argument("--level", default="fast", help="fast or full")
    return parser


def config_from_args(args) -> ExperimentConfig:
    params = {k: v for k, v in vars(args).items()
              if k not in ("command", "out") and v is not None}
    return ExperimentConfig(args.command, params)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
        report = run_experiment(config)
    except InvalidInputError as exc:
        print(f"charwalk: invalid input: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ResourceLimitError, MemoryError) as exc:
        print(f"charwalk: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    payload = report.to_json() if args.format == "json" else report.to_csv()
    if args.out:
        Path(args.out).write_text(payload, newline="")
    else:
        sys.stdout.write(payload)
    for v in report.verdicts:
        if not v.passed:
            print(f"charwalk: FAILED {v.criterion}: measured {v.measured} vs {v.threshold}",
                  file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_VERDICT


if __name__ == "__main__":
    raise SystemExit(main())
