"""Command-line entry point for the experiment harness.

Exit codes: 0 on success, 1 for configuration errors (bad flags, bad config
file, unknown keys), 2 for runtime or I/O failures.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .harness import ConfigError, execute, parse_config

_SUBCOMMANDS = {
    "sweep-m": "sweep-m-fixed-L",
    "sweep-m-span": "sweep-m-fixed-span",
    "sweep-k": "sweep-k",
    "convergence": "convergence",
    "oracle-check": "oracle-check",
}


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems as ConfigError (exit code 1)."""

    def error(self, message: str):  # noqa: D401
        raise ConfigError(message)


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", metavar="FILE", help="flat JSON config file")
    p.add_argument("--seed", type=int, help="master seed (field master_seed)")
    p.add_argument("--drops", type=int, help="Monte-Carlo drops per cell (field n_drops)")
    p.add_argument("--out-dir", default="out", metavar="DIR", help="output directory")
    p.add_argument("--kappa", help="waveguide attenuation values in dB/m, e.g. '0,0.08'")
    p.add_argument(
        "--design-kappa", type=float, metavar="K",
        help="optimize under this attenuation, evaluate under --kappa",
    )
    p.add_argument("--restarts", type=int, help="extra random-init AO restarts per run")
    p.add_argument("--quiet", action="store_true", help="suppress the aggregate summary")
    p.add_argument("--log-y", action="store_true", help="log-scale MSE axis in the plot")
    p.add_argument("--timing", action="store_true",
                   help="add the wall-clock column to results.csv (breaks reproducibility)")
    p.add_argument("--sweep", help="sweep values, e.g. '1,2,5,10'")
    p.add_argument("--q", type=int, help="grid points per segment (field q_grid)")
    p.add_argument("--schemes", help="schemes to run, e.g. 'SS,SA1,SA2,PASS'")
    p.add_argument("--k", type=int, help="number of users (field k_users)")
    p.add_argument("--m", type=int, help="number of segments (field m_segments)")
    p.add_argument("--seg-length", type=float, help="segment length in meters")
    p.add_argument("--d-x", type=float, help="region length in meters")


_FLAG_TO_FIELD = {
    "seed": "master_seed",
    "drops": "n_drops",
    "kappa": "kappa_db_per_m",
    "design_kappa": "design_kappa",
    "restarts": "restarts",
    "sweep": "sweep",
    "q": "q_grid",
    "schemes": "schemes",
    "k": "k_users",
    "m": "m_segments",
    "seg_length": "seg_length",
    "d_x": "d_x",
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="swan-aircomp",
        description="Monte-Carlo MSE experiments for segmented-waveguide "
        "pinching-antenna over-the-air computation",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, kind in _SUBCOMMANDS.items():
        p = sub.add_parser(name, help=f"run a {kind} experiment")
        p.set_defaults(kind=kind)
        _add_common_flags(p)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        overrides = {}
        for flag, field in _FLAG_TO_FIELD.items():
            value = getattr(args, flag, None)
            if value is not None:
                overrides[field] = value
        spec = parse_config(path=args.config, kind=args.kind, overrides=overrides)
        execute(
            spec,
            args.out_dir,
            quiet=args.quiet,
            log_y=args.log_y,
            include_elapsed=args.timing,
        )
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except KeyboardInterrupt:
        return 2
    except (OSError, RuntimeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
