"""Command-line entry point: ``uavbs train|eval|compare|export``.

Exit codes: 0 success, 1 internal error, 2 config/usage error, 3 checkpoint mismatch.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from . import harness
from .config import SEED_ENV, ConfigError, load_config

EXIT_OK, EXIT_INTERNAL, EXIT_USAGE, EXIT_CHECKPOINT = 0, 1, 2, 3

log = logging.getLogger("uavbs")


def resolve_seed(cfg, cli_seed, environ=os.environ):
    """Apply seed precedence (``--seed`` > ``$UAVBS_SEED`` > config); returns (cfg, source, env value)."""
    env = environ.get(SEED_ENV)
    if env is not None:
        try:
            env_seed = int(env)
        except ValueError:
            raise ConfigError(f"{SEED_ENV}={env!r} is not an integer") from None
    if cli_seed is not None:
        return cfg.with_seed(cli_seed), "cli", env
    if env is not None:
        return cfg.with_seed(env_seed), "env", env
    return cfg, "config", None


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="uavbs", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true", help="log progress")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("train", help="train one method and write a run directory")
    t.add_argument("--config", required=True)
    t.add_argument("--preset", choices=("desk", "paper"))
    t.add_argument("--seed", type=int)
    t.add_argument("--out", help="run directory (default: <output_dir>/<method>-seed<seed>)")
    t.add_argument("--resume", action="store_true", help="continue from the run directory's saved state")

    e = sub.add_parser("eval", help="greedy rollouts of a checkpoint with a per-step trace")
    e.add_argument("--config", required=True)
    e.add_argument("--checkpoint", required=True)
    e.add_argument("--preset", choices=("desk", "paper"))
    e.add_argument("--seed", type=int)
    e.add_argument("--episodes", type=int)
    e.add_argument("--out")

    c = sub.add_parser("compare", help="train and evaluate methods over seeds")
    c.add_argument("--config", required=True)
    c.add_argument("--methods", required=True, help="comma list of proposed,random,comp1,comp2")
    c.add_argument("--seeds", required=True, type=_int_list)
    c.add_argument("--preset", choices=("desk", "paper"))
    c.add_argument("--out")

    x = sub.add_parser("export", help="write figure data from a run directory")
    x.add_argument("--run", required=True)
    x.add_argument("--figure", required=True, help=", ".join(harness.FIGURE_KEYS))
    x.add_argument("--out")
    return p


def _dispatch(args) -> None:
    if args.command == "train":
        cfg = load_config(args.config, args.preset)
        cfg, source, env = resolve_seed(cfg, args.seed)
        run_dir = harness.run_training(cfg, args.out, resume=args.resume, seed_source=source, env_seed=env)
        print(run_dir)
    elif args.command == "eval":
        cfg = load_config(args.config, args.preset)
        cfg, _, _ = resolve_seed(cfg, args.seed)
        if args.episodes is not None and args.episodes < 1:
            raise ConfigError("--episodes must be >= 1")
        print(harness.run_inference(cfg, args.checkpoint, args.out, args.episodes))
    elif args.command == "compare":
        cfg = load_config(args.config, args.preset)
        try:
            methods = [m.strip().lower() for m in args.methods.split(",") if m.strip()]
            methods = [harness.Method(m) for m in methods]
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        print(harness.compare_methods(cfg, methods, args.seeds, args.out))
    else:
        print(harness.export_figure_data(args.run, args.figure, args.out))


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        _dispatch(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except harness.CheckpointMismatch as exc:
        print(f"checkpoint mismatch: {exc}", file=sys.stderr)
        return EXIT_CHECKPOINT
    except Exception as exc:
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
