"""Command line: ``adelia verify|adeles|mv --config <path>``."""
from __future__ import annotations

import argparse
import json
import os
import sys

from .config import parse_config
from .errors import AdeliaError, ConfigError

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _seed(args, cfg):
    """--seed, then ADELIA_SEED, then the config's seed, then 0."""
    if args.seed is not None:
        return args.seed
    env = os.environ.get("ADELIA_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ConfigError(f"ADELIA_SEED must be an integer, got {env!r}", "ADELIA_SEED") from None
    return cfg.seed if cfg.seed is not None else 0


def _u64(text):
    n = int(text)
    if not 0 <= n < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return n


def build_parser():
    p = argparse.ArgumentParser(prog="adelia", description="Exact checks of adelic descent shadows.")
    sub = p.add_subparsers(dest="command", required=True)
    for name, helptext in (("verify", "run the configured suites"),
                           ("adeles", "print the carriers A(T, F)"),
                           ("mv", "run the Mayer-Vietoris K-shadow audit only")):
        c = sub.add_parser(name, help=helptext)
        c.add_argument("--config", required=True)
        c.add_argument("--out")
        c.add_argument("--seed", type=_u64)
        c.add_argument("--jobs", type=int, default=1)
    return p


def _emit(report, out):
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None):
    from .suites import carriers_report, run_suites

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_PASS
    try:
        cfg = parse_config(args.config)
        seed = _seed(args, cfg)
        if args.command == "adeles":
            _emit(carriers_report(cfg, seed), args.out)
            return EXIT_PASS
        suites = ["kv-check"] if args.command == "mv" else None
        report = run_suites(cfg, seed, suites=suites, jobs=max(1, args.jobs))
    except ConfigError as exc:
        print(f"adelia: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except AdeliaError as exc:
        print(f"adelia: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"adelia: environment error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    _emit(report, args.out)
    return EXIT_PASS if report["verdict"] == "pass" else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
