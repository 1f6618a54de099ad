"""Command line entry point ``flrw-blowup``.

Exit codes: 0 success, 1 theorem not applicable (``check``/``bound``),
2 configuration or usage error, 3 ANOMALY (a theorem prediction failed).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import scenarios
from .config import ConfigError, from_dict
from .harness import WORKERS_ENV, assess, run_config, sweep

EXIT_OK = 0
EXIT_NOT_APPLICABLE = 1
EXIT_CONFIG = 2
EXIT_ANOMALY = 3


def _tree_and_cfg(ref, out=None):
    """Resolve a config path or a built-in scenario name."""
    text = None
    if ref in scenarios.names():
        tree = scenarios.scenario_tree(ref)
    else:
        try:
            with open(ref) as fh:
                text = fh.read()
        except OSError as e:
            raise ConfigError(f"cannot read config: {e.strerror}", source=ref) from None
        try:
            tree = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(e.msg, e.lineno, ref) from None
    if out is not None and isinstance(tree, dict):
        tree = dict(tree, output_dir=out)
    return tree, from_dict(tree, text, ref)


def _print_check(cos, adm, hyp):
    print("background audit")
    print(f"  expansion bound at t0 ok = {cos.initial_time_ok}")
    print(f"  curved mass positive    = {cos.curved_mass_positive}")
    print(f"  curved mass nonincrease = {cos.curved_mass_nonincreasing}")
    print(f"  passed                  = {cos.passed}")
    print("nonlinearity")
    print(f"  epsilon condition       = {adm.epsilon_condition}")
    print(f"  exponent bound ok       = {adm.lipschitz_exponent_ok}")
    print(f"  admissible              = {adm.admissible}")
    print("initial data")
    for line in hyp.summary_lines():
        print("  " + line)


def _print_bound(bound):
    if bound is None:
        print("bound: not defined ((u0, u1) <= 0 or u0 = 0)")
        return
    print(f"bound t0 + B0/(eps B'0)   = {bound.variant_theorem:.12g}")
    print(f"bound t0 + 4B0/(eps B'0)  = {bound.variant_proof:.12g}")


def cmd_check(args):
    _, cfg = _tree_and_cfg(args.config)
    _, cos, adm, hyp, _, _ = assess(cfg)
    _print_check(cos, adm, hyp)
    return EXIT_OK if hyp.theorem_applies else EXIT_NOT_APPLICABLE


def cmd_bound(args):
    _, cfg = _tree_and_cfg(args.config)
    _, _, _, hyp, bound, _ = assess(cfg)
    for line in hyp.summary_lines():
        print(line)
    _print_bound(bound)
    return EXIT_OK if hyp.theorem_applies else EXIT_NOT_APPLICABLE


def cmd_simulate(args):
    _, cfg = _tree_and_cfg(args.config, args.out)
    res = run_config(cfg, write=True)
    print(f"run {res.run_id}: {res.outcome if res.outcome is not None else 'skipped'}")
    print(f"theorem applies = {res.hypotheses.theorem_applies}")
    _print_bound(res.bound)
    for w in res.warnings:
        print("warning: " + w)
    print(f"summary written under {cfg.output_dir}/{res.run_id}/")
    return EXIT_ANOMALY if res.anomaly else EXIT_OK


def cmd_sweep(args):
    tree, _ = _tree_and_cfg(args.config, args.out)
    out = tree.get("output_dir", "runs")
    try:
        text, rows, anomaly = sweep(tree, args.vary, workers=args.workers, out_dir=out)
    except (ValueError, KeyError) as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError(str(e).strip("'\""), source=args.config) from None
    sys.stdout.write(text)
    return EXIT_ANOMALY if anomaly else EXIT_OK


def cmd_scenarios(args):
    for name in scenarios.names():
        print(f"{name:14s} {scenarios.PROVENANCE[name]}")
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="flrw-blowup",
                                description="Klein-Gordon blowup laboratory on FLRW backgrounds")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)
    for name, fn, hlp in [("check", cmd_check, "audit background, nonlinearity and initial data"),
                          ("bound", cmd_bound, "hypotheses and the blowup-time bound"),
                          ("simulate", cmd_simulate, "full run, writes summary.json and series.csv")]:
        sp = sub.add_parser(name, help=hlp)
        sp.add_argument("config", help="JSON config path or built-in scenario name")
        if name == "simulate":
            sp.add_argument("--out", help="output directory (overrides output_dir)")
        sp.set_defaults(func=fn)
    sp = sub.add_parser("sweep", help="Cartesian parameter sweep")
    sp.add_argument("config")
    sp.add_argument("--vary", action="append", required=True, metavar="KEY=LO:HI:STEPS")
    sp.add_argument("--workers", type=int, default=None,
                    help=f"worker processes (default: ${WORKERS_ENV} or min(8, cpu count))")
    sp.add_argument("--out", help="output directory")
    sp.set_defaults(func=cmd_sweep)
    sp = sub.add_parser("scenarios", help="list built-in scenarios")
    sp.set_defaults(func=cmd_scenarios)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_CONFIG if e.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
