"""Command-line entry point: ``irs-est <subcommand> [flags]``.

Exit codes: 0 success, 1 usage or configuration error, 2 runtime failure.
Errors are reported as a single ``irs-est: error: ...`` line on stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import replace
from importlib import resources

from .experiments import ConfigError, ExperimentConfig, run_all, run_hist_fit, run_mse_vs_energy, run_mse_vs_length
from .rand_core import MAX_SEED

__all__ = ["load_config", "build_parser", "parse_and_dispatch", "main"]

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2
OUT_ENV = "IRS_EST_OUT"
DEFAULTS_NAME = "defaults"

log = logging.getLogger("irs_est")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def load_config(path: str) -> ExperimentConfig:
    """Read a JSON config; ``"defaults"`` selects the bundled default file."""
    if path == DEFAULTS_NAME:
        text = resources.files("irs_est").joinpath("data/default_config.json").read_text(encoding="utf-8")
        source = "<defaults>"
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from None
        source = path
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{source} is not valid JSON: {exc}") from None
    return ExperimentConfig.from_dict(data)


def _seed(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer in [0, 2**64 - 1], got {text!r}") from None
    if not 0 <= value <= MAX_SEED:
        raise argparse.ArgumentTypeError(f"seed must be an integer in [0, 2**64 - 1], got {text!r}")
    return value


def _link(text):
    if text not in ("1", "2", "3"):
        raise argparse.ArgumentTypeError(f"link must be 1, 2, or 3, got {text!r}")
    return int(text)


def _positive_int(name):
    def parse(text):
        try:
            value = int(text)
        except ValueError:
            value = 0
        if value < 1:
            raise argparse.ArgumentTypeError(f"{name} must be an integer >= 1, got {text!r}")
        return value

    return parse


def _fisher_mode(text):
    if text not in ("magnitude", "complex"):
        raise argparse.ArgumentTypeError(f"fisher mode must be magnitude or complex, got {text!r}")
    return text


PIPELINES = {
    "hist-fit": "histogram of |J| with its Rayleigh fit",
    "mse-energy": "MSE and CRLBs against total pilot energy",
    "mse-length": "MSE and CRLBs against pilot length",
    "all": "every dataset plus summary.json",
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="irs-est", description="Double-IRS cascaded channel estimation experiments.")
    sub = parser.add_subparsers(dest="command", metavar="{hist-fit,mse-energy,mse-length,all,validate}")
    sub.required = True
    for name, helptext in PIPELINES.items():
        p = sub.add_parser(name, help=helptext, description=helptext)
        p.add_argument("--config", required=True, metavar="PATH",
                       help="JSON config file, or 'defaults' for the bundled configuration")
        p.add_argument("--seed", type=_seed, help="64-bit unsigned seed (overrides experiment.seed)")
        p.add_argument("--out", metavar="DIR",
                       help=f"output directory (default: ${OUT_ENV}, then experiment.out_dir)")
        p.add_argument("--link", type=_link, help="cascade to estimate: 1, 2, or 3")
        p.add_argument("--trials", type=_positive_int("trials"), help="Monte Carlo trials per grid point")
        p.add_argument("--n1", type=_positive_int("n1"), help="number of IRS-1 elements (overrides params.N1)")
        p.add_argument("--fisher-mode", type=_fisher_mode, metavar="{magnitude,complex}",
                       help="prior Fisher information estimator")
    v = sub.add_parser("validate", help="run the invariant suite", description="run the invariant suite")
    v.add_argument("--seed", type=_seed, default=0, help="64-bit unsigned seed (default 0)")
    return parser


def _apply_overrides(cfg: ExperimentConfig, args) -> ExperimentConfig:
    changes = {}
    if args.seed is not None:
        changes["seed"] = args.seed
    if args.link is not None:
        changes["link"] = args.link
    if args.trials is not None:
        changes["trials"] = args.trials
    if args.fisher_mode is not None:
        changes["fisher_mode"] = args.fisher_mode
    if args.n1 is not None:
        try:
            changes["params"] = replace(cfg.params, N1=args.n1)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    out = args.out or os.environ.get(OUT_ENV)
    if out:
        changes["out_dir"] = out
    return cfg.replace(**changes) if changes else cfg


def _dispatch(args) -> int:
    if args.command == "validate":
        from .validation import format_report, run_checks

        results = run_checks(args.seed)
        print(format_report(results))
        return EXIT_OK if all(r.passed for r in results) else EXIT_RUNTIME

    cfg = _apply_overrides(load_config(args.config), args)
    if args.command == "hist-fit":
        res = run_hist_fit(cfg)
        print(f"hist-fit elements={res.elements} b_hat={res.fit.b_hat:.6g} ks_stat={res.fit.ks_stat:.6g} -> {res.path}")
    elif args.command == "mse-energy":
        print(f"mse-energy -> {run_mse_vs_energy(cfg).path}")
    elif args.command == "mse-length":
        print(f"mse-length -> {run_mse_vs_length(cfg).path}")
    else:
        summary = run_all(cfg)
        for name, info in summary["pipelines"].items():
            print(f"{name}: {info['status']} {info.get('path', info.get('error', ''))}")
        if not summary["ok"]:
            failed = [n for n, i in summary["pipelines"].items() if i["status"] != "ok"]
            raise RuntimeError("pipelines failed: " + ", ".join(failed))
    return EXIT_OK


def _fail(code: int, message: str) -> int:
    print(f"irs-est: error: {' '.join(str(message).split())}", file=sys.stderr)
    return code


def parse_and_dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        return _fail(EXIT_USAGE, exc)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return _dispatch(args)
    except ConfigError as exc:
        return _fail(EXIT_USAGE, exc)
    except Exception as exc:
        return _fail(EXIT_RUNTIME, exc)


def main() -> None:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    sys.exit(parse_and_dispatch())


if __name__ == "__main__":
    main()
