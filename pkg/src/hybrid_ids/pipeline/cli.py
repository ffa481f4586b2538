"""Command-line entry point: ``hybrid-ids <command> [--config F] [--seed N] [--out DIR] [--set k=v ...]``."""

from __future__ import annotations

import argparse
import logging
import sys

from .. import data as D
from .config import KEYS, ConfigError, load_config
from .manifest import verify
from .stages import StageError, cmd_baseline, cmd_preprocess, cmd_quantum, cmd_report, cmd_small_sample

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_MODEL = 0, 1, 2, 3

COMMANDS = {
    "preprocess": cmd_preprocess,
    "baseline": cmd_baseline,
    "small-sample": cmd_small_sample,
    "quantum": cmd_quantum,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    keys = "\n".join(f"  {k:<15} {h}" + (f" [default: {d}]" if d else "") for k, (d, h) in KEYS.items())
    parser = argparse.ArgumentParser(
        prog="hybrid-ids",
        description="Hybrid quantum-classical intrusion detection experiments on UNSW-NB15 flows.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="config keys (file lines or --set key=value):\n" + keys,
    )
    parser.add_argument("command", choices=[*COMMANDS, "all", "verify-manifest", "show-config"])
    parser.add_argument("--config", help="key=value config file")
    parser.add_argument("--seed", type=int, help="master seed (overrides config)")
    parser.add_argument("--out", default="runs/default", help="output directory (default: %(default)s)")
    parser.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override one config key")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def _overrides(args) -> dict[str, str]:
    out = {}
    for item in args.set:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    if args.seed is not None:
        out["seed"] = str(args.seed)
    return out


def _print_info(name: str, info: dict) -> None:
    if name == "preprocess":
        print(f"preprocess: {info['train_rows']} training rows, {info['test_rows']} testing rows")
    elif "models" in info:
        for model, entry in info["models"].items():
            if entry["status"] == "ok":
                flag = "" if entry.get("converged", True) else "  [warning: not converged]"
                print(f"{name}: {model:<11} accuracy {100 * entry['accuracy']:.1f}%{flag}")
            else:
                print(f"{name}: {model:<11} FAILED: {entry['error']}")
    elif name == "quantum":
        print(f"quantum: {info['kernel']} SVM on {info['n_qubits']}-qubit embeddings, accuracy {100 * info['accuracy']:.1f}%")
    elif name == "report":
        print(f"report: {info['rows']} rows")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args.config, _overrides(args), out_dir=args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    if args.command == "show-config":
        sys.stdout.write(cfg.dump())
        return EXIT_OK
    if args.command == "verify-manifest":
        problems = verify(cfg.out_dir)
        for p in problems:
            print(p, file=sys.stderr)
        if not problems:
            print(f"manifest OK: {cfg.out_dir}")
        return EXIT_DATA if problems else EXIT_OK

    names = ["preprocess", "baseline", "small-sample", "quantum", "report"] if args.command == "all" else [args.command]
    status = EXIT_OK
    for name in names:
        try:
            info = COMMANDS[name](cfg)
        except StageError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_DATA if exc.kind == "data" else EXIT_MODEL
        except D.DataError as exc:
            print(f"data error [{name}]: {exc}", file=sys.stderr)
            return EXIT_DATA
        _print_info(name, info)
        if any(e.get("status") == "failed" for e in info.get("models", {}).values()):
            status = EXIT_MODEL
    return status


if __name__ == "__main__":
    sys.exit(main())
