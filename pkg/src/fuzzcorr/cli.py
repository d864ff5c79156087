"""Command-line front end.

Subcommands::

    fuzzcorr fuzzify --input raw.csv [--zero 0] [--saturation 10] [--round 1]
    fuzzcorr mine    --input fuzzy.csv [--raw] --min-support .. --min-confidence ..
                     --min-correlation .. [--target NAME] [--format table|csv|json]
    fuzzcorr check   --input fuzzy.csv [same thresholds]

Exit status: 0 success, 2 input or configuration error, 3 miner and oracle
disagree, 4 instance too large for the oracle.
"""

import argparse
import json
import logging
import sys

from . import miner, oracle
from .dataset import (
    MembershipSpec,
    emit_csv,
    fuzzify_matrix,
    parse_fuzzy_csv,
    parse_usage_csv,
)
from .exceptions import FuzzCorrError, InstanceTooLarge
from .report import RENDERERS

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_MISMATCH = 3
EXIT_TOO_LARGE = 4

log = logging.getLogger("fuzzcorr")

DEFAULTS = {
    "zero": 0.0,
    "saturation": 10.0,
    "round": None,
    "min_support": 0.25,
    "min_confidence": 0.8,
    "min_correlation": 0.3,
    "target": "auto",
    "max_level": None,
    "format": "table",
    "raw": False,
    "jobs": 1,
}
_CASTS = {
    "zero": float, "saturation": float, "round": int,
    "min_support": float, "min_confidence": float, "min_correlation": float,
    "target": str, "max_level": int, "format": str, "jobs": int,
    "raw": lambda v: v.strip().lower() in ("1", "true", "yes", "on"),
    "input": str, "output": str,
}


class UsageError(FuzzCorrError):
    pass


def read_config_file(path):
    """Parse flat ``key = value`` lines; keys match the long flag names."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.lstrip("-").replace("-", "_")
            if key not in _CASTS:
                raise UsageError(f"{path}:{lineno}: unknown setting {key!r}")
            try:
                values[key] = _CASTS[key](value)
            except ValueError:
                raise UsageError(f"{path}:{lineno}: bad value {value!r} for {key}") from None
    return values


def _membership_args(p):
    p.add_argument("--zero", type=float, help="value at or below which membership is 0")
    p.add_argument("--saturation", type=float,
                   help="value at or above which membership is 1")
    p.add_argument("--round", type=int, help="round memberships half-up to N decimals")


def _miner_args(p):
    p.add_argument("--raw", action="store_true", default=None,
                   help="input holds raw usage counts; fuzzify first")
    p.add_argument("--min-support", type=float)
    p.add_argument("--min-confidence", type=float)
    p.add_argument("--min-correlation", type=float)
    p.add_argument("--target", help="item name, or 'auto' (default)")
    p.add_argument("--max-level", type=int)
    p.add_argument("--jobs", type=int, help="threads per level (-1: all cores)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fuzzcorr",
        description="Mine target-oriented fuzzy correlation rules.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--input", "-i", help="input CSV path ('-' for stdin)")
        p.add_argument("--output", "-o", help="output path (default stdout)")
        p.add_argument("--config", help="flat key = value settings file")

    p = sub.add_parser("fuzzify", help="turn raw usage counts into memberships")
    common(p)
    _membership_args(p)

    p = sub.add_parser("mine", help="mine rules and write a report")
    common(p)
    _membership_args(p)
    _miner_args(p)
    p.add_argument("--format", choices=sorted(RENDERERS))

    p = sub.add_parser("check", help="compare the miner with the exhaustive oracle")
    common(p)
    _membership_args(p)
    _miner_args(p)
    return parser


def resolve(args):
    """Merge defaults, config file and flags (flags win)."""
    settings = dict(DEFAULTS)
    if args.config:
        try:
            settings.update(read_config_file(args.config))
        except OSError as exc:
            raise UsageError(f"cannot read config {args.config}: {exc.strerror}") from None
    for key, value in vars(args).items():
        if value is not None and key not in ("command", "config", "verbose"):
            settings[key] = value
    if not settings.get("input"):
        raise UsageError("--input is required")
    if settings["format"] not in RENDERERS:
        raise UsageError(f"unknown format {settings['format']!r}")
    return settings


def _membership_spec(s):
    return MembershipSpec(s["zero"], s["saturation"], s["round"])


def _miner_config(s):
    return miner.MinerConfig(s["min_support"], s["min_confidence"],
                             s["min_correlation"], s["target"], s["max_level"])


def _read_input(path):
    if path == "-":
        return sys.stdin.buffer.read()
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read input {path}: {exc.strerror}") from None


def _load_dataset(s, spec):
    data = _read_input(s["input"])
    if spec is not None:
        return fuzzify_matrix(parse_usage_csv(data), spec)
    return parse_fuzzy_csv(data)


def _write(s, text):
    out = s.get("output")
    if not out or out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    try:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write output {out}: {exc.strerror}") from None


def run_fuzzify(s):
    spec = _membership_spec(s)
    raw = parse_usage_csv(_read_input(s["input"]))
    _write(s, emit_csv(fuzzify_matrix(raw, spec)))
    return EXIT_OK


def run_mine(s):
    cfg = _miner_config(s)
    ds = _load_dataset(s, _membership_spec(s) if s["raw"] else None)
    report = miner.mine(ds, cfg, n_jobs=s["jobs"])
    _write(s, RENDERERS[s["format"]](report))
    if not report.rules:
        log.info("no interesting rules found")
    return EXIT_OK


def run_check(s):
    cfg = _miner_config(s)
    ds = _load_dataset(s, _membership_spec(s) if s["raw"] else None)
    if ds.n_items > oracle.MAX_ITEMS:
        raise InstanceTooLarge(
            f"oracle handles at most {oracle.MAX_ITEMS} items, input has {ds.n_items}")
    levels = miner.mine_levels(ds, cfg, n_jobs=s["jobs"])
    rules = miner.extract_rules(ds, levels, cfg.min_confidence)
    ref_levels = oracle.oracle_levels(ds, cfg)
    ref_rules = oracle.oracle_mine(ds, cfg)
    diffs = oracle.diff_results(ds, levels, rules, ref_levels, ref_rules)
    if diffs:
        _write(s, json.dumps({"status": "mismatch", "differences": diffs},
                             indent=2) + "\n")
        return EXIT_MISMATCH
    _write(s, f"ok: miner and oracle agree on {len(levels.levels)} levels "
              f"and {len(rules)} rules\n")
    return EXIT_OK


COMMANDS = {"fuzzify": run_fuzzify, "mine": run_mine, "check": run_check}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        settings = resolve(args)
        return COMMANDS[args.command](settings)
    except InstanceTooLarge as exc:
        print(f"fuzzcorr: error: {exc}", file=sys.stderr)
        return EXIT_TOO_LARGE
    except FuzzCorrError as exc:
        print(f"fuzzcorr: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
