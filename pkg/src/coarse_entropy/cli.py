"""Command-line entry point.

Subcommands: estimate, reproduce, bcd, check-map, list-presets.
Exit codes: 0 success, 2 invalid config, 3 budget exceeded (partial results
still written), 4 preset assertion failed. The ORBIT_BUDGET environment
variable overrides every configured budget.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

from .errors import BudgetExceededError
from .presets import (PRESETS, ConfigError, RunResult, reproduce, run_config)


def _budget_override() -> Optional[int]:
    raw = os.environ.get("ORBIT_BUDGET")
    if raw is None:
        return None
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"ORBIT_BUDGET must be an integer, got {raw!r}") from None
    if value <= 0:
        raise ConfigError("ORBIT_BUDGET must be positive")
    return value


def _load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None


def _emit(result: RunResult, out_json: Optional[str], out_csv: Optional[str],
          cfg: Optional[dict] = None) -> None:
    paths = (cfg or {}).get("output", {})
    json_path = out_json or paths.get("json")
    csv_path = out_csv or paths.get("csv")
    if json_path:
        with open(json_path, "w") as fh:
            json.dump(result.report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    if csv_path and result.csv_lines is not None:
        with open(csv_path, "w") as fh:
            fh.write("\n".join(result.csv_lines) + "\n")
    print(result.summary)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="coarse-entropy",
        description="Estimate coarse entropy by counting separated "
                    "delta-pseudoorbits; check coarse-map certificates.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_est = sub.add_parser("estimate", help="run the pipeline a config declares")
    p_est.add_argument("--config", required=True)
    p_est.add_argument("--out-json")
    p_est.add_argument("--out-csv")

    p_rep = sub.add_parser("reproduce", help="run a preset and its assertion")
    p_rep.add_argument("preset", metavar="PRESET_ID")
    p_rep.add_argument("--out-json")
    p_rep.add_argument("--out-csv")
    p_rep.add_argument("--export-config", metavar="PATH",
                       help="write the preset's config JSON and exit")

    p_bcd = sub.add_parser("bcd", help="box-counting dimension of a region")
    p_bcd.add_argument("--config", required=True)
    p_bcd.add_argument("--out-json")

    p_chk = sub.add_parser("check-map", help="check coarse-map certificates")
    p_chk.add_argument("--config", required=True)
    p_chk.add_argument("--out-json")

    sub.add_parser("list-presets", help="list preset ids")

    args = parser.parse_args(argv)
    try:
        budget = _budget_override()
        if args.command == "list-presets":
            for pid in sorted(PRESETS):
                print(pid)
            return 0
        if args.command == "reproduce":
            if args.export_config:
                if args.preset not in PRESETS:
                    raise ConfigError(f"unknown preset {args.preset!r}")
                with open(args.export_config, "w") as fh:
                    json.dump(PRESETS[args.preset], fh, indent=2, sort_keys=True)
                    fh.write("\n")
                print(f"wrote config for {args.preset}")
                return 0
            result = reproduce(args.preset, budget)
            _emit(result, args.out_json, args.out_csv)
            return result.exit_code
        cfg = _load_config(args.config)
        if args.command == "bcd" and cfg.get("kind") != "bcd":
            raise ConfigError("the bcd command needs a config with kind 'bcd'")
        if args.command == "check-map" and cfg.get("kind") not in (
                "check_map", "conjugacy", "iterate_defect"):
            raise ConfigError("check-map needs kind check_map, conjugacy, "
                              "or iterate_defect")
        result = run_config(cfg, budget)
        _emit(result, getattr(args, "out_json", None),
              getattr(args, "out_csv", None), cfg)
        return result.exit_code
    except ConfigError as exc:
        print(f"invalid config: {exc}", file=sys.stderr)
        return 2
    except (KeyError, TypeError, ValueError) as exc:
        print(f"invalid config: {exc}", file=sys.stderr)
        return 2
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
