"""Command line: ``qbm-teleport <coeffs|sweep|phase-opt|check> [--config PATH] [--key=value ...] [--out PATH]``.

Exit codes: 0 success, 1 validation error, 2 numeric failure, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from .errors import NumericError, ValidationError
from .sweep import (SweepConfig, parse_config, run_coefficients,
                    run_phase_optimization, run_sweep)

log = logging.getLogger("qbm_teleport")

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3

COMMANDS = {
    "coeffs": run_coefficients,
    "sweep": run_sweep,
    "phase-opt": run_phase_optimization,
}


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qbm-teleport",
        description="Teleportation through a non-Markovian QBM channel: coefficient, "
                    "fidelity, entanglement and non-Markovianity sweeps as CSV.",
        epilog="Any configuration key can be overridden as --key=value, e.g. --x=10 --r=1.5.")
    parser.add_argument("command", choices=sorted([*COMMANDS, "check"]))
    parser.add_argument("--config", help="flat key=value configuration file")
    parser.add_argument("--out", help="output CSV path (stdout when absent)")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def _overrides(extra):
    out = {}
    for arg in extra:
        if not arg.startswith("--") or "=" not in arg:
            raise ValidationError(f"expected --key=value override, got {arg!r}")
        key, value = arg[2:].split("=", 1)
        out[key.replace("-", "_")] = value
    return out


def _load_config(args, extra) -> SweepConfig:
    text = ""
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            text = fh.read()
    overrides = _overrides(extra)
    if args.out:
        overrides["out_path"] = args.out
    return parse_config(text, overrides)


def _run_check(config: SweepConfig) -> int:
    from .checks import run_checks
    results = run_checks()
    for result in results:
        print(result.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_NUMERIC if failed else EXIT_OK


def main(argv=None) -> int:
    args, extra = _parser().parse_known_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        config = _load_config(args, extra)
        if args.command == "check":
            return _run_check(config)
        log.info("building %d-node grid up to tau=%g", config.grid_n, config.tau_max)
        table = COMMANDS[args.command](config)
        if config.out_path:
            with open(config.out_path, "w", encoding="utf-8", newline="") as fh:
                table.to_csv(fh)
        else:
            table.to_csv(sys.stdout)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except BrokenPipeError:
        # downstream closed early (e.g. piped into head)
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_OK
    except OSError as exc:
        print(f"I/O failure: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
