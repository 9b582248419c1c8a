"""Command line entry point: ``duel run|list-builtins|check-scaling|plot``."""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .errors import InputError
from .harness import EXIT_INPUT, builtin_scenarios, emit_plot_script, run_scenario
from .wagerset import from_json, scales_into


def _load_set(text: str):
    """A wager set given inline as JSON or as a path to a JSON file."""
    p = Path(text)
    raw = p.read_text() if p.exists() else text
    try:
        return from_json(json.loads(raw))
    except json.JSONDecodeError as exc:
        raise InputError(f"cannot parse wager set {text!r}: {exc.msg}") from exc


def _run_one(args):
    path, out = args
    status = run_scenario(path, out)
    return path, status.code, status.message


def cmd_run(ns) -> int:
    jobs = []
    for path in ns.scenarios:
        out = None
        if ns.out is not None:
            out = Path(ns.out) if len(ns.scenarios) == 1 else Path(ns.out) / Path(path).stem
        jobs.append((path, out))
    if ns.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=ns.jobs) as pool:
            results = list(pool.map(_run_one, jobs))
    else:
        results = [_run_one(j) for j in jobs]
    worst = 0
    for path, code, msg in results:
        print(f"{path}: {msg}", file=sys.stderr if code else sys.stdout)
        worst = max(worst, code)
    return worst


def cmd_list_builtins(ns) -> int:
    for b in builtin_scenarios():
        if ns.json:
            continue
        print(f"{b['name']:30s} {b['scenario']['mode']:18s} {b['description']}")
    if ns.json:
        print(json.dumps(builtin_scenarios(), indent=2))
    return 0


def cmd_check_scaling(ns) -> int:
    try:
        a, b = _load_set(ns.a), _load_set(ns.b)
        res = scales_into(a, b)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(json.dumps(res.to_json()))
    if res.reason:
        print(f"reason: {res.reason}", file=sys.stderr)
    return 0


def cmd_plot(ns) -> int:
    try:
        script = emit_plot_script(ns.csv, ns.output)
    except (InputError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if ns.output is None:
        sys.stdout.write(script)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="duel", description="Restricted-wager martingale experiments.")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run scenario files or built-in scenario names")
    r.add_argument("scenarios", nargs="+", help="scenario JSON path or built-in name")
    r.add_argument("--out", help="output directory (default: out/<name>)")
    r.add_argument("--jobs", type=int, default=1, help="worker processes for several scenarios")
    r.set_defaults(func=cmd_run)

    lb = sub.add_parser("list-builtins", help="list built-in scenarios")
    lb.add_argument("--json", action="store_true", help="print the full scenario definitions")
    lb.set_defaults(func=cmd_list_builtins)

    cs = sub.add_parser("check-scaling", help="decide whether some multiple of A lies inside B")
    cs.add_argument("--a", required=True, help="wager set A as JSON text or file")
    cs.add_argument("--b", required=True, help="wager set B as JSON text or file")
    cs.set_defaults(func=cmd_check_scaling)

    pl = sub.add_parser("plot", help="emit a gnuplot script for a trajectory CSV")
    pl.add_argument("csv")
    pl.add_argument("-o", "--output", help="write the script here instead of stdout")
    pl.set_defaults(func=cmd_plot)
    return p


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    return ns.func(ns)


if __name__ == "__main__":
    sys.exit(main())
