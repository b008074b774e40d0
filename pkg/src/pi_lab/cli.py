"""Command-line interface.

Subcommands: ``simulate`` (grid run to CSV), ``winners`` (evaluate one
profile file), ``appendix-check`` (golden fixtures), ``oracle``
(brute-force validation suite).
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import List, Optional

import numpy as np

from . import io as pio
from .fixtures import run_appendix_check
from .measures import MEASURES, SimulationConfig, run_simulation
from .methods import (
    RankedPairsCapExceeded,
    all_methods,
    evaluate,
    evaluate_margin,
    parse_method,
)
from .oracles import (
    all_profiles,
    beat_path_by_enumeration,
    potent_brute_force,
    ranked_pairs_by_order_enumeration,
    split_cycle_by_enumeration,
    witness_brute_force,
)


def _default_workers() -> int:
    env = os.environ.get("PI_LAB_WORKERS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _csv_list(text: str) -> List[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pilab",
        description="Monte-Carlo measurement of positive-involvement violations",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a simulation grid and write a CSV")
    sim.add_argument("--config", help="YAML config file; flags override its values")
    sim.add_argument("--paradigm", action="append", choices=["profile", "pair"])
    sim.add_argument("--model", action="append")
    sim.add_argument("--method", action="append")
    sim.add_argument("--comparison", action="append")
    sim.add_argument("--candidates", type=int, action="append")
    sim.add_argument("--voters", type=int, action="append")
    sim.add_argument("--trials", type=int)
    sim.add_argument("--coalition-frac", type=float, action="append")
    sim.add_argument("--measure", action="append", choices=list(MEASURES))
    sim.add_argument("--seed", type=int)
    sim.add_argument("--rp-cap", type=int)
    sim.add_argument("--coalition-draw", choices=["continue", "fresh"])
    sim.add_argument("--exhaustive", action="store_true", default=None)
    sim.add_argument("--workers", type=int)
    sim.add_argument("--out", required=True)

    win = sub.add_parser("winners", help="evaluate methods on a profile file")
    win.add_argument("--profile", required=True)
    win.add_argument(
        "--methods", default=None,
        help="comma-separated method names (default: all)",
    )
    win.add_argument("--rp-cap", type=int, default=10_000)

    sub.add_parser("appendix-check", help="run the golden fixture suite")

    orc = sub.add_parser("oracle", help="validate fast paths against brute force")
    orc.add_argument("--voters", type=int, default=3,
                     help="electorate size for the exhaustive profile sweep")
    orc.add_argument("--graphs", type=int, default=200,
                     help="random margin graphs for path/cycle checks")
    orc.add_argument("--seed", type=int, default=0)
    return parser


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------

_FLAG_TO_KEY = {
    "paradigm": "paradigms",
    "model": "models",
    "method": "methods",
    "comparison": "comparisons",
    "candidates": "candidates",
    "voters": "voters",
    "trials": "trials",
    "coalition_frac": "coalition_fracs",
    "measure": "measures",
    "seed": "seed",
    "rp_cap": "rp_cap",
    "coalition_draw": "coalition_draw",
    "exhaustive": "exhaustive",
    "workers": "workers",
}


def _cmd_simulate(args) -> int:
    data = {}
    if args.config:
        base = pio.load_config(args.config)
        data = {
            "paradigms": base.paradigms, "models": base.models,
            "methods": base.methods, "comparisons": base.comparisons,
            "candidates": base.candidates, "voters": base.voters,
            "trials": base.trials, "coalition_fracs": base.coalition_fracs,
            "seed": base.seed, "rp_cap": base.rp_cap,
            "coalition_draw": base.coalition_draw, "workers": base.workers,
            "exhaustive": base.exhaustive, "measures": base.measures,
        }
    for flag, key in _FLAG_TO_KEY.items():
        value = getattr(args, flag)
        if value is not None:
            data[key] = tuple(value) if isinstance(value, list) else value
    data.setdefault("workers", _default_workers())
    config = pio.config_from_mapping(data)
    print(
        f"simulate: {len(config.paradigms)} paradigm(s), "
        f"{len(config.models)} model(s), {len(config.methods)} method(s), "
        f"{config.trials} trials, {config.workers} worker(s)",
        file=sys.stderr,
    )
    rows = run_simulation(config)
    pio.write_results(rows, args.out)
    print(f"{len(rows)} rows -> {args.out}")
    return 0


# ---------------------------------------------------------------------------
# winners
# ---------------------------------------------------------------------------

def _cmd_winners(args) -> int:
    with open(args.profile, "r", encoding="utf-8") as fh:
        profile, labels = pio.parse_profile(fh.read())
    if args.methods:
        methods = [parse_method(name) for name in _csv_list(args.methods)]
    else:
        methods = all_methods()
    for method in methods:
        try:
            winners = evaluate(method, profile, rp_cap=args.rp_cap)
        except RankedPairsCapExceeded as exc:
            print(f"{method.family}/{method.variant}: skipped ({exc})")
            continue
        shown = ", ".join(
            labels[c] or str(c) for c in sorted(winners)
        )
        print(f"{method.family}/{method.variant}: {{{shown}}}")
    return 0


# ---------------------------------------------------------------------------
# appendix-check
# ---------------------------------------------------------------------------

def _cmd_appendix_check(_args) -> int:
    failures = 0
    for name, expected, got, ok in run_appendix_check():
        if ok:
            print(f"PASS {name}: {sorted(got)}")
        else:
            failures += 1
            print(f"FAIL {name}: expected {sorted(expected)}, got {sorted(got)}")
    if failures:
        print(f"{failures} fixture(s) failed", file=sys.stderr)
        return 1
    print("all fixtures passed")
    return 0


# ---------------------------------------------------------------------------
# oracle
# ---------------------------------------------------------------------------

def _random_margin_graph(rng, n: int):
    from .core import MarginGraph

    vals = np.array([-3, -1, 0, 1, 3])
    m = np.zeros((n, n), dtype=np.int64)
    for a in range(n):
        for b in range(a + 1, n):
            w = int(vals[rng.integers(len(vals))])
            m[a, b] = w
            m[b, a] = -w
    return MarginGraph(n, m)


def _cmd_oracle(args) -> int:
    rng = np.random.default_rng(args.seed)
    bad = 0

    methods = all_methods()
    total = 0
    for profile in all_profiles(3, args.voters):
        total += 1
        for method in methods:
            from .measures import has_potent_voter, pi_violation_witness

            fast = pi_violation_witness(method, profile)
            slow = witness_brute_force(method, profile)
            if (fast is None) != (len(slow) == 0):
                bad += 1
                print(f"witness mismatch: {method} on {profile.ballots}")
            if has_potent_voter(method, profile) != potent_brute_force(method, profile):
                bad += 1
                print(f"potency mismatch: {method} on {profile.ballots}")
    print(f"exhaustive witness/potency sweep: {total} profiles, {len(methods)} methods")

    sc = parse_method("split_cycle")
    bp = parse_method("beat_path")
    rp = parse_method("ranked_pairs")
    rp_checked = 0
    for _ in range(args.graphs):
        n = int(rng.integers(3, 6))
        mg = _random_margin_graph(rng, n)
        if evaluate_margin(sc, mg) != split_cycle_by_enumeration(mg):
            bad += 1
            print(f"split_cycle mismatch on\n{mg.m}")
        if evaluate_margin(bp, mg) != beat_path_by_enumeration(mg):
            bad += 1
            print(f"beat_path mismatch on\n{mg.m}")
        if n <= 4:
            tied = sum(
                1 for g in _margin_groups(mg) if len(g) > 1 for _ in g
            )
            if tied <= 3:
                rp_checked += 1
                if evaluate_margin(rp, mg) != ranked_pairs_by_order_enumeration(mg):
                    bad += 1
                    print(f"ranked_pairs mismatch on\n{mg.m}")
    print(f"graph checks: {args.graphs} graphs, {rp_checked} ranked-pairs instances")

    if bad:
        print(f"{bad} oracle mismatch(es)", file=sys.stderr)
        return 1
    print("all oracle checks passed")
    return 0


def _margin_groups(mg):
    groups = {}
    for a in range(mg.n):
        for b in range(mg.n):
            if a != b and mg.m[a, b] >= 0:
                groups.setdefault(int(mg.m[a, b]), []).append((a, b))
    return list(groups.values())


def main(argv: Optional[List[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "simulate": _cmd_simulate,
        "winners": _cmd_winners,
        "appendix-check": _cmd_appendix_check,
        "oracle": _cmd_oracle,
    }
    try:
        return handlers[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
