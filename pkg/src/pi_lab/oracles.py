"""Brute-force oracles used to validate the fast implementations.

Everything here is deliberately naive: direct definitional recomputation,
explicit enumeration of paths, cycles and tie-breaking orders.  These
routines are only meant for small instances.
"""

from __future__ import annotations

import itertools
from typing import Iterator, List, Optional, Tuple

import numpy as np

from .core import MarginGraph, Profile, Ranking
from .methods import MethodId, _lock_and_top, evaluate

WinnerSet = frozenset


def all_rankings(n: int) -> List[Ranking]:
    return [Ranking(p) for p in itertools.permutations(range(n))]


def all_profiles(n_candidates: int, n_voters: int) -> Iterator[Profile]:
    """Every profile of linear ballots, in lexicographic ballot order."""
    rankings = all_rankings(n_candidates)
    for combo in itertools.product(rankings, repeat=n_voters):
        yield Profile(n_candidates, combo)


def witness_brute_force(
    method: MethodId, profile: Profile, rp_cap: int = 10_000
) -> List[Tuple[int, int]]:
    """All (voter, candidate) PI-violation witnesses, by direct recomputation."""
    winners = evaluate(method, profile, rp_cap=rp_cap)
    out = []
    for i in range(profile.num_voters):
        x = profile.ballots[i].top()
        if x in winners:
            continue
        if x in evaluate(method, profile.without_voter(i), rp_cap=rp_cap):
            out.append((i, x))
    return out


def potent_brute_force(
    method: MethodId, profile: Profile, rp_cap: int = 10_000
) -> bool:
    winners = evaluate(method, profile, rp_cap=rp_cap)
    for i in range(profile.num_voters):
        if not evaluate(method, profile.without_voter(i), rp_cap=rp_cap) <= winners:
            return True
    return False


# ---------------------------------------------------------------------------
# path / cycle enumeration
# ---------------------------------------------------------------------------

def _simple_paths(m: np.ndarray, a: int, b: int) -> Iterator[List[int]]:
    n = m.shape[0]

    def extend(path: List[int]):
        last = path[-1]
        if last == b:
            yield path
            return
        for nxt in range(n):
            if nxt not in path and m[last, nxt] > 0:
                yield from extend(path + [nxt])

    if a != b:
        yield from extend([a])


def strongest_path_by_enumeration(mg: MarginGraph, a: int, b: int) -> int:
    """Max over simple positive-margin paths of the minimum edge weight."""
    best = 0
    for path in _simple_paths(mg.m, a, b):
        strength = min(int(mg.m[x, y]) for x, y in zip(path, path[1:]))
        best = max(best, strength)
    return best


def beat_path_by_enumeration(mg: MarginGraph) -> WinnerSet:
    n = mg.n
    s = [[strongest_path_by_enumeration(mg, a, b) for b in range(n)] for a in range(n)]
    return frozenset(
        b for b in range(n) if all(s[a][b] <= s[b][a] for a in range(n))
    )


def _simple_cycles(m: np.ndarray) -> Iterator[List[int]]:
    """All simple majority cycles, each rooted at its smallest vertex."""
    n = m.shape[0]

    def extend(path: List[int]):
        last = path[-1]
        if len(path) >= 3 and m[last, path[0]] > 0:
            yield path + [path[0]]
        for nxt in range(n):
            if nxt > path[0] and nxt not in path and m[last, nxt] > 0:
                yield from extend(path + [nxt])

    for start in range(n):
        yield from extend([start])


def split_cycle_by_enumeration(mg: MarginGraph) -> WinnerSet:
    """Split Cycle straight from the cycle formulation."""
    m = mg.m
    n = mg.n
    cycle_strength = {}
    for cycle in _simple_cycles(m):
        strength = min(int(m[x, y]) for x, y in zip(cycle, cycle[1:]))
        members = frozenset(cycle)
        for a in members:
            for b in members:
                if a != b:
                    key = (a, b)
                    cycle_strength[key] = max(cycle_strength.get(key, 0), strength)
    defeated = set()
    for a in range(n):
        for b in range(n):
            if a != b and m[a, b] > 0 and m[a, b] > cycle_strength.get((a, b), 0):
                defeated.add(b)
    return frozenset(range(n)) - defeated


def ranked_pairs_by_order_enumeration(mg: MarginGraph) -> WinnerSet:
    """Ranked Pairs via all linear orders of the pairs involved in ties."""
    m = mg.m
    n = mg.n
    pairs = [(a, b) for a in range(n) for b in range(n) if a != b and m[a, b] >= 0]
    weights = {}
    for p in pairs:
        weights.setdefault(int(m[p]), []).append(p)
    tied = [p for group in weights.values() if len(group) > 1 for p in group]
    winners = set()
    for order in itertools.permutations(tied):
        pos = {p: i for i, p in enumerate(order)}
        priority = sorted(pairs, key=lambda p: (-int(m[p]), pos.get(p, -1)))
        winners.add(_lock_and_top(n, priority))
    return frozenset(winners)
