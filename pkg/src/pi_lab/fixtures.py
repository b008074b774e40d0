"""Golden regression fixtures: small elections with known winner sets.

Each fixture is a before/after pair: the "after" election adds one voter
whose favorite candidate wins before but not after.  Expected winner sets
were worked out by hand and cross-checked against the brute-force oracles
in :mod:`pi_lab.oracles`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple, Union

from .core import MarginGraph, Profile, Ranking
from .methods import MethodId, evaluate, evaluate_margin, parse_method

Election = Union[Profile, MarginGraph]


def profile_from_counts(letters: str, rows) -> Profile:
    """Build a profile from (count, "a b c ...") pairs, a=0, b=1, ..."""
    index = {ch: i for i, ch in enumerate(letters)}
    ballots = []
    for count, order in rows:
        ranking = Ranking([index[ch] for ch in order.split()])
        ballots.extend([ranking] * count)
    return Profile(len(letters), ballots)


# --- profiles -----------------------------------------------------------

BALDWIN_LEFT = profile_from_counts("abcd", [
    (1, "b a d c"),
    (2, "c b d a"),
    (1, "d a c b"),
    (1, "d b a c"),
    (1, "a c b d"),
])
BALDWIN_RIGHT = BALDWIN_LEFT + profile_from_counts("abcd", [(1, "c a b d")])

BUCKLIN_LEFT = profile_from_counts("abcde", [
    (1, "a b c e d"),
    (1, "a e c b d"),
    (1, "b e c d a"),
    (1, "c d a b e"),
])
BUCKLIN_RIGHT = BUCKLIN_LEFT + profile_from_counts("abcde", [(1, "c e b d a")])

COOMBS_LEFT = profile_from_counts("abcd", [
    (1, "a b d c"),
    (2, "c a d b"),
    (1, "a d b c"),
    (1, "b c d a"),
    (1, "c b a d"),
])
COOMBS_RIGHT = COOMBS_LEFT + profile_from_counts("abcd", [(1, "a d c b")])

NANSON_LEFT = profile_from_counts("abcd", [
    (1, "a c d b"),
    (1, "d b c a"),
    (3, "c b a d"),
    (3, "a d c b"),
    (1, "d c a b"),
    (1, "d c b a"),
])
NANSON_RIGHT = NANSON_LEFT + profile_from_counts("abcd", [(1, "c d b a")])

COPELAND_LEFT = profile_from_counts("abc", [
    (2, "a b c"),
    (1, "b c a"),
    (2, "c a b"),
])
COPELAND_RIGHT = COPELAND_LEFT + profile_from_counts("abc", [(1, "b a c")])

RPZT_LEFT = profile_from_counts("abcd", [
    (1, "c a d b"),  # the distinguished (tie-breaking) voter
    (2, "a b d c"),
    (2, "b d c a"),
])
RPZT_RIGHT = RPZT_LEFT + profile_from_counts("abcd", [(1, "b a c d")])

TOP_CYCLE_LEFT = profile_from_counts("abc", [
    (1, "a b c"),
    (1, "c a b"),
])
TOP_CYCLE_RIGHT = TOP_CYCLE_LEFT + profile_from_counts("abc", [(1, "b a c")])

# --- margin graphs (the realizing profiles are not given) ---------------

A, B, C, D = range(4)

BEAT_PATH_LEFT = MarginGraph.from_edges(4, {
    (A, B): 1, (A, D): 1, (B, D): 3, (C, B): 3, (C, A): 1, (D, C): 3,
}, voter_parity=1)
BEAT_PATH_RIGHT = MarginGraph.from_edges(4, {
    (A, D): 2, (B, D): 4, (C, B): 2, (D, C): 2,
}, voter_parity=0)

RANKED_PAIRS_LEFT = MarginGraph.from_edges(4, {
    (A, C): 8, (A, D): 2, (B, A): 2, (C, B): 2, (D, B): 4, (D, C): 6,
}, voter_parity=0)
RANKED_PAIRS_RIGHT = MarginGraph.from_edges(4, {
    (A, C): 9, (A, D): 1, (B, A): 1, (C, B): 3, (D, B): 5, (D, C): 7,
}, voter_parity=1)


@dataclass(frozen=True)
class Fixture:
    name: str
    method: str
    election: Election
    expected: frozenset
    # voter position whose removal recovers the "before" election, if any
    added_voter: Optional[int] = None


def _fs(*cands: int) -> frozenset:
    return frozenset(cands)


FIXTURES: Tuple[Fixture, ...] = (
    Fixture("baldwin/left", "baldwin", BALDWIN_LEFT, _fs(2)),
    Fixture("baldwin/right", "baldwin", BALDWIN_RIGHT, _fs(0), added_voter=6),
    Fixture("baldwin_put/left", "baldwin_put", BALDWIN_LEFT, _fs(2)),
    Fixture("baldwin_put/right", "baldwin_put", BALDWIN_RIGHT, _fs(0)),
    Fixture("beat_path/left", "beat_path", BEAT_PATH_LEFT, _fs(0, 1, 2, 3)),
    Fixture("beat_path/right", "beat_path", BEAT_PATH_RIGHT, _fs(0)),
    Fixture("bucklin/left", "bucklin", BUCKLIN_LEFT, _fs(2)),
    Fixture("bucklin/right", "bucklin", BUCKLIN_RIGHT, _fs(4), added_voter=4),
    Fixture("simplified_bucklin/left", "simplified_bucklin", BUCKLIN_LEFT, _fs(0, 2)),
    Fixture("simplified_bucklin/right", "simplified_bucklin", BUCKLIN_RIGHT, _fs(4)),
    Fixture("coombs/left", "coombs", COOMBS_LEFT, _fs(0)),
    Fixture("coombs/right", "coombs", COOMBS_RIGHT, _fs(2), added_voter=6),
    Fixture("coombs_put/left", "coombs_put", COOMBS_LEFT, _fs(0, 2)),
    Fixture("coombs_put/right", "coombs_put", COOMBS_RIGHT, _fs(2)),
    Fixture("copeland/left", "copeland", COPELAND_LEFT, _fs(0, 1, 2)),
    Fixture("copeland/right", "copeland", COPELAND_RIGHT, _fs(0), added_voter=5),
    Fixture("llull/left", "llull", COPELAND_LEFT, _fs(0, 1, 2)),
    Fixture("llull/right", "llull", COPELAND_RIGHT, _fs(0)),
    Fixture("uncovered_set/left", "uncovered_set", COPELAND_LEFT, _fs(0, 1, 2)),
    Fixture("uncovered_set/right", "uncovered_set", COPELAND_RIGHT, _fs(0, 2)),
    Fixture("uncovered_set_fishburn/left", "uncovered_set_fishburn",
            COPELAND_LEFT, _fs(0, 1, 2)),
    Fixture("uncovered_set_fishburn/right", "uncovered_set_fishburn",
            COPELAND_RIGHT, _fs(0)),
    Fixture("nanson_strict/left", "nanson_strict", NANSON_LEFT, _fs(2)),
    Fixture("nanson_strict/right", "nanson_strict", NANSON_RIGHT, _fs(3), added_voter=10),
    Fixture("ranked_pairs/left", "ranked_pairs", RANKED_PAIRS_LEFT, _fs(0, 3)),
    Fixture("ranked_pairs/right", "ranked_pairs", RANKED_PAIRS_RIGHT, _fs(0)),
    Fixture("ranked_pairs_zt/left", "ranked_pairs_zt", RPZT_LEFT, _fs(1)),
    Fixture("ranked_pairs_zt/right", "ranked_pairs_zt", RPZT_RIGHT, _fs(0), added_voter=5),
    Fixture("top_cycle/left", "top_cycle", TOP_CYCLE_LEFT, _fs(0, 1, 2)),
    Fixture("top_cycle/right", "top_cycle", TOP_CYCLE_RIGHT, _fs(0), added_voter=2),
)


def evaluate_fixture(fx: Fixture, rp_cap: int = 10_000):
    method = parse_method(fx.method)
    if isinstance(fx.election, MarginGraph):
        return evaluate_margin(method, fx.election, rp_cap=rp_cap)
    return evaluate(method, fx.election, rp_cap=rp_cap)


def run_appendix_check(rp_cap: int = 10_000):
    """Evaluate every fixture; returns (name, expected, got, ok) tuples."""
    results = []
    for fx in FIXTURES:
        got = evaluate_fixture(fx, rp_cap=rp_cap)
        results.append((fx.name, fx.expected, got, got == fx.expected))
    return results
