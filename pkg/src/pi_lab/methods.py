"""Voting methods: Profile -> nonempty winner set.

Margin-based rules also accept a MarginGraph directly through
``evaluate_margin``.  Winner sets are frozensets of candidate ids.
All computations are exact integer arithmetic.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Tuple

import numpy as np

from .core import MarginGraph, Profile, borda_vector

WinnerSet = FrozenSet[int]


class RankedPairsCapExceeded(Exception):
    """Too many tie-breaking orders to enumerate within the configured cap."""


MARGIN_BASED_FAMILIES = {
    "copeland",
    "top_cycle",
    "uncovered_set",
    "ranked_pairs",
    "beat_path",
    "split_cycle",
    "minimax",
}


@dataclass(frozen=True)
class MethodId:
    family: str
    variant: str

    @property
    def anonymous(self) -> bool:
        return self.family != "ranked_pairs_zt"

    @property
    def margin_based(self) -> bool:
        return self.family in MARGIN_BASED_FAMILIES

    def __str__(self) -> str:
        return canonical_name(self)


# ---------------------------------------------------------------------------
# helpers on the m x n rank matrix
# ---------------------------------------------------------------------------

def _first_place_counts(R: np.ndarray, remaining: List[int]) -> np.ndarray:
    A = R[:, remaining]
    return np.bincount(A.argmin(axis=1), minlength=len(remaining))


def _last_place_counts(R: np.ndarray, remaining: List[int]) -> np.ndarray:
    A = R[:, remaining]
    return np.bincount(A.argmax(axis=1), minlength=len(remaining))


def _restricted_borda(R: np.ndarray, remaining: List[int]) -> np.ndarray:
    A = R[:, remaining]
    return (A[:, :, None] < A[:, None, :]).sum(axis=(0, 2))


# ---------------------------------------------------------------------------
# scoring rules
# ---------------------------------------------------------------------------

def scoring(profile: Profile, vector) -> WinnerSet:
    v = np.asarray(vector, dtype=np.int64)
    if len(v) != profile.n_candidates:
        raise ValueError("scoring vector length must match candidate count")
    totals = v[profile.rank_matrix - 1].sum(axis=0)
    return frozenset(int(c) for c in np.flatnonzero(totals == totals.max()))


def plurality(profile: Profile) -> WinnerSet:
    return scoring(profile, [1] + [0] * (profile.n_candidates - 1))


def borda(profile: Profile) -> WinnerSet:
    return scoring(profile, borda_vector(profile.n_candidates))


# ---------------------------------------------------------------------------
# iterative elimination rules
# ---------------------------------------------------------------------------

def instant_runoff(profile: Profile, variant: str = "remove_all") -> WinnerSet:
    R = profile.rank_matrix
    m = profile.num_voters

    if variant == "remove_all":
        remaining = list(range(profile.n_candidates))
        while True:
            counts = _first_place_counts(R, remaining)
            maj = np.flatnonzero(2 * counts > m)
            if maj.size:
                return frozenset({remaining[maj[0]]})
            lo = counts.min()
            if lo == counts.max():
                return frozenset(remaining)
            remaining = [c for c, k in zip(remaining, counts) if k > lo]

    if variant == "put":
        memo: Dict[Tuple[int, ...], WinnerSet] = {}

        def solve(remaining: Tuple[int, ...]) -> WinnerSet:
            if remaining in memo:
                return memo[remaining]
            counts = _first_place_counts(R, list(remaining))
            maj = np.flatnonzero(2 * counts > m)
            if maj.size:
                result: WinnerSet = frozenset({remaining[maj[0]]})
            else:
                lo = counts.min()
                tied = [c for c, k in zip(remaining, counts) if k == lo]
                result = frozenset().union(
                    *(solve(tuple(c for c in remaining if c != t)) for t in tied)
                )
            memo[remaining] = result
            return result

        return solve(tuple(range(profile.n_candidates)))

    raise ValueError(f"unknown instant_runoff variant: {variant}")


def coombs(profile: Profile, variant: str = "remove_all") -> WinnerSet:
    R = profile.rank_matrix
    m = profile.num_voters

    if variant == "remove_all":
        remaining = list(range(profile.n_candidates))
        while True:
            firsts = _first_place_counts(R, remaining)
            maj = np.flatnonzero(2 * firsts > m)
            if maj.size:
                return frozenset({remaining[maj[0]]})
            lasts = _last_place_counts(R, remaining)
            hi = lasts.max()
            if hi == lasts.min():
                return frozenset(remaining)
            remaining = [c for c, k in zip(remaining, lasts) if k < hi]

    if variant == "put":
        memo: Dict[Tuple[int, ...], WinnerSet] = {}

        def solve(remaining: Tuple[int, ...]) -> WinnerSet:
            if remaining in memo:
                return memo[remaining]
            firsts = _first_place_counts(R, list(remaining))
            maj = np.flatnonzero(2 * firsts > m)
            if maj.size:
                result: WinnerSet = frozenset({remaining[maj[0]]})
            else:
                lasts = _last_place_counts(R, list(remaining))
                hi = lasts.max()
                tied = [c for c, k in zip(remaining, lasts) if k == hi]
                result = frozenset().union(
                    *(solve(tuple(c for c in remaining if c != t)) for t in tied)
                )
            memo[remaining] = result
            return result

        return solve(tuple(range(profile.n_candidates)))

    raise ValueError(f"unknown coombs variant: {variant}")


def baldwin(profile: Profile, variant: str = "remove_all") -> WinnerSet:
    R = profile.rank_matrix

    if variant == "remove_all":
        remaining = list(range(profile.n_candidates))
        while len(remaining) > 1:
            s = _restricted_borda(R, remaining)
            lo = s.min()
            if lo == s.max():
                return frozenset(remaining)
            remaining = [c for c, v in zip(remaining, s) if v > lo]
        return frozenset(remaining)

    if variant == "put":
        memo: Dict[Tuple[int, ...], WinnerSet] = {}

        def solve(remaining: Tuple[int, ...]) -> WinnerSet:
            if len(remaining) == 1:
                return frozenset(remaining)
            if remaining in memo:
                return memo[remaining]
            s = _restricted_borda(R, list(remaining))
            lo = s.min()
            tied = [c for c, v in zip(remaining, s) if v == lo]
            result = frozenset().union(
                *(solve(tuple(c for c in remaining if c != t)) for t in tied)
            )
            memo[remaining] = result
            return result

        return solve(tuple(range(profile.n_candidates)))

    raise ValueError(f"unknown baldwin variant: {variant}")


def nanson(profile: Profile, variant: str = "strict") -> WinnerSet:
    if variant not in ("strict", "weak"):
        raise ValueError(f"unknown nanson variant: {variant}")
    R = profile.rank_matrix
    remaining = list(range(profile.n_candidates))
    while len(remaining) > 1:
        s = _restricted_borda(R, remaining)
        if s.min() == s.max():
            return frozenset(remaining)
        k = len(remaining)
        total = int(s.sum())
        # compare k*score against the sum to keep the average exact
        if variant == "strict":
            keep = [c for c, v in zip(remaining, s) if k * int(v) >= total]
        else:
            keep = [c for c, v in zip(remaining, s) if k * int(v) > total]
        remaining = keep
    return frozenset(remaining)


def bucklin(profile: Profile, variant: str = "full") -> WinnerSet:
    if variant not in ("full", "simplified"):
        raise ValueError(f"unknown bucklin variant: {variant}")
    R = profile.rank_matrix
    m = profile.num_voters
    for level in range(1, profile.n_candidates + 1):
        cum = (R <= level).sum(axis=0)
        maj = np.flatnonzero(2 * cum > m)
        if maj.size:
            if variant == "simplified":
                return frozenset(int(c) for c in maj)
            best = cum[maj].max()
            return frozenset(int(c) for c in maj if cum[c] == best)
    # unreachable: at level n every candidate is ranked
    raise AssertionError("no majority level found")


# ---------------------------------------------------------------------------
# margin-based rules
# ---------------------------------------------------------------------------

def copeland(mg: MarginGraph, variant: str = "copeland") -> WinnerSet:
    m = mg.m
    wins = (m > 0).sum(axis=1)
    if variant == "copeland":
        score = wins - (m < 0).sum(axis=1)
    elif variant == "llull":
        score = wins + (m == 0).sum(axis=1) - 1  # minus the diagonal tie
    else:
        raise ValueError(f"unknown copeland variant: {variant}")
    return frozenset(int(c) for c in np.flatnonzero(score == score.max()))


def _transitive_closure(rel: np.ndarray) -> np.ndarray:
    closure = rel.copy()
    n = closure.shape[0]
    for k in range(n):
        closure |= np.outer(closure[:, k], closure[k, :])
    return closure


def top_cycle(mg: MarginGraph, variant: str = "getcha") -> WinnerSet:
    if variant == "getcha":
        rel = mg.m >= 0
        closure = _transitive_closure(rel)
        winners = np.flatnonzero(closure.all(axis=1))
    elif variant == "gocha":
        closure = _transitive_closure(mg.m > 0)
        # keep x unless some y dominates x without x reaching back
        winners = np.flatnonzero(~(closure.T & ~closure).any(axis=1))
    else:
        raise ValueError(f"unknown top_cycle variant: {variant}")
    return frozenset(int(c) for c in winners)


def _covering_matrix(m: np.ndarray, variant: str) -> np.ndarray:
    pos = m > 0
    nonneg = m >= 0
    # cond_strict[a, b]: every c beating a also beats b
    cond_strict = ~(pos[:, :, None] & ~pos[:, None, :]).any(axis=0)
    if variant == "gillies":
        return pos & cond_strict
    if variant == "bordes":
        cond_weak = ~(nonneg[:, :, None] & ~nonneg[:, None, :]).any(axis=0)
        return pos & cond_weak
    if variant == "mckelvey":
        cond_weak = ~(nonneg[:, :, None] & ~nonneg[:, None, :]).any(axis=0)
        return pos & cond_strict & cond_weak
    if variant == "fishburn":
        witness = (pos[:, None, :] & ~pos[:, :, None]).any(axis=0)
        return cond_strict & witness
    raise ValueError(f"unknown uncovered_set variant: {variant}")


def uncovered_set(mg: MarginGraph, variant: str = "gillies") -> WinnerSet:
    covers = _covering_matrix(mg.m, variant)
    np.fill_diagonal(covers, False)
    return frozenset(int(c) for c in np.flatnonzero(~covers.any(axis=0)))


def _lock_and_top(n: int, priority: List[Tuple[int, int]]) -> int:
    # reach[x] is a bitmask of candidates reachable from x (including x)
    reach = [1 << x for x in range(n)]
    for a, b in priority:
        if reach[b] >> a & 1:
            continue  # locking (a, b) would close a cycle
        rb = reach[b]
        bit = 1 << a
        for u in range(n):
            if reach[u] & bit:
                reach[u] |= rb
    full = (1 << n) - 1
    for x in range(n):
        if reach[x] == full:
            return x
    raise AssertionError("locked relation has no maximum")


def ranked_pairs(mg: MarginGraph, cap: int = 10_000) -> WinnerSet:
    n = mg.n
    m = mg.m
    pairs = [(a, b) for a in range(n) for b in range(n) if a != b and m[a, b] >= 0]
    by_margin: Dict[int, List[Tuple[int, int]]] = {}
    for p in pairs:
        by_margin.setdefault(int(m[p]), []).append(p)
    margins = sorted(by_margin, reverse=True)
    groups = [by_margin[w] for w in margins]
    n_orders = math.prod(math.factorial(len(g)) for g in groups)
    if n_orders > cap:
        raise RankedPairsCapExceeded(
            f"{n_orders} tie-breaking orders exceed the cap of {cap}"
        )
    winners = set()
    for combo in itertools.product(*(itertools.permutations(g) for g in groups)):
        priority = [p for group in combo for p in group]
        winners.add(_lock_and_top(n, priority))
    return frozenset(winners)


def ranked_pairs_zt(profile: Profile) -> WinnerSet:
    mg = profile.margin_graph()
    m = mg.m
    n = mg.n
    # the distinguished voter is the one with the smallest original id
    i = min(range(profile.num_voters), key=lambda v: profile.voter_ids[v])
    rank = profile.ballots[i].rank_of
    pairs = [(a, b) for a in range(n) for b in range(n) if a != b and m[a, b] >= 0]
    pairs.sort(key=lambda p: (-int(m[p]), rank[p[0]], rank[p[1]]))
    return frozenset({_lock_and_top(n, pairs)})


def _strongest_paths(m: np.ndarray) -> np.ndarray:
    s = np.where(m > 0, m, 0)
    np.fill_diagonal(s, 0)
    n = s.shape[0]
    for k in range(n):
        np.maximum(s, np.minimum(s[:, k][:, None], s[k, :][None, :]), out=s)
    return s


def beat_path(mg: MarginGraph) -> WinnerSet:
    s = _strongest_paths(mg.m)
    undefeated = (s <= s.T).all(axis=0)
    return frozenset(int(c) for c in np.flatnonzero(undefeated))


def split_cycle(mg: MarginGraph) -> WinnerSet:
    m = mg.m
    s = _strongest_paths(m)
    # a defeats b iff the a->b margin beats the strongest b->a path
    defeats = (m > 0) & (m > s.T)
    return frozenset(int(c) for c in np.flatnonzero(~defeats.any(axis=0)))


def minimax(mg: MarginGraph) -> WinnerSet:
    m = mg.m.copy()
    np.fill_diagonal(m, np.iinfo(np.int64).min)
    worst_loss = m.max(axis=0)
    return frozenset(int(c) for c in np.flatnonzero(worst_loss == worst_loss.min()))


# ---------------------------------------------------------------------------
# plurality with runoff
# ---------------------------------------------------------------------------

def plurality_runoff(profile: Profile, variant: str = "put") -> WinnerSet:
    if variant not in ("put", "naive"):
        raise ValueError(f"unknown plurality_runoff variant: {variant}")
    n = profile.n_candidates
    if n == 1:
        return frozenset({0})
    R = profile.rank_matrix
    counts = _first_place_counts(R, list(range(n)))
    hi = counts.max()
    leaders = [c for c in range(n) if counts[c] == hi]
    if len(leaders) >= 2:
        qualifiers = leaders
        # any two tied leaders could advance together
        duels = list(itertools.combinations(leaders, 2))
    else:
        second = max(counts[c] for c in range(n) if c not in leaders)
        runners_up = [c for c in range(n) if counts[c] == second]
        qualifiers = leaders + runners_up
        # the unique leader is certainly in the runoff
        duels = [(leaders[0], c) for c in runners_up]

    if variant == "put":
        mm = profile.margin_matrix
        winners = set()
        for x, y in duels:
            w = int(mm[x, y])
            if w >= 0:
                winners.add(x)
            if w <= 0:
                winners.add(y)
        return frozenset(winners)

    counts2 = _first_place_counts(R, qualifiers)
    best = counts2.max()
    return frozenset(c for c, k in zip(qualifiers, counts2) if k == best)


# ---------------------------------------------------------------------------
# registry and dispatch
# ---------------------------------------------------------------------------

_FAMILY_VARIANTS = {
    "scoring": ("plurality", "borda"),
    "instant_runoff": ("remove_all", "put"),
    "coombs": ("remove_all", "put"),
    "baldwin": ("remove_all", "put"),
    "nanson": ("strict", "weak"),
    "bucklin": ("full", "simplified"),
    "copeland": ("copeland", "llull"),
    "top_cycle": ("getcha", "gocha"),
    "uncovered_set": ("gillies", "fishburn", "bordes", "mckelvey"),
    "ranked_pairs": ("default",),
    "ranked_pairs_zt": ("default",),
    "beat_path": ("default",),
    "split_cycle": ("default",),
    "minimax": ("default",),
    "plurality_runoff": ("put", "naive"),
}

_NAMES: Dict[str, MethodId] = {
    "plurality": MethodId("scoring", "plurality"),
    "borda": MethodId("scoring", "borda"),
    "instant_runoff": MethodId("instant_runoff", "remove_all"),
    "instant_runoff_put": MethodId("instant_runoff", "put"),
    "coombs": MethodId("coombs", "remove_all"),
    "coombs_put": MethodId("coombs", "put"),
    "baldwin": MethodId("baldwin", "remove_all"),
    "baldwin_put": MethodId("baldwin", "put"),
    "nanson_strict": MethodId("nanson", "strict"),
    "nanson_weak": MethodId("nanson", "weak"),
    "bucklin": MethodId("bucklin", "full"),
    "simplified_bucklin": MethodId("bucklin", "simplified"),
    "copeland": MethodId("copeland", "copeland"),
    "llull": MethodId("copeland", "llull"),
    "top_cycle": MethodId("top_cycle", "getcha"),
    "gocha": MethodId("top_cycle", "gocha"),
    "uncovered_set": MethodId("uncovered_set", "gillies"),
    "uncovered_set_fishburn": MethodId("uncovered_set", "fishburn"),
    "uncovered_set_bordes": MethodId("uncovered_set", "bordes"),
    "uncovered_set_mckelvey": MethodId("uncovered_set", "mckelvey"),
    "ranked_pairs": MethodId("ranked_pairs", "default"),
    "ranked_pairs_zt": MethodId("ranked_pairs_zt", "default"),
    "beat_path": MethodId("beat_path", "default"),
    "split_cycle": MethodId("split_cycle", "default"),
    "minimax": MethodId("minimax", "default"),
    "plurality_runoff": MethodId("plurality_runoff", "put"),
    "plurality_runoff_naive": MethodId("plurality_runoff", "naive"),
}

_ALIASES = {
    "nanson": "nanson_strict",
    "irv": "instant_runoff",
    "getcha": "top_cycle",
    "uncovered_set_gillies": "uncovered_set",
    "schulze": "beat_path",
}

_CANONICAL: Dict[MethodId, str] = {mid: name for name, mid in _NAMES.items()}

ALL_METHOD_NAMES = tuple(sorted(_NAMES))


def parse_method(name: str) -> MethodId:
    key = name.strip().lower()
    key = _ALIASES.get(key, key)
    if key not in _NAMES:
        raise ValueError(
            f"unknown method {name!r}; valid methods: {', '.join(ALL_METHOD_NAMES)}"
        )
    return _NAMES[key]


def canonical_name(method: MethodId) -> str:
    try:
        return _CANONICAL[method]
    except KeyError:
        raise ValueError(f"unregistered method {method.family}/{method.variant}")


def all_methods() -> List[MethodId]:
    return [_NAMES[name] for name in ALL_METHOD_NAMES]


def evaluate_margin(method: MethodId, mg: MarginGraph, rp_cap: int = 10_000) -> WinnerSet:
    fam, var = method.family, method.variant
    if fam == "copeland":
        return copeland(mg, var)
    if fam == "top_cycle":
        return top_cycle(mg, var)
    if fam == "uncovered_set":
        return uncovered_set(mg, var)
    if fam == "ranked_pairs":
        return ranked_pairs(mg, cap=rp_cap)
    if fam == "beat_path":
        return beat_path(mg)
    if fam == "split_cycle":
        return split_cycle(mg)
    if fam == "minimax":
        return minimax(mg)
    raise ValueError(f"{canonical_name(method)} is not a margin-based method")


def evaluate(method: MethodId, profile: Profile, rp_cap: int = 10_000) -> WinnerSet:
    fam, var = method.family, method.variant
    if fam == "scoring":
        return plurality(profile) if var == "plurality" else borda(profile)
    if fam == "instant_runoff":
        return instant_runoff(profile, var)
    if fam == "coombs":
        return coombs(profile, var)
    if fam == "baldwin":
        return baldwin(profile, var)
    if fam == "nanson":
        return nanson(profile, var)
    if fam == "bucklin":
        return bucklin(profile, var)
    if fam == "plurality_runoff":
        return plurality_runoff(profile, var)
    if fam == "ranked_pairs_zt":
        return ranked_pairs_zt(profile)
    if fam in MARGIN_BASED_FAMILIES:
        return evaluate_margin(method, profile.margin_graph(), rp_cap=rp_cap)
    raise ValueError(f"unknown method family: {fam}")


def condorcet_winner(mg: MarginGraph) -> int | None:
    m = mg.m
    for a in range(mg.n):
        if all(m[a, b] > 0 for b in range(mg.n) if b != a):
            return a
    return None
