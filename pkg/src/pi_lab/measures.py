"""Positive-involvement violation measures and their Monte-Carlo estimators.

Two sampling paradigms:

* profile: draw a profile, look for a voter whose removal shows their
  favorite would have won without them (and for potent voters).
* pair: draw a profile plus a like-minded coalition of new voters and
  check whether joining the election makes the coalition's favorite lose.

For each (method, comparison) cell four measures are tallied: the raw
violation probability, the probability conditional on the method
disagreeing with a reference method, and both again relativized to voter
(or coalition) potency.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .core import Profile, move_to_top
from .methods import MethodId, RankedPairsCapExceeded, evaluate, parse_method
from .sampling import ModelSampler, RngStream, coalition_profile, parse_model

MEASURES = ("raw", "conditional", "ratio", "conditional_ratio")


# ---------------------------------------------------------------------------
# per-profile checks
# ---------------------------------------------------------------------------

def pi_violation_witness(
    method: MethodId, profile: Profile, rp_cap: int = 10_000
) -> Optional[Tuple[int, int]]:
    """Lowest-id voter whose favorite wins without them but not with them."""
    witness, _ = _scan_removals(method, profile, rp_cap, need_potency=False)
    return witness


def has_potent_voter(method: MethodId, profile: Profile, rp_cap: int = 10_000) -> bool:
    _, potent = _scan_removals(
        method, profile, rp_cap, need_potency=True, need_witness=False
    )
    return potent


def _scan_removals(
    method: MethodId,
    profile: Profile,
    rp_cap: int,
    need_potency: bool,
    need_witness: bool = True,
) -> Tuple[Optional[Tuple[int, int]], bool]:
    """One pass over voter removals, collecting witness and potency bits.

    Voters repeating an earlier ballot are skipped for anonymous methods;
    when only the witness is needed, voters whose favorite already wins
    are skipped outright.
    """
    if profile.num_voters < 2:
        raise ValueError("need at least two voters to remove one")
    winners = evaluate(method, profile, rp_cap=rp_cap)
    witness: Optional[Tuple[int, int]] = None
    potent = False
    seen = set()
    dedupe = method.anonymous
    for i, ballot in enumerate(profile.ballots):
        if dedupe:
            if ballot.order in seen:
                continue
            seen.add(ballot.order)
        top = ballot.top()
        if not need_potency and top in winners:
            continue
        reduced = evaluate(method, profile.without_voter(i), rp_cap=rp_cap)
        if witness is None and top not in winners and top in reduced:
            witness = (i, top)
        if not potent and not reduced <= winners:
            potent = True
        if (witness is not None or not need_witness) and (potent or not need_potency):
            break
    return witness, potent


def pair_violation(
    method: MethodId, profile: Profile, coalition: Profile, rp_cap: int = 10_000
) -> bool:
    """Does joining of the unanimous-top coalition make its favorite lose?"""
    tops = {b.top() for b in coalition.ballots}
    if len(tops) != 1:
        raise ValueError("coalition must rank a common favorite first")
    (x,) = tops
    if x not in evaluate(method, profile, rp_cap=rp_cap):
        return False
    return x not in evaluate(method, profile + coalition, rp_cap=rp_cap)


def disagree(f1: MethodId, f2: MethodId, profile: Profile, rp_cap: int = 10_000) -> bool:
    return evaluate(f1, profile, rp_cap=rp_cap) != evaluate(f2, profile, rp_cap=rp_cap)


def pair_disagree(
    f1: MethodId, f2: MethodId, profile: Profile, coalition: Profile,
    rp_cap: int = 10_000,
) -> bool:
    if disagree(f1, f2, profile, rp_cap=rp_cap):
        return True
    return disagree(f1, f2, profile + coalition, rp_cap=rp_cap)


def brute_force_coalitional_pi(
    method: MethodId,
    profile: Profile,
    max_coalition: int,
    rp_cap: int = 10_000,
    guard: int = 8,
) -> List[Tuple[Tuple[int, ...], int]]:
    """All identical-ballot coalitions whose removal shows a PI violation.

    Returns (voter-id tuple, candidate) pairs.  Exponential; guarded to
    small electorates.
    """
    m = profile.num_voters
    if m > guard:
        raise ValueError(f"profile has {m} voters; brute force is guarded to {guard}")
    winners = evaluate(method, profile, rp_cap=rp_cap)
    by_ballot: Dict[tuple, List[int]] = {}
    for i, b in enumerate(profile.ballots):
        by_ballot.setdefault(b.order, []).append(i)
    out = []
    for order, voters in by_ballot.items():
        x = order[0]
        if x in winners:
            continue
        for size in range(1, min(len(voters), max_coalition, m - 1) + 1):
            for coalition in itertools.combinations(voters, size):
                reduced = evaluate(
                    method, profile.remove_voters(coalition), rp_cap=rp_cap
                )
                if x in reduced:
                    out.append((coalition, x))
    return out


# ---------------------------------------------------------------------------
# tallies and rows
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TrialTally:
    trials: int = 0
    skipped: int = 0
    cond_hits: int = 0
    num_event: int = 0
    num_base: int = 0
    den_event: int = 0
    den_base: int = 0

    def __add__(self, other: "TrialTally") -> "TrialTally":
        return TrialTally(*(a + b for a, b in zip(self._astuple(), other._astuple())))

    def _astuple(self):
        return (
            self.trials, self.skipped, self.cond_hits,
            self.num_event, self.num_base, self.den_event, self.den_base,
        )


@dataclass(frozen=True)
class EstimateRow:
    paradigm: str
    measure: str
    model: str
    method: str
    variant: str
    comparison: str
    candidates: int
    voters: int
    coalition_frac: Optional[float]
    coalition_size_even: Optional[int]
    coalition_size_odd: Optional[int]
    tally: TrialTally
    estimate: Optional[float]
    stderr: Optional[float]
    seed: int

    def sort_key(self):
        return (
            self.paradigm, self.measure, self.model, self.method, self.variant,
            self.comparison, self.candidates, self.voters,
            -1.0 if self.coalition_frac is None else self.coalition_frac,
        )


def _proportion(x: int, n: int) -> Tuple[Optional[float], Optional[float]]:
    if n <= 0:
        return None, None
    p = x / n
    return p, math.sqrt(p * (1.0 - p) / n)


def _ratio(
    num: int, num_base: int, den: int, den_base: int
) -> Tuple[Optional[float], Optional[float]]:
    if num_base <= 0 or den_base <= 0 or den == 0:
        return None, None
    p1 = num / num_base
    p2 = den / den_base
    r = p1 / p2
    # first-order delta method; degenerate terms contribute no variance
    var = 0.0
    if num > 0:
        var += (1.0 - p1) / (num_base * p1)
    if den > 0:
        var += (1.0 - p2) / (den_base * p2)
    return r, r * math.sqrt(var)


# ---------------------------------------------------------------------------
# simulation configuration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SimulationConfig:
    paradigms: Tuple[str, ...] = ("profile",)
    models: Tuple[str, ...] = ("IC",)
    methods: Tuple[str, ...] = ("coombs",)
    comparisons: Tuple[str, ...] = ("none",)
    candidates: Tuple[int, ...] = (4,)
    voters: Tuple[int, ...] = (10,)
    trials: int = 50_000
    coalition_fracs: Tuple[float, ...] = (0.0,)
    seed: int = 0
    rp_cap: int = 10_000
    coalition_draw: str = "continue"
    workers: int = 1
    exhaustive: bool = False
    measures: Tuple[str, ...] = MEASURES

    def __post_init__(self):
        for p in self.paradigms:
            if p not in ("profile", "pair"):
                raise ValueError(f"unknown paradigm {p!r}")
        for ms in self.measures:
            if ms not in MEASURES:
                raise ValueError(f"unknown measure {ms!r}")
        if self.coalition_draw not in ("continue", "fresh"):
            raise ValueError(f"unknown coalition-draw policy {self.coalition_draw!r}")
        if self.trials < 1:
            raise ValueError("trials must be positive")
        if self.workers < 1:
            raise ValueError("workers must be positive")
        for name in self.models:
            parse_model(name)
        for name in self.methods + tuple(c for c in self.comparisons if c != "none"):
            parse_method(name)
        for n in self.candidates:
            if n < 1:
                raise ValueError("candidate counts must be positive")
        for m in self.voters:
            if m < 2:
                raise ValueError("voter counts must be at least 2")
        for f in self.coalition_fracs:
            if f < 0:
                raise ValueError("coalition fractions must be non-negative")


def coalition_size(frac: float, n_voters: int) -> int:
    """Fraction of the electorate, rounded half away from zero, at least 1."""
    if frac <= 0:
        return 1
    return max(1, math.floor(frac * n_voters + 0.5))


# ---------------------------------------------------------------------------
# trial loops
# ---------------------------------------------------------------------------

_PROFILE_COUNTERS = (
    "trials", "skipped", "viol", "potent", "dis", "viol_dis", "potent_dis",
)
_PAIR_COUNTERS = (
    "trials", "skipped", "raw_viol", "dis_den", "raw_viol_dis",
    "num_event", "den_event", "dis_num", "num_dis", "den_dis",
)

Counters = Dict[Tuple[str, str], Dict[str, int]]


def _new_counters(methods, comparisons, names) -> Counters:
    return {
        (mi, ci): {k: 0 for k in names}
        for mi in methods
        for ci in comparisons
    }


def _merge_counters(dst: Counters, src: Counters) -> None:
    for key, counts in src.items():
        d = dst[key]
        for k, v in counts.items():
            d[k] += v


def _profile_trial(
    profile: Profile,
    methods: Sequence[str],
    comparisons: Sequence[str],
    rp_cap: int,
    need_potency: bool,
    counters: Counters,
) -> None:
    comp_winners: Dict[str, Optional[frozenset]] = {}
    for ci in comparisons:
        if ci == "none":
            continue
        try:
            comp_winners[ci] = evaluate(parse_method(ci), profile, rp_cap=rp_cap)
        except RankedPairsCapExceeded:
            comp_winners[ci] = None
    for mi in methods:
        method = parse_method(mi)
        try:
            winners = evaluate(method, profile, rp_cap=rp_cap)
            witness, potent = _scan_removals(
                method, profile, rp_cap, need_potency=need_potency
            )
        except RankedPairsCapExceeded:
            for ci in comparisons:
                c = counters[(mi, ci)]
                c["trials"] += 1
                c["skipped"] += 1
            continue
        viol = witness is not None
        for ci in comparisons:
            c = counters[(mi, ci)]
            c["trials"] += 1
            if ci == "none":
                dis = True
            else:
                if comp_winners[ci] is None:
                    c["skipped"] += 1
                    continue
                dis = winners != comp_winners[ci]
            c["viol"] += viol
            c["potent"] += potent
            c["dis"] += dis
            c["viol_dis"] += viol and dis
            c["potent_dis"] += potent and dis


def _pair_trial(
    sampler: ModelSampler,
    profile: Profile,
    rng,
    size: int,
    methods: Sequence[str],
    comparisons: Sequence[str],
    rp_cap: int,
    draw_policy: str,
    counters: Counters,
) -> None:
    l_den = sampler.sample_ranking(policy=draw_policy)
    l_num = sampler.sample_ranking(policy=draw_policy)
    p_den = profile + coalition_profile(l_den, size)

    comp_base: Dict[str, Optional[Tuple[frozenset, frozenset]]] = {}
    for ci in comparisons:
        if ci == "none":
            continue
        f2 = parse_method(ci)
        try:
            comp_base[ci] = (
                evaluate(f2, profile, rp_cap=rp_cap),
                evaluate(f2, p_den, rp_cap=rp_cap),
            )
        except RankedPairsCapExceeded:
            comp_base[ci] = None

    for mi in methods:
        method = parse_method(mi)
        u = rng.random()  # drawn unconditionally to keep streams aligned
        try:
            f1_p = evaluate(method, profile, rp_cap=rp_cap)
            f1_den = evaluate(method, p_den, rp_cap=rp_cap)
            a = sorted(f1_p)[int(u * len(f1_p))]
            p_num = profile + coalition_profile(move_to_top(l_num, a), size)
            f1_num = evaluate(method, p_num, rp_cap=rp_cap)
        except RankedPairsCapExceeded:
            for ci in comparisons:
                c = counters[(mi, ci)]
                c["trials"] += 1
                c["skipped"] += 1
            continue
        x = l_den.top()
        raw_viol = x in f1_p and x not in f1_den
        den_event = a not in f1_den
        num_event = a not in f1_num
        for ci in comparisons:
            c = counters[(mi, ci)]
            c["trials"] += 1
            if ci == "none":
                dis_den = dis_num = True
            else:
                if comp_base[ci] is None:
                    c["skipped"] += 1
                    continue
                f2_p, f2_den = comp_base[ci]
                try:
                    f2_num = evaluate(parse_method(ci), p_num, rp_cap=rp_cap)
                except RankedPairsCapExceeded:
                    c["skipped"] += 1
                    continue
                base_dis = f1_p != f2_p
                dis_den = base_dis or f1_den != f2_den
                dis_num = base_dis or f1_num != f2_num
            c["raw_viol"] += raw_viol
            c["dis_den"] += dis_den
            c["raw_viol_dis"] += raw_viol and dis_den
            c["num_event"] += num_event
            c["den_event"] += den_event
            c["dis_num"] += dis_num
            c["num_dis"] += num_event and dis_num
            c["den_dis"] += den_event and dis_den


def _voters_for_trial(base_m: int, trial: int, trials: int) -> int:
    # first half of the trials at the even base size, second half at m+1
    return base_m if trial < (trials + 1) // 2 else base_m + 1


def _run_profile_chunk(args) -> Counters:
    config, cell_index, model_name, n, base_m, t0, t1 = args
    model = parse_model(model_name)
    need_potency = bool(
        {"ratio", "conditional_ratio"} & set(config.measures)
    )
    counters = _new_counters(config.methods, config.comparisons, _PROFILE_COUNTERS)
    for t in range(t0, t1):
        rng = RngStream(config.seed, (0, cell_index, t)).generator()
        m_t = _voters_for_trial(base_m, t, config.trials)
        profile = model.sampler(n, rng).sample_profile(m_t)
        _profile_trial(
            profile, config.methods, config.comparisons, config.rp_cap,
            need_potency, counters,
        )
    return counters


def _run_profile_exhaustive(config, n: int, m: int) -> Counters:
    from .oracles import all_profiles

    need_potency = bool({"ratio", "conditional_ratio"} & set(config.measures))
    counters = _new_counters(config.methods, config.comparisons, _PROFILE_COUNTERS)
    for profile in all_profiles(n, m):
        _profile_trial(
            profile, config.methods, config.comparisons, config.rp_cap,
            need_potency, counters,
        )
    return counters


def _run_pair_chunk(args) -> Counters:
    config, cell_index, model_name, n, base_m, frac, t0, t1 = args
    model = parse_model(model_name)
    counters = _new_counters(config.methods, config.comparisons, _PAIR_COUNTERS)
    for t in range(t0, t1):
        rng = RngStream(config.seed, (1, cell_index, t)).generator()
        m_t = _voters_for_trial(base_m, t, config.trials)
        size = coalition_size(frac, m_t)
        sampler = model.sampler(n, rng)
        profile = sampler.sample_profile(m_t)
        _pair_trial(
            sampler, profile, rng, size, config.methods, config.comparisons,
            config.rp_cap, config.coalition_draw, counters,
        )
    return counters


def _chunk_ranges(trials: int, workers: int) -> List[Tuple[int, int]]:
    if workers <= 1:
        return [(0, trials)]
    step = max(1, -(-trials // (workers * 4)))
    return [(t, min(t + step, trials)) for t in range(0, trials, step)]


def _run_chunks(worker, tasks, workers: int, template: Counters) -> Counters:
    total = {k: dict(v) for k, v in template.items()}
    if workers <= 1:
        for task in tasks:
            _merge_counters(total, worker(task))
        return total
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for result in pool.map(worker, tasks):
            _merge_counters(total, result)
    return total


# ---------------------------------------------------------------------------
# estimators
# ---------------------------------------------------------------------------

def _profile_rows(config, model_name, n, m, counters) -> List[EstimateRow]:
    rows = []
    for (mi, ci), c in counters.items():
        method = parse_method(mi)
        effective = c["trials"] - c["skipped"]
        for measure in config.measures:
            if measure == "raw":
                tally = TrialTally(
                    c["trials"], c["skipped"], effective,
                    c["viol"], effective, 0, 0,
                )
                est, se = _proportion(c["viol"], effective)
            elif measure == "conditional":
                tally = TrialTally(
                    c["trials"], c["skipped"], c["dis"],
                    c["viol_dis"], c["dis"], 0, 0,
                )
                est, se = _proportion(c["viol_dis"], c["dis"])
            elif measure == "ratio":
                tally = TrialTally(
                    c["trials"], c["skipped"], effective,
                    c["viol"], effective, c["potent"], effective,
                )
                est, se = _ratio(c["viol"], effective, c["potent"], effective)
            else:  # conditional_ratio
                tally = TrialTally(
                    c["trials"], c["skipped"], c["dis"],
                    c["viol_dis"], c["dis"], c["potent_dis"], c["dis"],
                )
                est, se = _ratio(c["viol_dis"], c["dis"], c["potent_dis"], c["dis"])
            rows.append(EstimateRow(
                paradigm="profile", measure=measure, model=model_name,
                method=method.family, variant=method.variant, comparison=ci,
                candidates=n, voters=m, coalition_frac=None,
                coalition_size_even=None, coalition_size_odd=None,
                tally=tally, estimate=est, stderr=se, seed=config.seed,
            ))
    return rows


def _pair_rows(config, model_name, n, m, frac, counters) -> List[EstimateRow]:
    rows = []
    size_even = coalition_size(frac, m)
    size_odd = coalition_size(frac, m + 1)
    for (mi, ci), c in counters.items():
        method = parse_method(mi)
        effective = c["trials"] - c["skipped"]
        for measure in config.measures:
            if measure == "raw":
                tally = TrialTally(
                    c["trials"], c["skipped"], effective,
                    c["raw_viol"], effective, 0, 0,
                )
                est, se = _proportion(c["raw_viol"], effective)
            elif measure == "conditional":
                tally = TrialTally(
                    c["trials"], c["skipped"], c["dis_den"],
                    c["raw_viol_dis"], c["dis_den"], 0, 0,
                )
                est, se = _proportion(c["raw_viol_dis"], c["dis_den"])
            elif measure == "ratio":
                tally = TrialTally(
                    c["trials"], c["skipped"], effective,
                    c["num_event"], effective, c["den_event"], effective,
                )
                est, se = _ratio(c["num_event"], effective, c["den_event"], effective)
            else:  # conditional_ratio
                tally = TrialTally(
                    c["trials"], c["skipped"], c["dis_den"],
                    c["num_dis"], c["dis_num"], c["den_dis"], c["dis_den"],
                )
                est, se = _ratio(c["num_dis"], c["dis_num"], c["den_dis"], c["dis_den"])
            rows.append(EstimateRow(
                paradigm="pair", measure=measure, model=model_name,
                method=method.family, variant=method.variant, comparison=ci,
                candidates=n, voters=m, coalition_frac=frac,
                coalition_size_even=size_even, coalition_size_odd=size_odd,
                tally=tally, estimate=est, stderr=se, seed=config.seed,
            ))
    return rows


# ---------------------------------------------------------------------------
# top-level runners
# ---------------------------------------------------------------------------

def run_profile_paradigm(config: SimulationConfig) -> List[EstimateRow]:
    rows: List[EstimateRow] = []
    cells = list(itertools.product(config.models, config.candidates, config.voters))
    template = _new_counters(config.methods, config.comparisons, _PROFILE_COUNTERS)
    for cell_index, (model_name, n, m) in enumerate(cells):
        if config.exhaustive:
            counters = _run_profile_exhaustive(config, n, m)
        else:
            tasks = [
                (config, cell_index, model_name, n, m, t0, t1)
                for t0, t1 in _chunk_ranges(config.trials, config.workers)
            ]
            counters = _run_chunks(
                _run_profile_chunk, tasks, config.workers, template
            )
        rows.extend(_profile_rows(config, model_name, n, m, counters))
    rows.sort(key=EstimateRow.sort_key)
    return rows


def run_pair_paradigm(config: SimulationConfig) -> List[EstimateRow]:
    rows: List[EstimateRow] = []
    cells = list(itertools.product(
        config.models, config.candidates, config.voters, config.coalition_fracs
    ))
    template = _new_counters(config.methods, config.comparisons, _PAIR_COUNTERS)
    for cell_index, (model_name, n, m, frac) in enumerate(cells):
        tasks = [
            (config, cell_index, model_name, n, m, frac, t0, t1)
            for t0, t1 in _chunk_ranges(config.trials, config.workers)
        ]
        counters = _run_chunks(_run_pair_chunk, tasks, config.workers, template)
        rows.extend(_pair_rows(config, model_name, n, m, frac, counters))
    rows.sort(key=EstimateRow.sort_key)
    return rows


def run_simulation(config: SimulationConfig) -> List[EstimateRow]:
    rows: List[EstimateRow] = []
    if "profile" in config.paradigms:
        rows.extend(run_profile_paradigm(config))
    if "pair" in config.paradigms:
        rows.extend(run_pair_paradigm(config))
    rows.sort(key=EstimateRow.sort_key)
    return rows


# ---------------------------------------------------------------------------
# the observed conditioning regularity for 3-candidate profiles
# ---------------------------------------------------------------------------

def _run_regularity_chunk(args):
    seed, t0, t1, n, voter_sizes = args
    model = parse_model("IC")
    sc = parse_method("split_cycle")
    checked = 0
    counterexamples = []
    for t in range(t0, t1):
        rng = RngStream(seed, (2, 0, t)).generator()
        m = voter_sizes[t % len(voter_sizes)]
        profile = model.sampler(n, rng).sample_profile(m)
        for name in ("copeland", "top_cycle"):
            method = parse_method(name)
            winners = evaluate(method, profile)
            seen = set()
            for i, ballot in enumerate(profile.ballots):
                if ballot.order in seen:
                    continue
                seen.add(ballot.order)
                top = ballot.top()
                if top in winners:
                    continue
                reduced_profile = profile.without_voter(i)
                if top not in evaluate(method, reduced_profile):
                    continue
                checked += 1
                agrees_full = winners == evaluate(sc, profile)
                disagrees_reduced = (
                    evaluate(method, reduced_profile)
                    != evaluate(sc, reduced_profile)
                )
                if not (agrees_full and disagrees_reduced):
                    counterexamples.append((name, t, i))
    return checked, counterexamples


def regularity_scan(
    trials: int,
    seed: int = 0,
    voter_sizes: Sequence[int] = (5, 6),
    workers: int = 1,
):
    """Check that every copeland/top_cycle PI violation on 3 candidates
    agrees with split_cycle in the full profile and disagrees after removal.

    Returns (violations_checked, counterexamples).
    """
    tasks = [
        (seed, t0, t1, 3, tuple(voter_sizes))
        for t0, t1 in _chunk_ranges(trials, workers)
    ]
    checked = 0
    counterexamples: list = []
    if workers <= 1:
        results = [_run_regularity_chunk(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_regularity_chunk, tasks))
    for c, ce in results:
        checked += c
        counterexamples.extend(ce)
    return checked, counterexamples
