import math
from collections import Counter

import numpy as np
import pytest

from pi_lab.core import Ranking
from pi_lab.sampling import (
    IAC,
    IC,
    MALLOWS,
    URN,
    ProbabilityModel,
    RngStream,
    coalition_profile,
    parse_model,
    sample_coalition,
    sample_profile,
)


def test_presets():
    assert IC.kind == "URN" and IC.alpha == 0
    assert IAC.alpha == 1
    assert URN.alpha == 10
    assert MALLOWS.kind == "MALLOWS" and MALLOWS.phi == 0.8 and MALLOWS.two_refs
    assert str(IC) == "IC" and str(MALLOWS) == "MALLOWS"


def test_parse_model():
    assert parse_model("ic") == IC
    assert parse_model("URN(25)").alpha == 25
    assert parse_model("MALLOWS(0.5)").phi == 0.5
    with pytest.raises(ValueError):
        parse_model("dirichlet")
    with pytest.raises(ValueError):
        ProbabilityModel("MALLOWS", phi=0.0)
    with pytest.raises(ValueError):
        ProbabilityModel("URN", alpha=-1)


def test_rng_stream_determinism():
    a = RngStream(42, (0, 3, 17)).generator().random(5)
    b = RngStream(42, (0, 3, 17)).generator().random(5)
    c = RngStream(42, (0, 3, 18)).generator().random(5)
    assert (a == b).all()
    assert not (a == c).all()


def test_sample_profile_reproducible():
    p = sample_profile(URN, 4, 9, RngStream(7, (1,)))
    q = sample_profile(URN, 4, 9, RngStream(7, (1,)))
    assert p.ballots == q.ballots
    assert p.num_voters == 9
    assert all(b.n == 4 for b in p.ballots)


def test_ic_uniformity_chi_square():
    rng = RngStream(3, (0,)).generator()
    trials = 12_000
    counts = Counter()
    for _ in range(trials // 6):
        p = IC.sampler(3, rng).sample_profile(6)
        counts.update(b.order for b in p.ballots)
    expected = trials / 6
    chi2 = sum((c - expected) ** 2 / expected for c in counts.values())
    # 5 degrees of freedom; 20.5 is roughly the 0.1% tail
    assert chi2 < 20.5, dict(counts)


def test_urn_reinforcement_rate():
    # second draw duplicates the first with probability alpha/(n!+alpha)
    rng = RngStream(5, (0,)).generator()
    trials = 20_000
    same = 0
    for _ in range(trials):
        p = IAC.sampler(3, rng).sample_profile(2)
        same += p.ballots[0] == p.ballots[1]
    # a uniform fresh draw also matches 1/6 of the time
    expect = 1 / 7 + (6 / 7) * (1 / 6)
    se = math.sqrt(expect * (1 - expect) / trials)
    assert abs(same / trials - expect) < 4 * se


def test_mallows_single_reference_distribution():
    model = ProbabilityModel("MALLOWS", phi=0.8, two_refs=False)
    rng = RngStream(11, (0,)).generator()
    trials = 30_000
    counts = Counter()
    sampler = model.sampler(3, rng)
    for _ in range(trials):
        counts[sampler.sample_ranking(policy="fresh").order] += 1
    # Pr(L) proportional to phi^kendall_tau(L, identity)
    from pi_lab.core import kendall_tau
    from pi_lab.oracles import all_rankings

    ident = Ranking([0, 1, 2])
    weights = {r.order: 0.8 ** kendall_tau(r, ident) for r in all_rankings(3)}
    z = sum(weights.values())
    for order, w in weights.items():
        expect = w / z
        se = math.sqrt(expect * (1 - expect) / trials)
        assert abs(counts[order] / trials - expect) < 5 * se, order


def test_mallows_two_reference_symmetry():
    rng = RngStream(13, (0,)).generator()
    trials = 30_000
    counts = Counter()
    sampler = MALLOWS.sampler(3, rng)
    for _ in range(trials):
        counts[sampler.sample_ranking(policy="fresh").order] += 1
    ident, rev = (0, 1, 2), (2, 1, 0)
    # the mixture weights the reference and its reverse equally
    assert abs(counts[ident] - counts[rev]) < 5 * math.sqrt(trials * 0.25)


def test_continue_policy_keeps_urn_conditioning():
    # with huge alpha, a continued draw copies an electorate ballot
    model = ProbabilityModel("URN", alpha=10_000)
    rng = RngStream(17, (0,)).generator()
    hits = 0
    for _ in range(200):
        sampler = model.sampler(4, rng)
        p = sampler.sample_profile(3)
        extra = sampler.sample_ranking(policy="continue")
        hits += extra in p.ballots
    assert hits > 190


def test_fresh_policy_ignores_conditioning():
    model = ProbabilityModel("URN", alpha=10_000)
    rng = RngStream(19, (0,)).generator()
    hits = 0
    for _ in range(300):
        sampler = model.sampler(4, rng)
        p = sampler.sample_profile(3)
        extra = sampler.sample_ranking(policy="fresh")
        hits += extra in p.ballots
    # 24 orders, at most 3 present: fresh matches rarely
    assert hits < 100


def test_sample_ranking_does_not_extend_electorate():
    rng = RngStream(23, (0,)).generator()
    sampler = IAC.sampler(3, rng)
    sampler.sample_profile(4)
    before = len(sampler.drawn)
    sampler.sample_ranking(policy="continue")
    assert len(sampler.drawn) == before


def test_coalition_profile():
    r = Ranking([1, 0, 2])
    c = coalition_profile(r, 3)
    assert c.num_voters == 3
    assert all(b == r for b in c.ballots)
    with pytest.raises(ValueError):
        coalition_profile(r, 0)


def test_sample_coalition_unanimous():
    c = sample_coalition(IC, RngStream(29, (0,)), 4, n_candidates=5)
    assert c.num_voters == 4
    assert len({b.order for b in c.ballots}) == 1
