import numpy as np
import pytest
from hypothesis import given, strategies as st

from pi_lab.core import (
    MarginGraph,
    Profile,
    Ranking,
    borda_vector,
    kendall_tau,
    move_to_top,
    plurality_vector,
    scores,
)


def rankings(n):
    return st.permutations(list(range(n))).map(Ranking)


def test_ranking_basics():
    r = Ranking([2, 0, 1])
    assert r.n == 3
    assert r.top() == 2
    assert r.rank(2) == 1 and r.rank(1) == 3  # ranks are 1-based
    assert r.reversed() == Ranking([1, 0, 2])
    assert hash(r) == hash(Ranking((2, 0, 1)))


def test_ranking_rejects_non_permutation():
    with pytest.raises(ValueError):
        Ranking([0, 0, 1])
    with pytest.raises(ValueError):
        Ranking([0, 2])


def test_kendall_tau_small():
    a = Ranking([0, 1, 2])
    assert kendall_tau(a, a) == 0
    assert kendall_tau(a, Ranking([2, 1, 0])) == 3
    assert kendall_tau(a, Ranking([1, 0, 2])) == 1


@given(rankings(4), rankings(4))
def test_kendall_tau_symmetric(a, b):
    assert kendall_tau(a, b) == kendall_tau(b, a)
    assert 0 <= kendall_tau(a, b) <= 6


def test_move_to_top():
    r = Ranking([0, 1, 2, 3])
    assert move_to_top(r, 2) == Ranking([2, 0, 1, 3])
    assert move_to_top(r, 0) == r


def naive_margin(profile, a, b):
    total = 0
    for ballot in profile.ballots:
        total += 1 if ballot.rank(a) < ballot.rank(b) else -1
    return total


@given(st.lists(rankings(4), min_size=1, max_size=8))
def test_margin_matrix_matches_naive(ballots):
    p = Profile(4, ballots)
    for a in range(4):
        for b in range(4):
            expected = 0 if a == b else naive_margin(p, a, b)
            assert p.margin(a, b) == expected


@given(st.lists(rankings(3), min_size=2, max_size=6), st.data())
def test_remove_voters_incremental_margins(ballots, data):
    p = Profile(3, ballots)
    p.margin_matrix  # force the cache so removal takes the incremental path
    i = data.draw(st.integers(0, len(ballots) - 1))
    fast = p.without_voter(i).margin_matrix
    slow = Profile(3, ballots[:i] + ballots[i + 1:]).margin_matrix
    assert (fast == slow).all()


def test_remove_voters_preserves_original_ids():
    p = Profile(3, [Ranking([0, 1, 2])] * 4)
    q = p.remove_voters([0, 2])
    assert q.voter_ids == (1, 3)
    assert q.without_voter(0).voter_ids == (3,)


def test_remove_all_voters_rejected():
    p = Profile(2, [Ranking([0, 1])])
    with pytest.raises(ValueError):
        p.remove_voters([0])


def test_concat_margins_add():
    p = Profile(3, [Ranking([0, 1, 2]), Ranking([1, 2, 0])])
    q = Profile(3, [Ranking([2, 0, 1])])
    p.margin_matrix
    combined = p + q
    direct = Profile(3, p.ballots + q.ballots)
    assert (combined.margin_matrix == direct.margin_matrix).all()
    assert combined.num_voters == 3


def test_restrict_is_complement_of_remove():
    ballots = [Ranking([0, 1, 2]), Ranking([1, 0, 2]), Ranking([2, 1, 0])]
    p = Profile(3, ballots)
    assert p.restrict([0, 2]).ballots == p.remove_voters([1]).ballots


def test_margin_graph_antisymmetry_enforced():
    with pytest.raises(ValueError):
        MarginGraph(2, np.array([[0, 1], [1, 0]]))
    mg = MarginGraph.from_edges(3, {(0, 1): 2, (1, 2): 2})
    assert mg.margin(1, 0) == -2
    assert mg.margin(0, 2) == 0


def test_margin_graph_parity():
    p = Profile(3, [Ranking([0, 1, 2])] * 3)
    assert p.margin_graph().voter_parity == 1


def test_scores_vectors():
    p = Profile(3, [Ranking([0, 1, 2]), Ranking([0, 2, 1]), Ranking([1, 2, 0])])
    assert scores(p, plurality_vector(3)) == [2, 1, 0]
    assert scores(p, borda_vector(3)) == [4, 3, 2]
    with pytest.raises(ValueError):
        scores(p, [0, 1, 2])  # increasing vector is invalid
