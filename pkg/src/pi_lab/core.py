"""Profiles, rankings and pairwise margins.

Candidates and voters are dense 0-based integer ids.  All arithmetic in
this module is exact integer arithmetic; tie detection throughout the
package depends on that.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

import numpy as np


class Ranking:
    """A strict linear order over candidates 0..n-1.

    ``order[k]`` is the candidate ranked (k+1)-th, so ``order[0]`` is the
    voter's favorite.
    """

    __slots__ = ("order", "_rank_of")

    def __init__(self, order: Iterable[int]):
        order = tuple(int(c) for c in order)
        n = len(order)
        if sorted(order) != list(range(n)):
            raise ValueError(f"not a permutation of 0..{n - 1}: {order}")
        self.order = order
        self._rank_of: Optional[tuple] = None

    @property
    def n(self) -> int:
        return len(self.order)

    @property
    def rank_of(self) -> tuple:
        """Inverse map: rank_of[c] is c's 1-based rank."""
        if self._rank_of is None:
            r = [0] * len(self.order)
            for k, c in enumerate(self.order):
                r[c] = k + 1
            self._rank_of = tuple(r)
        return self._rank_of

    def rank(self, c: int) -> int:
        return self.rank_of[c]

    def top(self) -> int:
        return self.order[0]

    def reversed(self) -> "Ranking":
        return Ranking(self.order[::-1])

    def __eq__(self, other) -> bool:
        return isinstance(other, Ranking) and self.order == other.order

    def __hash__(self) -> int:
        return hash(self.order)

    def __repr__(self) -> str:
        return f"Ranking({list(self.order)})"


def kendall_tau(left: Ranking, right: Ranking) -> int:
    """Number of ordered pairs on which the two rankings disagree."""
    if left.n != right.n:
        raise ValueError("rankings are over different candidate sets")
    r = right.rank_of
    seq = [r[c] for c in left.order]
    tau = 0
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                tau += 1
    return tau


def move_to_top(ranking: Ranking, a: int) -> Ranking:
    """Place candidate ``a`` first, keeping the relative order of the rest."""
    if not 0 <= a < ranking.n:
        raise IndexError(f"candidate {a} out of range")
    return Ranking((a,) + tuple(c for c in ranking.order if c != a))


class Profile:
    """An ordered list of ballots over a fixed candidate set.

    Voter ids are positions in ``ballots``; ``voter_ids`` carries the
    original ids through voter removal (Ranked Pairs ZT needs them).
    Instances are immutable; the margin matrix is cached lazily.
    """

    __slots__ = ("n_candidates", "ballots", "voter_ids", "_margins", "_ranks")

    def __init__(
        self,
        n_candidates: int,
        ballots: Sequence[Ranking],
        voter_ids: Optional[Sequence[int]] = None,
    ):
        if n_candidates < 1:
            raise ValueError("need at least one candidate")
        ballots = tuple(ballots)
        if not ballots:
            raise ValueError("a profile needs at least one ballot")
        for b in ballots:
            if b.n != n_candidates:
                raise ValueError(
                    f"ballot over {b.n} candidates in a {n_candidates}-candidate profile"
                )
        if voter_ids is None:
            voter_ids = tuple(range(len(ballots)))
        else:
            voter_ids = tuple(int(v) for v in voter_ids)
            if len(voter_ids) != len(ballots):
                raise ValueError("one voter id per ballot required")
        self.n_candidates = n_candidates
        self.ballots = ballots
        self.voter_ids = voter_ids
        self._margins: Optional[np.ndarray] = None
        self._ranks: Optional[np.ndarray] = None

    # -- basic accessors -------------------------------------------------

    @property
    def num_voters(self) -> int:
        return len(self.ballots)

    def __len__(self) -> int:
        return len(self.ballots)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Profile)
            and self.n_candidates == other.n_candidates
            and self.ballots == other.ballots
        )

    def __hash__(self) -> int:
        return hash((self.n_candidates, self.ballots))

    def __repr__(self) -> str:
        return f"Profile(n={self.n_candidates}, m={self.num_voters})"

    @property
    def rank_matrix(self) -> np.ndarray:
        """m x n integer matrix; entry (i, c) is candidate c's rank on ballot i."""
        if self._ranks is None:
            self._ranks = np.array([b.rank_of for b in self.ballots], dtype=np.int64)
            self._ranks.setflags(write=False)
        return self._ranks

    # -- margins ---------------------------------------------------------

    @property
    def margin_matrix(self) -> np.ndarray:
        if self._margins is None:
            R = self.rank_matrix
            above = (R[:, :, None] < R[:, None, :]).sum(axis=0)
            self._margins = above - above.T
            self._margins.setflags(write=False)
        return self._margins

    def margin(self, a: int, b: int) -> int:
        n = self.n_candidates
        if not (0 <= a < n and 0 <= b < n):
            raise IndexError(f"candidate pair ({a}, {b}) out of range")
        return int(self.margin_matrix[a, b])

    def margin_graph(self) -> "MarginGraph":
        return MarginGraph(
            self.n_candidates,
            self.margin_matrix,
            voter_parity=self.num_voters % 2,
        )

    # -- profile algebra -------------------------------------------------

    def remove_voters(self, removed: Iterable[int]) -> "Profile":
        """Restriction to the voters not in ``removed`` (current positions).

        Original voter ids are preserved in ``voter_ids``.
        """
        removed = set(removed)
        m = self.num_voters
        for i in removed:
            if not 0 <= i < m:
                raise IndexError(f"unknown voter id {i}")
        if len(removed) >= m:
            raise ValueError("cannot remove all voters")
        keep = [i for i in range(m) if i not in removed]
        child = Profile(
            self.n_candidates,
            [self.ballots[i] for i in keep],
            voter_ids=[self.voter_ids[i] for i in keep],
        )
        if self._margins is not None and removed:
            R = self.rank_matrix[sorted(removed)]
            above = (R[:, :, None] < R[:, None, :]).sum(axis=0)
            child._margins = self._margins - (above - above.T)
            child._margins.setflags(write=False)
        return child

    def without_voter(self, i: int) -> "Profile":
        return self.remove_voters([i])

    def restrict(self, kept: Iterable[int]) -> "Profile":
        """The complementary operation to remove_voters: keep only ``kept``."""
        kept = set(kept)
        m = self.num_voters
        return self.remove_voters(set(range(m)) - kept)

    def concat(self, other: "Profile") -> "Profile":
        if self.n_candidates != other.n_candidates:
            raise ValueError("profiles are over different candidate sets")
        child = Profile(self.n_candidates, self.ballots + other.ballots)
        if self._margins is not None:
            child._margins = self._margins + other.margin_matrix
            child._margins.setflags(write=False)
        return child

    def __add__(self, other: "Profile") -> "Profile":
        return self.concat(other)


class MarginGraph:
    """Antisymmetric integer matrix of pairwise margins."""

    __slots__ = ("n", "m", "voter_parity")

    def __init__(self, n: int, m, voter_parity: int = 0):
        m = np.asarray(m, dtype=np.int64)
        if m.shape != (n, n):
            raise ValueError(f"expected a {n}x{n} matrix, got {m.shape}")
        if (m != -m.T).any():
            raise ValueError("margin matrix must be antisymmetric")
        if voter_parity not in (0, 1):
            raise ValueError("voter_parity must be 0 or 1")
        self.n = n
        self.m = m.copy()
        self.m.setflags(write=False)
        self.voter_parity = voter_parity

    @classmethod
    def from_edges(cls, n: int, edges, voter_parity: int = 0) -> "MarginGraph":
        """Build from {(a, b): margin} giving only the positive direction."""
        m = np.zeros((n, n), dtype=np.int64)
        for (a, b), w in edges.items():
            m[a, b] = w
            m[b, a] = -w
        return cls(n, m, voter_parity)

    def margin(self, a: int, b: int) -> int:
        return int(self.m[a, b])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MarginGraph)
            and self.n == other.n
            and (self.m == other.m).all()
        )

    def __repr__(self) -> str:
        return f"MarginGraph(n={self.n})"


# -- free-function forms used throughout the package ---------------------

def margin(profile: Profile, a: int, b: int) -> int:
    return profile.margin(a, b)


def margin_graph(profile: Profile) -> MarginGraph:
    return profile.margin_graph()


def remove_voters(profile: Profile, removed: Iterable[int]) -> Profile:
    return profile.remove_voters(removed)


def concat(p: Profile, q: Profile) -> Profile:
    return p.concat(q)


def scores(profile: Profile, vector: Sequence[int]) -> list:
    """Positional scores: total of vector[rank-1] per candidate."""
    n = profile.n_candidates
    vector = list(vector)
    if len(vector) != n:
        raise ValueError(f"scoring vector must have length {n}")
    if any(vector[i] < vector[i + 1] for i in range(n - 1)):
        raise ValueError("scoring vector must be non-increasing")
    v = np.asarray(vector, dtype=np.int64)
    totals = v[profile.rank_matrix - 1].sum(axis=0)
    return [int(t) for t in totals]


def borda_vector(n: int) -> list:
    return list(range(n - 1, -1, -1))


def plurality_vector(n: int) -> list:
    return [1] + [0] * (n - 1)
