"""Ballot and profile generators: IC, Polya-Eggenberger urn, Mallows.

Randomness contract: every trial owns an RngStream identified by
(master_seed, stream_index).  Streams are backed by numpy's PCG64 seeded
through SeedSequence spawn keys, so a given (seed, index) pair always
produces the same draws, independent of worker count or trial order.
Cross-machine reproducibility holds for a fixed numpy major version.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from .core import Profile, Ranking

PRESETS = ("IC", "IAC", "URN", "MALLOWS")


@dataclass(frozen=True)
class ProbabilityModel:
    """A preference model: URN(alpha) family or a Mallows mixture.

    IC is URN(0), IAC is URN(1); the URN preset uses alpha=10.  The
    MALLOWS preset is phi=0.8 mixing a reference ranking and its reverse.
    """

    kind: str  # "URN" or "MALLOWS"
    alpha: int = 0
    phi: float = 0.8
    two_refs: bool = True
    name: Optional[str] = None

    def __post_init__(self):
        if self.kind not in ("URN", "MALLOWS"):
            raise ValueError(f"unknown model kind {self.kind!r}")
        if self.kind == "URN" and self.alpha < 0:
            raise ValueError("urn alpha must be non-negative")
        if self.kind == "MALLOWS" and not 0 < self.phi <= 1:
            raise ValueError("mallows phi must be in (0, 1]")

    def __str__(self) -> str:
        if self.name:
            return self.name
        if self.kind == "URN":
            return f"URN({self.alpha})"
        suffix = "" if self.two_refs else ",single_ref"
        return f"MALLOWS({self.phi:g}{suffix})"

    def sampler(self, n_candidates: int, rng: np.random.Generator) -> "ModelSampler":
        if self.kind == "URN":
            return _UrnSampler(n_candidates, self.alpha, rng)
        return _MallowsSampler(n_candidates, self.phi, self.two_refs, rng)


IC = ProbabilityModel("URN", alpha=0, name="IC")
IAC = ProbabilityModel("URN", alpha=1, name="IAC")
URN = ProbabilityModel("URN", alpha=10, name="URN")
MALLOWS = ProbabilityModel("MALLOWS", phi=0.8, two_refs=True, name="MALLOWS")

_PRESET_MODELS = {"IC": IC, "IAC": IAC, "URN": URN, "MALLOWS": MALLOWS}


def parse_model(name: str) -> ProbabilityModel:
    """Resolve a model name: a preset, URN(alpha), or MALLOWS(phi)."""
    key = name.strip()
    if key.upper() in _PRESET_MODELS:
        return _PRESET_MODELS[key.upper()]
    upper = key.upper()
    if upper.startswith("URN(") and upper.endswith(")"):
        return ProbabilityModel("URN", alpha=int(upper[4:-1]), name=None)
    if upper.startswith("MALLOWS(") and upper.endswith(")"):
        return ProbabilityModel("MALLOWS", phi=float(upper[8:-1]), name=None)
    raise ValueError(
        f"unknown model {name!r}; expected one of {', '.join(PRESETS)}, "
        "URN(<alpha>), or MALLOWS(<phi>)"
    )


@dataclass(frozen=True)
class RngStream:
    """Identifier for one deterministic substream of the master seed."""

    master_seed: int
    stream_index: tuple

    def generator(self) -> np.random.Generator:
        spawn_key = self.stream_index
        if not isinstance(spawn_key, tuple):
            spawn_key = (int(spawn_key),)
        seq = np.random.SeedSequence(entropy=self.master_seed, spawn_key=spawn_key)
        return np.random.Generator(np.random.PCG64(seq))


class ModelSampler:
    """Stateful per-trial sampler; draws ballots sequentially."""

    def __init__(self, n: int, rng: np.random.Generator):
        if n < 1:
            raise ValueError("need at least one candidate")
        self.n = n
        self.rng = rng

    def _draw(self, record: bool) -> Ranking:
        raise NotImplementedError

    def sample_profile(self, n_voters: int) -> Profile:
        if n_voters < 1:
            raise ValueError("need at least one voter")
        return Profile(self.n, [self._draw(record=True) for _ in range(n_voters)])

    def sample_ranking(self, policy: str = "continue") -> Ranking:
        """One more ballot from the model, without extending the electorate.

        ``continue`` keeps conditioning on the ballots drawn so far (urn
        reinforcement); ``fresh`` draws from the unconditioned model.
        """
        if policy == "continue":
            return self._draw(record=False)
        if policy == "fresh":
            return self._fresh_draw()
        raise ValueError(f"unknown coalition-draw policy {policy!r}")

    def _fresh_draw(self) -> Ranking:
        raise NotImplementedError

    def _uniform_ranking(self) -> Ranking:
        return Ranking(int(c) for c in self.rng.permutation(self.n))


class _UrnSampler(ModelSampler):
    def __init__(self, n: int, alpha: int, rng: np.random.Generator):
        super().__init__(n, rng)
        self.alpha = alpha
        self.n_fact = math.factorial(n)
        self.drawn: List[Ranking] = []

    def _draw(self, record: bool) -> Ranking:
        # Equivalent to the literal urn: at draw k the urn holds n! + k*alpha
        # tickets, of which k*alpha duplicate an earlier ballot.
        k = len(self.drawn)
        if k == 0 or self.alpha == 0:
            ballot = self._uniform_ranking()
        else:
            fresh_p = self.n_fact / (self.n_fact + k * self.alpha)
            if self.rng.random() < fresh_p:
                ballot = self._uniform_ranking()
            else:
                ballot = self.drawn[int(self.rng.integers(k))]
        if record:
            self.drawn.append(ballot)
        return ballot

    def _fresh_draw(self) -> Ranking:
        return self._uniform_ranking()


class _MallowsSampler(ModelSampler):
    def __init__(self, n: int, phi: float, two_refs: bool, rng: np.random.Generator):
        super().__init__(n, rng)
        self.phi = phi
        self.two_refs = two_refs
        # insertion weights: at step i the new item goes d steps up from the
        # bottom with probability phi^d / sum(phi^0..phi^i)
        self._cum = []
        for i in range(n):
            w = np.array([phi ** d for d in range(i + 1)])
            self._cum.append(np.cumsum(w) / w.sum())

    def _draw(self, record: bool) -> Ranking:
        reference = list(range(self.n))
        if self.two_refs and self.rng.random() < 0.5:
            reference.reverse()
        order: List[int] = []
        for i, item in enumerate(reference):
            u = self.rng.random()
            d = int(np.searchsorted(self._cum[i], u, side="right"))
            order.insert(i - d, item)
        return Ranking(order)

    def _fresh_draw(self) -> Ranking:
        return self._draw(record=False)


def sample_profile(
    model: ProbabilityModel, n_candidates: int, n_voters: int,
    rng: np.random.Generator | RngStream,
) -> Profile:
    if isinstance(rng, RngStream):
        rng = rng.generator()
    return model.sampler(n_candidates, rng).sample_profile(n_voters)


def sample_coalition(
    model: ProbabilityModel,
    sampler_or_rng,
    size: int,
    n_candidates: Optional[int] = None,
    policy: str = "continue",
) -> Profile:
    """A coalition profile: one model-drawn ranking replicated ``size`` times."""
    if size < 1:
        raise ValueError("coalition size must be positive")
    if isinstance(sampler_or_rng, ModelSampler):
        sampler = sampler_or_rng
    else:
        rng = sampler_or_rng
        if isinstance(rng, RngStream):
            rng = rng.generator()
        if n_candidates is None:
            raise ValueError("n_candidates required when passing a raw rng")
        sampler = model.sampler(n_candidates, rng)
    ranking = sampler.sample_ranking(policy=policy)
    return coalition_profile(ranking, size)


def coalition_profile(ranking: Ranking, size: int) -> Profile:
    if size < 1:
        raise ValueError("coalition size must be positive")
    return Profile(ranking.n, [ranking] * size)
