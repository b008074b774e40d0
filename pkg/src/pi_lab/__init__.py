"""Monte-Carlo measurement of positive-involvement violations in voting."""

from .core import MarginGraph, Profile, Ranking, kendall_tau, move_to_top
from .measures import (
    EstimateRow,
    SimulationConfig,
    TrialTally,
    brute_force_coalitional_pi,
    disagree,
    has_potent_voter,
    pair_disagree,
    pair_violation,
    pi_violation_witness,
    run_pair_paradigm,
    run_profile_paradigm,
    run_simulation,
)
from .methods import (
    MethodId,
    RankedPairsCapExceeded,
    all_methods,
    canonical_name,
    condorcet_winner,
    evaluate,
    evaluate_margin,
    parse_method,
)
from .sampling import (
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

__version__ = "0.1.0"

__all__ = [
    "MarginGraph", "Profile", "Ranking", "kendall_tau", "move_to_top",
    "EstimateRow", "SimulationConfig", "TrialTally",
    "brute_force_coalitional_pi", "disagree", "has_potent_voter",
    "pair_disagree", "pair_violation", "pi_violation_witness",
    "run_pair_paradigm", "run_profile_paradigm", "run_simulation",
    "MethodId", "RankedPairsCapExceeded", "all_methods", "canonical_name",
    "condorcet_winner", "evaluate", "evaluate_margin", "parse_method",
    "IAC", "IC", "MALLOWS", "URN", "ProbabilityModel", "RngStream",
    "coalition_profile", "parse_model", "sample_coalition", "sample_profile",
    "__version__",
]
