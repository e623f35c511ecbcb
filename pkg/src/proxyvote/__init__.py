"""Proxy voting with incomplete approval ballots.

Threshold delegation to advertised representatives, approval-winner
elections under controlled tie-breaking, constructive dRep slates,
brute-force certificates, hard-instance generators, and a ratings-based
experiment pipeline.
"""

from proxyvote.model import (
    APPROVE,
    REJECT,
    INFINITE,
    BudgetExceeded,
    DelegationRule,
    DRepType,
    ElectionResult,
    Infinite,
    ModelError,
    Profile,
    TieBreak,
    Voter,
    assign_delegations,
    attraction_set,
    attracts,
    distance,
    expand_weights,
    intrinsic_scores,
    intrinsic_winner,
    load_profile,
    profile_from_json,
    profile_to_json,
    run_election,
    save_profile,
    scores,
    winner,
)

__all__ = [
    "APPROVE",
    "REJECT",
    "INFINITE",
    "BudgetExceeded",
    "DelegationRule",
    "DRepType",
    "ElectionResult",
    "Infinite",
    "ModelError",
    "Profile",
    "TieBreak",
    "Voter",
    "assign_delegations",
    "attraction_set",
    "attracts",
    "distance",
    "expand_weights",
    "intrinsic_scores",
    "intrinsic_winner",
    "load_profile",
    "profile_from_json",
    "profile_to_json",
    "run_election",
    "save_profile",
    "scores",
    "winner",
]
