"""Election model with incomplete approval ballots and threshold delegation.

Voters hold intrinsic approvals over ``m`` proposals but only know (and
reveal) a subset of their own votes.  Delegation representatives (dReps)
advertise complete 0/1 vote vectors; a voter is attracted by a dRep when
the Hamming distance between their revealed ballot and the advertised
vector, measured on the revealed coordinates only, is at most
``floor((m_i - k_i) / 2)``.  Attracted voters hand their weight to one
dRep, everyone else votes their revealed ballot directly, and the
proposal with the highest combined score wins under a configurable
tie-breaking policy.

All types are immutable and all operations are pure functions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property

APPROVE = 1
REJECT = 0


class ModelError(ValueError):
    """Profile, ballot, or argument data violates a model invariant."""


class BudgetExceeded(ModelError):
    """An exhaustive search would exceed its configured budget."""


class Infinite:
    """Approximation ratio of an election whose winner has intrinsic score 0.

    Compares greater than every rational and equal only to other
    ``Infinite`` instances; use the module-level ``INFINITE`` singleton.
    """

    __slots__ = ()

    def __repr__(self):
        return "inf"

    def __eq__(self, other):
        return isinstance(other, Infinite)

    def __hash__(self):
        return hash("Infinite")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return isinstance(other, Infinite)

    def __gt__(self, other):
        return not isinstance(other, Infinite)

    def __ge__(self, other):
        return True


INFINITE = Infinite()


class TieBreak(Enum):
    """How to pick among proposals tied on the counted score.

    Residual ties after each policy's key are broken by ascending
    proposal index.
    """

    INTRINSIC_BEST = "intrinsic-best"
    REVEALED_BEST = "revealed-best"
    ADVERSARIAL_INTRINSIC = "adversarial-intrinsic"
    LOWEST_INDEX = "lowest-index"


class DelegationRule(Enum):
    """How a voter attracted by several dReps picks one.

    NEAREST_HAMMING prefers the smallest revealed-ballot distance and
    breaks equal distances by dRep list position; FIRST_LISTED takes the
    first attracting dRep in list order.
    """

    FIRST_LISTED = "first-listed"
    NEAREST_HAMMING = "nearest-hamming"


def _as_bit_tuple(votes, where):
    votes = tuple(votes)
    for b in votes:
        if b not in (0, 1):
            raise ModelError(f"{where}: votes must be 0 or 1, got {b!r}")
    return votes


@dataclass(frozen=True)
class Voter:
    """One voter: intrinsic ballot, revealed ballot, weight, reluctance k.

    ``revealed`` uses ``None`` for coordinates the voter does not know;
    every known coordinate must agree with the intrinsic ballot.
    """

    id: int
    intrinsic: tuple[int, ...]
    revealed: tuple[int | None, ...]
    weight: int = 1
    k: int = 0

    def __post_init__(self):
        object.__setattr__(self, "intrinsic",
                           _as_bit_tuple(self.intrinsic, f"voter {self.id}"))
        revealed = tuple(self.revealed)
        object.__setattr__(self, "revealed", revealed)
        if len(self.intrinsic) != len(revealed):
            raise ModelError(f"voter {self.id}: ballot lengths differ")
        m_i = 0
        for j, b in enumerate(revealed):
            if b is None:
                continue
            if b not in (0, 1):
                raise ModelError(f"voter {self.id}: revealed votes must be 0, 1 or None")
            if b != self.intrinsic[j]:
                raise ModelError(
                    f"voter {self.id}: revealed vote on proposal {j} contradicts intrinsic")
            m_i += 1
        if m_i == 0:
            raise ModelError(f"voter {self.id}: must reveal at least one proposal")
        if not isinstance(self.weight, int) or self.weight < 1:
            raise ModelError(f"voter {self.id}: weight must be a positive integer")
        if not isinstance(self.k, int) or not 0 <= self.k <= m_i:
            raise ModelError(f"voter {self.id}: k must lie in [0, {m_i}]")

    @cached_property
    def revealed_set(self) -> tuple[int, ...]:
        """Indices of the proposals this voter knows their vote on."""
        return tuple(j for j, b in enumerate(self.revealed) if b is not None)

    @property
    def m_i(self) -> int:
        return len(self.revealed_set)

    @property
    def threshold(self) -> int:
        """Largest revealed-ballot distance at which this voter delegates."""
        return (self.m_i - self.k) // 2

    # Bitmask mirrors of the revealed ballot; distance() is a single
    # xor/and/popcount on these.
    @cached_property
    def _approve_mask(self) -> int:
        mask = 0
        for j, b in enumerate(self.revealed):
            if b == 1:
                mask |= 1 << j
        return mask

    @cached_property
    def _known_mask(self) -> int:
        mask = 0
        for j in self.revealed_set:
            mask |= 1 << j
        return mask


@dataclass(frozen=True)
class Profile:
    """An electorate: ``m`` proposals and a tuple of voters."""

    m: int
    voters: tuple[Voter, ...]

    def __post_init__(self):
        object.__setattr__(self, "voters", tuple(self.voters))
        if not isinstance(self.m, int) or self.m < 1:
            raise ModelError("profile needs at least one proposal")
        if not self.voters:
            raise ModelError("profile needs at least one voter")
        seen = set()
        for v in self.voters:
            if len(v.intrinsic) != self.m:
                raise ModelError(f"voter {v.id}: ballot length differs from m={self.m}")
            if v.id in seen:
                raise ModelError(f"duplicate voter id {v.id}")
            seen.add(v.id)

    @property
    def n(self) -> int:
        return len(self.voters)

    @cached_property
    def total_weight(self) -> int:
        return sum(v.weight for v in self.voters)


@dataclass(frozen=True)
class DRepType:
    """A dRep's advertised vote vector: one 0/1 entry per proposal."""

    votes: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "votes", _as_bit_tuple(self.votes, "dRep"))
        if not self.votes:
            raise ModelError("dRep must advertise at least one vote")

    @cached_property
    def _mask(self) -> int:
        mask = 0
        for j, b in enumerate(self.votes):
            if b:
                mask |= 1 << j
        return mask

    def approves(self, j: int) -> bool:
        return self.votes[j] == 1

    def to_string(self) -> str:
        return "".join(str(b) for b in self.votes)

    @classmethod
    def from_string(cls, text: str) -> "DRepType":
        try:
            return cls(tuple(int(c) for c in text))
        except (ValueError, ModelError):
            raise ModelError(f"dRep string must be over 0/1, got {text!r}") from None


def distance(voter: Voter, drep: DRepType) -> int:
    """Hamming distance between revealed ballot and advertised vector,
    counted on the voter's revealed coordinates only."""
    if len(drep.votes) != len(voter.revealed):
        raise ModelError("dRep vector length differs from ballot length")
    return ((voter._approve_mask ^ drep._mask) & voter._known_mask).bit_count()


def attracts(voter: Voter, drep: DRepType) -> bool:
    """True iff the voter would delegate to this dRep when no closer
    alternative exists."""
    return distance(voter, drep) <= voter.threshold


def attraction_set(profile: Profile, drep: DRepType) -> frozenset[int]:
    """Ids of all voters attracted by the dRep."""
    return frozenset(v.id for v in profile.voters if attracts(v, drep))


def assign_delegations(profile: Profile, dreps: list[DRepType],
                       rule: DelegationRule = DelegationRule.NEAREST_HAMMING,
                       ) -> tuple[int | None, ...]:
    """Per-voter delegation choice, aligned with ``profile.voters``.

    ``None`` marks a direct voter (attracted by no dRep); an integer is
    an index into ``dreps``.
    """
    assignment: list[int | None] = []
    for voter in profile.voters:
        chosen: int | None = None
        best_dist = None
        for idx, drep in enumerate(dreps):
            d = distance(voter, drep)
            if d > voter.threshold:
                continue
            if rule is DelegationRule.FIRST_LISTED:
                chosen = idx
                break
            if best_dist is None or d < best_dist:
                chosen, best_dist = idx, d
        assignment.append(chosen)
    return tuple(assignment)


def scores(profile: Profile, dreps: list[DRepType],
           assignment: tuple[int | None, ...]) -> tuple[int, ...]:
    """Combined revealed scores: dRep weights plus direct revealed approvals.

    With ``dreps=[]`` and an all-direct assignment this is the plain
    revealed score vector.
    """
    if len(assignment) != profile.n:
        raise ModelError("assignment length differs from voter count")
    drep_weight = [0] * len(dreps)
    out = [0] * profile.m
    for voter, a in zip(profile.voters, assignment):
        if a is None:
            for j in voter.revealed_set:
                if voter.revealed[j] == 1:
                    out[j] += voter.weight
        else:
            if not attracts(voter, dreps[a]):
                raise ModelError(f"voter {voter.id} assigned to a dRep that does not attract them")
            drep_weight[a] += voter.weight
    for drep, w in zip(dreps, drep_weight):
        if w:
            for j, b in enumerate(drep.votes):
                if b:
                    out[j] += w
    return tuple(out)


def intrinsic_scores(profile: Profile) -> tuple[int, ...]:
    """Weighted count of intrinsic approvals per proposal."""
    out = [0] * profile.m
    for voter in profile.voters:
        for j, b in enumerate(voter.intrinsic):
            if b:
                out[j] += voter.weight
    return tuple(out)


def winner(score_vector, tiebreak: TieBreak, intrinsic=None, revealed=None) -> int:
    """Index of a maximal-score proposal under the given tie-break policy.

    ``intrinsic`` is required for the intrinsic-based policies;
    ``revealed`` (the no-dRep revealed score vector) for REVEALED_BEST.
    """
    if not score_vector:
        raise ModelError("empty score vector")
    top = max(score_vector)
    tied = [j for j, s in enumerate(score_vector) if s == top]
    if len(tied) == 1 or tiebreak is TieBreak.LOWEST_INDEX:
        return tied[0]
    if tiebreak is TieBreak.INTRINSIC_BEST:
        if intrinsic is None:
            raise ModelError("intrinsic scores required for intrinsic-best tie-break")
        return max(tied, key=lambda j: (intrinsic[j], -j))
    if tiebreak is TieBreak.ADVERSARIAL_INTRINSIC:
        if intrinsic is None:
            raise ModelError("intrinsic scores required for adversarial tie-break")
        return min(tied, key=lambda j: (intrinsic[j], j))
    if tiebreak is TieBreak.REVEALED_BEST:
        if revealed is None:
            raise ModelError("no-dRep revealed scores required for revealed-best tie-break")
        return max(tied, key=lambda j: (revealed[j], -j))
    raise ModelError(f"unknown tie-break policy {tiebreak!r}")


def intrinsic_winner(profile: Profile) -> int:
    """The proposal a fully informed electorate would elect."""
    intr = intrinsic_scores(profile)
    return winner(intr, TieBreak.INTRINSIC_BEST, intr)


@dataclass(frozen=True)
class ElectionResult:
    """Outcome of one election run.

    ``ratio`` is the exact rational opt / sc(winner), or ``INFINITE``
    when the elected proposal has intrinsic score 0.
    """

    assignment: tuple[int | None, ...]
    revealed_scores: tuple[int, ...]
    winner: int
    winner_intrinsic_score: int
    ratio: Fraction | Infinite


def run_election(profile: Profile, dreps: list[DRepType],
                 rule: DelegationRule = DelegationRule.NEAREST_HAMMING,
                 tiebreak: TieBreak = TieBreak.INTRINSIC_BEST) -> ElectionResult:
    """Assign delegations, score, and elect; ratio is exact."""
    assignment = assign_delegations(profile, dreps, rule)
    sc_d = scores(profile, dreps, assignment)
    intr = intrinsic_scores(profile)
    revealed_base = None
    if tiebreak is TieBreak.REVEALED_BEST:
        revealed_base = scores(profile, [], (None,) * profile.n)
    win = winner(sc_d, tiebreak, intr, revealed_base)
    opt = max(intr)
    sc_win = intr[win]
    ratio = Fraction(opt, sc_win) if sc_win > 0 else INFINITE
    return ElectionResult(assignment=assignment, revealed_scores=sc_d,
                          winner=win, winner_intrinsic_score=sc_win, ratio=ratio)


def expand_weights(profile: Profile) -> Profile:
    """Unit-weight equivalent profile with w_i clones per voter.

    Clone ids are renumbered 0..n'-1 in original voter order, so
    elections (which never read ids) are unaffected.
    """
    clones = []
    next_id = 0
    for voter in profile.voters:
        for _ in range(voter.weight):
            clones.append(Voter(id=next_id, intrinsic=voter.intrinsic,
                                revealed=voter.revealed, weight=1, k=voter.k))
            next_id += 1
    return Profile(m=profile.m, voters=tuple(clones))


# ---------------------------------------------------------------------------
# JSON serialization
#
# {"m": 4, "voters": [{"id": 0, "weight": 1, "k": 0,
#                      "intrinsic": "1100", "revealed": "-100"}, ...]}
# "-" encodes an unknown revealed coordinate.  Emission is byte-stable:
# the same profile always serializes to the same text.

def _ballot_to_string(ballot) -> str:
    return "".join("-" if b is None else str(b) for b in ballot)


def _ballot_from_string(text: str):
    out = []
    for c in text:
        if c == "-":
            out.append(None)
        elif c in "01":
            out.append(int(c))
        else:
            raise ModelError(f"ballot strings use only 0, 1 and -, got {c!r}")
    return tuple(out)


def profile_to_json(profile: Profile) -> str:
    obj = {
        "m": profile.m,
        "voters": [
            {
                "id": v.id,
                "weight": v.weight,
                "k": v.k,
                "intrinsic": _ballot_to_string(v.intrinsic),
                "revealed": _ballot_to_string(v.revealed),
            }
            for v in profile.voters
        ],
    }
    return json.dumps(obj, indent=2) + "\n"


def profile_from_json(text: str) -> Profile:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError(f"invalid profile JSON: {exc}") from None
    if not isinstance(obj, dict) or "m" not in obj or "voters" not in obj:
        raise ModelError("profile JSON needs top-level 'm' and 'voters'")
    voters = []
    for entry in obj["voters"]:
        try:
            voters.append(Voter(
                id=entry["id"],
                intrinsic=_ballot_from_string(entry["intrinsic"]),
                revealed=_ballot_from_string(entry["revealed"]),
                weight=entry.get("weight", 1),
                k=entry.get("k", 0),
            ))
        except KeyError as exc:
            raise ModelError(f"voter entry missing field {exc}") from None
    return Profile(m=obj["m"], voters=tuple(voters))


def save_profile(profile: Profile, path) -> None:
    with open(path, "w") as fh:
        fh.write(profile_to_json(profile))


def load_profile(path) -> Profile:
    with open(path) as fh:
        return profile_from_json(fh.read())
