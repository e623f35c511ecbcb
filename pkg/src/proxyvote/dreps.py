"""Constructions of dRep slates, a greedy heuristic, and an exhaustive
oracle certifying the best achievable approximation on small instances.

All constructions read the intrinsic profile: this is a simulator with
ground-truth access, and targeting the true winner is exactly what the
single-minded and mirror slates are for.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from proxyvote import coherence
from proxyvote.model import (
    INFINITE,
    BudgetExceeded,
    DelegationRule,
    DRepType,
    Infinite,
    ModelError,
    Profile,
    TieBreak,
    attracts,
    intrinsic_winner,
    run_election,
)


class NonMajorityThreshold(ModelError):
    """A construction valid only for k=0 was given a reluctant voter."""


class CoreNotCommon(ModelError):
    """The requested core is not revealed by every voter."""


def drep0(profile: Profile) -> DRepType:
    """Single-minded dRep: approves exactly the intrinsic winner."""
    win = intrinsic_winner(profile)
    return DRepType(tuple(1 if j == win else 0 for j in range(profile.m)))


def all_ones(m: int) -> DRepType:
    return DRepType((1,) * m)


def all_zeros(m: int) -> DRepType:
    return DRepType((0,) * m)


def majority_pair(profile: Profile) -> tuple[DRepType, DRepType]:
    """The all-reject / all-approve pair.  Under majority agreement
    every voter is within threshold of one of the two, so the pair
    absorbs the whole electorate."""
    for v in profile.voters:
        if v.k != 0:
            raise NonMajorityThreshold(f"voter {v.id} has k={v.k}; the pair needs k=0")
    return all_zeros(profile.m), all_ones(profile.m)


def _family_pair(m: int, core: tuple[int, ...], sigma: tuple[int, ...],
                 win: int) -> tuple[DRepType, DRepType]:
    # sigma takes precedence on core proposals, including a degenerate
    # core that contains the winner.
    low = [0] * m
    low[win] = 1
    high = [1] * m
    for j, b in zip(core, sigma):
        low[j] = b
        high[j] = b
    return DRepType(tuple(low)), DRepType(tuple(high))


def coherent_family(profile: Profile, core) -> tuple[DRepType, ...]:
    """2^(k+1) dReps spanning all vote patterns on a k-proposal core
    revealed by every voter.

    For each pattern, one dRep rejects everything else except the
    intrinsic winner and one approves everything else; whichever of the
    two is closer on a voter's remaining revealed proposals lands within
    the majority threshold, so the family attracts everyone.
    """
    core = tuple(sorted(core))
    for v in profile.voters:
        if any(v.revealed[j] is None for j in core):
            raise CoreNotCommon(f"voter {v.id} does not reveal the whole core {core}")
    win = intrinsic_winner(profile)
    family: list[DRepType] = []
    for sigma in itertools.product((0, 1), repeat=len(core)):
        family.extend(_family_pair(profile.m, core, sigma, win))
    return tuple(family)


def mirror_all(profile: Profile) -> tuple[DRepType, ...]:
    """One dRep per voter: the voter's intrinsic ballot with the
    intrinsic winner's vote forced to approve."""
    win = intrinsic_winner(profile)
    out = []
    for v in profile.voters:
        votes = list(v.intrinsic)
        votes[win] = 1
        out.append(DRepType(tuple(votes)))
    return tuple(out)


def multi_group_family(profile: Profile, k: int, zeta: int) -> tuple[DRepType, ...]:
    """Per-cell core families for the zeta largest cells of a
    (k, m-k)-coherent partition; falls back to the mirror slate when
    that many dReps already cover one per voter.

    Both the full family and the filtered variant without the
    approve-elsewhere dReps are run, and the slate with the better
    election ratio is returned.
    """
    if zeta < 1:
        raise ModelError("zeta must be >= 1")
    if zeta * 2 ** (k + 1) >= profile.n:
        return mirror_all(profile)
    cells, gamma = coherence.partition_k_coherent(profile, k)
    if zeta > gamma:
        raise ModelError(f"zeta={zeta} exceeds the partition size {gamma}")
    by_id = {v.id: v for v in profile.voters}
    win = intrinsic_winner(profile)
    full: list[DRepType] = []
    filtered: list[DRepType] = []
    for cell in cells[:zeta]:
        inter = None
        for vid in cell:
            rmask = by_id[vid]._known_mask
            inter = rmask if inter is None else inter & rmask
        core = tuple(j for j in range(profile.m) if (inter >> j) & 1)[:k]
        for sigma in itertools.product((0, 1), repeat=len(core)):
            low, high = _family_pair(profile.m, core, sigma, win)
            full.extend((low, high))
            filtered.append(low)
    ratio_full = run_election(profile, full).ratio
    ratio_filtered = run_election(profile, filtered).ratio
    return tuple(full) if ratio_full <= ratio_filtered else tuple(filtered)


def greedy(profile: Profile, lam: int, *, scale_k: bool = True,
           order=None) -> tuple[DRepType, ...]:
    """Build up to lam dReps bit by bit, each bit chosen to keep the
    most not-yet-delegated weight within threshold of the prefix.

    The prefix test truncates revealed sets to the proposals decided so
    far, rescaling k_i to the truncated size (floor(k_i * m_tr / m_i);
    ``scale_k=False`` caps it at m_tr instead).  Ties go to approve.
    After a dRep is finalized, the voters it attracts on their full
    ballots are removed.
    """
    if lam < 1:
        raise ModelError("lam must be >= 1")
    scan = list(range(profile.m)) if order is None else list(order)
    if sorted(scan) != list(range(profile.m)):
        raise ModelError("order must be a permutation of the proposals")
    remaining = list(profile.voters)
    slate: list[DRepType] = []
    for _ in range(lam):
        if not remaining:
            break
        dist = [0] * len(remaining)
        m_tr = [0] * len(remaining)
        bits = {}
        for j in scan:
            gain = [0, 0]
            for idx, v in enumerate(remaining):
                known = v.revealed[j] is not None
                m2 = m_tr[idx] + (1 if known else 0)
                if m2 == 0:
                    gain[0] += v.weight
                    gain[1] += v.weight
                    continue
                k2 = v.k * m2 // v.m_i if scale_k else min(v.k, m2)
                thr = (m2 - k2) // 2
                for b in (0, 1):
                    d2 = dist[idx] + (1 if known and v.revealed[j] != b else 0)
                    if d2 <= thr:
                        gain[b] += v.weight
            bit = 1 if gain[1] >= gain[0] else 0
            bits[j] = bit
            for idx, v in enumerate(remaining):
                if v.revealed[j] is not None:
                    m_tr[idx] += 1
                    if v.revealed[j] != bit:
                        dist[idx] += 1
        drep = DRepType(tuple(bits[j] for j in range(profile.m)))
        slate.append(drep)
        remaining = [v for v in remaining if not attracts(v, drep)]
    return tuple(slate)


@dataclass(frozen=True)
class OracleCertificate:
    """Exhaustive-search result: the best achievable ratio, the
    lexicographically smallest slate achieving it, and how many slates
    were examined."""

    best_ratio: Fraction | Infinite
    witness: tuple[DRepType, ...]
    search_space: int

    def to_json_obj(self) -> dict:
        return {
            "best_ratio": repr(self.best_ratio) if isinstance(self.best_ratio, Infinite)
            else f"{self.best_ratio.numerator}/{self.best_ratio.denominator}",
            "witness": [d.to_string() for d in self.witness],
            "search_space": self.search_space,
        }


def brute_force_best(profile: Profile, lam: int = 1,
                     tiebreak: TieBreak = TieBreak.INTRINSIC_BEST,
                     rule: DelegationRule = DelegationRule.NEAREST_HAMMING,
                     budget: int = 1 << 20) -> OracleCertificate:
    """Minimum achievable ratio over every slate of lam advertised
    types.

    Order matters only under FIRST_LISTED, so the other rules enumerate
    unordered slates (non-decreasing lexicographic tuples).  The budget
    caps the ordered space 2^(lam*m).
    """
    if lam < 1:
        raise ModelError("lam must be >= 1")
    if 2 ** (lam * profile.m) > budget:
        raise BudgetExceeded(
            f"2^{lam * profile.m} slates exceed budget {budget}")
    types = [DRepType(bits) for bits in itertools.product((0, 1), repeat=profile.m)]
    if rule is DelegationRule.FIRST_LISTED:
        slates = itertools.product(types, repeat=lam)
    else:
        slates = itertools.combinations_with_replacement(types, lam)
    best_ratio = None
    witness = None
    count = 0
    for slate in slates:
        count += 1
        ratio = run_election(profile, list(slate), rule, tiebreak).ratio
        if best_ratio is None or ratio < best_ratio:
            best_ratio, witness = ratio, slate
    return OracleCertificate(best_ratio=best_ratio, witness=tuple(witness),
                             search_space=count)


# ---------------------------------------------------------------------------
# CLI construction grammar: <kind>[:key=value,...]

@dataclass(frozen=True)
class ConstructionSpec:
    """Parsed --drep flag: a slate kind plus its parameters."""

    kind: str
    params: dict = field(default_factory=dict)

    KINDS = ("drep0", "all-ones", "all-zeros", "majority-pair", "coherent-family",
             "multi-group", "mirror-all", "greedy", "brute-force")

    @classmethod
    def parse(cls, text: str) -> "ConstructionSpec":
        kind, _, rest = text.partition(":")
        if kind not in cls.KINDS:
            raise ModelError(f"unknown dRep construction {kind!r}; choose from {cls.KINDS}")
        params = {}
        if rest:
            for item in rest.split(","):
                key, sep, value = item.partition("=")
                if not sep:
                    raise ModelError(f"construction parameter {item!r} needs key=value")
                params[key] = value
        return cls(kind=kind, params=params)


def _int_param(spec: ConstructionSpec, key: str, default=None) -> int:
    if key not in spec.params:
        if default is None:
            raise ModelError(f"construction {spec.kind!r} needs parameter {key}")
        return default
    try:
        return int(spec.params[key])
    except ValueError:
        raise ModelError(f"parameter {key} must be an integer") from None


def build_slate(profile: Profile, spec: ConstructionSpec,
                tiebreak: TieBreak = TieBreak.INTRINSIC_BEST,
                rule: DelegationRule = DelegationRule.NEAREST_HAMMING,
                ) -> tuple[DRepType, ...]:
    """Materialize a parsed construction against a profile."""
    if spec.kind == "drep0":
        return (drep0(profile),)
    if spec.kind == "all-ones":
        return (all_ones(profile.m),)
    if spec.kind == "all-zeros":
        return (all_zeros(profile.m),)
    if spec.kind == "majority-pair":
        return majority_pair(profile)
    if spec.kind == "coherent-family":
        raw = spec.params.get("core", "")
        core = tuple(int(c) for c in raw.split("+") if c != "")
        return coherent_family(profile, core)
    if spec.kind == "multi-group":
        return multi_group_family(profile, k=_int_param(spec, "k"),
                                  zeta=_int_param(spec, "zeta"))
    if spec.kind == "mirror-all":
        return mirror_all(profile)
    if spec.kind == "greedy":
        return greedy(profile, lam=_int_param(spec, "lam", 1))
    if spec.kind == "brute-force":
        cert = brute_force_best(profile, lam=_int_param(spec, "lam", 1),
                                tiebreak=tiebreak, rule=rule,
                                budget=_int_param(spec, "budget", 1 << 20))
        return cert.witness
    raise ModelError(f"unknown construction kind {spec.kind!r}")
