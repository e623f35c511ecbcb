"""Structural analysis of revealed sets.

Coherent sets (identical revealed sets), core-based relaxations, voter
partitions into core-sharing cells, and the union/minimum statistics the
approximation bounds are stated in.

A voter set is (x, delta)-coherent when some core X of at least x
proposals is revealed by every member and no member reveals more than
delta proposals outside X.  Taking X to be the intersection of the
members' revealed sets is always optimal, which the exact searches below
exploit.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from math import comb

from proxyvote.model import ModelError, Profile


def _revealed_masks(profile: Profile) -> list[tuple[int, int]]:
    return [(v.id, v._known_mask) for v in profile.voters]


def _bits(mask: int) -> tuple[int, ...]:
    return tuple(j for j in range(mask.bit_length()) if (mask >> j) & 1)


def largest_coherent_set(profile: Profile) -> frozenset[int]:
    """Maximum-cardinality voter set with pairwise identical revealed
    sets; ties broken by smallest contained voter id."""
    groups: dict[int, list[int]] = {}
    for vid, rmask in _revealed_masks(profile):
        groups.setdefault(rmask, []).append(vid)
    best = max(groups.values(), key=lambda g: (len(g), -min(g)))
    return frozenset(best)


def is_coherent(profile: Profile) -> bool:
    return len(largest_coherent_set(profile)) == profile.n


@dataclass(frozen=True)
class XDeltaResult:
    """A core-sharing voter set: members, witness core, and whether the
    exact search (vs the greedy fallback) produced it."""

    members: frozenset[int]
    core: frozenset[int]
    exact: bool


def _members_for_core(pairs, core_mask: int, delta: int) -> list[int]:
    return [vid for vid, rmask in pairs
            if core_mask & ~rmask == 0 and (rmask & ~core_mask).bit_count() <= delta]


def _best_xdelta(pairs, m: int, x: int, delta: int, budget: int) -> XDeltaResult:
    n_cores = sum(comb(m, s) for s in range(x, m + 1))
    exact = n_cores <= budget
    best_members: list[int] = []
    best_core = 0
    if exact:
        # Descending core size: the first strict improvement is found at
        # the largest witness core, and enumeration order is the
        # deterministic tie-break.
        for size in range(m, x - 1, -1):
            for combo in itertools.combinations(range(m), size):
                core_mask = 0
                for j in combo:
                    core_mask |= 1 << j
                members = _members_for_core(pairs, core_mask, delta)
                if len(members) > len(best_members):
                    best_members, best_core = members, core_mask
    else:
        # Grow the core by revealed-frequency; evaluate every prefix of
        # length >= x and keep the best.
        freq = [(-sum(1 for _, rmask in pairs if (rmask >> j) & 1), j) for j in range(m)]
        ordered = [j for _, j in sorted(freq)]
        core_mask = 0
        for j in ordered[:x]:
            core_mask |= 1 << j
        candidates = [core_mask]
        for j in ordered[x:]:
            core_mask |= 1 << j
            candidates.append(core_mask)
        for cand in candidates:
            members = _members_for_core(pairs, cand, delta)
            if len(members) > len(best_members):
                best_members, best_core = members, cand
    result = XDeltaResult(members=frozenset(best_members),
                          core=frozenset(_bits(best_core)), exact=exact)
    _verify_xdelta(pairs, result, x, delta)
    return result


def _verify_xdelta(pairs, result: XDeltaResult, x: int, delta: int) -> None:
    if not result.members:
        return
    if len(result.core) < x:
        raise ModelError("core smaller than x")
    core_mask = 0
    for j in result.core:
        core_mask |= 1 << j
    by_id = dict(pairs)
    for vid in result.members:
        rmask = by_id[vid]
        if core_mask & ~rmask or (rmask & ~core_mask).bit_count() > delta:
            raise ModelError(f"voter {vid} violates the ({x}, {delta}) definition")


def find_xdelta_coherent(profile: Profile, x: int, delta: int,
                         budget: int = 1 << 16) -> XDeltaResult:
    """Maximal-cardinality (x, delta)-coherent voter set with a witness
    core.

    Exact when the number of candidate cores of size >= x fits the
    budget; otherwise a frequency-greedy core is used and ``exact`` is
    False.  The result is re-verified against the definition either way.
    """
    if not 0 <= x <= profile.m or delta < 0:
        raise ModelError("need 0 <= x <= m and delta >= 0")
    return _best_xdelta(_revealed_masks(profile), profile.m, x, delta, budget)


def partition_k_coherent(profile: Profile, k: int,
                         budget: int = 1 << 16) -> tuple[tuple[frozenset[int], ...], int]:
    """Greedy disjoint cover of the electorate by (k, m-k)-coherent
    cells, largest first; returns (cells, cell count).

    Since |X| >= k forces |R_i \\ X| <= m-k, a cell qualifies exactly
    when its members' revealed sets intersect in >= k proposals.
    """
    if k < 0:
        raise ModelError("k must be non-negative")
    for v in profile.voters:
        if v.m_i < k:
            raise ModelError(
                f"voter {v.id} reveals fewer than {k} proposals; no (k, m-k)-coherent "
                "partition exists")
    pairs = _revealed_masks(profile)
    cells: list[frozenset[int]] = []
    while pairs:
        result = _best_xdelta(pairs, profile.m, k, profile.m - k, budget)
        cells.append(result.members)
        pairs = [(vid, rmask) for vid, rmask in pairs if vid not in result.members]
    return tuple(cells), len(cells)


def min_partition_k_coherent(profile: Profile, k: int, limit: int = 12,
                             ) -> tuple[tuple[frozenset[int], ...], int] | None:
    """Exact minimum (k, m-k)-coherent partition by subset DP, or None
    when n exceeds the limit (the DP visits 3^n subset pairs)."""
    n = profile.n
    if n > limit:
        return None
    for v in profile.voters:
        if v.m_i < k:
            raise ModelError(
                f"voter {v.id} reveals fewer than {k} proposals; no (k, m-k)-coherent "
                "partition exists")
    rmasks = [v._known_mask for v in profile.voters]
    ids = [v.id for v in profile.voters]
    full = (1 << n) - 1
    inter = [0] * (1 << n)
    inter[0] = (1 << profile.m) - 1
    for mask in range(1, 1 << n):
        low = (mask & -mask).bit_length() - 1
        inter[mask] = inter[mask & (mask - 1)] & rmasks[low]
    feasible = [inter[mask].bit_count() >= k for mask in range(1 << n)]
    INF = n + 1
    dp = [INF] * (1 << n)
    choice = [0] * (1 << n)
    dp[0] = 0
    for mask in range(1, 1 << n):
        low_bit = mask & -mask
        sub = mask
        while sub:
            if sub & low_bit and feasible[sub] and dp[mask ^ sub] + 1 < dp[mask]:
                dp[mask] = dp[mask ^ sub] + 1
                choice[mask] = sub
            sub = (sub - 1) & mask
    cells = []
    mask = full
    while mask:
        sub = choice[mask]
        cells.append(frozenset(ids[i] for i in range(n) if (sub >> i) & 1))
        mask ^= sub
    cells.sort(key=lambda c: (-len(c), min(c)))
    return tuple(cells), dp[full]


def alpha_beta(profile: Profile) -> tuple[int, int]:
    """(size of the union of revealed sets, smallest revealed set size)."""
    union = 0
    beta = profile.m
    for v in profile.voters:
        union |= v._known_mask
        beta = min(beta, v.m_i)
    return union.bit_count(), beta


@dataclass(frozen=True)
class CoherenceReport:
    """Coherence statistics for one profile at a given reluctance k."""

    largest_coherent: tuple[int, ...]
    is_coherent: bool
    alpha: int
    beta: int
    common_core: tuple[int, ...]
    partition: tuple[tuple[int, ...], ...]
    gamma_upper: int
    gamma_exact: int | None

    def to_json(self) -> str:
        obj = {
            "largest_coherent": list(self.largest_coherent),
            "is_coherent": self.is_coherent,
            "alpha": self.alpha,
            "beta": self.beta,
            "common_core": list(self.common_core),
            "partition": [list(cell) for cell in self.partition],
            "gamma_upper": self.gamma_upper,
            "gamma_exact": self.gamma_exact,
        }
        return json.dumps(obj, indent=2) + "\n"


def build_report(profile: Profile, k: int = 0, exact_limit: int = 12) -> CoherenceReport:
    """Run the full coherence analysis; gamma_exact is None when n is
    too large for the exact partition DP."""
    largest = largest_coherent_set(profile)
    by_id = {v.id: v for v in profile.voters}
    core = by_id[min(largest)].revealed_set
    cells, gamma_upper = partition_k_coherent(profile, k)
    exact = min_partition_k_coherent(profile, k, limit=exact_limit)
    a, b = alpha_beta(profile)
    return CoherenceReport(
        largest_coherent=tuple(sorted(largest)),
        is_coherent=len(largest) == profile.n,
        alpha=a,
        beta=b,
        common_core=core,
        partition=tuple(tuple(sorted(cell)) for cell in cells),
        gamma_upper=gamma_upper,
        gamma_exact=None if exact is None else exact[1],
    )
