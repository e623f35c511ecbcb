"""Deterministic generators for hard election instances.

Each generator builds a profile whose best achievable outcome is known
exactly, so brute-force certificates can be checked against frozen
numbers.  Also houses the minimax-approval-voting reduction used to
probe computational hardness, and a seeded random-profile generator for
property suites.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from proxyvote.model import (
    BudgetExceeded,
    ModelError,
    Profile,
    Voter,
)


def gen_attraction_gap(n: int) -> Profile:
    """n voters, 4 proposals; the all-approve dRep attracts n-1 voters
    yet the election only reaches a proposal of intrinsic score 1.

    Proposal 0 is intrinsically approved by everyone and hidden from
    everyone.  Voter 0 approves proposal 1 and rejects 2 and 3; all
    others do the opposite.  All k_i = 0.
    """
    if n < 2:
        raise ModelError("gen_attraction_gap needs n >= 2")
    voters = [Voter(id=0, intrinsic=(1, 1, 0, 0), revealed=(None, 1, 0, 0), k=0)]
    for i in range(1, n):
        voters.append(Voter(id=i, intrinsic=(1, 0, 1, 1), revealed=(None, 0, 1, 1), k=0))
    return Profile(m=4, voters=tuple(voters))


def gen_adversarial_tie(n: int, m: int) -> Profile:
    """Every proposal ties once an all-approve dRep absorbs the
    electorate; adversarial tie-breaking then elects proposal 1, which
    nobody intrinsically approves.

    All voters approve everything except proposal 1; only proposal 0 is
    hidden.  All k_i = 0.
    """
    if n < 1 or m < 2:
        raise ModelError("gen_adversarial_tie needs n >= 1 and m >= 2")
    intrinsic = tuple(0 if j == 1 else 1 for j in range(m))
    revealed = tuple(None if j == 0 else intrinsic[j] for j in range(m))
    voters = [Voter(id=i, intrinsic=intrinsic, revealed=revealed, k=0) for i in range(n)]
    return Profile(m=m, voters=tuple(voters))


def gen_omega_n(m: int, k: int = 1) -> Profile:
    """m odd > 3; n = m-1 voters in pairs with disjoint two-proposal
    revealed sets; the last proposal is approved by all but hidden.

    Pair over proposals {2t, 2t+1}: the first voter approves both, the
    second approves 2t and rejects 2t+1; both reveal exactly that pair.
    With k >= 1 a dRep attracts a voter only by matching both revealed
    votes, so no dRep attracts both voters of a pair.
    """
    if m <= 3 or m % 2 == 0:
        raise ModelError("gen_omega_n needs odd m > 3")
    if not 1 <= k <= 2:
        raise ModelError("gen_omega_n needs k in {1, 2} (revealed sets have size 2)")
    n = m - 1
    voters = []
    for t in range(n // 2):
        a, b = 2 * t, 2 * t + 1
        for offset, b_vote in ((0, 1), (1, 0)):
            intrinsic = [0] * m
            revealed: list[int | None] = [None] * m
            intrinsic[m - 1] = 1
            intrinsic[a] = 1
            intrinsic[b] = b_vote
            revealed[a] = intrinsic[a]
            revealed[b] = intrinsic[b]
            voters.append(Voter(id=2 * t + offset, intrinsic=tuple(intrinsic),
                                revealed=tuple(revealed), k=k))
    return Profile(m=m, voters=tuple(voters))


def gen_copy_refined(m: int, r: int) -> Profile:
    """gen_omega_n with each voter cloned so every pair's revealed
    set is shared by exactly r voters: floor(r/2) copies of the first
    voter of each pair, ceil(r/2) of the second.

    The largest coherent set then has size exactly r.
    """
    if r < 2:
        raise ModelError("gen_copy_refined needs r >= 2")
    base = gen_omega_n(m)
    voters = []
    next_id = 0
    for voter in base.voters:
        copies = r // 2 if voter.id % 2 == 0 else (r + 1) // 2
        for _ in range(copies):
            voters.append(Voter(id=next_id, intrinsic=voter.intrinsic,
                                revealed=voter.revealed, k=voter.k))
            next_id += 1
    return Profile(m=m, voters=tuple(voters))


def gen_16_lower() -> Profile:
    """Eight voters, four proposals, best single-dRep ratio exactly 8/5.

    Proposal 0 is approved by all and hidden from all.  On proposals
    1..3 the fully revealed patterns are the six vectors with one or two
    approvals plus two voters at 111.  Direct voting scores 5 on every
    revealed proposal while the hidden consensus proposal scores 8.
    """
    patterns = [(1, 1, 0), (1, 0, 1), (0, 1, 1), (1, 0, 0), (0, 1, 0), (0, 0, 1),
                (1, 1, 1), (1, 1, 1)]
    voters = []
    for i, pat in enumerate(patterns):
        intrinsic = (1,) + pat
        revealed = (None,) + pat
        voters.append(Voter(id=i, intrinsic=intrinsic, revealed=revealed, k=0))
    return Profile(m=4, voters=tuple(voters))


def gen_2eps_revealed() -> Profile:
    """Two voters, two proposals; revealed-score tie-breaking halves the
    achievable intrinsic score.

    Both approve the hidden proposal 0; voter 0 reveals approval of
    proposal 1, voter 1 reveals rejection of it.
    """
    return Profile(m=2, voters=(
        Voter(id=0, intrinsic=(1, 1), revealed=(None, 1), k=0),
        Voter(id=1, intrinsic=(1, 0), revealed=(None, 0), k=0),
    ))


def gen_2eps_general(k: int) -> Profile:
    """Coherent instance with n = 2^k voters whose revealed ballots are
    pairwise distinct, so at threshold 0 any dRep attracts at most one.

    m = k + 2.  Proposal 0 is approved by all and hidden; proposals
    1..m-2 follow a dyadic block pattern (the odd-numbered blocks of
    size 2^(k-j+1) approve proposal index j); the last proposal is
    revealed and approved by nobody.  All voters share the revealed set
    {1, ..., m-1} of size k+1 and have reluctance k.
    """
    if k < 1:
        raise ModelError("gen_2eps_general needs k >= 1")
    n = 2 ** k
    m = k + 2
    voters = []
    for v in range(n):
        intrinsic = [1] + [0] * (m - 1)
        for j in range(1, m - 1):
            block = v // (2 ** (k - j))
            if block % 2 == 0:
                intrinsic[j] = 1
        revealed: list[int | None] = [None] + intrinsic[1:]
        voters.append(Voter(id=v, intrinsic=tuple(intrinsic),
                            revealed=tuple(revealed), k=k))
    return Profile(m=m, voters=tuple(voters))


def gen_large_k(n: int, c: int) -> Profile:
    """Coherent instance with very high reluctance where any dRep
    attracts at most one voter and the winner's score is at most 2.

    m = (n-1)(c+1) + 1 and k = m - 1 - 2c.  Voter i < n-1 approves its
    own (c+1)-wide block of the first m-1 proposals; voter n-1 approves
    all of them; everyone reveals the first m-1 proposals and approves
    the hidden last one.  Pairwise revealed distance is >= 2c+2, above
    twice the delegation threshold c.
    """
    if n < 4 or c < 1:
        raise ModelError("gen_large_k needs n >= 4 and c >= 1")
    m = (n - 1) * (c + 1) + 1
    k = m - 1 - 2 * c
    voters = []
    for i in range(n - 1):
        intrinsic = [0] * m
        intrinsic[m - 1] = 1
        for j in range(i * (c + 1), (i + 1) * (c + 1)):
            intrinsic[j] = 1
        revealed: list[int | None] = list(intrinsic)
        revealed[m - 1] = None
        voters.append(Voter(id=i, intrinsic=tuple(intrinsic),
                            revealed=tuple(revealed), k=k))
    intrinsic = [1] * m
    revealed = [1] * (m - 1) + [None]
    voters.append(Voter(id=n - 1, intrinsic=tuple(intrinsic),
                        revealed=tuple(revealed), k=k))
    return Profile(m=m, voters=tuple(voters))


# ---------------------------------------------------------------------------
# Minimax approval voting

@dataclass(frozen=True)
class MavInstance:
    """Minimax approval voting: find a vector within Hamming radius
    m/2 of every ballot.  m must be even; theta = m/2."""

    m: int
    ballots: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "ballots", tuple(tuple(b) for b in self.ballots))
        if self.m < 2 or self.m % 2:
            raise ModelError("mav instance needs even m >= 2")
        if not self.ballots:
            raise ModelError("mav instance needs at least one ballot")
        for ballot in self.ballots:
            if len(ballot) != self.m or any(b not in (0, 1) for b in ballot):
                raise ModelError("mav ballots must be 0/1 vectors of length m")

    @property
    def theta(self) -> int:
        return self.m // 2


def _hamming(a, b) -> int:
    return sum(x != y for x, y in zip(a, b))


def mav_solve(instance: MavInstance, budget: int = 1 << 20) -> tuple[int, ...] | None:
    """Exhaustive center search; returns the lexicographically smallest
    vector among those minimizing the maximum ballot distance, or None
    when even that minimum exceeds theta."""
    if 2 ** instance.m > budget:
        raise BudgetExceeded(f"2^{instance.m} candidate centers exceed budget {budget}")
    best = None
    best_ecc = instance.m + 1
    for cand in itertools.product((0, 1), repeat=instance.m):
        ecc = max(_hamming(cand, ballot) for ballot in instance.ballots)
        if ecc < best_ecc:
            best, best_ecc = cand, ecc
    return best if best_ecc <= instance.theta else None


def mav_reduce(instance: MavInstance) -> tuple[Profile, int]:
    """Election instance on m+3 proposals in which some dRep elects
    proposal m at score n+2 exactly when the mav instance has a center.

    Original voters keep their ballot on the first m proposals, fully
    revealed, and secretly approve only proposal m of the tail.  Two
    special dummies approve the whole tail and reveal exactly it; n-1
    filler dummies approve and reveal only the last two proposals.  All
    thresholds are majority agreement (k=0).  Returns the profile and
    the target score n+2.
    """
    m, n = instance.m, len(instance.ballots)
    voters = []
    for i, ballot in enumerate(instance.ballots):
        voters.append(Voter(id=i, intrinsic=ballot + (1, 0, 0),
                            revealed=ballot + (None, None, None), k=0))
    for s in range(2):
        voters.append(Voter(id=n + s, intrinsic=(0,) * m + (1, 1, 1),
                            revealed=(None,) * m + (1, 1, 1), k=0))
    for d in range(n - 1):
        voters.append(Voter(id=n + 2 + d, intrinsic=(0,) * m + (0, 1, 1),
                            revealed=(None,) * m + (None, 1, 1), k=0))
    return Profile(m=m + 3, voters=tuple(voters)), n + 2


# ---------------------------------------------------------------------------
# Seeded random profiles for property suites

def random_profile(seed: int, n: int, m: int, *, uniform_k: int | None = None,
                   coherent: bool = False, hidden_consensus: bool = False,
                   weight_range: tuple[int, int] = (1, 1)) -> Profile:
    """Random valid profile, fully determined by the arguments.

    ``uniform_k=None`` draws each k_i uniformly from [0, m_i];
    ``coherent`` gives every voter the same revealed set;
    ``hidden_consensus`` makes proposal 0 intrinsically approved by all
    and revealed by none (the shape every lower-bound instance here
    uses), which requires m >= 2.
    """
    if n < 1 or m < 1:
        raise ModelError("random_profile needs n >= 1 and m >= 1")
    if hidden_consensus and m < 2:
        raise ModelError("hidden consensus proposal needs m >= 2")
    rng = random.Random(seed)
    open_idx = list(range(1, m)) if hidden_consensus else list(range(m))
    min_r = max(1, uniform_k or 0)
    if min_r > len(open_idx):
        raise ModelError("uniform_k exceeds the available revealed coordinates")

    def draw_revealed_set():
        size = rng.randint(min_r, len(open_idx))
        return sorted(rng.sample(open_idx, size))

    common = draw_revealed_set() if coherent else None
    voters = []
    for i in range(n):
        intrinsic = [rng.randint(0, 1) for _ in range(m)]
        if hidden_consensus:
            intrinsic[0] = 1
        r_i = common if common is not None else draw_revealed_set()
        revealed: list[int | None] = [None] * m
        for j in r_i:
            revealed[j] = intrinsic[j]
        k_i = rng.randint(0, len(r_i)) if uniform_k is None else uniform_k
        voters.append(Voter(id=i, intrinsic=tuple(intrinsic), revealed=tuple(revealed),
                            weight=rng.randint(*weight_range), k=k_i))
    return Profile(m=m, voters=tuple(voters))
