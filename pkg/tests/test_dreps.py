from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from proxyvote.coherence import alpha_beta, partition_k_coherent
from proxyvote.dreps import (
    ConstructionSpec,
    CoreNotCommon,
    NonMajorityThreshold,
    all_ones,
    all_zeros,
    brute_force_best,
    build_slate,
    coherent_family,
    drep0,
    greedy,
    majority_pair,
    mirror_all,
    multi_group_family,
)
from proxyvote.forge import (
    gen_16_lower,
    gen_2eps_revealed,
    gen_attraction_gap,
    gen_omega_n,
)
from proxyvote.model import (
    BudgetExceeded,
    DelegationRule,
    DRepType,
    ModelError,
    Profile,
    TieBreak,
    Voter,
    attraction_set,
    intrinsic_scores,
    intrinsic_winner,
    run_election,
)

from strategies import profiles


def voter(revealed, intrinsic=None, k=0, vid=0):
    if intrinsic is None:
        intrinsic = tuple(1 if b is None else b for b in revealed)
    return Voter(id=vid, intrinsic=tuple(intrinsic), revealed=tuple(revealed),
                 weight=1, k=k)


def best_of_drep0_and_direct(p):
    """max intrinsic winner score over the one-dRep and no-dRep elections."""
    sc = intrinsic_scores(p)
    with_drep = run_election(p, [drep0(p)])
    direct = run_election(p, [])
    return max(sc[with_drep.winner], sc[direct.winner])


def with_uniform_k(p, k):
    voters = tuple(replace(v, k=min(k, v.m_i)) for v in p.voters)
    return Profile(m=p.m, voters=voters)


# --- drep0 / constant slates ---------------------------------------------

def test_drep0_approves_only_the_intrinsic_winner():
    assert drep0(gen_attraction_gap(10)).votes == (1, 0, 0, 0)


def test_drep0_single_proposal():
    p = Profile(m=1, voters=(voter((1,)),))
    assert drep0(p).votes == (1,)


def test_drep0_on_lower_bound_fixture():
    p = gen_16_lower()
    win = intrinsic_winner(p)
    d = drep0(p)
    assert d.votes[win] == 1 and sum(d.votes) == 1


def test_constant_slates():
    assert all_ones(4).votes == (1, 1, 1, 1)
    assert all_zeros(4).votes == (0, 0, 0, 0)


def test_all_ones_attracts_all_but_the_holdout():
    p = gen_attraction_gap(10)
    assert len(attraction_set(p, all_ones(p.m))) == p.n - 1


# --- majority_pair --------------------------------------------------------

def test_majority_pair_elects_optimally_on_attraction_gap():
    p = gen_attraction_gap(10)
    res = run_election(p, list(majority_pair(p)))
    assert res.winner == 0
    assert res.ratio == 1


def test_majority_pair_rejects_reluctant_voters():
    p = Profile(m=3, voters=(voter((1, 0, None), k=1),))
    with pytest.raises(NonMajorityThreshold):
        majority_pair(p)


@given(profiles(uniform_k=0, weighted=True))
def test_majority_pair_attracts_everyone_at_k_zero(p):
    res = run_election(p, list(majority_pair(p)))
    assert None not in res.assignment


# --- coherent_family ------------------------------------------------------

def test_empty_core_family_is_the_two_drep_pair():
    p = gen_attraction_gap(10)
    fam = coherent_family(p, ())
    assert fam == (drep0(p), all_ones(p.m))


def test_two_proposal_core_spans_eight_dreps():
    ballot = (1, 0, None, 1, None)
    p = Profile(m=5, voters=tuple(
        voter(ballot, intrinsic=(1, 0, i % 2, 1, 1), vid=i, k=2) for i in range(6)))
    fam = coherent_family(p, (0, 1))
    assert len(fam) == 8
    res = run_election(p, list(fam))
    sc = intrinsic_scores(p)
    assert sc[res.winner] == max(sc)


def test_family_delegates_everyone_when_winner_is_hidden():
    p = Profile(m=4, voters=tuple(
        voter((None, 1, 0, None), intrinsic=(1, 1, 0, i % 2), vid=i, k=1)
        for i in range(5)))
    assert intrinsic_winner(p) == 0
    res = run_election(p, list(coherent_family(p, (1,))))
    assert None not in res.assignment


def test_family_requires_the_core_to_be_revealed():
    p = Profile(m=3, voters=(voter((1, None, 0), vid=0),
                             voter((1, 1, 0), vid=1)))
    with pytest.raises(CoreNotCommon):
        coherent_family(p, (1,))


def test_family_can_strand_a_revealed_winner_rejecter():
    # Unanchored: voter 2 reveals a rejection of the intrinsic winner and
    # sits at distance 1 from every family member with threshold 0, so it
    # stays direct.  Full attraction needs every voter to intrinsically
    # approve the winner (or the winner hidden, as above).
    p = Profile(m=3, voters=(
        voter((1, 1, None), intrinsic=(1, 1, 1), k=1, vid=0),
        voter((1, 0, None), intrinsic=(1, 0, 1), k=1, vid=1),
        voter((0, 1, None), intrinsic=(0, 1, 0), k=1, vid=2)))
    res = run_election(p, list(coherent_family(p, (1,))))
    assert res.assignment == (2, 0, None)


@given(profiles(coherent=True, anchored=True), st.integers(0, 2))
def test_family_on_anchored_coherent_profiles_is_lossless(p, k0):
    _, beta = alpha_beta(p)
    k = min(k0, beta)
    p = with_uniform_k(p, k)
    core = p.voters[0].revealed_set[:k]
    res = run_election(p, list(coherent_family(p, core)))
    assert None not in res.assignment
    assert res.ratio == 1


# --- mirror_all / multi_group_family -------------------------------------

def test_mirror_of_a_single_voter_approves_the_winner():
    p = Profile(m=3, voters=(voter((0, 1, None), intrinsic=(0, 1, 1)),))
    assert mirror_all(p) == (DRepType((0, 1, 1)),)


@given(profiles(anchored=True, weighted=True))
def test_mirror_slate_is_exact_on_anchored_profiles(p):
    res = run_election(p, list(mirror_all(p)))
    assert None not in res.assignment
    assert res.ratio == 1


def test_multi_group_falls_back_to_mirrors_on_small_electorates():
    p = Profile(m=3, voters=tuple(
        voter((1, 0, None), intrinsic=(1, 0, 1), vid=i, k=1) for i in range(3)))
    assert multi_group_family(p, 1, 1) == mirror_all(p)


def test_multi_group_rejects_zeta_beyond_the_partition():
    # 10 identical-revealed voters: one partition cell, and zeta=2 stays
    # below the n-dRep fallback, so the gamma check must fire.
    p = Profile(m=4, voters=tuple(
        voter((1, 0, None, None), intrinsic=(1, 0, i % 2, 1), vid=i, k=1)
        for i in range(10)))
    with pytest.raises(ModelError):
        multi_group_family(p, 1, 2)
    with pytest.raises(ModelError):
        multi_group_family(p, 1, 0)


@pytest.mark.parametrize("m", [9, 11, 13])
def test_multi_group_meets_the_partition_bound(m):
    # Partition cells of the disjoint-pairs fixture are coherent, so the
    # guarantee is sc(winner) >= opt * min(1, 3*zeta/gamma).
    p = gen_omega_n(m)
    sc = intrinsic_scores(p)
    opt = max(sc)
    _, gamma = partition_k_coherent(p, 1)
    assert gamma == (m - 1) // 2
    for zeta in range(1, gamma + 1):
        slate = multi_group_family(p, 1, zeta)
        res = run_election(p, list(slate))
        assert len(slate) <= min(p.n, zeta * 4)
        assert sc[res.winner] >= min(Fraction(1), Fraction(3 * zeta, gamma)) * opt


# --- greedy ---------------------------------------------------------------

def test_greedy_absorbs_identical_voters_with_one_drep():
    p = Profile(m=4, voters=tuple(
        voter((1, 0, None, 1), intrinsic=(1, 0, 1, 1), vid=i) for i in range(4)))
    slate = greedy(p, 3)
    assert len(slate) == 1
    assert attraction_set(p, slate[0]) == frozenset(range(4))


def test_greedy_validates_arguments():
    p = gen_attraction_gap(10)
    with pytest.raises(ModelError):
        greedy(p, 0)
    with pytest.raises(ModelError):
        greedy(p, 1, order=[0, 0, 1, 2])


def test_greedy_first_drep_can_trail_the_constant_slates():
    # Two k=1 voters agreeing everywhere except the last proposal: the
    # prefix ties resolve to approve and the final vector strands voter
    # 0, while all-zeros attracts both.  This keeps the incremental rule
    # honest about not dominating the constant slates.
    p = Profile(m=3, voters=(
        voter((0, 0, 0), k=1, vid=0),
        voter((0, 0, 1), k=1, vid=1)))
    first = greedy(p, 1)[0]
    assert first.votes == (0, 1, 1)
    assert len(attraction_set(p, first)) == 1
    assert len(attraction_set(p, all_zeros(3))) == 2


def test_greedy_is_deterministic_and_order_sensitive():
    p = gen_attraction_gap(10)
    assert greedy(p, 3) == greedy(p, 3)
    assert greedy(p, 3) == greedy(p, 3, order=range(p.m))
    reordered = greedy(p, 3, order=[3, 2, 1, 0])
    assert reordered == greedy(p, 3, order=[3, 2, 1, 0])


@given(profiles(max_n=6, max_m=4), st.integers(1, 4))
@settings(max_examples=50)
def test_greedy_prefixes_are_stable(p, lam):
    full = greedy(p, 6)
    assert greedy(p, lam) == full[:min(lam, len(full))]


@given(profiles(max_n=5, max_m=4))
@settings(max_examples=40, deadline=None)
def test_greedy_never_beats_the_oracle(p):
    cert = brute_force_best(p, 1)
    greedy_ratio = run_election(p, list(greedy(p, 1))).ratio
    assert not greedy_ratio < cert.best_ratio


# --- brute_force_best -----------------------------------------------------

def test_oracle_certifies_the_845_gap():
    cert = brute_force_best(gen_16_lower())
    assert cert.best_ratio == Fraction(8, 5)


def test_oracle_certifies_the_omega_gap():
    cert = brute_force_best(gen_omega_n(9))
    assert cert.best_ratio == Fraction(4)


def test_oracle_certifies_the_revealed_tiebreak_gap():
    cert = brute_force_best(gen_2eps_revealed(), tiebreak=TieBreak.REVEALED_BEST)
    assert cert.best_ratio == Fraction(2)


def test_oracle_search_space_counts():
    p = Profile(m=2, voters=(voter((1, 0)),))
    ordered = brute_force_best(p, 2, rule=DelegationRule.FIRST_LISTED)
    unordered = brute_force_best(p, 2)
    assert ordered.search_space == 16
    assert unordered.search_space == 10
    assert ordered.best_ratio == unordered.best_ratio


def test_oracle_respects_its_budget():
    p = Profile(m=5, voters=(voter((1, 0, None, None, 1)),))
    with pytest.raises(BudgetExceeded):
        brute_force_best(p, 5, budget=1 << 20)


@given(profiles(max_n=5, max_m=4), st.sampled_from(list(TieBreak)))
@settings(max_examples=40, deadline=None)
def test_oracle_witness_reproduces_its_ratio(p, tiebreak):
    cert = brute_force_best(p, 1, tiebreak=tiebreak)
    rerun = run_election(p, list(cert.witness), tiebreak=tiebreak)
    assert rerun.ratio == cert.best_ratio


# --- drep0 / direct-vote score guarantees ---------------------------------

@given(profiles(coherent=True, uniform_k=0))
def test_single_drep_guarantee_on_coherent_majority_profiles(p):
    opt = max(intrinsic_scores(p))
    assert best_of_drep0_and_direct(p) >= Fraction(opt, 3)


@given(profiles(uniform_k=0, weighted=True))
def test_single_drep_guarantee_scales_with_union_over_min(p):
    alpha, beta = alpha_beta(p)
    opt = max(intrinsic_scores(p))
    assert best_of_drep0_and_direct(p) >= Fraction(beta, 3 * alpha) * opt


@given(profiles(coherent=True, anchored=True), st.integers(0, 3))
def test_single_drep_guarantee_on_anchored_coherent_profiles(p, k0):
    _, beta = alpha_beta(p)
    k = min(k0, beta)
    p = with_uniform_k(p, k)
    opt = max(intrinsic_scores(p))
    assert best_of_drep0_and_direct(p) >= Fraction(2, 3 * (k + 2)) * opt


@st.composite
def cored_profiles(draw, max_m=6):
    """Anchored profiles whose revealed sets are a common core plus at
    most delta extras; returns (profile, k, delta)."""
    m = draw(st.integers(3, max_m))
    k = draw(st.integers(0, 2))
    delta = draw(st.integers(0 if k else 1, 2))
    pool = list(range(1, m))
    x = min(k + delta, len(pool))
    core = draw(st.permutations(pool))[:x]
    n = draw(st.integers(2, 6))
    voters = []
    for i in range(n):
        rev = [None] * m
        for j in core:
            rev[j] = draw(st.integers(0, 1))
        free = [j for j in pool if j not in core]
        lo = 0 if core else 1
        n_extra = draw(st.integers(lo, min(delta, len(free))))
        for j in free[:n_extra]:
            rev[j] = draw(st.integers(0, 1))
        intr = [draw(st.integers(0, 1)) if b is None else b for b in rev]
        intr[0] = 1
        m_i = sum(b is not None for b in rev)
        voters.append(Voter(id=i, intrinsic=tuple(intr), revealed=tuple(rev),
                            weight=1, k=min(k, m_i)))
    return Profile(m=m, voters=tuple(voters)), k, delta


@given(cored_profiles())
@settings(max_examples=80)
def test_single_drep_guarantee_on_core_plus_delta_profiles(case):
    p, k, delta = case
    opt = max(intrinsic_scores(p))
    assert best_of_drep0_and_direct(p) >= Fraction(2, 3 * (k + delta + 2)) * opt


# --- ConstructionSpec / build_slate ---------------------------------------

def test_spec_parses_kind_and_params():
    spec = ConstructionSpec.parse("greedy:lam=3")
    assert spec.kind == "greedy"
    assert spec.params == {"lam": "3"}
    assert ConstructionSpec.parse("drep0").params == {}


def test_spec_rejects_unknown_kind_and_bare_params():
    with pytest.raises(ModelError):
        ConstructionSpec.parse("best-effort")
    with pytest.raises(ModelError):
        ConstructionSpec.parse("greedy:lam")


def test_build_slate_matches_the_direct_constructions():
    p = gen_attraction_gap(10)
    assert build_slate(p, ConstructionSpec.parse("drep0")) == (drep0(p),)
    assert build_slate(p, ConstructionSpec.parse("majority-pair")) == majority_pair(p)
    assert build_slate(p, ConstructionSpec.parse("greedy:lam=2")) == greedy(p, 2)
    assert build_slate(p, ConstructionSpec.parse("mirror-all")) == mirror_all(p)


def test_build_slate_parses_core_lists():
    ballot = (1, 0, None, 1, None)
    p = Profile(m=5, voters=tuple(
        voter(ballot, intrinsic=(1, 0, 1, 1, i % 2), vid=i, k=2) for i in range(4)))
    spec = ConstructionSpec.parse("coherent-family:core=0+1")
    assert build_slate(p, spec) == coherent_family(p, (0, 1))


def test_build_slate_reports_missing_and_bad_params():
    p = gen_attraction_gap(10)
    with pytest.raises(ModelError):
        build_slate(p, ConstructionSpec.parse("multi-group:k=1"))
    with pytest.raises(ModelError):
        build_slate(p, ConstructionSpec.parse("greedy:lam=two"))
