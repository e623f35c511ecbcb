"""Ratings-to-election experiment pipeline.

Ingests MovieLens-schema CSVs, completes each user's sparse ratings
into a full intrinsic approval ballot via item-item similarity, builds
a delegation profile whose revealed sets are the items the user
actually reviewed, and sweeps greedy dRep slates over (k_ratio,
reveal_ratio) grids, emitting one CSV row per (lambda, cell,
repetition).
"""
from __future__ import annotations

import csv
import hashlib
import math
import random
from dataclasses import dataclass, replace
from enum import Enum
from functools import cached_property

import numpy as np

from .dreps import greedy
from .model import (
    INFINITE,
    DelegationRule,
    ModelError,
    Profile,
    TieBreak,
    Voter,
    run_election,
)


class ParseError(ModelError):
    """Malformed CSV input; carries the 1-based line number."""

    def __init__(self, path: str, line: int, message: str):
        super().__init__(f"{path}:{line}: {message}")
        self.path = path
        self.line = line


class RangeError(ModelError):
    pass


class NoReviews(ModelError):
    pass


class EmptyAfterFilter(ModelError):
    pass


class ExponentSign(Enum):
    AS_WRITTEN = "as-written"
    NEGATED = "negated"


# MovieLens genre vocabulary; anything else maps to the trailing
# "other" dimension, "(no genres listed)" to the all-zero vector.
GENRES = (
    "Action", "Adventure", "Animation", "Children", "Comedy", "Crime",
    "Documentary", "Drama", "Fantasy", "Film-Noir", "Horror", "IMAX",
    "Musical", "Mystery", "Romance", "Sci-Fi", "Thriller", "War",
    "Western", "other",
)
_NO_GENRES = "(no genres listed)"


@dataclass(frozen=True)
class RatingsTable:
    """(user, item, rating) triples with unique pairs, ratings in
    [0.5, 5.0]."""

    entries: tuple[tuple[int, int, float], ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(tuple(e) for e in self.entries))
        seen = set()
        for user, item, rating in self.entries:
            if not 0.5 <= rating <= 5.0:
                raise RangeError(f"rating {rating} for ({user},{item}) outside [0.5, 5.0]")
            if (user, item) in seen:
                raise ModelError(f"duplicate rating for ({user},{item})")
            seen.add((user, item))

    @cached_property
    def by_user(self) -> dict[int, dict[int, float]]:
        out: dict[int, dict[int, float]] = {}
        for user, item, rating in self.entries:
            out.setdefault(user, {})[item] = rating
        return out

    @cached_property
    def users(self) -> tuple[int, ...]:
        return tuple(sorted(self.by_user))

    @cached_property
    def items(self) -> tuple[int, ...]:
        return tuple(sorted({item for _, item, _ in self.entries}))

    def restrict(self, users, items) -> "RatingsTable":
        users, items = set(users), set(items)
        kept = tuple(e for e in self.entries if e[0] in users and e[1] in items)
        return RatingsTable(entries=kept)


@dataclass(frozen=True)
class ItemFeatures:
    """Per-item tag vector (reals in [0,1], shared dimension) and genre
    vector (0/1 over GENRES; all-zero means genreless)."""

    tag: dict[int, tuple[float, ...]]
    genre: dict[int, tuple[int, ...]]

    def __post_init__(self):
        dims = {len(v) for v in self.tag.values()}
        if len(dims) > 1:
            raise ModelError(f"inconsistent tag dimensions {sorted(dims)}")
        for item, vec in self.tag.items():
            if any(not 0.0 <= x <= 1.0 for x in vec):
                raise RangeError(f"tag relevance outside [0,1] for item {item}")
        for item, vec in self.genre.items():
            if len(vec) != len(GENRES) or any(b not in (0, 1) for b in vec):
                raise ModelError(f"bad genre vector for item {item}")

    @cached_property
    def tag_dim(self) -> int:
        return next((len(v) for v in self.tag.values()), 0)

    def tag_of(self, item: int) -> np.ndarray:
        vec = self.tag.get(item)
        return np.asarray(vec if vec is not None else [0.0] * self.tag_dim)

    def genre_of(self, item: int) -> np.ndarray:
        if item not in self.genre:
            raise ModelError(f"no genre vector for item {item}")
        return np.asarray(self.genre[item])


def _open_csv(path: str, expected_header: list[str]):
    handle = open(path, newline="")
    reader = csv.reader(handle)
    header = next(reader, None)
    if header != expected_header:
        handle.close()
        raise ParseError(path, 1, f"expected header {','.join(expected_header)}")
    return handle, reader


def ingest(ratings_path: str, genome_path: str, movies_path: str,
           ) -> tuple[RatingsTable, ItemFeatures]:
    entries = []
    handle, reader = _open_csv(ratings_path, ["userId", "movieId", "rating", "timestamp"])
    with handle:
        for lineno, row in enumerate(reader, start=2):
            try:
                user, item, rating = int(row[0]), int(row[1]), float(row[2])
            except (ValueError, IndexError):
                raise ParseError(ratings_path, lineno, f"bad ratings row {row!r}") from None
            if not 0.5 <= rating <= 5.0:
                raise RangeError(f"{ratings_path}:{lineno}: rating {rating} outside [0.5, 5.0]")
            entries.append((user, item, rating))

    raw_tags: dict[int, dict[int, float]] = {}
    tag_ids: set[int] = set()
    handle, reader = _open_csv(genome_path, ["movieId", "tagId", "relevance"])
    with handle:
        for lineno, row in enumerate(reader, start=2):
            try:
                item, tag_id, rel = int(row[0]), int(row[1]), float(row[2])
            except (ValueError, IndexError):
                raise ParseError(genome_path, lineno, f"bad genome row {row!r}") from None
            if not 0.0 <= rel <= 1.0:
                raise RangeError(f"{genome_path}:{lineno}: relevance {rel} outside [0,1]")
            raw_tags.setdefault(item, {})[tag_id] = rel
            tag_ids.add(tag_id)

    genre_index = {name: i for i, name in enumerate(GENRES)}
    genres: dict[int, tuple[int, ...]] = {}
    handle, reader = _open_csv(movies_path, ["movieId", "title", "genres"])
    with handle:
        for lineno, row in enumerate(reader, start=2):
            try:
                item, listed = int(row[0]), row[2]
            except (ValueError, IndexError):
                raise ParseError(movies_path, lineno, f"bad movies row {row!r}") from None
            vec = [0] * len(GENRES)
            if listed != _NO_GENRES:
                for name in listed.split("|"):
                    vec[genre_index.get(name, genre_index["other"])] = 1
            genres[item] = tuple(vec)

    ordered_tags = sorted(tag_ids)
    tag = {item: tuple(per.get(t, 0.0) for t in ordered_tags)
           for item, per in raw_tags.items()}
    table = RatingsTable(entries=tuple(entries))
    for _, item, _ in table.entries:
        if item not in genres:
            raise ModelError(f"rated item {item} missing from {movies_path}")
    return table, ItemFeatures(tag=tag, genre=genres)


def similarity(features: ItemFeatures, i: int, j: int,
               sign: ExponentSign = ExponentSign.AS_WRITTEN) -> float:
    """1.2 raised to the tag-vector distance (negated under `Negated`),
    times 0.5 plus the genre cosine.  The cosine term is 0 when either
    genre vector is all zero."""
    dist = float(np.linalg.norm(features.tag_of(i) - features.tag_of(j)))
    gi, gj = features.genre_of(i), features.genre_of(j)
    ni, nj = np.linalg.norm(gi), np.linalg.norm(gj)
    cos = float(gi @ gj / (ni * nj)) if ni > 0 and nj > 0 else 0.0
    exponent = -dist if sign is ExponentSign.NEGATED else dist
    return 1.2 ** exponent * (0.5 + cos)


def complete_intrinsic(user: int, ratings: RatingsTable, features: ItemFeatures,
                       sign: ExponentSign = ExponentSign.AS_WRITTEN,
                       items=None) -> dict[int, float]:
    """Reviewed items keep their rating; every other item gets the
    similarity-weighted average of the user's reviews, falling back to
    the user's plain mean if the weights sum to 0.

    ``items`` overrides the completion universe; the default is every
    item present in the table, which misses items nobody rates.
    """
    reviewed = ratings.by_user.get(user)
    if not reviewed:
        raise NoReviews(f"user {user} has no reviews")
    mean = sum(reviewed.values()) / len(reviewed)
    out: dict[int, float] = {}
    for item in (ratings.items if items is None else items):
        if item in reviewed:
            out[item] = reviewed[item]
            continue
        num = den = 0.0
        for j, rating in reviewed.items():
            sim = similarity(features, item, j, sign)
            num += rating * sim
            den += sim
        out[item] = num / den if den > 0 else mean
    return out


def approvalize(completed: dict[int, float], ratings: RatingsTable,
                user: int) -> dict[int, int]:
    """Approve an item iff its completed rating reaches the user's mean
    over reviewed items; ties approve."""
    reviewed = ratings.by_user.get(user)
    if not reviewed:
        raise NoReviews(f"user {user} has no reviews")
    mean = sum(reviewed.values()) / len(reviewed)
    return {item: 1 if value >= mean else 0 for item, value in completed.items()}


@dataclass(frozen=True)
class ProfileSkeleton:
    """Sampled-and-filtered ratings plus the proposal order.  `items`
    holds the surviving real items; the unanimity proposal (reviewed by
    nobody, approved by everybody) is appended after them at profile
    build."""

    ratings: RatingsTable
    items: tuple[int, ...]


def sample_and_filter(ratings: RatingsTable, config: "SweepConfig",
                      seed: int) -> ProfileSkeleton:
    rng = random.Random(seed)
    users = list(ratings.users)
    items = list(ratings.items)
    if len(users) > config.user_sample:
        users = sorted(rng.sample(users, config.user_sample))
    if len(items) > config.item_sample:
        items = sorted(rng.sample(items, config.item_sample))

    # users first: drop anyone who reviewed under min_review_frac of
    # the sampled items; then drop items reviewed by over
    # max_review_frac of the surviving users
    item_set = set(items)
    kept_users = [u for u in users
                  if len(ratings.by_user.get(u, {}).keys() & item_set)
                  >= config.min_review_frac * len(items)]
    if not kept_users:
        raise EmptyAfterFilter("no users survive the review-count filter")
    reviewers = {i: sum(1 for u in kept_users if i in ratings.by_user[u])
                 for i in items}
    kept_items = [i for i in items
                  if reviewers[i] <= config.max_review_frac * len(kept_users)]
    if not kept_items:
        raise EmptyAfterFilter("no items survive the popularity filter")
    return ProfileSkeleton(ratings=ratings.restrict(kept_users, kept_items),
                           items=tuple(kept_items))


def build_profile(skeleton: ProfileSkeleton, features: ItemFeatures,
                  sign: ExponentSign = ExponentSign.AS_WRITTEN) -> Profile:
    """Completion + approvalization per user; revealed set = items the
    user reviewed; one extra trailing proposal approved by all and
    revealed to none.  Users with no surviving reviews are dropped."""
    voters = []
    table = skeleton.ratings
    for new_id, user in enumerate(u for u in table.users if table.by_user[u]):
        completed = complete_intrinsic(user, table, features, sign, skeleton.items)
        ballot = approvalize(completed, table, user)
        reviewed = table.by_user[user]
        intrinsic = tuple(ballot[i] for i in skeleton.items) + (1,)
        revealed = tuple(ballot[i] if i in reviewed else None
                         for i in skeleton.items) + (None,)
        voters.append(Voter(id=new_id, intrinsic=intrinsic, revealed=revealed, k=0))
    if not voters:
        raise EmptyAfterFilter("no voter retains a reviewed item")
    return Profile(m=len(skeleton.items) + 1, voters=tuple(voters))


def hide_coordinates(profile: Profile, reveal_ratio: float, seed: int) -> Profile:
    """Keep a uniform random ceil(reveal_ratio * m)-subset of each
    voter's revealed coordinates (at least 1, never more than m_i)."""
    if not 0.0 < reveal_ratio <= 1.0:
        raise ModelError(f"reveal_ratio {reveal_ratio} outside (0, 1]")
    rng = random.Random(seed)
    target = max(1, math.ceil(reveal_ratio * profile.m))
    voters = []
    for v in profile.voters:
        keep = min(v.m_i, target)
        kept = set(rng.sample(v.revealed_set, keep))
        revealed = tuple(b if j in kept else None for j, b in enumerate(v.revealed))
        voters.append(replace(v, revealed=revealed, k=min(v.k, keep)))
    return Profile(m=profile.m, voters=tuple(voters))


def with_k_ratio(profile: Profile, k_ratio: float) -> Profile:
    voters = tuple(replace(v, k=int(k_ratio * v.m_i)) for v in profile.voters)
    return Profile(m=profile.m, voters=voters)


@dataclass(frozen=True)
class SweepConfig:
    lambda_max: int = 6
    k_ratio_grid: tuple[float, ...] = (0.0, 0.1, 0.2, 0.3, 0.4)
    reveal_ratio_grid: tuple[float, ...] = (0.2, 0.4, 0.6, 0.8)
    fixed_k_ratio: float = 0.2
    repetitions: int = 20
    seed: int = 0
    user_sample: int = 200
    item_sample: int = 40
    min_review_frac: float = 0.05
    max_review_frac: float = 0.10
    exponent_sign: ExponentSign = ExponentSign.AS_WRITTEN
    shuffle_proposals: bool = False

    def __post_init__(self):
        object.__setattr__(self, "k_ratio_grid", tuple(self.k_ratio_grid))
        object.__setattr__(self, "reveal_ratio_grid", tuple(self.reveal_ratio_grid))
        if self.lambda_max < 0:
            raise ModelError("lambda_max must be >= 0")
        if not self.k_ratio_grid or not self.reveal_ratio_grid:
            raise ModelError("parameter grids must be non-empty")
        if any(not 0.0 <= k <= 0.4 for k in self.k_ratio_grid):
            raise ModelError("k_ratio_grid entries must lie in [0, 0.4]")
        if any(not 0.0 < r <= 0.8 for r in self.reveal_ratio_grid):
            raise ModelError("reveal_ratio_grid entries must lie in (0, 0.8]")
        if self.repetitions < 1:
            raise ModelError("repetitions must be >= 1")


@dataclass(frozen=True)
class SweepRecord:
    lam: int
    k_ratio: float
    reveal_ratio: float
    rep: int
    delegated_fraction: float
    approx_ratio: float
    winner_index: int


def run_seed(config_seed: int, label: str, *parts) -> int:
    """Stable per-run seed so grid cells reproduce independently."""
    key = ":".join([str(config_seed), label]
                   + [f"{p:.6f}" if isinstance(p, float) else str(p) for p in parts])
    return int.from_bytes(hashlib.sha256(key.encode()).digest()[:8], "big")


def _election_record(profile: Profile, slate, lam: int, k_ratio: float,
                     reveal_ratio: float, rep: int) -> SweepRecord:
    result = run_election(profile, list(slate), tiebreak=TieBreak.INTRINSIC_BEST,
                          rule=DelegationRule.NEAREST_HAMMING)
    delegated = sum(v.weight for v, a in zip(profile.voters, result.assignment)
                    if a is not None)
    ratio = math.inf if result.ratio is INFINITE else float(result.ratio)
    return SweepRecord(lam=lam, k_ratio=k_ratio, reveal_ratio=reveal_ratio,
                       rep=rep, delegated_fraction=delegated / profile.total_weight,
                       approx_ratio=ratio, winner_index=result.winner)


def sweep_base(profile: Profile) -> Profile:
    """Fully revealed variant of a built profile: the reveal_ratio axis
    hides coordinates of the completed ballots, not of the (much
    smaller) reviewed sets.  The trailing consensus proposal stays
    hidden."""
    voters = tuple(replace(v, revealed=v.intrinsic[:-1] + (None,), k=0)
                   for v in profile.voters)
    return Profile(m=profile.m, voters=voters)


def run_sweep(ratings: RatingsTable, features: ItemFeatures,
              config: SweepConfig) -> list[SweepRecord]:
    skeleton = sample_and_filter(ratings, config, config.seed)
    full = sweep_base(build_profile(skeleton, features, config.exponent_sign))
    records = []
    for reveal_ratio in config.reveal_ratio_grid:
        for rep in range(config.repetitions):
            # hide seed skips k_ratio: all k cells see the same hidden
            # profile, so the k axis compares thresholds, not data
            hidden = hide_coordinates(
                full, reveal_ratio, run_seed(config.seed, "hide", reveal_ratio, rep))
            for k_ratio in config.k_ratio_grid:
                profile = with_k_ratio(hidden, k_ratio)
                order = None
                if config.shuffle_proposals:
                    order = list(range(profile.m))
                    random.Random(run_seed(config.seed, "order", k_ratio,
                                           reveal_ratio, rep)).shuffle(order)
                records.append(_election_record(
                    profile, (), 0, k_ratio, reveal_ratio, rep))
                if config.lambda_max > 0:
                    slate = greedy(profile, config.lambda_max, order=order)
                    for lam in range(1, config.lambda_max + 1):
                        records.append(_election_record(
                            profile, slate[:lam], lam, k_ratio, reveal_ratio,
                            rep))
    records.sort(key=lambda r: (r.lam, r.k_ratio, r.reveal_ratio, r.rep))
    return records


CSV_HEADER = "lambda,k_ratio,reveal_ratio,rep,delegated_fraction,approx_ratio,winner_index"


def _fmt(x: float) -> str:
    return "inf" if math.isinf(x) else f"{x:.6f}"


def write_sweep_csv(records, path: str) -> None:
    with open(path, "w", newline="") as out:
        out.write(CSV_HEADER + "\n")
        for r in records:
            out.write(f"{r.lam},{_fmt(r.k_ratio)},{_fmt(r.reveal_ratio)},{r.rep},"
                      f"{_fmt(r.delegated_fraction)},{_fmt(r.approx_ratio)},"
                      f"{r.winner_index}\n")


def read_sweep_csv(path: str) -> list[SweepRecord]:
    records = []
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header != CSV_HEADER.split(","):
            raise ParseError(path, 1, f"expected header {CSV_HEADER}")
        for lineno, row in enumerate(reader, start=2):
            try:
                records.append(SweepRecord(
                    lam=int(row[0]), k_ratio=float(row[1]),
                    reveal_ratio=float(row[2]), rep=int(row[3]),
                    delegated_fraction=float(row[4]),
                    approx_ratio=float(row[5]), winner_index=int(row[6])))
            except (ValueError, IndexError):
                raise ParseError(path, lineno, f"bad sweep row {row!r}") from None
    return records
