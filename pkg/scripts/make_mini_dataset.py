"""Generate the committed desk-scale dataset under data/mini/.

200 users, 40 movies, 8 tag dimensions.  Three "blockbuster" movies
collect far more than 10% of the reviewers (so the popularity filter
drops them) and six users review a single movie (so the 5% activity
filter drops them); everything else is balanced to survive both
filters.  Fully deterministic for a given seed.
"""
import argparse
import pathlib
import random

MOVIES = list(range(101, 141))
BLOCKBUSTERS = [101, 102, 103]
USERS = list(range(1, 201))
LAZY_USERS = USERS[:6]        # one review each, filtered out
TAG_IDS = list(range(1, 9))
GENRE_POOL = [
    "Action", "Adventure", "Animation", "Comedy", "Crime", "Drama",
    "Fantasy", "Horror", "Mystery", "Romance", "Sci-Fi", "Thriller",
    "War", "Western",
]


def build(seed: int):
    rng = random.Random(seed)
    regular = [m for m in MOVIES if m not in BLOCKBUSTERS]

    # deal each active user 3 regular movies from a balanced slot pool
    slots = regular * 16 + rng.sample(regular, 18)
    rng.shuffle(slots)
    reviews = {}
    active = [u for u in USERS if u not in LAZY_USERS]
    for u in active:
        picks = set()
        while len(picks) < 3:
            movie = slots.pop() if slots else rng.choice(regular)
            picks.add(movie)
        reviews[u] = picks
    for u in LAZY_USERS:
        reviews[u] = {rng.choice(regular)}

    # blockbusters grab 30-60 reviewers apiece, far over the 10% cap
    for b, count in zip(BLOCKBUSTERS, (60, 45, 30)):
        for u in rng.sample(active, count):
            reviews[u].add(b)

    ratings = []
    stamp = 1_000_000_000
    for u in USERS:
        for movie in sorted(reviews[u]):
            score = rng.randrange(1, 11) / 2.0
            stamp += rng.randrange(1, 5000)
            ratings.append((u, movie, score, stamp))

    genome = [(movie, tag, round(rng.random(), 3))
              for movie in MOVIES for tag in TAG_IDS]

    movie_rows = []
    for movie in MOVIES:
        if movie == 139:
            listed = "Silent-Era"                # unlisted genre -> "other"
        elif movie == 140:
            listed = "(no genres listed)"
        else:
            listed = "|".join(sorted(rng.sample(GENRE_POOL, rng.randrange(1, 4))))
        movie_rows.append((movie, f"Movie {movie}", listed))
    return ratings, genome, movie_rows


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=20250825)
    parser.add_argument("--out", type=pathlib.Path,
                        default=pathlib.Path(__file__).resolve().parent.parent / "data" / "mini")
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    ratings, genome, movie_rows = build(args.seed)
    with open(args.out / "ratings.csv", "w") as f:
        f.write("userId,movieId,rating,timestamp\n")
        for u, m, r, t in ratings:
            f.write(f"{u},{m},{r},{t}\n")
    with open(args.out / "genome-scores.csv", "w") as f:
        f.write("movieId,tagId,relevance\n")
        for m, tag, rel in genome:
            f.write(f"{m},{tag},{rel}\n")
    with open(args.out / "movies.csv", "w") as f:
        f.write("movieId,title,genres\n")
        for m, title, listed in movie_rows:
            f.write(f'{m},{title},{listed}\n')
    print(f"wrote {len(ratings)} ratings, {len(genome)} genome rows, "
          f"{len(movie_rows)} movies to {args.out}")


if __name__ == "__main__":
    main()
