"""Run the default parameter sweep over the committed mini dataset and
write the golden CSV consumed by the acceptance tests and the frontend.
Pass-through flags go to `proxyvote sweep`."""
import pathlib
import sys

from proxyvote.cli import main

ROOT = pathlib.Path(__file__).resolve().parent.parent
DATA = ROOT / "data" / "mini"

if __name__ == "__main__":
    argv = [
        "sweep",
        "--ratings", str(DATA / "ratings.csv"),
        "--genome", str(DATA / "genome-scores.csv"),
        "--movies", str(DATA / "movies.csv"),
        "-o", str(DATA / "golden_sweep.csv"),
    ] + sys.argv[1:]
    sys.exit(main(argv))
