import json
from pathlib import Path

import pytest

from proxyvote.cli import main
from proxyvote.model import profile_from_json
from proxyvote.pipeline import read_sweep_csv

MINI = Path(__file__).resolve().parent.parent / "data" / "mini"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# --- forge ----------------------------------------------------------------

def test_forge_prints_profile_json(capsys):
    code, out, _ = run(capsys, "forge", "16-lower")
    assert code == 0
    profile = profile_from_json(out)
    assert profile.n == 8 and profile.m == 4


def test_forge_writes_profile_files(capsys, tmp_path):
    target = tmp_path / "gap.json"
    code, out, err = run(capsys, "forge", "attraction-gap", "--n", "6",
                         "-o", str(target))
    assert code == 0
    assert out == ""
    assert str(target) in err
    code, out, _ = run(capsys, "validate", "--profile", str(target))
    assert code == 0
    assert out.startswith("ok: 6 voters, 4 proposals")


def test_forge_requires_fixture_parameters(capsys):
    code, _, err = run(capsys, "forge", "attraction-gap")
    assert code == 1
    assert "error:" in err and "--n" in err


def test_forge_random_is_seeded(capsys):
    _, first, _ = run(capsys, "forge", "random", "--n", "4", "--m", "5",
                      "--seed", "3")
    _, again, _ = run(capsys, "forge", "random", "--n", "4", "--m", "5",
                      "--seed", "3")
    _, other, _ = run(capsys, "forge", "random", "--n", "4", "--m", "5",
                      "--seed", "4")
    assert first == again
    assert first != other


def test_forge_mav_reduction(capsys):
    code, out, err = run(capsys, "forge", "mav-reduction",
                         "--ballots", "1100,0011")
    assert code == 0
    assert "target score: 4" in err
    profile = profile_from_json(out)
    assert profile.n == 5 and profile.m == 7


# --- validate / analyze ---------------------------------------------------

def test_validate_rejects_unparseable_files(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "validate", "--profile", str(bad))
    assert code == 1
    assert "error:" in err


def test_validate_reports_missing_files(capsys, tmp_path):
    code, _, err = run(capsys, "validate", "--profile", str(tmp_path / "nope.json"))
    assert code == 1
    assert "error:" in err


def test_analyze_emits_a_json_report(capsys, tmp_path):
    target = tmp_path / "omega.json"
    run(capsys, "forge", "omega-n", "--m", "9", "-o", str(target))
    code, out, _ = run(capsys, "analyze", "--profile", str(target), "--k", "1")
    assert code == 0
    report = json.loads(out)
    assert report["is_coherent"] is False
    assert report["gamma_upper"] == 4
    assert report["gamma_exact"] == 4
    assert report["alpha"] == 8 and report["beta"] == 2


# --- elect ----------------------------------------------------------------

@pytest.fixture()
def gap_profile(capsys, tmp_path):
    target = tmp_path / "gap.json"
    run(capsys, "forge", "attraction-gap", "--n", "10", "-o", str(target))
    return str(target)


def test_elect_majority_pair(capsys, gap_profile):
    code, out, _ = run(capsys, "elect", "--profile", gap_profile,
                       "--drep", "majority-pair")
    assert code == 0
    assert "winner: 0" in out
    assert "ratio: 1" in out
    assert "delegating voters: 10/10" in out


def test_elect_reports_infinite_ratios(capsys, tmp_path):
    target = tmp_path / "tie.json"
    run(capsys, "forge", "adversarial-tie", "--n", "3", "--m", "4",
        "-o", str(target))
    code, out, _ = run(capsys, "elect", "--profile", str(target),
                       "--drep", "all-ones",
                       "--tiebreak", "adversarial-intrinsic")
    assert code == 0
    assert "ratio: inf" in out


def test_elect_rejects_unknown_constructions(capsys, gap_profile):
    code, _, err = run(capsys, "elect", "--profile", gap_profile,
                       "--drep", "best-effort")
    assert code == 1
    assert "error:" in err


# --- oracle ---------------------------------------------------------------

def test_oracle_certifies_the_lower_bound(capsys, tmp_path):
    target = tmp_path / "low.json"
    run(capsys, "forge", "16-lower", "-o", str(target))
    code, out, _ = run(capsys, "oracle", "--profile", str(target))
    assert code == 0
    assert "best ratio: 8/5" in out
    assert "search space: 16" in out


def test_oracle_respects_the_budget(capsys, gap_profile):
    code, _, err = run(capsys, "oracle", "--profile", gap_profile,
                       "--lambda", "6", "--budget", "1000")
    assert code == 1
    assert "error:" in err


# --- sweep ----------------------------------------------------------------

def test_sweep_writes_csv(capsys, tmp_path):
    out_csv = tmp_path / "sweep.csv"
    code, _, err = run(capsys, "sweep",
                       "--ratings", str(MINI / "ratings.csv"),
                       "--genome", str(MINI / "genome-scores.csv"),
                       "--movies", str(MINI / "movies.csv"),
                       "-o", str(out_csv),
                       "--lambda-max", "1", "--k-grid", "0.2",
                       "--reveal-grid", "0.4", "--reps", "2",
                       "--users", "80", "--items", "20", "--seed", "5")
    assert code == 0
    assert "wrote 4 rows" in err
    assert len(read_sweep_csv(str(out_csv))) == 4


def test_sweep_rejects_bad_grids(capsys, tmp_path):
    code, _, err = run(capsys, "sweep",
                       "--ratings", str(MINI / "ratings.csv"),
                       "--genome", str(MINI / "genome-scores.csv"),
                       "--movies", str(MINI / "movies.csv"),
                       "-o", str(tmp_path / "x.csv"),
                       "--k-grid", "0.7")
    assert code == 1
    assert "error:" in err


# --- usage errors ---------------------------------------------------------

def test_unknown_flag_is_a_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["forge", "16-lower", "--frobnicate"])
    assert exc.value.code == 2


def test_missing_subcommand_is_a_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_missing_required_flag_is_a_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["elect", "--drep", "drep0"])
    assert exc.value.code == 2
