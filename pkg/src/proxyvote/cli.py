"""Command-line front end.

Subcommands: validate, analyze, elect, forge, oracle, sweep.  Usage
errors exit 2 (argparse); model errors print to stderr and exit 1.
"""
from __future__ import annotations

import argparse
import sys

from . import coherence, forge, pipeline
from .dreps import ConstructionSpec, brute_force_best, build_slate
from .model import (
    INFINITE,
    DelegationRule,
    ModelError,
    TieBreak,
    load_profile,
    run_election,
    save_profile,
)

FIXTURES = {
    "attraction-gap": (forge.gen_attraction_gap, ("n",)),
    "adversarial-tie": (forge.gen_adversarial_tie, ("n", "m")),
    "omega-n": (forge.gen_omega_n, ("m",)),
    "copy-refined": (forge.gen_copy_refined, ("m", "r")),
    "16-lower": (forge.gen_16_lower, ()),
    "2eps-revealed": (forge.gen_2eps_revealed, ()),
    "2eps-general": (forge.gen_2eps_general, ("k",)),
    "large-k": (forge.gen_large_k, ("n", "c")),
    "random": (None, ()),
}


def _ratio_str(ratio) -> str:
    return "inf" if ratio is INFINITE else str(ratio)


def _add_policies(parser):
    parser.add_argument("--tiebreak", default="intrinsic-best",
                        choices=[t.value for t in TieBreak])
    parser.add_argument("--rule", default="nearest-hamming",
                        choices=[r.value for r in DelegationRule])


def cmd_validate(args) -> int:
    profile = load_profile(args.profile)
    print(f"ok: {profile.n} voters, {profile.m} proposals, "
          f"total weight {profile.total_weight}")
    return 0


def cmd_analyze(args) -> int:
    profile = load_profile(args.profile)
    report = coherence.build_report(profile, k=args.k, exact_limit=args.exact_limit)
    print(report.to_json(), end="")
    return 0


def cmd_elect(args) -> int:
    profile = load_profile(args.profile)
    spec = ConstructionSpec.parse(args.drep)
    tiebreak = TieBreak(args.tiebreak)
    rule = DelegationRule(args.rule)
    slate = build_slate(profile, spec, tiebreak=tiebreak, rule=rule)
    result = run_election(profile, list(slate), tiebreak=tiebreak, rule=rule)
    delegated = sum(1 for a in result.assignment if a is not None)
    print(f"winner: {result.winner}")
    print(f"winner intrinsic score: {result.winner_intrinsic_score}")
    print(f"ratio: {_ratio_str(result.ratio)}")
    print(f"delegating voters: {delegated}/{profile.n}")
    print(f"dReps: {' '.join(d.to_string() for d in slate)}")
    return 0


def cmd_forge(args) -> int:
    if args.name == "mav-reduction":
        ballots = tuple(tuple(int(c) for c in b) for b in args.ballots.split(","))
        inst = forge.MavInstance(m=len(ballots[0]), ballots=ballots)
        profile, target = forge.mav_reduce(inst)
        print(f"target score: {target}", file=sys.stderr)
    elif args.name == "random":
        profile = forge.random_profile(args.seed, n=args.n, m=args.m,
                                       uniform_k=args.k, coherent=args.coherent,
                                       hidden_consensus=args.hidden_consensus)
    else:
        builder, needed = FIXTURES[args.name]
        params = {"n": args.n, "m": args.m, "r": args.r, "c": args.c, "k": args.k}
        kwargs = {}
        for name in needed:
            if params[name] is None:
                raise ModelError(f"forge {args.name} needs --{name}")
            kwargs[name] = params[name]
        profile = builder(**kwargs)
    if args.output:
        save_profile(profile, args.output)
        print(f"wrote {args.output}", file=sys.stderr)
    else:
        from .model import profile_to_json
        print(profile_to_json(profile), end="")
    return 0


def cmd_oracle(args) -> int:
    profile = load_profile(args.profile)
    cert = brute_force_best(profile, lam=args.lam, tiebreak=TieBreak(args.tiebreak),
                            rule=DelegationRule(args.rule), budget=args.budget)
    print(f"best ratio: {_ratio_str(cert.best_ratio)}")
    print(f"witness: {' '.join(d.to_string() for d in cert.witness)}")
    print(f"search space: {cert.search_space}")
    return 0


def cmd_sweep(args) -> int:
    config = pipeline.SweepConfig(
        lambda_max=args.lambda_max,
        k_ratio_grid=tuple(args.k_grid),
        reveal_ratio_grid=tuple(args.reveal_grid),
        repetitions=args.reps,
        seed=args.seed,
        user_sample=args.users,
        item_sample=args.items,
        exponent_sign=(pipeline.ExponentSign.NEGATED if args.negated_exponent
                       else pipeline.ExponentSign.AS_WRITTEN),
        shuffle_proposals=args.shuffle_proposals,
    )
    ratings, features = pipeline.ingest(args.ratings, args.genome, args.movies)
    records = pipeline.run_sweep(ratings, features, config)
    pipeline.write_sweep_csv(records, args.output)
    print(f"wrote {len(records)} rows to {args.output}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="proxyvote")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=lambda **kw: argparse.ArgumentParser(
                                    parents=[common], **kw))

    p = sub.add_parser("validate", help="check a profile JSON file")
    p.add_argument("--profile", required=True)
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("analyze", help="coherence report for a profile")
    p.add_argument("--profile", required=True)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--exact-limit", type=int, default=12)
    p.set_defaults(fn=cmd_analyze)

    p = sub.add_parser("elect", help="run an election with a constructed slate")
    p.add_argument("--profile", required=True)
    p.add_argument("--drep", required=True,
                   help="construction, e.g. majority-pair or greedy:lam=3")
    _add_policies(p)
    p.set_defaults(fn=cmd_elect)

    p = sub.add_parser("forge", help="emit a fixture profile as JSON")
    p.add_argument("name", choices=sorted(FIXTURES) + ["mav-reduction"])
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--c", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--coherent", action="store_true")
    p.add_argument("--hidden-consensus", action="store_true")
    p.add_argument("--ballots", help="mav-reduction ballots, e.g. 1100,0011")
    p.add_argument("-o", "--output")
    p.set_defaults(fn=cmd_forge)

    p = sub.add_parser("oracle", help="exhaustive best single/multi dRep slate")
    p.add_argument("--profile", required=True)
    p.add_argument("--lambda", dest="lam", type=int, default=1)
    p.add_argument("--budget", type=int, default=1 << 20)
    _add_policies(p)
    p.set_defaults(fn=cmd_oracle)

    p = sub.add_parser("sweep", help="grid sweep over a ratings dataset")
    p.add_argument("--ratings", required=True)
    p.add_argument("--genome", required=True)
    p.add_argument("--movies", required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--lambda-max", type=int, default=6)
    p.add_argument("--k-grid", type=float, nargs="+",
                   default=[0.0, 0.1, 0.2, 0.3, 0.4])
    p.add_argument("--reveal-grid", type=float, nargs="+",
                   default=[0.2, 0.4, 0.6, 0.8])
    p.add_argument("--reps", type=int, default=20)
    p.add_argument("--users", type=int, default=200)
    p.add_argument("--items", type=int, default=40)
    p.add_argument("--negated-exponent", action="store_true")
    p.add_argument("--shuffle-proposals", action="store_true")
    p.set_defaults(fn=cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ModelError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
