"""Command-line interface.

Exit codes: 0 for success or a positive verdict, 1 for a negative verdict,
2 for malformed input, 3 for an exhausted exploration budget.
"""

import argparse
import json
import sys

from . import abridge, epistemic, game, generators, parity, rcks, synth, unravel
from .errors import BudgetExceededError, GameFormatError, NotRcksError, NotWinningError


def _load_game(path):
    with open(path) as f:
        return game.parse_game(f.read())


def _emit(args, data, text):
    if getattr(args, "json", False):
        print(json.dumps(data, indent=2))
    else:
        print(text)


def _write(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as f:
            f.write(text)


def _cmd_validate(args):
    g = _load_game(args.game)
    report = game.validate(g)
    data = {"ok": report.ok, "violations": [list(v) for v in report.violations]}
    lines = ["ok"] if report.ok else ["%s: %s" % v for v in report.violations]
    _emit(args, data, "\n".join(lines))
    return 0 if report.ok else 1


def _cmd_check_rcks(args):
    g = _load_game(args.game)
    verdict = rcks.check_rcks(g)
    if verdict.holds:
        _emit(args, {"rcks": True}, "recurring common knowledge of the state: yes")
        return 0
    lasso = verdict.lasso
    data = {
        "rcks": False,
        "stem": [[list(src), [list(l[0]), l[1]], list(dst)] for src, l, dst in lasso.stem],
        "loop": [[list(src), [list(l[0]), l[1]], list(dst)] for src, l, dst in lasso.loop],
    }
    text = "recurring common knowledge of the state: no\nlasso play states: %s" % (
        " ".join(lasso.play_states()),
    )
    _emit(args, data, text)
    return 1


def _cmd_gap_size(args):
    g = _load_game(args.game)
    value = unravel.gap_size(g)
    _emit(args, {"gap_size": value}, str(value))
    return 0


def _cmd_ck(args):
    g = _load_game(args.game)
    h = game.parse_history(g, args.history)
    answer = epistemic.ck_state_at(g, h, budget=args.budget)
    _emit(args, {"common_knowledge": answer}, "yes" if answer else "no")
    return 0 if answer else 1


def _cmd_mk(args):
    g = _load_game(args.game)
    h = game.parse_history(g, args.history)
    if args.order == 1:
        answer = epistemic.mk_state_at(g, h)
    else:
        answer = epistemic.mk_order_at(g, h, args.order, budget=args.budget)
    _emit(args, {"order": args.order, "knowledge": answer}, "yes" if answer else "no")
    return 0 if answer else 1


def _cmd_abridge(args):
    g = _load_game(args.game)
    ab = abridge.build_abridged(g)
    pg = abridge.to_parity_game(ab)
    _write(args.out, parity.serialize_parity_game(pg))
    return 0


def _cmd_solve(args):
    with open(args.parity_game) as f:
        pg = parity.parse_parity_game(f.read())
    result = parity.solve(pg)
    w0, w1 = result.regions
    data = {
        "coordinator_region": sorted(w0),
        "nature_region": sorted(w1),
        "coordinator_strategy": dict(sorted(result.strategies[0].items())),
        "nature_strategy": dict(sorted(result.strategies[1].items())),
    }
    if pg.initial is not None:
        winner = "coordinator" if pg.initial in w0 else "nature"
        data["winner"] = winner
        _emit(args, data, "winner at %s: %s" % (pg.initial, winner))
        return 0 if winner == "coordinator" else 1
    _emit(args, data, "coordinator region: %s" % " ".join(sorted(w0)))
    return 0


def _cmd_synthesize(args):
    g = _load_game(args.game)
    ab = abridge.build_abridged(g)
    solution = synth.solve_abridged(ab)
    if not solution.coordinator_wins_initial:
        print("the coordinator does not win the abridged game")
        return 1
    profile = synth.transfer_coordinator(g, ab, solution)
    _write(args.out, synth.serialize_profile(profile))
    return 0


def _cmd_verify(args):
    g = _load_game(args.game)
    with open(args.strategy) as f:
        profile = synth.parse_profile(f.read())
    result = synth.verify(g, profile)
    if result.winning:
        _emit(args, {"winning": True}, "winning: yes")
        return 0
    data = {
        "winning": False,
        "counterexample": game.format_history(result.counterexample),
        "loop_start": result.loop_start,
    }
    _emit(
        args,
        data,
        "winning: no\ncounterexample: %s\nloop starts at round %d"
        % (game.format_history(result.counterexample), result.loop_start),
    )
    return 1


def _cmd_spoil(args):
    g = _load_game(args.game)
    with open(args.strategy) as f:
        profile = synth.parse_profile(f.read())
    ab = abridge.build_abridged(g)
    solution = synth.solve_abridged(ab)
    if solution.coordinator_wins_initial:
        print("the coordinator wins the abridged game; nothing to spoil")
        return 1
    result = synth.construct_spoiler(g, ab, profile, solution)
    data = {
        "play": game.format_history(result.play),
        "loop_start": result.loop_start,
        "gap_entries": [list(e) for e in result.gap_entries],
    }
    _emit(
        args,
        data,
        "losing play: %s\nloop starts at round %d"
        % (game.format_history(result.play), result.loop_start),
    )
    return 0


def _cmd_product(args):
    g = _load_game(args.game)
    with open(args.automaton) as f:
        dpa = abridge.parse_dpa(f.read())
    _write(args.out, game.serialize_game(abridge.product_with_dpa(g, dpa)))
    return 0


def _cmd_summary(args):
    g = _load_game(args.game)
    h = game.parse_history(g, args.history)
    s = abridge.summarize(g, h, budget=args.budget)
    data = {"initial": s.initial, "entries": [list(e) for e in s.entries]}
    text = " ".join(
        [s.initial] + ["(%d:%s,%d)" % (t, v, c) for t, v, c in s.entries]
    )
    _emit(args, data, text)
    return 0


def _cmd_gen(args):
    if args.family == "gm":
        g = generators.gen_gm(args.m)
    elif args.family == "figure":
        g = generators.gen_figure(args.id, n=args.n, objective=args.objective)
    elif args.family == "corridor":
        with open(args.dominoes) as f:
            g = generators.gen_corridor_game(generators.parse_domino_system(f.read()))
    elif args.family == "random":
        g = generators.gen_random(
            args.seed,
            states=args.states,
            players=args.players,
            actions=args.actions,
            priorities=args.priorities,
        )
    else:
        raise GameFormatError("unknown family %r" % (args.family,))
    _write(args.out, game.serialize_game(g))
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ckgames",
        description="knowledge queries, synthesis and refutation for games "
        "with imperfect information",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(fn=fn)
        return p

    p = add("validate", _cmd_validate, help="check the structural invariants of a game")
    p.add_argument("game")
    p.add_argument("--json", action="store_true")

    p = add("check-rcks", _cmd_check_rcks,
            help="decide recurring common knowledge of the state")
    p.add_argument("game")
    p.add_argument("--json", action="store_true")

    p = add("gap-size", _cmd_gap_size, help="largest knowledge gap over all plays")
    p.add_argument("game")
    p.add_argument("--json", action="store_true")

    p = add("ck", _cmd_ck, help="common knowledge of the state at a history")
    p.add_argument("game")
    p.add_argument("--history", required=True,
                   help="states alternating with |-separated action profiles")
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--json", action="store_true")

    p = add("mk", _cmd_mk, help="iterated knowledge of the state at a history")
    p.add_argument("game")
    p.add_argument("--history", required=True)
    p.add_argument("--order", type=int, default=1)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--json", action="store_true")

    p = add("summary", _cmd_summary, help="common-knowledge decomposition of a history")
    p.add_argument("game")
    p.add_argument("--history", required=True)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--json", action="store_true")

    p = add("abridge", _cmd_abridge, help="write the abridged parity game")
    p.add_argument("game")
    p.add_argument("-o", "--out", default="-")

    p = add("solve", _cmd_solve, help="solve a parity game file")
    p.add_argument("parity_game")
    p.add_argument("--json", action="store_true")

    p = add("synthesize", _cmd_synthesize,
            help="winning machines for all players, when they exist")
    p.add_argument("game")
    p.add_argument("-o", "--out", default="-")

    p = add("verify", _cmd_verify, help="model-check a strategy profile")
    p.add_argument("game")
    p.add_argument("strategy")
    p.add_argument("--json", action="store_true")

    p = add("spoil", _cmd_spoil, help="a losing play against a strategy profile")
    p.add_argument("game")
    p.add_argument("strategy")
    p.add_argument("--json", action="store_true")

    p = add("product", _cmd_product,
            help="synchronised product with a parity automaton over colours")
    p.add_argument("game")
    p.add_argument("automaton")
    p.add_argument("-o", "--out", default="-")

    p = add("gen", _cmd_gen, help="generate a game from a reference family")
    p.add_argument("family", choices=["gm", "figure", "corridor", "random"])
    p.add_argument("-o", "--out", default="-")
    p.add_argument("--m", type=int, default=3, help="gm: gap parameter")
    p.add_argument("--id", default="1a", help="figure: 1a, 1b, 2a or 2b")
    p.add_argument("--n", type=int, default=None, help="figure 2b: loop unrollings")
    p.add_argument("--objective", default="safety", choices=["safety", "reach"])
    p.add_argument("--dominoes", help="corridor: domino system file")
    p.add_argument("--seed", type=int, default=0, help="random: seed")
    p.add_argument("--states", type=int, default=4)
    p.add_argument("--players", type=int, default=2)
    p.add_argument("--actions", type=int, default=2)
    p.add_argument("--priorities", type=int, default=1)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except BudgetExceededError as e:
        print("budget exceeded: %s" % e, file=sys.stderr)
        return 3
    except (GameFormatError, NotRcksError, NotWinningError, OSError) as e:
        print("error: %s" % e, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
