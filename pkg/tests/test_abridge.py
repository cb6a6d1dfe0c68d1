"""Abridged games, play summaries, and the automaton product."""

import pytest

from ckgames.abridge import (
    ParityAutomaton,
    Summary,
    build_abridged,
    parse_dpa,
    product_with_dpa,
    serialize_dpa,
    summarize,
    to_parity_game,
)
from ckgames.errors import BudgetExceededError, GameFormatError, NotRcksError
from ckgames.game import History, validate
from ckgames.generators import gen_figure, gen_gm, gen_random
from ckgames.parity import COORDINATOR, NATURE
from ckgames.rcks import check_rcks

import oracles
import samplers


def cycle_play(g, loop, rounds):
    h = History(g.initial)
    for k in range(rounds):
        h = h.extend(("go",), loop[k % len(loop)])
    return h


def summary_oracle(g, h):
    """Summary entries recomputed from scratch: a round is settled when
    the chain closure of the prefix is a singleton, and carries the least
    priority seen since the previous settled round."""
    entries = []
    running = None
    for t in range(1, len(h) + 1):
        p = h.prefix(t)
        running = (
            g.priority[p.last]
            if running is None
            else min(running, g.priority[p.last])
        )
        if oracles.ck_oracle(g, p):
            entries.append((t, p.last, running))
            running = None
    return Summary(initial=h.start, entries=tuple(entries))


def test_build_abridged_on_two_loop_game():
    g = gen_gm(3)
    ab = build_abridged(g)
    assert ab.roots[0] == "v0"
    assert set(ab.roots) == set(g.states)
    assert ab.nature_priority == g.num_priorities == 0
    for v in ab.roots:
        assert ab.outcomes[v]


def test_build_abridged_rejects_non_rcks_games():
    with pytest.raises(NotRcksError):
        build_abridged(gen_figure("2b", n=2))


def test_parity_game_structure():
    g = gen_gm(3)
    pg = to_parity_game(build_abridged(g))
    assert pg.initial == "v0#0"
    for v in pg.positions:
        assert pg.succ[v], v
        assert pg.owner[v] in (COORDINATOR, NATURE)
        # the two kinds of positions strictly alternate
        for w in pg.succ[v]:
            assert pg.owner[w] != pg.owner[v]


def test_summary_of_short_loop_play():
    g = gen_gm(3)
    h = cycle_play(g, ["a1", "a2", "z"], 9)
    assert summarize(g, h) == Summary("v0", ((9, "z", 0),))
    # once re-rooted at z the short loop is deterministic, so every later
    # round is settled immediately
    h2 = cycle_play(g, ["a1", "a2", "z"], 12)
    expect = ((9, "z", 0), (10, "a1", 0), (11, "a2", 0), (12, "z", 0))
    assert summarize(g, h2).entries == expect


def test_summary_matches_prefix_closure_oracle():
    import random

    rng = random.Random(99)
    checked = 0
    for seed in (4, 12, 26):
        g = gen_random(seed, states=4, players=2, actions=2, priorities=2)
        if not check_rcks(g).holds:
            continue
        for _ in range(15):
            h = History(g.initial)
            for _ in range(rng.randrange(1, 7)):
                a, w = rng.choice(g.out_moves[h.last])
                h = h.extend(a, w)
            assert summarize(g, h) == summary_oracle(g, h)
            checked += 1
    assert checked >= 15


def test_summary_budget():
    g = gen_figure("2b", n=3)
    h = History(g.initial)
    for _ in range(12):
        a, w = g.out_moves[h.last][0]
        h = h.extend(a, w)
    with pytest.raises(BudgetExceededError):
        summarize(g, h, budget=20)


def test_summary_rejects_impossible_history():
    g = gen_gm(3)
    with pytest.raises(GameFormatError):
        summarize(g, History("v0", ((("go",), "z"),)))


def test_dpa_round_trip():
    for seed in (1, 2, 3):
        dpa = samplers.random_dpa(seed, ["c0", "c1"])
        assert parse_dpa(serialize_dpa(dpa)) == dpa


def test_parse_dpa_rejects_malformed():
    import json

    base = json.loads(serialize_dpa(samplers.random_dpa(1, ["c0"])))
    for mangle in [
        lambda d: d.pop("initial"),
        lambda d: d.update(initial="nope"),
        lambda d: d["states"][0].pop("priority"),
        lambda d: d["transitions"].append(["nope", "c0", "nope"]),
    ]:
        doc = json.loads(json.dumps(base))
        mangle(doc)
        with pytest.raises(GameFormatError):
            parse_dpa(json.dumps(doc))


def test_product_requires_colours():
    with pytest.raises(GameFormatError):
        product_with_dpa(gen_gm(2), samplers.random_dpa(1, ["c0"]))


def test_product_requires_observable_colours():
    g = gen_random(5, states=4, players=2, actions=2, priorities=2)
    bad_color = dict(g.color)
    # give two states with a shared observation different colours
    omap = g.obs[g.players[0]]
    by_obs = {}
    for v in g.states:
        by_obs.setdefault(omap[v], []).append(v)
    clash = next(vs for vs in by_obs.values() if len(vs) > 1)
    bad_color[clash[0]] = "c0"
    bad_color[clash[1]] = "c1"
    g2 = type(g)(**{**g.__dict__, "color": bad_color})
    with pytest.raises(GameFormatError):
        product_with_dpa(g2, samplers.random_dpa(1, ["c0", "c1"]))


def test_product_is_a_valid_game_with_automaton_priorities():
    g = gen_random(5, states=4, players=2, actions=2, priorities=2)
    dpa = samplers.random_dpa(7, sorted(set(g.color.values())))
    prod = product_with_dpa(g, dpa)
    assert validate(prod).ok
    assert set(prod.priority.values()) <= set(dpa.priority.values())
    # every product state is a game state paired with an automaton state
    for s in prod.states:
        v, q = s.rsplit("@", 1)
        assert v in g.states and q in dpa.states
        assert prod.color[s] == g.color[v]


def test_product_preserves_recurring_common_knowledge_sample():
    kept = 0
    for seed in range(200):
        g = gen_random(seed, states=4, players=2, actions=2, priorities=2)
        if not check_rcks(g).holds:
            continue
        dpa = samplers.random_dpa(seed + 100, sorted(set(g.color.values())))
        assert check_rcks(product_with_dpa(g, dpa)).holds
        kept += 1
        if kept == 5:
            break
    assert kept == 5
