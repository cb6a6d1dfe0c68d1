"""Unravelling into component trees and knowledge-gap measurement."""

import pytest

from ckgames.errors import BudgetExceededError, NotRcksError
from ckgames.game import GameGraph
from ckgames.generators import gen_figure, gen_gm, gen_random
from ckgames.unravel import (
    achievable_outcomes,
    build_tree,
    gap_size,
    reachable_roots,
)

import oracles


def perfect_info_game():
    """Both players see the exact state, so there is never any ambiguity."""
    return GameGraph(
        players=("1", "2"),
        actions={"1": ("a", "b"), "2": ("a",)},
        states=("u", "v"),
        initial="u",
        obs={"1": {"u": "u", "v": "v"}, "2": {"u": "u", "v": "v"}},
        priority={"u": 0, "v": 1},
        moves=frozenset(
            {
                ("u", ("a", "a"), "v"),
                ("u", ("b", "a"), "u"),
                ("v", ("a", "a"), "u"),
                ("v", ("b", "a"), "v"),
            }
        ),
    )


def test_gap_of_two_loop_games_is_quadratic():
    for m in (2, 3, 4):
        assert gap_size(gen_gm(m)) == m * m


def test_gap_of_small_examples():
    assert gap_size(gen_figure("1a")) == 3
    assert gap_size(gen_figure("1b")) == 3
    assert gap_size(gen_figure("2a")) == 4


def test_gap_is_zero_under_perfect_information():
    assert gap_size(perfect_info_game()) == 0


def test_gap_rejects_non_rcks_games():
    with pytest.raises(NotRcksError):
        gap_size(gen_figure("2b", n=2))


def test_build_tree_budget():
    g = gen_figure("2b", n=2)
    with pytest.raises((BudgetExceededError, NotRcksError)):
        build_tree(g, g.initial, budget=50)


def test_tree_nodes_are_epistemic_components():
    g = gen_gm(3)
    tree = build_tree(g, "v0")
    by_id = {n.id: n for n in tree.nodes}
    for n in tree.nodes:
        # component flags are consistent with the history sets
        ends = {h.last for h in n.histories}
        assert n.is_cks == (len(ends) == 1)
        if n.is_cks:
            assert n.end_state in ends
        if n.parent is not None:
            parent = by_id[n.parent]
            assert n.depth == parent.depth + 1
            # every history extends a history of the parent component
            parent_hists = parent.histories
            for h in n.histories:
                assert h.prefix(len(h) - 1) in parent_hists
        # each history really is a component member: closed under chains
        some = next(iter(n.histories))
        if n.depth > 0:
            assert oracles.chain_closure(g, some) == n.histories


def test_tree_minimal_priority_bookkeeping():
    g = gen_random(4, states=4, players=2, actions=2, priorities=2)
    tree = build_tree(g, g.initial)
    by_id = {n.id: n for n in tree.nodes}
    for n in tree.nodes:
        if n.parent is None:
            assert n.d is None
            continue
        prio = min(g.priority[h.last] for h in n.histories)
        parent_d = by_id[n.parent].d
        assert n.d == (prio if parent_d is None else min(parent_d, prio))


def test_ambiguous_depth_on_gm3():
    g = gen_gm(3)
    tree = build_tree(g, "v0")
    # ambiguity lasts through round 8 and resolves at round 9
    assert tree.ambiguous_depth() == 8
    assert all(n.is_cks for n in tree.nodes if n.depth == 9)


def test_reachable_roots_cover_cks_leaves():
    g = gen_gm(3)
    roots, cache = reachable_roots(g)
    assert roots[0] == "v0"
    assert set(roots) <= set(g.states)
    for v in roots:
        for leaf in cache[v].leaves():
            assert leaf.end_state in roots


def test_achievable_outcomes_on_two_loop_game():
    g = gen_gm(3)
    outcomes, _ = achievable_outcomes(g, "v0")
    # with a single action there is exactly one joint strategy, hence
    # exactly one achievable outcome set, and every priority seen is 0
    assert len(outcomes) == 1
    (outcome,) = outcomes
    assert {d for _, d in outcome} == {0}
    assert {state for state, _ in outcome} <= set(g.states)


def test_achievable_outcomes_under_perfect_information():
    g = perfect_info_game()
    outcomes, _ = achievable_outcomes(g, "u")
    # player 1 sees the state, so both moves give separate singleton sets
    assert frozenset({("v", 1)}) in outcomes
    assert frozenset({("u", 0)}) in outcomes
