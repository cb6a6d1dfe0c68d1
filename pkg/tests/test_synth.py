"""Strategy synthesis: solving the abridged game, transferring the
coordinator strategy into finite machines, model checking, and spoiling."""

import pytest

from ckgames.abridge import build_abridged
from ckgames.errors import GameFormatError, NotWinningError
from ckgames.game import is_valid_history
from ckgames.generators import gen_figure, gen_gm
from ckgames.synth import (
    construct_spoiler,
    parse_profile,
    serialize_profile,
    solve_abridged,
    transfer_coordinator,
    verify,
)

import oracles
import samplers


def replay(g, profile, h):
    """True iff every action of h is what the machines output along it."""
    states = [m.initial for m in profile]
    for prof, w in h.steps:
        for i, (m, p) in enumerate(zip(profile, g.players)):
            if prof[i] != m.output[states[i]]:
                return False
            states[i] = m.transitions[(states[i], g.obs[p][w])]
    return True


def winning_cases():
    for name, g in [("gm2", gen_gm(2)), ("gm3", gen_gm(3)), ("gm4", gen_gm(4)),
                    ("1a", gen_figure("1a")), ("1b", gen_figure("1b")),
                    ("2a", gen_figure("2a"))]:
        yield name, g


def test_transfer_and_verify_on_winning_games():
    for name, g in winning_cases():
        ab = build_abridged(g)
        sol = solve_abridged(ab)
        assert sol.coordinator_wins_initial, name
        profile = transfer_coordinator(g, ab, sol)
        assert len(profile) == len(g.players)
        for m, p in zip(profile, g.players):
            assert m.player == p
            assert set(m.output.values()) <= set(g.actions[p])
        assert verify(g, profile).winning, name


def test_machine_size_on_two_loop_game():
    g = gen_gm(3)
    ab = build_abridged(g)
    (machine,) = transfer_coordinator(g, ab)
    assert len(machine.states) == 17


def test_reachability_variants_are_lost():
    for fig in ("1a", "1b", "2a"):
        g = gen_figure(fig, objective="reach")
        ab = build_abridged(g)
        sol = solve_abridged(ab)
        assert not sol.coordinator_wins_initial, fig
        with pytest.raises(NotWinningError):
            transfer_coordinator(g, ab, sol)


def test_spoiler_defeats_machine_profiles():
    for fig in ("1a", "2a"):
        g = gen_figure(fig, objective="reach")
        ab = build_abridged(g)
        sol = solve_abridged(ab)
        for seed in range(6):
            profile = samplers.random_machine_profile(seed, g)
            sp = construct_spoiler(g, ab, profile, sol)
            assert is_valid_history(g, sp.play)
            assert replay(g, profile, sp.play)
            states = list(sp.play.states())
            assert oracles.lasso_min_priority(g, states, sp.loop_start) % 2 == 1
            # gap entries follow the play's settled rounds in order
            rounds = [t for t, _, _ in sp.gap_entries]
            assert rounds == sorted(rounds)


def test_verify_counterexample_is_a_real_losing_lasso():
    g = gen_figure("1a", objective="reach")
    profile = samplers.random_machine_profile(1, g)
    res = verify(g, profile)
    assert not res.winning
    assert is_valid_history(g, res.counterexample)
    assert replay(g, profile, res.counterexample)
    states = list(res.counterexample.states())
    assert oracles.lasso_min_priority(g, states, res.loop_start) % 2 == 1


def test_verify_rejects_wrong_arity():
    g = gen_figure("1a")
    (machine, _) = samplers.random_machine_profile(0, g)
    with pytest.raises(GameFormatError):
        verify(g, (machine,))


def test_profile_serialization_round_trip():
    g = gen_gm(3)
    ab = build_abridged(g)
    profile = transfer_coordinator(g, ab)
    assert parse_profile(serialize_profile(profile)) == profile
    sampled = samplers.random_machine_profile(3, gen_figure("1b"))
    assert parse_profile(serialize_profile(sampled)) == sampled


def test_parse_profile_rejects_malformed():
    import json

    g = gen_gm(3)
    ab = build_abridged(g)
    text = serialize_profile(transfer_coordinator(g, ab))
    doc = json.loads(text)
    doc["machines"][0].pop("initial")
    with pytest.raises(GameFormatError):
        parse_profile(json.dumps(doc))
    with pytest.raises(GameFormatError):
        parse_profile("[]")
