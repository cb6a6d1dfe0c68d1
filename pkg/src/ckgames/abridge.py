"""The abridged game and play summaries.

Once a game admits recurring common knowledge of the state, every play
decomposes into knowledge gaps between consecutive common-knowledge rounds.
The abridged game replays this decomposition as a bipartite turn-based
parity game: at a commonly known state (paired with the most significant
priority of the previous gap) the coordinator commits to an achievable
outcome set; nature then resolves it to one of its (state, priority) pairs.
Nature positions carry the least significant priority, so they never
influence which priority recurs.

This module also builds the synchronised product of a game with a
deterministic parity automaton over its colour labels.  The automaton state
is folded into every player's observations, so it stays commonly known and
recurring common knowledge of the state carries over to the product.
"""

import json
from dataclasses import dataclass

from .epistemic import DEFAULT_BUDGET, split_components
from .errors import BudgetExceededError, GameFormatError, NotRcksError
from .game import GameGraph, History
from .parity import COORDINATOR, NATURE, ParityGame
from .rcks import check_rcks
from .unravel import achievable_outcomes, reachable_roots


@dataclass
class AbridgedGame:
    game: GameGraph
    roots: tuple
    outcomes: dict  # root -> frozenset of outcome sets
    witnesses: dict  # root -> witness data from achievable_outcomes
    nature_priority: int
    cache: dict  # root -> ComponentTree, shared with later synthesis


def build_abridged(g, cache=None):
    """Build the reachable fragment of the abridged game.  Raises
    NotRcksError when the game does not admit recurring common knowledge
    of the state, in which case some gap is unbounded."""
    verdict = check_rcks(g)
    if not verdict.holds:
        raise NotRcksError(
            "the game does not admit recurring common knowledge of the "
            "state; the abridged game is only defined when it does"
        )
    roots, cache = reachable_roots(g, cache)
    outcomes = {}
    witnesses = {}
    for v in roots:
        outcomes[v], witnesses[v] = achievable_outcomes(g, v, cache)
    return AbridgedGame(
        game=g,
        roots=tuple(roots),
        outcomes=outcomes,
        witnesses=witnesses,
        nature_priority=g.num_priorities,
        cache=cache,
    )


def _outcome_id(outcome):
    return "U{" + ",".join("%s:%d" % p for p in sorted(outcome)) + "}"


def coordinator_id(state, priority):
    return "%s#%d" % (state, priority)


def to_parity_game(ab):
    """The abridged game as a parity game over its reachable positions:
    coordinator positions (root, priority) and nature positions given by
    outcome sets."""
    g = ab.game
    owner, priority, succ, ids = {}, {}, {}, []
    seen = set()
    initial = (g.initial, ab.nature_priority)
    queue = [initial]
    seen.add(initial)
    nature_seen = set()
    while queue:
        v, c = queue.pop(0)
        vid = coordinator_id(v, c)
        ids.append(vid)
        owner[vid] = COORDINATOR
        priority[vid] = c
        moves = []
        for outcome in sorted(ab.outcomes[v], key=_outcome_id):
            uid = _outcome_id(outcome)
            moves.append(uid)
            if uid not in nature_seen:
                nature_seen.add(uid)
                owner[uid] = NATURE
                priority[uid] = ab.nature_priority
                succ[uid] = tuple(
                    coordinator_id(u, d) for u, d in sorted(outcome)
                )
                for u, d in sorted(outcome):
                    if (u, d) not in seen:
                        seen.add((u, d))
                        queue.append((u, d))
        succ[vid] = tuple(moves)
    ids.extend(sorted(nature_seen))
    return ParityGame(
        positions=tuple(ids),
        owner=owner,
        priority=priority,
        succ=succ,
        initial=coordinator_id(*initial),
    )


@dataclass(frozen=True)
class Summary:
    """The common-knowledge decomposition of a play prefix: the initial
    state followed by one (round, state, priority) entry per
    common-knowledge round, where the priority is the most significant one
    seen since the previous entry."""

    initial: str
    entries: tuple


def summarize(g, h, budget=None):
    """Compute the summary of a history by tracking the epistemic
    component of the running prefix, re-rooting at every common-knowledge
    round."""
    limit = budget if budget is not None else DEFAULT_BUDGET
    work = 0
    comp = [History(h.start)]
    rel = History(h.start)
    running = None
    entries = []
    for t, (a, w) in enumerate(h.steps, start=1):
        prolonged = []
        for cand in comp:
            for a2, w2 in g.out_moves.get(cand.last, ()):
                prolonged.append(cand.extend(a2, w2))
        work += len(prolonged)
        if work > limit:
            raise BudgetExceededError(
                "summary tracking exceeds the budget", explored=work
            )
        rel = rel.extend(a, w)
        for part in split_components(g, dict.fromkeys(prolonged)):
            if rel in part.histories:
                comp = sorted(part.histories, key=lambda x: (x.start, x.steps))
                cks = part.is_cks
                break
        else:
            raise GameFormatError("history does not follow the moves of the game")
        running = g.priority[w] if running is None else min(running, g.priority[w])
        if cks:
            entries.append((t, w, running))
            comp = [History(w)]
            rel = History(w)
            running = None
    return Summary(initial=h.start, entries=tuple(entries))


# --- deterministic parity automata over colour labels ----------------------


@dataclass(frozen=True)
class ParityAutomaton:
    states: tuple
    initial: str
    priority: dict  # state -> int
    delta: dict  # (state, colour) -> state


_DPA_TOP = {"states", "initial", "transitions"}
_DPA_STATE = {"id", "priority"}
_DPA_TRANS = {"from", "color", "to"}


def parse_dpa(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise GameFormatError("not valid JSON: %s" % e)
    if not isinstance(doc, dict) or set(doc) != _DPA_TOP:
        raise GameFormatError("automaton needs states, initial, transitions")
    priority, ids = {}, []
    for s in doc["states"]:
        if not isinstance(s, dict) or set(s) != _DPA_STATE:
            raise GameFormatError("each automaton state needs id and priority")
        if not isinstance(s["id"], str) or s["id"] in priority:
            raise GameFormatError("bad or duplicate automaton state id")
        if not isinstance(s["priority"], int) or s["priority"] < 0:
            raise GameFormatError("automaton priorities must be non-negative integers")
        ids.append(s["id"])
        priority[s["id"]] = s["priority"]
    if doc["initial"] not in priority:
        raise GameFormatError("initial must name a declared automaton state")
    delta = {}
    for t in doc["transitions"]:
        if not isinstance(t, dict) or set(t) != _DPA_TRANS:
            raise GameFormatError("each transition needs from, color, to")
        if t["from"] not in priority or t["to"] not in priority:
            raise GameFormatError("transition endpoint unknown")
        key = (t["from"], t["color"])
        if key in delta:
            raise GameFormatError("automaton is not deterministic at %r" % (key,))
        delta[key] = t["to"]
    return ParityAutomaton(states=tuple(ids), initial=doc["initial"], priority=priority, delta=delta)


def serialize_dpa(dpa):
    doc = {
        "states": [{"id": q, "priority": dpa.priority[q]} for q in dpa.states],
        "initial": dpa.initial,
        "transitions": [
            {"from": q, "color": c, "to": w} for (q, c), w in sorted(dpa.delta.items())
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def product_with_dpa(g, dpa):
    """Synchronised product reading the colour sequence of the play.  The
    product state after a move to v in automaton state q is (v, delta(q,
    colour(v))); its priority is the automaton state's priority and its
    observations append the automaton state, which is therefore commonly
    known."""
    if g.color is None:
        raise GameFormatError("the game carries no colour labels")
    for player in g.players:
        omap = g.obs[player]
        by_obs = {}
        for v in g.states:
            prev = by_obs.setdefault(omap[v], v)
            if g.color[prev] != g.color[v]:
                raise GameFormatError(
                    "colours are not observable: player %r cannot tell %r from %r"
                    % (player, prev, v)
                )

    def step(q, v):
        key = (q, g.color[v])
        if key not in dpa.delta:
            raise GameFormatError("automaton has no transition for %r" % (key,))
        return dpa.delta[key]

    init = (g.initial, step(dpa.initial, g.initial))
    seen = {init}
    queue = [init]
    moves = set()
    while queue:
        v, q = queue.pop(0)
        for a, w in g.out_moves.get(v, ()):
            tgt = (w, step(q, w))
            moves.add(((v, q), a, tgt))
            if tgt not in seen:
                seen.add(tgt)
                queue.append(tgt)

    def name(vq):
        return "%s@%s" % vq

    states = tuple(name(vq) for vq in sorted(seen))
    obs = {
        p: {name((v, q)): "%s@%s" % (g.obs[p][v], q) for v, q in seen}
        for p in g.players
    }
    return GameGraph(
        players=g.players,
        actions=g.actions,
        states=states,
        initial=name(init),
        obs=obs,
        priority={name((v, q)): dpa.priority[q] for v, q in seen},
        moves=frozenset((name(u), a, name(w)) for u, a, w in moves),
        color={name((v, q)): g.color[v] for v, q in seen},
    )
