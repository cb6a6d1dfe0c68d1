"""Game graphs with imperfect information.

A game graph has a finite set of states, a finite set of players, per-player
action sets, and moves labelled by action profiles.  Each player owns an
observation map over states; plays are synchronous and players have perfect
recall of their own observations and actions.  States carry a parity priority
(smaller number = more significant) and, optionally, a colour label used by
the omega-regular product construction.
"""

import json
from dataclasses import dataclass, field
from functools import cached_property

from .errors import GameFormatError

Profile = tuple  # one action per player, in player order


@dataclass(frozen=True)
class History:
    """A finite history: a start state and a sequence of (profile, state)
    steps.  The start state is commonly known; it is the game's initial
    state unless the history was re-rooted at a common-knowledge point."""

    start: str
    steps: tuple = ()

    @property
    def last(self):
        return self.steps[-1][1] if self.steps else self.start

    def __len__(self):
        return len(self.steps)

    def states(self):
        return (self.start,) + tuple(v for _, v in self.steps)

    def extend(self, profile, state):
        return History(self.start, self.steps + ((profile, state),))

    def prefix(self, length):
        return History(self.start, self.steps[:length])


@dataclass(frozen=True)
class GameGraph:
    players: tuple
    actions: dict  # player -> tuple of action names
    states: tuple
    initial: str
    obs: dict  # player -> state -> observation symbol
    priority: dict  # state -> int
    moves: frozenset  # of (state, profile, state)
    color: dict | None = None  # state -> colour label, optional

    @cached_property
    def profiles(self):
        """All action profiles, in lexicographic player-major order."""
        out = [()]
        for p in self.players:
            out = [pre + (a,) for pre in out for a in self.actions[p]]
        return tuple(out)

    @cached_property
    def succ(self):
        """(state, profile) -> tuple of successor states."""
        table = {}
        for u, a, v in sorted(self.moves):
            table.setdefault((u, a), []).append(v)
        return {k: tuple(vs) for k, vs in table.items()}

    @cached_property
    def out_moves(self):
        """state -> tuple of (profile, successor)."""
        table = {}
        for u, a, v in sorted(self.moves):
            table.setdefault(u, []).append((a, v))
        return {u: tuple(ms) for u, ms in table.items()}

    @cached_property
    def num_priorities(self):
        """Size of the priority range C; defaults to the largest priority
        in use, so the least significant priority is max(priority)."""
        return max(self.priority.values())

    def player_index(self, player):
        try:
            return self.players.index(player)
        except ValueError:
            raise GameFormatError("unknown player %r" % (player,))


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations

    def add(self, kind, message):
        self.violations.append((kind, message))


def validate(g):
    """Check the structural invariants of a game graph.

    Returns a report listing every violation: unknown endpoints, wrong
    profile arity, missing observation or priority entries, non-total
    move relation, and unobservable priorities (two states with different
    priorities that some player cannot tell apart).
    """
    r = ValidationReport()
    states = set(g.states)
    if len(states) != len(g.states):
        r.add("states", "duplicate state ids")
    if g.initial not in states:
        r.add("initial", "initial state %r not declared" % (g.initial,))
    for p in g.players:
        if p not in g.actions or not g.actions[p]:
            r.add("actions", "player %r has no actions" % (p,))
        omap = g.obs.get(p, {})
        for v in g.states:
            if v not in omap:
                r.add("obs", "state %r lacks an observation for player %r" % (v, p))
    for v in g.states:
        if v not in g.priority:
            r.add("priority", "state %r has no priority" % (v,))
        elif g.priority[v] < 0:
            r.add("priority", "state %r has a negative priority" % (v,))
    if g.color is not None:
        for v in g.states:
            if v not in g.color:
                r.add("color", "state %r has no colour" % (v,))
    for u, a, v in g.moves:
        if u not in states or v not in states:
            r.add("moves", "move (%r, %r, %r) has unknown endpoint" % (u, a, v))
            continue
        if len(a) != len(g.players):
            r.add("moves", "profile %r has wrong arity" % (a,))
            continue
        for p, act in zip(g.players, a):
            if act not in g.actions.get(p, ()):
                r.add("moves", "profile %r uses unknown action for player %r" % (a, p))
    # totality: every (state, profile) pair needs at least one successor
    for v in g.states:
        for a in g.profiles:
            if not g.succ.get((v, a)):
                r.add("totality", "no move from %r under profile %r" % (v, a))
    # observable priorities: different priority implies different observation
    for p in g.players:
        omap = g.obs.get(p, {})
        seen = {}
        for v in g.states:
            if v not in omap or v not in g.priority:
                continue
            prev = seen.setdefault(omap[v], v)
            if g.priority.get(prev) != g.priority[v]:
                r.add(
                    "observability",
                    "player %r cannot distinguish %r and %r, which have "
                    "different priorities" % (p, prev, v),
                )
    return r


def is_valid_history(g, h):
    """True iff every step of h follows a move of g."""
    if h.start not in set(g.states):
        return False
    cur = h.start
    for a, v in h.steps:
        if v not in g.succ.get((cur, a), ()):
            return False
        cur = v
    return True


def obs_projection(g, h, player):
    """The observation sequence of one player along a history: the
    observation of the start state, then alternately the player's own
    action component and the observation of the next state."""
    i = g.player_index(player)
    omap = g.obs[player]
    out = [omap[h.start]]
    for a, v in h.steps:
        out.append(a[i])
        out.append(omap[v])
    return tuple(out)


# --- document format -------------------------------------------------------
#
# A game is stored as a single JSON document:
#
# {
#   "players": ["1", "2"],
#   "actions": {"1": ["in", "out"], "2": ["in", "out"]},
#   "states": [
#     {"id": "v0", "obs": {"1": "*", "2": "*"}, "priority": 2},
#     ...
#   ],
#   "initial": "v0",
#   "moves": [{"from": "v0", "profile": ["in", "in"], "to": "A"}, ...]
# }
#
# The optional per-state field "color" carries the colour label read by a
# deterministic parity automaton.  Unknown fields are rejected.

_TOP_FIELDS = {"players", "actions", "states", "initial", "moves"}
_STATE_FIELDS = {"id", "obs", "priority", "color"}
_MOVE_FIELDS = {"from", "profile", "to"}


def _require(cond, message):
    if not cond:
        raise GameFormatError(message)


def parse_game(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise GameFormatError("not valid JSON: %s" % e)
    _require(isinstance(doc, dict), "top level must be an object")
    unknown = set(doc) - _TOP_FIELDS
    _require(not unknown, "unknown top-level fields: %s" % sorted(unknown))
    missing = _TOP_FIELDS - set(doc)
    _require(not missing, "missing fields: %s" % sorted(missing))

    players = doc["players"]
    _require(
        isinstance(players, list) and players and all(isinstance(p, str) for p in players),
        "players must be a non-empty list of strings",
    )
    _require(len(set(players)) == len(players), "duplicate player names")

    acts = doc["actions"]
    _require(isinstance(acts, dict) and set(acts) == set(players), "actions must map every player")
    actions = {}
    for p, al in acts.items():
        _require(
            isinstance(al, list) and al and all(isinstance(a, str) for a in al),
            "actions of player %r must be a non-empty list of strings" % p,
        )
        actions[p] = tuple(al)

    _require(isinstance(doc["states"], list) and doc["states"], "states must be a non-empty list")
    ids, obs, priority, color = [], {p: {} for p in players}, {}, {}
    has_color = False
    for s in doc["states"]:
        _require(isinstance(s, dict), "each state must be an object")
        unknown = set(s) - _STATE_FIELDS
        _require(not unknown, "unknown state fields: %s" % sorted(unknown))
        _require("id" in s and isinstance(s["id"], str), "state without id")
        v = s["id"]
        _require(v not in priority, "duplicate state id %r" % v)
        ids.append(v)
        _require(isinstance(s.get("obs"), dict) and set(s["obs"]) == set(players),
                 "state %r must give one observation per player" % v)
        for p, sym in s["obs"].items():
            _require(isinstance(sym, str), "observation of %r must be a string" % v)
            obs[p][v] = sym
        _require(isinstance(s.get("priority"), int) and s["priority"] >= 0,
                 "state %r needs a non-negative integer priority" % v)
        priority[v] = s["priority"]
        if "color" in s:
            _require(isinstance(s["color"], str), "colour of %r must be a string" % v)
            color[v] = s["color"]
            has_color = True
    if has_color:
        _require(set(color) == set(ids), "either all states carry a colour or none do")

    _require(isinstance(doc["initial"], str) and doc["initial"] in priority,
             "initial must name a declared state")

    _require(isinstance(doc["moves"], list), "moves must be a list")
    moves = set()
    for m in doc["moves"]:
        _require(isinstance(m, dict), "each move must be an object")
        unknown = set(m) - _MOVE_FIELDS
        _require(not unknown, "unknown move fields: %s" % sorted(unknown))
        _require(set(m) == _MOVE_FIELDS, "move needs from, profile, to")
        _require(m["from"] in priority and m["to"] in priority,
                 "move endpoints must be declared states")
        prof = m["profile"]
        _require(isinstance(prof, list) and len(prof) == len(players),
                 "profile must list one action per player")
        for p, a in zip(players, prof):
            _require(a in actions[p], "profile action %r unknown for player %r" % (a, p))
        moves.add((m["from"], tuple(prof), m["to"]))

    return GameGraph(
        players=tuple(players),
        actions=actions,
        states=tuple(ids),
        initial=doc["initial"],
        obs=obs,
        priority=priority,
        moves=frozenset(moves),
        color=color if has_color else None,
    )


def serialize_game(g):
    states = []
    for v in g.states:
        s = {
            "id": v,
            "obs": {p: g.obs[p][v] for p in g.players},
            "priority": g.priority[v],
        }
        if g.color is not None:
            s["color"] = g.color[v]
        states.append(s)
    doc = {
        "players": list(g.players),
        "actions": {p: list(g.actions[p]) for p in g.players},
        "states": states,
        "initial": g.initial,
        "moves": [
            {"from": u, "profile": list(a), "to": v} for u, a, v in sorted(g.moves)
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def parse_history(g, text):
    """Parse the command-line history syntax: states alternating with
    action profiles whose components are separated by '|', for example
    'v0 in|in A out|out Z'."""
    tokens = text.split()
    _require(tokens, "empty history")
    _require(len(tokens) % 2 == 1, "history must alternate states and profiles")
    states = set(g.states)
    _require(tokens[0] in states, "unknown state %r" % tokens[0])
    h = History(tokens[0])
    for k in range(1, len(tokens), 2):
        parts = tuple(tokens[k].split("|"))
        _require(len(parts) == len(g.players),
                 "profile %r must have one action per player" % tokens[k])
        for p, a in zip(g.players, parts):
            _require(a in g.actions[p], "unknown action %r for player %r" % (a, p))
        _require(tokens[k + 1] in states, "unknown state %r" % tokens[k + 1])
        h = h.extend(parts, tokens[k + 1])
    _require(is_valid_history(g, h), "history does not follow the moves of the game")
    return h


def format_history(h):
    parts = [h.start]
    for a, v in h.steps:
        parts.append("|".join(a))
        parts.append(v)
    return " ".join(parts)
