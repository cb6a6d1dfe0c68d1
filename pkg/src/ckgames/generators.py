"""Reference game families and random instances.

The families cover the constructions the rest of the package is exercised
on: the cycle-versus-path family with a quadratic knowledge gap, the small
coordinated-decision examples, consensus games testing common knowledge at
a designated history, corridor-tiling games, and seeded random games.
"""

import json
import random
from dataclasses import dataclass

from .errors import GameFormatError
from .game import GameGraph, History, is_valid_history

WHITE = "w"
BLACK = "k"


def _complete(states, moves, profiles, sink):
    """Totality: route every unlisted (state, profile) pair to a sink."""
    listed = {(u, a) for u, a, _ in moves}
    for v in states:
        for a in profiles:
            if (v, a) not in listed:
                moves.add((v, a, sink))
    return moves


def gen_gm(m):
    """One player, one action, 3m states: the initial state branches into
    a cycle of m-1 white states and a black one, or into a path of m
    self-looping white states separated by black states, ending at the
    cycle's black state.  The longest knowledge gap has length m*m."""
    if m < 2:
        raise GameFormatError("m must be at least 2")
    whites = ["v0"] + ["a%d" % k for k in range(1, m)] + ["b%d" % k for k in range(1, m + 1)]
    blacks = ["z"] + ["c%d" % k for k in range(1, m)]
    states = whites + blacks
    moves = {("v0", ("go",), "a1"), ("v0", ("go",), "b1")}
    for k in range(1, m - 1):
        moves.add(("a%d" % k, ("go",), "a%d" % (k + 1)))
    moves.add(("a%d" % (m - 1), ("go",), "z"))
    moves.add(("z", ("go",), "a1"))
    for k in range(1, m + 1):
        moves.add(("b%d" % k, ("go",), "b%d" % k))
        if k < m:
            moves.add(("b%d" % k, ("go",), "c%d" % k))
            moves.add(("c%d" % k, ("go",), "b%d" % (k + 1)))
    moves.add(("b%d" % m, ("go",), "z"))
    obs = {v: WHITE for v in whites}
    obs.update({v: BLACK for v in blacks})
    return GameGraph(
        players=("1",),
        actions={"1": ("go",)},
        states=tuple(states),
        initial="v0",
        obs={"1": obs},
        priority={v: 0 for v in states},
        moves=frozenset(moves),
    )


# --- coordinated-decision figures ------------------------------------------
#
# Two players with actions in and out.  Unspecified profiles, disagreement,
# and out at any state other than the designated one lead to the losing
# sink.  Dotted continuations become a commonly observed neutral state.
# Under the safety objective only the losing sink is odd; under the reach
# objective idling in the neutral state is odd as well, so the players must
# eventually take the accepting exit.

_FIGURES = {
    "1a": {
        "states": [
            ("s0", "*", "*"), ("A", "o", "o"), ("B", "o", "*"),
            ("AA", "x", "x"), ("BA", "x", "x"),
        ],
        "steps": [("s0", "A"), ("s0", "B"), ("A", "AA"), ("B", "BA"),
                  ("AA", "N"), ("BA", "N")],
        "exit": "BA",
        "marked": ["s0", "B", "BA"],
    },
    "1b": {
        "states": [
            ("s0", "*", "*"), ("A", "o", "o"), ("B", "o", "*"), ("C", "*", "*"),
            ("AA", "x", "x"), ("BB", "x", "x"),
        ],
        "steps": [("s0", "A"), ("s0", "B"), ("s0", "C"), ("A", "AA"),
                  ("B", "BB"), ("C", "BB"), ("AA", "N"), ("BB", "N")],
        "exit": "BB",
        "marked": ["s0", "C", "BB"],
    },
    "2a": {
        "states": [
            ("s0", "*", "*"),
            ("A00", "o", "o"), ("A01", "o", "*"), ("A11", "*", "*"), ("A12", "*", "*"),
            ("B00", "o", "o"), ("B01", "o", "o"), ("B11", "o", "o"), ("B12", "o", "*"),
            ("AA", "x", "x"), ("BB", "x", "x"),
        ],
        "steps": [("s0", "A00"), ("s0", "A01"), ("s0", "A11"), ("s0", "A12"),
                  ("A00", "B00"), ("A01", "B01"), ("A11", "B11"), ("A12", "B12"),
                  ("B00", "AA"), ("B01", "BB"), ("B11", "BB"), ("B12", "BB"),
                  ("AA", "N"), ("BB", "N")],
        "exit": "BB",
        "marked": ["s0", "A12", "B12", "BB"],
    },
}


def _figure_2b(n):
    chain = ["A11_%d" % k for k in range(1, n + 1)]
    states = [("s0", "*", "*"), ("A00", "o", "o"), ("A01", "o", "*"),
              ("B1", "o", "o"), ("AA", "x", "x"), ("BB", "x", "x")]
    states[3:3] = [(c, "*", "*") for c in chain]
    steps = [("s0", "A00"), ("s0", "A01"), ("s0", chain[0]),
             ("A00", "A00"), ("A00", "AA"), ("A01", "B1"),
             ("B1", "B1"), ("B1", "BB"), ("AA", "N"), ("BB", "N")]
    for k, c in enumerate(chain):
        steps.append((c, "A01"))
        steps.append((c, "B1"))
        if k + 1 < n:
            steps.append((c, chain[k + 1]))
    return {
        "states": states,
        "steps": steps,
        "exit": "BB",
        "marked": ["s0"] + chain + ["B1", "BB"],
    }


def gen_figure(fig_id, n=None, objective="safety"):
    """The coordinated-decision examples 1a, 1b, 2a and 2b; 2b takes the
    number of loop unrollings n >= 1.  The objective selects priorities:
    'safety' makes only the losing sink odd, 'reach' additionally makes
    the neutral idle state odd."""
    if fig_id == "2b":
        if n is None or n < 1:
            raise GameFormatError("figure 2b needs n >= 1")
        fig = _figure_2b(n)
    elif fig_id in _FIGURES:
        fig = _FIGURES[fig_id]
    else:
        raise GameFormatError("unknown figure %r" % (fig_id,))
    if objective not in ("safety", "reach"):
        raise GameFormatError("objective must be 'safety' or 'reach'")

    both_in = ("in", "in")
    states = [s for s, _, _ in fig["states"]] + ["N", "win", "lose"]
    obs1 = {s: o1 for s, o1, _ in fig["states"]}
    obs2 = {s: o2 for s, _, o2 in fig["states"]}
    obs1.update({"N": "n", "win": "+", "lose": "-"})
    obs2.update({"N": "n", "win": "+", "lose": "-"})
    moves = {(u, both_in, v) for u, v in fig["steps"]}
    moves.add(("N", both_in, "N"))
    moves.add((fig["exit"], ("out", "out"), "win"))
    profiles = [(a, b) for a in ("in", "out") for b in ("in", "out")]
    for a in profiles:
        moves.add(("win", a, "win"))
        moves.add(("lose", a, "lose"))
    _complete(states, moves, profiles, "lose")
    priority = {s: 2 for s in states}
    priority["lose"] = 1
    if objective == "reach":
        priority["N"] = 1
    return GameGraph(
        players=("1", "2"),
        actions={"1": ("in", "out"), "2": ("in", "out")},
        states=tuple(states),
        initial="s0",
        obs={"1": obs1, "2": obs2},
        priority=priority,
        moves=frozenset(moves),
    )


def figure_marked_history(fig_id, n=None):
    """The highlighted history of a figure, as played in the generated
    game (every step uses the profile (in, in))."""
    if fig_id == "2b":
        if n is None or n < 1:
            raise GameFormatError("figure 2b needs n >= 1")
        path = _figure_2b(n)["marked"]
    elif fig_id in _FIGURES:
        path = _FIGURES[fig_id]["marked"]
    else:
        raise GameFormatError("unknown figure %r" % (fig_id,))
    h = History(path[0])
    for v in path[1:]:
        h = h.extend(("in", "in"), v)
    return h


# --- consensus games -------------------------------------------------------


def gen_consensus_game(g, pi):
    """The consensus game testing common knowledge at a history pi of a
    single-action game g: players follow a disjoint copy of g or the
    unravelling of pi with the action in; out wins exactly at the end
    state of pi and at the final history state, and everything else (out
    elsewhere, in at the final history state, disagreement) loses."""
    if any(len(g.actions[p]) != 1 for p in g.players):
        raise GameFormatError("the base game must give every player a single action")
    if pi.start != g.initial:
        raise GameFormatError("the history must start at the initial state")
    if not is_valid_history(g, pi):
        raise GameFormatError("not a history of the base game")

    used = {sym for p in g.players for sym in g.obs[p].values()}
    win_obs, lose_obs = "+", "-"
    while win_obs in used:
        win_obs += "'"
    while lose_obs in used:
        lose_obs += "'"

    n = len(g.players)
    both_in = ("in",) * n
    both_out = ("out",) * n
    copies = ["g:%s" % v for v in g.states]
    chain = ["h%d" % k for k in range(len(pi) + 1)]
    states = copies + chain + ["win", "lose"]
    pi_states = pi.states()
    obs = {}
    for p in g.players:
        omap = {"g:%s" % v: g.obs[p][v] for v in g.states}
        omap.update({"h%d" % k: g.obs[p][pi_states[k]] for k in range(len(pi) + 1)})
        omap.update({"win": win_obs, "lose": lose_obs})
        obs[p] = omap

    moves = set()
    for u, _, v in g.moves:
        moves.add(("g:%s" % u, both_in, "g:%s" % v))
    for k in range(len(pi)):
        moves.add(("h%d" % k, both_in, "h%d" % (k + 1)))
    for _, w in g.out_moves.get(g.initial, ()):
        moves.add(("h0", both_in, "g:%s" % w))
    moves.add(("g:%s" % pi.last, both_out, "win"))
    moves.add(("h%d" % len(pi), both_out, "win"))
    profiles = [p for p in _profiles(n)]
    for a in profiles:
        moves.add(("win", a, "win"))
        moves.add(("lose", a, "lose"))
    _complete(states, moves, profiles, "lose")
    priority = {s: 2 for s in states}
    priority["lose"] = 1
    return GameGraph(
        players=g.players,
        actions={p: ("in", "out") for p in g.players},
        states=tuple(states),
        initial="h0",
        obs=obs,
        priority=priority,
        moves=frozenset(moves),
    )


def _profiles(n):
    out = [()]
    for _ in range(n):
        out = [pre + (a,) for pre in out for a in ("in", "out")]
    return out


# --- corridor-tiling games -------------------------------------------------

HASH = "#"
BOTTOM = "_"


@dataclass(frozen=True)
class DominoSystem:
    """Dominoes with horizontal and vertical compatibility; '#' borders
    every row on both sides and '_' fills the bottom row."""

    dominoes: tuple
    horizontal: frozenset  # (left, right)
    vertical: frozenset  # (below, above)


def check_domino_system(d):
    ds = set(d.dominoes)
    if HASH not in ds or BOTTOM not in ds:
        raise GameFormatError("the system must contain the border dominoes")
    for a, b in d.horizontal | d.vertical:
        if a not in ds or b not in ds:
            raise GameFormatError("compatibility over unknown dominoes")
    for a, b in d.horizontal:
        if BOTTOM in (a, b):
            raise GameFormatError("the bottom filler may not occur in horizontal pairs")
    for a, b in d.vertical:
        if (a, b) != (HASH, HASH) and b in (HASH, BOTTOM):
            raise GameFormatError("only non-border dominoes may sit above another row")


def parse_domino_system(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise GameFormatError("not valid JSON: %s" % e)
    if not isinstance(doc, dict) or set(doc) != {"dominoes", "horizontal", "vertical"}:
        raise GameFormatError("a system needs dominoes, horizontal, vertical")
    d = DominoSystem(
        dominoes=tuple(doc["dominoes"]),
        horizontal=frozenset(map(tuple, doc["horizontal"])),
        vertical=frozenset(map(tuple, doc["vertical"])),
    )
    check_domino_system(d)
    return d


def gen_corridor_game(d):
    """Two players, single action.  Singleton states follow one row of
    the corridor, pair states follow two vertically compatible rows with
    player 1 observing the lower and player 2 the upper row.  The borders
    route rows that may close to the accepting sink; only the bottom
    filler row reaches the rejecting sink, so common knowledge at a
    frontier history fails exactly when the frontier starts a corridor
    tiling."""
    check_domino_system(d)
    act = ("a", "a")

    def from_hash(x):
        return x == BOTTOM or (HASH, x) in d.horizontal

    def to_hash(x):
        return x == BOTTOM or (x, HASH) in d.horizontal

    def step_ok(x, y):
        if x == BOTTOM or y == BOTTOM:
            return x == BOTTOM and y == BOTTOM
        return (x, y) in d.horizontal

    singles = [x for x in d.dominoes if x != HASH]
    pairs = [
        (x, y) for x, y in sorted(d.vertical)
        if x != HASH and y not in (HASH, BOTTOM)
    ]
    states = ["v0", "acc", "rej", "dead"]
    states += ["s:%s" % x for x in singles]
    states += ["p:%s,%s" % p for p in pairs]
    obs1 = {"v0": HASH, "acc": HASH, "rej": HASH, "dead": "!"}
    obs2 = dict(obs1)
    for x in singles:
        obs1["s:%s" % x] = obs2["s:%s" % x] = x
    for x, y in pairs:
        obs1["p:%s,%s" % (x, y)] = x
        obs2["p:%s,%s" % (x, y)] = y

    moves = set()
    for x in singles:
        if from_hash(x):
            moves.add(("v0", act, "s:%s" % x))
        if to_hash(x):
            moves.add(("s:%s" % x, act, "acc"))
        for y in singles:
            if step_ok(x, y):
                moves.add(("s:%s" % x, act, "s:%s" % y))
    moves.add(("s:%s" % BOTTOM, act, "rej"))
    for x, y in pairs:
        pid = "p:%s,%s" % (x, y)
        if from_hash(x) and from_hash(y):
            moves.add(("v0", act, pid))
        if to_hash(x) and to_hash(y):
            moves.add((pid, act, "acc"))
        for x2, y2 in pairs:
            if step_ok(x, x2) and step_ok(y, y2):
                moves.add((pid, act, "p:%s,%s" % (x2, y2)))
    for s in ("acc", "rej", "dead"):
        moves.add((s, act, s))
    _complete(states, moves, [act], "dead")
    return GameGraph(
        players=("1", "2"),
        actions={"1": ("a",), "2": ("a",)},
        states=tuple(states),
        initial="v0",
        obs={"1": obs1, "2": obs2},
        priority={s: 0 for s in states},
        moves=frozenset(moves),
    )


def corridor_history(game, frontier):
    """The frontier history: the initial state, one singleton state per
    frontier domino, then the accepting sink."""
    act = ("a", "a")
    h = History("v0")
    for x in frontier:
        h = h.extend(act, "s:%s" % x)
    h = h.extend(act, "acc")
    if not is_valid_history(game, h):
        raise GameFormatError("the frontier does not form a history of the game")
    return h


# --- random games ----------------------------------------------------------


def gen_random(seed, states=4, players=2, actions=2, priorities=1, obs_symbols=2):
    """A seeded random game.  Priorities are folded into the observation
    symbols, so the colouring is observable by construction; totality
    holds because every (state, profile) pair receives at least one
    successor."""
    rng = random.Random(seed)
    names = ["s%d" % k for k in range(states)]
    player_names = tuple(str(k + 1) for k in range(players))
    action_names = tuple("abcd"[k] for k in range(actions))
    priority = {v: rng.randrange(priorities) for v in names}
    obs = {}
    for p in player_names:
        obs[p] = {
            v: "o%d.%d" % (rng.randrange(obs_symbols), priority[v]) for v in names
        }
    profiles = [()]
    for _ in range(players):
        profiles = [pre + (a,) for pre in profiles for a in action_names]
    moves = set()
    for v in names:
        for a in profiles:
            for w in rng.sample(names, rng.choice((1, 1, 2))):
                moves.add((v, tuple(a), w))
    return GameGraph(
        players=player_names,
        actions={p: action_names for p in player_names},
        states=tuple(names),
        initial="s0",
        obs=obs,
        priority=priority,
        moves=frozenset(moves),
        color={v: "c%d" % priority[v] for v in names},
    )
