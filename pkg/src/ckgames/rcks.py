"""Deciding recurring common knowledge of the state.

A play attains common knowledge of the state infinitely often exactly when
it attains mutual knowledge of the state infinitely often, and the plays
that fail recurring mutual knowledge are recognised by a co-Buchi
automaton: the first state component follows the play, the second tracks a
width-two witness branch that forks off whenever some player cannot tell
the two apart.  Off the diagonal the automaton also remembers which player
sustains the witness branch; the player may change only when the branch
forks off the main play again, since indistinguishability of the extended
branch for a player entails indistinguishability of its whole prefix for
that same player.  The game admits recurring common knowledge of the state
on every play iff the automaton has no reachable cycle lying entirely
inside its final (off-diagonal) states.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class ForkAutomaton:
    """Co-Buchi automaton over the alphabet of (profile, state) letters.
    States are triples (v, v', player): v follows the play, v' the witness
    branch, and the player component names who cannot tell the branches
    apart (None on the diagonal, where the branches agree).  Final states
    are the off-diagonal ones.  A game with m states and n players yields
    m + n * (m * m - m) states."""

    states: tuple
    initial: tuple  # (v0, v0, None)
    transitions: dict  # state -> tuple of ((profile, state), successor)

    def final(self, q):
        return q[0] != q[1]


def build_fork_automaton(g):
    """Build the automaton from a game graph.  From (u, u', t) on letter
    (a, v) with (u, a, v) a move, the branch may collapse to the diagonal
    (v, v, None), or continue to (v, v', j) for any state v' != v that
    player j observes like v, provided j has an action agreeing with their
    component of a that either forks the branch off the main play from u
    (any j) or extends the old branch from u' (only for j = t)."""
    states = [(v, v, None) for v in g.states]
    states += [
        (v, v2, player)
        for v in g.states
        for v2 in g.states
        if v2 != v
        for player in g.players
    ]
    transitions = {}
    for q in states:
        u, u2, t = q
        out = []
        for a, v in g.out_moves.get(u, ()):
            out.append(((a, v), (v, v, None)))
            for v2 in g.states:
                if v2 == v:
                    continue
                for player in _supports(g, u, u2, t, a, v, v2):
                    out.append(((a, v), (v, v2, player)))
        transitions[q] = tuple(out)
    return ForkAutomaton(
        states=tuple(states),
        initial=(g.initial, g.initial, None),
        transitions=transitions,
    )


def _supports(g, u, u2, t, a, v, v2):
    for i, player in enumerate(g.players):
        omap = g.obs[player]
        if omap[v2] != omap[v]:
            continue
        sources = g.out_moves.get(u, ())
        if player == t:
            sources = sources + g.out_moves.get(u2, ())
        if any(w == v2 and a2[i] == a[i] for a2, w in sources):
            yield player


@dataclass(frozen=True)
class Lasso:
    """A reachable cycle witness: stem then loop, each a sequence of
    transitions (source, (profile, state), target).  The state components
    of the letters spell a play of the game."""

    stem: tuple
    loop: tuple

    def play_states(self):
        return tuple(v for _, (_, v), _ in self.stem + self.loop)


@dataclass(frozen=True)
class RcksVerdict:
    holds: bool
    lasso: Lasso | None = None


def check_rcks(g, automaton=None):
    """Decide whether every play of the game attains common knowledge of
    the state infinitely often.  When not, return a lasso whose loop stays
    inside the final states of the fork automaton; mutual knowledge of the
    state fails at every round of the loop."""
    aut = automaton if automaton is not None else build_fork_automaton(g)

    # reachable fragment, remembering one shortest incoming transition
    reach = {aut.initial: None}
    frontier = [aut.initial]
    while frontier:
        nxt = []
        for q in frontier:
            for letter, q2 in aut.transitions[q]:
                if q2 not in reach:
                    reach[q2] = (q, letter)
                    nxt.append(q2)
        frontier = nxt

    # a cycle within reachable final states, found by DFS over the
    # final-restricted transition graph
    final = [q for q in reach if aut.final(q)]
    final_set = set(final)
    color = {}
    stack = []

    def dfs(q):
        color[q] = 1
        stack.append(q)
        for letter, q2 in aut.transitions[q]:
            if q2 not in final_set:
                continue
            if color.get(q2) == 1:
                k = stack.index(q2)
                return stack[k:] + [q2]
            if q2 not in color:
                found = dfs(q2)
                if found:
                    return found
        stack.pop()
        color[q] = 2
        return None

    cycle = None
    for q in final:
        if q not in color:
            found = dfs(q)
            if found:
                cycle = found
                break
    if cycle is None:
        return RcksVerdict(True)

    # loop transitions along the cycle
    loop = []
    for k in range(len(cycle) - 1):
        src, dst = cycle[k], cycle[k + 1]
        letter = next(l for l, q2 in aut.transitions[src] if q2 == dst)
        loop.append((src, letter, dst))

    # stem from the initial state to the cycle entry
    stem = []
    q = cycle[0]
    while reach[q] is not None:
        prev, letter = reach[q]
        stem.append((prev, letter, q))
        q = prev
    stem.reverse()
    return RcksVerdict(False, Lasso(stem=tuple(stem), loop=tuple(loop)))
