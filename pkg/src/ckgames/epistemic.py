"""Knowledge queries over histories.

Two histories are indistinguishable to a player when their observation
projections coincide.  The state is mutual knowledge at a history when every
history any single player considers possible ends at the same state; it is
common knowledge when the same holds for the closure under chains of
single-player indistinguishability.

Closure computations can touch exponentially many histories, so every
operation that walks them takes an explored-history budget and raises
BudgetExceededError when it runs out.  A budget overrun is never reported
as a boolean answer.
"""

from dataclasses import dataclass

from .errors import BudgetExceededError
from .game import History, obs_projection

DEFAULT_BUDGET = 10**6


class _Budget:
    def __init__(self, limit):
        self.limit = limit if limit is not None else DEFAULT_BUDGET
        self.used = 0

    def charge(self, n=1):
        self.used += n
        if self.used > self.limit:
            raise BudgetExceededError(
                "exploration budget of %d histories exhausted" % self.limit,
                explored=self.used,
            )


def possibility_set(g, h, player, budget=None):
    """All histories from h.start the given player cannot distinguish
    from h.  The start state is commonly known, so candidates share it."""
    b = budget if isinstance(budget, _Budget) else _Budget(budget)
    i = g.player_index(player)
    omap = g.obs[player]
    current = [History(h.start)]
    for a, v in h.steps:
        nxt = []
        for cand in current:
            for a2, w in g.out_moves.get(cand.last, ()):
                if a2[i] == a[i] and omap[w] == omap[v]:
                    b.charge()
                    nxt.append(cand.extend(a2, w))
        # distinct moves can produce the same history
        current = list(dict.fromkeys(nxt))
    return frozenset(current)


def _end_subsets(g, h):
    """Per player, the set of states the player considers possible at the
    end of h, via the usual knowledge subset construction."""
    subsets = []
    for player in g.players:
        i = g.player_index(player)
        omap = g.obs[player]
        cur = {h.start}
        for a, v in h.steps:
            cur = {
                w
                for u in cur
                for a2, w in g.out_moves.get(u, ())
                if a2[i] == a[i] and omap[w] == omap[v]
            }
        subsets.append(cur)
    return subsets


def mk_state_at(g, h):
    """True iff the end state of h is mutual knowledge: every player's
    possibility set ends at h.last only.  Polynomial, no budget needed."""
    return all(s == {h.last} for s in _end_subsets(g, h))


class _Neighbours:
    """Indistinguishability neighbours of a history, memoised per
    projection so chains over large closures stay affordable."""

    def __init__(self, g, budget):
        self.g = g
        self.budget = budget
        self.cache = {}

    def of(self, h):
        out = set()
        for player in self.g.players:
            key = (player, obs_projection(self.g, h, player))
            if key not in self.cache:
                self.cache[key] = possibility_set(self.g, h, player, self.budget)
            out |= self.cache[key]
        return out


def mk_order_at(g, h, order, budget=None):
    """Iterated knowledge of the state: true iff every history reachable
    from h by an indistinguishability chain of length <= order ends at
    h.last.  Order 1 coincides with mutual knowledge."""
    b = _Budget(budget)
    nb = _Neighbours(g, b)
    frontier = {h}
    seen = {h}
    for _ in range(order):
        nxt = set()
        for cur in frontier:
            for other in nb.of(cur):
                if other.last != h.last:
                    return False
                if other not in seen:
                    seen.add(other)
                    nxt.add(other)
        if not nxt:
            return True
        frontier = nxt
    return True


def ck_state_at(g, h, budget=None):
    """Common knowledge of the state: true iff every history in the chain
    closure of h ends at h.last."""
    b = _Budget(budget)
    nb = _Neighbours(g, b)
    frontier = [h]
    seen = {h}
    while frontier:
        nxt = []
        for cur in frontier:
            for other in nb.of(cur):
                if other.last != h.last:
                    return False
                if other not in seen:
                    seen.add(other)
                    nxt.append(other)
        frontier = nxt
    return True


@dataclass(frozen=True)
class EpistemicComponent:
    """A connected component of same-length histories under the union of
    the players' indistinguishability relations."""

    histories: frozenset

    @property
    def round(self):
        return len(next(iter(self.histories)))

    @property
    def end_states(self):
        return frozenset(h.last for h in self.histories)

    @property
    def is_cks(self):
        return len(self.end_states) == 1


def split_components(g, histories):
    """Partition same-length histories into connected components: group by
    each player's projection, then take the induced connected closure."""
    histories = list(histories)
    parent = list(range(len(histories)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[ry] = rx

    for player in g.players:
        groups = {}
        for k, h in enumerate(histories):
            groups.setdefault(obs_projection(g, h, player), []).append(k)
        for members in groups.values():
            for k in members[1:]:
                union(members[0], k)

    comps = {}
    for k, h in enumerate(histories):
        comps.setdefault(find(k), []).append(h)
    return [EpistemicComponent(frozenset(c)) for c in comps.values()]


def track_components(g, depth, root=None, budget=None):
    """Layered epistemic unfolding from a commonly known root state.

    Layer 0 holds the single component {root}.  Each next layer prolongs
    every history of the previous layer by every move and splits the
    result into components.  Returns a list of layers; each layer is a
    list of (component, parent_index) pairs, where parent_index points
    into the previous layer.
    """
    b = _Budget(budget)
    root = root if root is not None else g.initial
    layers = [[(EpistemicComponent(frozenset([History(root)])), None)]]
    for _ in range(depth):
        prev = layers[-1]
        prolonged = []
        owner = {}
        for idx, (comp, _parent) in enumerate(prev):
            for h in comp.histories:
                for a, w in g.out_moves.get(h.last, ()):
                    b.charge()
                    h2 = h.extend(a, w)
                    prolonged.append(h2)
                    owner[h2] = idx
        layer = []
        for comp in split_components(g, dict.fromkeys(prolonged)):
            # a component can gather histories from several parents; they
            # are then in the same parent component, so any owner will do
            parent = owner[next(iter(comp.histories))]
            layer.append((comp, parent))
        layers.append(layer)
    return layers


def component_of(g, h, budget=None):
    """The connected component of h among same-length histories."""
    b = _Budget(budget)
    nb = _Neighbours(g, b)
    frontier = [h]
    seen = {h}
    while frontier:
        nxt = []
        for cur in frontier:
            for other in nb.of(cur):
                if other not in seen:
                    seen.add(other)
                    nxt.append(other)
        frontier = nxt
    return EpistemicComponent(frozenset(seen))
