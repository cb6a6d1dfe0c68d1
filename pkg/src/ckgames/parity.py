"""Turn-based parity games and a recursive attractor solver.

The winning condition is min-parity: a play is won by the coordinator when
the least priority occurring infinitely often is even, by nature when it is
odd.  Both players win positionally, and the classic recursive algorithm
computes the full winning regions together with positional strategies.
Every solve is double-checked internally: each region must be closed under
the loser's moves and must contain no strategy-consistent cycle whose
minimal priority has the loser's parity.
"""

import json
from dataclasses import dataclass

from .errors import CkgamesError, GameFormatError

COORDINATOR = 0
NATURE = 1
_OWNER_NAMES = {"coordinator": COORDINATOR, "nature": NATURE}


@dataclass(frozen=True)
class ParityGame:
    positions: tuple
    owner: dict  # position -> COORDINATOR or NATURE
    priority: dict  # position -> int >= 0
    succ: dict  # position -> tuple of positions
    initial: str | None = None


@dataclass
class SolveResult:
    regions: tuple  # (coordinator's region, nature's region), as frozensets
    strategies: tuple  # per player: {position -> chosen successor}

    def winner(self, position):
        return COORDINATOR if position in self.regions[COORDINATOR] else NATURE


def _attract(pg, area, side, target):
    """The side's attractor to target within area, with a positional
    attractor strategy choosing the minimal-id successor."""
    inside = set(target)
    strategy = {}
    changed = True
    while changed:
        changed = False
        for v in sorted(area):
            if v in inside:
                continue
            succs = [w for w in pg.succ[v] if w in area]
            if pg.owner[v] == side:
                hits = [w for w in succs if w in inside]
                if hits:
                    inside.add(v)
                    strategy[v] = min(hits)
                    changed = True
            else:
                if succs and all(w in inside for w in succs):
                    inside.add(v)
                    changed = True
    return inside, strategy


def _solve(pg, area):
    if not area:
        return ({COORDINATOR: set(), NATURE: set()}, {COORDINATOR: {}, NATURE: {}})
    d = min(pg.priority[v] for v in area)
    side = d % 2
    other = 1 - side
    top = {v for v in area if pg.priority[v] == d}
    attr, attr_strat = _attract(pg, area, side, top)
    sub_regions, sub_strats = _solve(pg, area - attr)
    if not sub_regions[other]:
        regions = {side: set(area), other: set()}
        strat = dict(sub_strats[side])
        strat.update(attr_strat)
        for v in sorted(top):
            if pg.owner[v] == side and v not in strat:
                strat[v] = min(w for w in pg.succ[v] if w in area)
        return regions, {side: strat, other: {}}
    escape, escape_strat = _attract(pg, area, other, sub_regions[other])
    rest_regions, rest_strats = _solve(pg, area - escape)
    win_other = rest_regions[other] | escape
    strat_other = dict(rest_strats[other])
    strat_other.update(sub_strats[other])
    strat_other.update(escape_strat)
    return (
        {side: rest_regions[side], other: win_other},
        {side: rest_strats[side], other: strat_other},
    )


def solve(pg):
    """Solve the game; regions partition the positions and carry verified
    positional strategies."""
    area = set(pg.positions)
    for v in pg.positions:
        if not pg.succ.get(v):
            raise GameFormatError("position %r has no successor" % (v,))
    regions, strats = _solve(pg, area)
    result = SolveResult(
        regions=(frozenset(regions[COORDINATOR]), frozenset(regions[NATURE])),
        strategies=(strats[COORDINATOR], strats[NATURE]),
    )
    defects = verify_solution(pg, result)
    if defects:
        raise CkgamesError("solver self-check failed: %s" % "; ".join(defects))
    return result


def _sccs(nodes, edges):
    """Tarjan's algorithm, iterative."""
    index = {}
    low = {}
    on_stack = set()
    stack = []
    out = []
    counter = [0]
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(edges.get(root, ())))]
        index[root] = low[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter[0]
                    counter[0] += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(edges.get(w, ()))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                out.append(comp)
    return out


def _has_bad_cycle(pg, nodes, edges, side):
    """True iff the restricted graph has a cycle whose minimal priority has
    the other side's parity."""
    priorities = sorted({pg.priority[v] for v in nodes})
    for p in priorities:
        if p % 2 == side:
            continue
        sub = {v for v in nodes if pg.priority[v] >= p}
        sub_edges = {v: [w for w in edges.get(v, ()) if w in sub] for v in sub}
        for comp in _sccs(sorted(sub), sub_edges):
            comp_set = set(comp)
            cyclic = len(comp) > 1 or comp[0] in sub_edges.get(comp[0], ())
            if cyclic and any(pg.priority[v] == p for v in comp_set):
                return True
    return False


def verify_solution(pg, result):
    """Check both regions: closure under the opponent's moves, strategy
    well-formedness, and absence of losing strategy-consistent cycles."""
    defects = []
    w0, w1 = result.regions
    if w0 | w1 != set(pg.positions) or w0 & w1:
        defects.append("regions do not partition the positions")
    for side, region in ((COORDINATOR, w0), (NATURE, w1)):
        strategy = result.strategies[side]
        edges = {}
        for v in region:
            if pg.owner[v] == side:
                w = strategy.get(v)
                if w is None or w not in pg.succ[v]:
                    defects.append("no valid strategy choice at %r" % (v,))
                    continue
                if w not in region:
                    defects.append("strategy at %r leaves the region" % (v,))
                    continue
                edges[v] = [w]
            else:
                leaks = [w for w in pg.succ[v] if w not in region]
                if leaks:
                    defects.append("opponent can escape the region at %r" % (v,))
                edges[v] = [w for w in pg.succ[v] if w in region]
        if not defects and _has_bad_cycle(pg, region, edges, side):
            defects.append("losing cycle inside region of side %d" % side)
    return defects


# --- document format -------------------------------------------------------

_TOP_FIELDS = {"positions", "initial"}
_POS_FIELDS = {"id", "owner", "priority", "moves"}


def parse_parity_game(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise GameFormatError("not valid JSON: %s" % e)
    if not isinstance(doc, dict) or set(doc) - _TOP_FIELDS:
        raise GameFormatError("top level must be an object with positions and initial")
    if "positions" not in doc or not isinstance(doc["positions"], list) or not doc["positions"]:
        raise GameFormatError("positions must be a non-empty list")
    owner, priority, succ, ids = {}, {}, {}, []
    for p in doc["positions"]:
        if not isinstance(p, dict) or set(p) != _POS_FIELDS:
            raise GameFormatError("each position needs id, owner, priority, moves")
        v = p["id"]
        if not isinstance(v, str) or v in owner:
            raise GameFormatError("bad or duplicate position id %r" % (v,))
        if p["owner"] not in _OWNER_NAMES:
            raise GameFormatError("owner must be 'coordinator' or 'nature'")
        if not isinstance(p["priority"], int) or p["priority"] < 0:
            raise GameFormatError("priority of %r must be a non-negative integer" % v)
        if not isinstance(p["moves"], list) or not p["moves"]:
            raise GameFormatError("position %r needs at least one move" % v)
        ids.append(v)
        owner[v] = _OWNER_NAMES[p["owner"]]
        priority[v] = p["priority"]
        succ[v] = tuple(p["moves"])
    for v, ws in succ.items():
        for w in ws:
            if w not in owner:
                raise GameFormatError("move from %r to unknown position %r" % (v, w))
    initial = doc.get("initial")
    if initial is not None and initial not in owner:
        raise GameFormatError("initial must name a declared position")
    return ParityGame(positions=tuple(ids), owner=owner, priority=priority, succ=succ, initial=initial)


def serialize_parity_game(pg):
    doc = {
        "positions": [
            {
                "id": v,
                "owner": "coordinator" if pg.owner[v] == COORDINATOR else "nature",
                "priority": pg.priority[v],
                "moves": list(pg.succ[v]),
            }
            for v in pg.positions
        ],
    }
    if pg.initial is not None:
        doc["initial"] = pg.initial
    return json.dumps(doc, indent=2) + "\n"
