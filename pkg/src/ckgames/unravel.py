"""Unravelling a game up to common knowledge.

Starting from a commonly known root state, histories are grouped into
epistemic components and prolonged round by round under every admissible
action assignment (one action per player per indistinguishability class).
Components whose histories all end at the same state are common-knowledge
leaves; the others are ambiguous and get expanded further.  Under recurring
common knowledge of the state the depth of ambiguity is bounded by the
square of the number of states, which makes every tree finite.

Each leaf carries the end state together with the most significant (that
is, minimal) priority seen since the root, so a joint strategy on a tree
induces a set of (state, priority) outcomes.  The achievable outcome sets
are computed bottom-up, remembering one witness assignment per set.
"""

import itertools
from dataclasses import dataclass, field

from .epistemic import DEFAULT_BUDGET, split_components
from .errors import BudgetExceededError, NotRcksError
from .game import History, obs_projection


@dataclass
class TreeNode:
    id: int
    parent: int | None
    depth: int
    histories: frozenset
    d: int | None  # minimal priority over rounds 1..depth, None at the root
    is_cks: bool
    end_state: str | None  # set for leaves
    assignments: tuple = ()  # admissible assignments, for expanded nodes
    children: dict = field(default_factory=dict)  # assignment index -> child ids


@dataclass
class ComponentTree:
    root: str
    nodes: list

    def leaves(self):
        return [n for n in self.nodes if n.is_cks and n.depth > 0]

    def ambiguous_depth(self):
        depths = [n.depth for n in self.nodes if not n.is_cks]
        return max(depths) if depths else 0

    @property
    def depth(self):
        return max(n.depth for n in self.nodes)


def _hist_key(h):
    return (h.start, h.steps)


def _classes(g, player, histories):
    """The player's indistinguishability classes of a component, keyed by
    projection, in deterministic order."""
    groups = {}
    for h in sorted(histories, key=_hist_key):
        groups.setdefault(obs_projection(g, h, player), []).append(h)
    return groups


def _assignments(g, histories):
    """Admissible assignments: every player picks one action per class.
    Returned as tuples of per-player {projection: action} maps."""
    per_player = []
    for player in g.players:
        keys = sorted(_classes(g, player, histories))
        choices = [
            [(key, a) for a in g.actions[player]] for key in keys
        ]
        per_player.append([dict(c) for c in itertools.product(*choices)])
    return [tuple(combo) for combo in itertools.product(*per_player)]


def assignment_profile(g, assignment, h):
    """The action profile an assignment prescribes at a history."""
    return tuple(
        assignment[i][obs_projection(g, h, player)]
        for i, player in enumerate(g.players)
    )


def build_tree(g, root, cache=None, budget=None):
    """Unravel the game from a commonly known root state until every
    branch reaches a common-knowledge component.  Raises NotRcksError when
    ambiguity outlasts the gap bound guaranteed by recurring common
    knowledge of the state (the number of fork automaton states), and
    BudgetExceededError when the unravelling grows past the work budget
    before reaching that depth."""
    if cache is not None and root in cache:
        return cache[root]
    m, n = len(g.states), len(g.players)
    cap = m + n * m * (m - 1) + 1
    limit = budget if budget is not None else DEFAULT_BUDGET
    work = 0

    nodes = [
        TreeNode(
            id=0,
            parent=None,
            depth=0,
            histories=frozenset([History(root)]),
            d=None,
            is_cks=True,
            end_state=root,
        )
    ]
    queue = [0]
    while queue:
        node = nodes[queue.pop(0)]
        if node.depth > cap:
            raise NotRcksError(
                "ambiguity from root %r outlasts %d rounds; the game does "
                "not admit recurring common knowledge of the state" % (root, cap)
            )
        hists = sorted(node.histories, key=_hist_key)
        node.assignments = tuple(_assignments(g, hists))
        for a_idx, assignment in enumerate(node.assignments):
            prolonged = []
            for h in hists:
                prof = assignment_profile(g, assignment, h)
                for w in g.succ.get((h.last, prof), ()):
                    prolonged.append(h.extend(prof, w))
            work += len(prolonged)
            if work > limit:
                raise BudgetExceededError(
                    "unravelling from root %r exceeds the budget" % (root,),
                    explored=work,
                )
            comps = split_components(g, dict.fromkeys(prolonged))
            comps.sort(key=lambda c: min(map(_hist_key, c.histories)))
            kids = []
            for comp in comps:
                ends = comp.end_states
                prio = min(g.priority[e] for e in ends)
                d = prio if node.d is None else min(node.d, prio)
                child = TreeNode(
                    id=len(nodes),
                    parent=node.id,
                    depth=node.depth + 1,
                    histories=comp.histories,
                    d=d,
                    is_cks=comp.is_cks,
                    end_state=next(iter(ends)) if comp.is_cks else None,
                )
                nodes.append(child)
                kids.append(child.id)
                if not comp.is_cks:
                    queue.append(child.id)
            node.children[a_idx] = tuple(kids)
    tree = ComponentTree(root=root, nodes=nodes)
    if cache is not None:
        cache[root] = tree
    return tree


def _outcome_key(outcome):
    return tuple(sorted(outcome))


def achievable_outcomes(g, root, cache=None):
    """The outcome sets the players can jointly enforce from a root: for
    each joint strategy on the tree, the set of (end state, minimal
    priority) pairs over its leaves.  Returns (outcomes, witnesses) where
    witnesses maps each outcome set to (node id, assignment index,
    ((child id, child outcome), ...)) chains for strategy extraction."""
    tree = build_tree(g, root, cache)
    witnesses = {}
    memo = {}

    def solve(node_id):
        if node_id in memo:
            return memo[node_id]
        node = tree.nodes[node_id]
        if node.is_cks and node.depth > 0:
            result = {frozenset([(node.end_state, node.d)]): None}
        else:
            result = {}
            for a_idx in range(len(node.assignments)):
                kid_ids = node.children[a_idx]
                kid_outcomes = [sorted(solve(k), key=_outcome_key) for k in kid_ids]
                for combo in itertools.product(*kid_outcomes):
                    merged = frozenset().union(*combo) if combo else frozenset()
                    if merged and merged not in result:
                        result[merged] = (a_idx, tuple(zip(kid_ids, combo)))
        memo[node_id] = result
        return result

    top = solve(0)
    outcomes = frozenset(top)
    witnesses = {"tree": tree, "memo": memo}
    return outcomes, witnesses


def reachable_roots(g, cache=None):
    """The closure of the initial state under common-knowledge leaves:
    every state that can become a commonly known root of a fresh tree."""
    cache = cache if cache is not None else {}
    roots = [g.initial]
    seen = {g.initial}
    k = 0
    while k < len(roots):
        tree = build_tree(g, roots[k], cache)
        k += 1
        for leaf in tree.leaves():
            if leaf.end_state not in seen:
                seen.add(leaf.end_state)
                roots.append(leaf.end_state)
    return roots, cache


def gap_size(g, cache=None):
    """The largest knowledge gap over all plays: the distance between
    consecutive common-knowledge rounds when ambiguity occurs in between,
    and 0 for games where the state is always common knowledge.  In tree
    terms this is the deepest ambiguous node depth plus one, maximised
    over all reachable roots."""
    from .rcks import check_rcks

    if not check_rcks(g).holds:
        raise NotRcksError(
            "the game does not admit recurring common knowledge of the "
            "state, so its gaps are unbounded"
        )
    roots, cache = reachable_roots(g, cache)
    worst = 0
    for v in roots:
        depth = build_tree(g, v, cache).ambiguous_depth()
        if depth:
            worst = max(worst, depth + 1)
    return worst
