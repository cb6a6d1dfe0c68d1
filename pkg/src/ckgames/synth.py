"""Distributed strategy synthesis and refutation.

A positional coordinator strategy of the abridged game turns into one
finite-state observation-driven machine per player: each machine tracks the
current commonly known root together with the player's indistinguishability
class inside the component tree of that root, outputs the action the
witness assignment prescribes to the class, and re-roots whenever the
component reaches a common-knowledge leaf.  Because equal observation
sequences land in equal classes, the machine needs nothing beyond its own
observations.

Conversely, a positional nature strategy of the abridged game spoils any
profile of finite-state machines: reading the joint strategy the profile
induces on the current tree gives an achievable outcome set, nature's
strategy picks the (state, priority) pair to steer to, and a witness
history realises it.  Iterating yields an eventually periodic losing play.
"""

import json
from dataclasses import dataclass

from .abridge import to_parity_game
from .epistemic import split_components
from .errors import GameFormatError, NotRcksError, NotWinningError
from .game import History, obs_projection
from .parity import COORDINATOR, NATURE, ParityGame, solve
from .unravel import assignment_profile


@dataclass(frozen=True)
class StrategyMachine:
    player: str
    states: tuple
    initial: str
    output: dict  # state -> action
    transitions: dict  # (state, observation) -> state


@dataclass
class UniformSolution:
    """Positional strategies of the abridged game, uniform in the priority
    component of coordinator positions."""

    coordinator_wins_initial: bool
    s_hat: dict  # root state -> chosen outcome set, on the coordinator's region
    r_hat: dict  # outcome set -> chosen (state, priority), on nature's region
    result: object


def solve_abridged(ab):
    """Solve the abridged game with a fresh relay position per root
    inserted between the coordinator positions (v, c) and their outcome
    moves, so that the extracted coordinator strategy cannot depend on c."""
    base = to_parity_game(ab)
    owner = dict(base.owner)
    priority = dict(base.priority)
    succ = {}
    ids = list(base.positions)
    by_relay = {}
    outcome_by_id = {}
    for pos in base.positions:
        if base.owner[pos] == COORDINATOR:
            root = pos.rsplit("#", 1)[0]
            succ[pos] = ("relay:%s" % root,)
        else:
            succ[pos] = base.succ[pos]
    for v in ab.roots:
        relay = "relay:%s" % v
        by_relay[relay] = v
        ids.append(relay)
        owner[relay] = COORDINATOR
        priority[relay] = ab.nature_priority
        moves = []
        for outcome in sorted(ab.outcomes[v], key=_outcome_pos):
            uid = _outcome_pos(outcome)
            outcome_by_id[uid] = outcome
            moves.append(uid)
        succ[relay] = tuple(moves)
    pg = ParityGame(
        positions=tuple(ids),
        owner=owner,
        priority=priority,
        succ=succ,
        initial=base.initial,
    )
    result = solve(pg)
    s_hat = {}
    for relay, v in by_relay.items():
        if relay in result.regions[COORDINATOR]:
            choice = result.strategies[COORDINATOR].get(relay)
            if choice is not None:
                s_hat[v] = outcome_by_id[choice]
    r_hat = {}
    for pos, choice in result.strategies[NATURE].items():
        if pos in outcome_by_id:
            state, prio = choice.rsplit("#", 1)
            r_hat[outcome_by_id[pos]] = (state, int(prio))
    return UniformSolution(
        coordinator_wins_initial=pg.initial in result.regions[COORDINATOR],
        s_hat=s_hat,
        r_hat=r_hat,
        result=result,
    )


def _outcome_pos(outcome):
    return "U{" + ",".join("%s:%d" % p for p in sorted(outcome)) + "}"


def _chosen_assignments(ab, root, outcome):
    """Follow the witness chain for an outcome set: per expanded tree
    node, the assignment index realising it."""
    data = ab.witnesses[root]
    memo = data["memo"]
    chosen = {}

    def walk(node_id, target):
        wit = memo[node_id].get(target)
        if wit is None:
            node = data["tree"].nodes[node_id]
            if node.is_cks and node.depth > 0:
                return
            raise NotWinningError(
                "outcome %r is not achievable from root %r" % (sorted(target), root)
            )
        a_idx, kids = wit
        chosen[node_id] = a_idx
        for child, child_outcome in kids:
            walk(child, child_outcome)

    walk(0, outcome)
    return chosen


def transfer_coordinator(g, ab, solution=None):
    """Turn a winning uniform coordinator strategy of the abridged game
    into one observation-driven machine per player."""
    if solution is None:
        solution = solve_abridged(ab)
    if not solution.coordinator_wins_initial:
        raise NotWinningError("the coordinator does not win the abridged game")
    s_hat = solution.s_hat

    chosen = {}  # root -> node id -> assignment index

    def need_root(v):
        if v in chosen:
            return
        if v not in s_hat:
            raise NotWinningError("no coordinator choice at reachable root %r" % (v,))
        chosen[v] = _chosen_assignments(ab, v, s_hat[v])

    machines = []
    for i, player in enumerate(g.players):
        omap = g.obs[player]
        need_root(g.initial)
        init_key = (g.initial, 0, (omap[g.initial],))
        states = {}
        order = []

        def intern(key):
            if key not in states:
                states[key] = "q%d" % len(order)
                order.append(key)
            return states[key]

        intern(init_key)
        output = {}
        transitions = {}
        k = 0
        while k < len(order):
            key = order[k]
            k += 1
            root, node_id, proj = key
            need_root(root)
            tree = ab.witnesses[root]["tree"]
            node = tree.nodes[node_id]
            a_idx = chosen[root][node_id]
            assignment = node.assignments[a_idx]
            action = assignment[i][proj]
            output[states[key]] = action
            members = [
                h for h in node.histories if obs_projection(g, h, player) == proj
            ]
            # successors of the class under the witness assignment, grouped
            # by the player's next observation
            by_obs = {}
            for h in members:
                prof = assignment_profile(g, assignment, h)
                for w in g.succ.get((h.last, prof), ()):
                    by_obs.setdefault(omap[w], []).append(h.extend(prof, w))
            for b, hs in sorted(by_obs.items()):
                child = _containing_child(tree, node, chosen[root][node_id], hs[0])
                if tree.nodes[child].is_cks:
                    u = tree.nodes[child].end_state
                    need_root(u)
                    nxt = (u, 0, (omap[u],))
                else:
                    nxt = (root, child, obs_projection(g, hs[0], player))
                transitions[(states[key], b)] = intern(nxt)
        machines.append(
            StrategyMachine(
                player=player,
                states=tuple(states[key] for key in order),
                initial="q0",
                output=output,
                transitions=transitions,
            )
        )
    return tuple(machines)


def _containing_child(tree, node, a_idx, history):
    for child in node.children[a_idx]:
        if history in tree.nodes[child].histories:
            return child
    raise NotWinningError("no child component contains %r" % (history,))


@dataclass(frozen=True)
class VerifyResult:
    winning: bool
    counterexample: History | None = None  # a lasso, see loop_start
    loop_start: int | None = None  # round index where the loop begins


def _machine_step(machine, state, observation):
    nxt = machine.transitions.get((state, observation))
    if nxt is None:
        raise GameFormatError(
            "machine of player %r has no transition from %r on observation %r"
            % (machine.player, state, observation)
        )
    return nxt


def verify(g, profile):
    """Model-check a machine profile against the parity objective: explore
    the closed product of game and machines and look for a reachable cycle
    whose minimal priority is odd.  Returns a losing lasso when one
    exists."""
    if len(profile) != len(g.players):
        raise GameFormatError("profile must contain one machine per player")
    init = (g.initial,) + tuple(m.initial for m in profile)
    pred = {init: None}
    queue = [init]
    edges = {}
    while queue:
        node = queue.pop(0)
        v = node[0]
        prof = tuple(m.output[q] for m, q in zip(profile, node[1:]))
        outs = []
        for w in g.succ.get((v, prof), ()):
            nxt = (w,) + tuple(
                _machine_step(m, q, g.obs[p][w])
                for m, q, p in zip(profile, node[1:], g.players)
            )
            outs.append((prof, nxt))
            if nxt not in pred:
                pred[nxt] = (node, (prof, w))
                queue.append(nxt)
        edges[node] = outs

    cycle = _odd_cycle(g, edges)
    if cycle is None:
        return VerifyResult(True)

    # assemble the lasso: shortest path to the cycle entry, then the cycle
    entry = cycle[0]
    back = []
    node = entry
    while pred[node] is not None:
        prev, step = pred[node]
        back.append(step)
        node = prev
    back.reverse()
    h = History(g.initial)
    for prof, w in back:
        h = h.extend(prof, w)
    loop_start = len(h)
    cur = entry
    for nxt in cycle[1:]:
        prof = next(p for p, n in edges[cur] if n == nxt)
        h = h.extend(prof, nxt[0])
        cur = nxt
    return VerifyResult(False, counterexample=h, loop_start=loop_start)


def _odd_cycle(g, edges):
    """A cycle of the closed product whose minimal game priority is odd,
    as a node sequence [entry, ..., entry]; None if all cycles are even."""
    from .parity import _sccs

    for p in sorted({g.priority[v] for v in {n[0] for n in edges}}):
        if p % 2 == 0:
            continue
        sub = {n for n in edges if g.priority[n[0]] >= p}
        sub_edges = {n: [m for _, m in edges[n] if m in sub] for n in sub}
        for comp in _sccs(sorted(sub), sub_edges):
            comp_set = set(comp)
            cyclic = len(comp) > 1 or comp[0] in sub_edges.get(comp[0], ())
            if not cyclic:
                continue
            starts = [n for n in comp_set if g.priority[n[0]] == p]
            if not starts:
                continue
            start = min(starts)
            # shortest cycle through start within the component
            prev = {start: None}
            frontier = [start]
            while frontier:
                new = []
                for n in frontier:
                    for m in sub_edges[n]:
                        if m == start:
                            path = []
                            cur = n
                            while cur is not None:
                                path.append(cur)
                                cur = prev[cur]
                            path.reverse()
                            return path + [start]
                        if m in comp_set and m not in prev:
                            prev[m] = n
                            new.append(m)
                frontier = new
    return None


@dataclass(frozen=True)
class SpoilerResult:
    play: History  # losing lasso against the profile
    loop_start: int  # round index where the loop begins
    gap_entries: tuple  # (round, root, priority) per common-knowledge round


def construct_spoiler(g, ab, profile, solution=None):
    """Play nature's winning abridged strategy against a machine profile:
    between common-knowledge rounds, read the joint strategy the machines
    induce on the current tree, let nature resolve the achievable outcome
    set, and extend the play along a witness history.  The closed system
    is finite, so a repeated (root, machine states) pair closes a losing
    lasso."""
    if solution is None:
        solution = solve_abridged(ab)
    if solution.coordinator_wins_initial:
        raise NotWinningError("nature does not win the abridged game")
    r_hat = solution.r_hat
    cap = len(g.states) ** 2 + 1

    play = History(g.initial)
    entries = []
    key = (g.initial, tuple(m.initial for m in profile))
    seen = {key: (0, len(entries))}
    while True:
        root, ms = key
        outcome, leaves = _induced_outcome(g, profile, root, ms, cap)
        if outcome not in r_hat:
            raise NotWinningError(
                "nature's strategy does not cover outcome %r" % (sorted(outcome),)
            )
        u, d = r_hat[outcome]
        witness, wit_ms = leaves[(u, d)]
        for prof, w in witness.steps:
            play = play.extend(prof, w)
        entries.append((len(play), u, d))
        key = (u, wit_ms)
        if key in seen:
            loop_round, loop_entry = seen[key]
            loop_prios = [p for _, _, p in entries[loop_entry:]]
            if min(loop_prios) % 2 == 0:
                raise NotWinningError("nature's strategy closed an even cycle")
            return SpoilerResult(
                play=play, loop_start=loop_round, gap_entries=tuple(entries)
            )
        seen[key] = (len(play), len(entries))


def _induced_outcome(g, profile, root, machine_states, cap):
    """Run the machines over the tree of a root: the achievable outcome
    set they induce, together with the lexicographically least witness
    history (and final machine states) per (state, priority) pair."""
    start = History(root)
    comp = [(start, machine_states)]
    running = {start: None}
    leaves = {}
    outcome = set()
    depth = 0
    while comp:
        depth += 1
        if depth > cap:
            raise NotRcksError(
                "ambiguity from root %r outlasts %d rounds" % (root, cap)
            )
        prolonged = {}
        for h, ms in comp:
            prof = tuple(m.output[q] for m, q in zip(profile, ms))
            for w in g.succ.get((h.last, prof), ()):
                nxt = tuple(
                    _machine_step(m, q, g.obs[p][w])
                    for m, q, p in zip(profile, ms, g.players)
                )
                h2 = h.extend(prof, w)
                prolonged[h2] = nxt
                prio = g.priority[w]
                running[h2] = prio if running[h] is None else min(running[h], prio)
        comp = []
        for part in split_components(g, prolonged):
            hs = sorted(part.histories, key=lambda x: (x.start, x.steps))
            if part.is_cks:
                u = hs[0].last
                d = running[hs[0]]
                outcome.add((u, d))
                if (u, d) not in leaves:
                    leaves[(u, d)] = (hs[0], prolonged[hs[0]])
            else:
                comp.extend((h, prolonged[h]) for h in hs)
    return frozenset(outcome), leaves


# --- strategy documents ----------------------------------------------------

_TOP = {"machines"}
_MACHINE = {"player", "states", "initial", "transitions"}
_STATE = {"id", "output"}
_TRANS = {"from", "obs", "to"}


def parse_profile(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise GameFormatError("not valid JSON: %s" % e)
    if not isinstance(doc, dict) or set(doc) != _TOP:
        raise GameFormatError("strategy document needs a machines list")
    machines = []
    for m in doc["machines"]:
        if not isinstance(m, dict) or set(m) != _MACHINE:
            raise GameFormatError("each machine needs player, states, initial, transitions")
        output = {}
        ids = []
        for s in m["states"]:
            if not isinstance(s, dict) or set(s) != _STATE:
                raise GameFormatError("each machine state needs id and output")
            if s["id"] in output:
                raise GameFormatError("duplicate machine state %r" % (s["id"],))
            ids.append(s["id"])
            output[s["id"]] = s["output"]
        if m["initial"] not in output:
            raise GameFormatError("initial must name a declared machine state")
        transitions = {}
        for t in m["transitions"]:
            if not isinstance(t, dict) or set(t) != _TRANS:
                raise GameFormatError("each transition needs from, obs, to")
            if t["from"] not in output or t["to"] not in output:
                raise GameFormatError("transition endpoint unknown")
            key = (t["from"], t["obs"])
            if key in transitions:
                raise GameFormatError("machine is not deterministic at %r" % (key,))
            transitions[key] = t["to"]
        machines.append(
            StrategyMachine(
                player=m["player"],
                states=tuple(ids),
                initial=m["initial"],
                output=output,
                transitions=transitions,
            )
        )
    return tuple(machines)


def serialize_profile(profile):
    doc = {
        "machines": [
            {
                "player": m.player,
                "states": [{"id": q, "output": m.output[q]} for q in m.states],
                "initial": m.initial,
                "transitions": [
                    {"from": q, "obs": b, "to": w}
                    for (q, b), w in sorted(m.transitions.items())
                ],
            }
            for m in profile
        ]
    }
    return json.dumps(doc, indent=2) + "\n"
