"""Games with imperfect information and recurring common knowledge of the
state: knowledge queries, the decision procedure, the abridged parity game,
distributed strategy synthesis, and refutation."""

from .abridge import (
    AbridgedGame,
    ParityAutomaton,
    Summary,
    build_abridged,
    parse_dpa,
    product_with_dpa,
    serialize_dpa,
    summarize,
    to_parity_game,
)
from .epistemic import (
    EpistemicComponent,
    ck_state_at,
    component_of,
    mk_order_at,
    mk_state_at,
    possibility_set,
    track_components,
)
from .errors import (
    BudgetExceededError,
    CkgamesError,
    GameFormatError,
    NotRcksError,
    NotWinningError,
)
from .game import (
    GameGraph,
    History,
    format_history,
    is_valid_history,
    obs_projection,
    parse_game,
    parse_history,
    serialize_game,
    validate,
)
from .parity import ParityGame, parse_parity_game, serialize_parity_game, solve
from .rcks import ForkAutomaton, Lasso, RcksVerdict, build_fork_automaton, check_rcks
from .synth import (
    StrategyMachine,
    construct_spoiler,
    parse_profile,
    serialize_profile,
    solve_abridged,
    transfer_coordinator,
    verify,
)
from .unravel import (
    ComponentTree,
    achievable_outcomes,
    build_tree,
    gap_size,
    reachable_roots,
)

__all__ = [name for name in dir() if not name.startswith("_")]
