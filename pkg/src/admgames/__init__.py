"""Admissible-strategy analysis for multi-player quantitative games."""

from .admissibility import (
    AdmissibilityVerdict,
    check_strategy_admissible,
    construct_sco,
    construct_wco_candidate,
)
from .automata import (
    EdgeAutomaton,
    accepts_lasso,
    automaton_to_dot,
    parse_automaton,
    serialize_automaton,
)
from .games import (
    Game,
    GameFormatError,
    Lasso,
    PayoffKind,
    parse_game,
    payoff_of_lasso,
    serialize_game,
    validate,
)
from .outcomes import (
    LabeledGame,
    McVerdict,
    PayoffSpec,
    SynthResult,
    UnsupportedMeasure,
    eval_outcome_formula,
    eval_spec_on_lasso,
    label_edges,
    model_check_admissible,
    outcome_automaton,
    parse_spec,
    synthesize_assume_admissible,
    verify_strategy_wins,
)
from .transform import (
    MooreStrategy,
    ProductGame,
    TransformedGame,
    lift_lasso,
    make_prefix_independent,
    parse_strategy,
    product_with_strategy,
    serialize_strategy,
)
from .values import ValueTable, compute_value_table, value_at_history

__all__ = [
    "AdmissibilityVerdict",
    "EdgeAutomaton",
    "Game",
    "GameFormatError",
    "LabeledGame",
    "Lasso",
    "McVerdict",
    "MooreStrategy",
    "PayoffKind",
    "PayoffSpec",
    "ProductGame",
    "SynthResult",
    "TransformedGame",
    "UnsupportedMeasure",
    "ValueTable",
    "accepts_lasso",
    "automaton_to_dot",
    "check_strategy_admissible",
    "compute_value_table",
    "construct_sco",
    "construct_wco_candidate",
    "eval_outcome_formula",
    "eval_spec_on_lasso",
    "label_edges",
    "lift_lasso",
    "make_prefix_independent",
    "model_check_admissible",
    "outcome_automaton",
    "parse_automaton",
    "parse_game",
    "parse_spec",
    "parse_strategy",
    "payoff_of_lasso",
    "product_with_strategy",
    "serialize_automaton",
    "serialize_game",
    "serialize_strategy",
    "synthesize_assume_admissible",
    "validate",
    "value_at_history",
    "verify_strategy_wins",
]
