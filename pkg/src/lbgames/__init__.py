"""Language-based games: belief-dependent utilities, model checking and solution concepts."""

from .checker import (
    ModelChecker,
    best_responses,
    counterfactual_holds,
    counterfactual_utility,
    expected_utility,
    extension,
    holds,
)
from .game import (
    EXAMPLE_GAMES,
    Game,
    GameForm,
    FiniteUtilitySpec,
    UtilityGuard,
    compile_classical,
    deep_surprise,
    indignant_altruism,
    library_book,
    pay_raise,
    prisoners_dilemma,
    roadtrip,
    surprise_proposal,
)
from .io import load_game, load_structure
from .kripke import (
    GammaStructure,
    State,
    build_characteristic_structure,
    enumerate_point_belief_structures,
    validate_structure,
)
from .lang import modal_depth, is_i_independent, parse_formula, render_formula
from .solve import (
    check_rationalizable_witness,
    find_nash,
    is_nash,
    rationalizable_set,
    search_rationalizable,
)

__version__ = "0.1.0"

__all__ = [
    "ModelChecker",
    "best_responses",
    "counterfactual_holds",
    "counterfactual_utility",
    "expected_utility",
    "extension",
    "holds",
    "EXAMPLE_GAMES",
    "Game",
    "GameForm",
    "FiniteUtilitySpec",
    "UtilityGuard",
    "compile_classical",
    "deep_surprise",
    "indignant_altruism",
    "library_book",
    "pay_raise",
    "prisoners_dilemma",
    "roadtrip",
    "surprise_proposal",
    "load_game",
    "load_structure",
    "GammaStructure",
    "State",
    "build_characteristic_structure",
    "enumerate_point_belief_structures",
    "validate_structure",
    "modal_depth",
    "is_i_independent",
    "parse_formula",
    "render_formula",
    "check_rationalizable_witness",
    "find_nash",
    "is_nash",
    "rationalizable_set",
    "search_rationalizable",
]
