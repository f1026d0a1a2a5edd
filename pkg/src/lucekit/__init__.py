"""Tools for Luce-style random choice: axiom checking, decomposition,
synthesis, ranking simulation, and maximum-likelihood estimation.

The sampler and kernel names are loaded on first access so that purely
symbolic work (checking, decomposing, serializing) never imports the
numeric stack's JIT machinery.
"""

from .axioms import (
    WITNESS_CAP,
    Axiom,
    AxiomReport,
    Witness,
    check_all,
    check_choice_axiom,
    check_full_support,
    check_odds_independence,
    check_positivity,
    check_product_rule,
    check_renyi_conditioning,
    check_set_choice_axiom,
    check_set_intersection_rule,
    check_warp,
    replay_witness,
)
from .core import (
    DEFAULT_EPS,
    EXACT,
    FLOAT,
    MAX_ENUM_UNIVERSE,
    ChoiceCorrespondence,
    ChoiceFamily,
    ChoiceSet,
    ExtendedRatio,
    RandomChoiceRule,
    Universe,
    WeakOrder,
    correspondence_from_order,
    maximizers,
    odds,
    pairwise_odds,
    support,
    support_correspondence,
    utility_from_order,
)
from .decompose import LuceDecomposition, decompose, recover_v, revealed_order
from .documents import (
    DOCUMENT_VERSION,
    KINDS,
    dumps_document,
    from_document,
    loads_document,
    read_document,
    to_document,
    write_document,
)
from .errors import (
    ChoiceAxiomError,
    CountsOffSupportError,
    DegenerateOddsError,
    DocumentError,
    FamilySizeError,
    LucekitError,
    MissingPairsError,
    NotRationalError,
    ReconstructionMismatchError,
    SubsetViolationError,
    UnknownChoiceSetError,
)
from .estimate import (
    ChoiceDataset,
    FitResult,
    fit,
    fit_alpha_mle,
    log_likelihood_and_gradient,
    support_from_counts,
)
from .synthesize import (
    LimitReport,
    LuceWeights,
    general_luce_rule,
    general_luce_rule_from_utility,
    lambda_smoothed_rule,
    limit_check,
    luce_rule,
)

__version__ = "0.1.0"

_LAZY = {
    "GumbelLuceSampler": "rum",
    "IndependentRumSampler": "rum",
    "LexSampler": "rum",
    "EmpiricalRule": "rum",
    "empirical_rule": "rum",
    "lex_compose": "rum",
    "rank_rows": "_kernels",
    "top_counts": "_kernels",
    "backend_name": "_kernels",
    "HAVE_NUMBA": "_kernels",
    "USE_NUMBA": "_kernels",
}


def __getattr__(name: str):
    module = _LAZY.get(name)
    if module is None:
        raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
    import importlib

    return getattr(importlib.import_module(f".{module}", __name__), name)


def __dir__():
    return sorted(list(globals()) + list(_LAZY))
