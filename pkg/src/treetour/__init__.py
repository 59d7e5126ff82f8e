"""Embedding oriented trees into tournaments.

A tournament is an orientation of a complete graph; an oriented tree is an
orientation of a tree.  This package provides:

- bit-level tournament and oriented-tree types with exact text formats
  (:mod:`treetour.graphs`, :mod:`treetour.formats`);
- edge-weight and core-tree analysis of oriented trees
  (:mod:`treetour.weights`);
- base embedding procedures: complete backtracking search, Redei
  (Hamiltonian directed) paths, median orders, outbranching embedding and
  a greedy embedder (:mod:`treetour.search`);
- structured embedding strategies built from finite embedding lemmas:
  round-the-back, one-by-one extension, component-by-component extension,
  almost-regular extraction, a star-shaped-tree strategy, and a portfolio
  driver (:mod:`treetour.strategies`);
- robust outexpander verdicts, non-expander splits, a tournament
  decomposition into expander/small pieces, reduced digraphs, and a
  regularity falsifier (:mod:`treetour.expansion`);
- deterministic seeded generators, exhaustive enumeration up to
  isomorphism, and hypothesis-satisfying instance builders with
  per-hypothesis mutators (:mod:`treetour.generate`,
  :mod:`treetour.instances`);
- a batch verification harness, property suites with counterexample
  shrinking, and a CLI (:mod:`treetour.reports`, :mod:`treetour.props`,
  :mod:`treetour.cli`).

All randomness flows through an explicit, documented, bit-exact PRNG; equal
seeds give equal outputs on every platform.
"""

__version__ = "0.1.0"

from .graphs import (
    DirectedTree,
    GraphDefectError,
    HypothesisViolation,
    InfeasiblePinning,
    ParseError,
    PartialMapError,
    Tournament,
    as_fraction,
    canonical_form,
    degrees,
    density,
    directed_edge_count,
    induced_subtournament,
    is_valid_embedding,
    restricted_neighbourhood,
)
from .formats import parse_tournament, parse_tree, write_tournament, write_tree
from .weights import (
    CoreTree,
    WeightProfile,
    components_against,
    core_tree,
    edge_weight,
    leading_paths,
    weight_profile,
)
from .search import (
    EmbedOutcome,
    SearchConstraints,
    embed_outbranching,
    exhaustive_embed,
    forward_arc_count,
    greedy_embed,
    median_order,
    redei_path,
)
from .generate import (
    enumerate_oriented_trees,
    enumerate_tournaments,
    inward_star,
    near_extremal_pair,
    random_oriented_tree,
    random_tournament,
    rotational_regular_tournament,
    stream,
    transitive_tournament,
)
from .strategies import (
    OneByOneInstance,
    PortfolioConfig,
    RoundTheBackInstance,
    TwoSetInstance,
    component_by_component,
    dual_component_by_component,
    embed_star_shaped,
    extend_one_by_one,
    portfolio_embed,
    round_the_back,
)
from .instances import (
    break_one_by_one,
    break_round_the_back,
    break_two_set,
    random_one_by_one_instance,
    random_round_the_back_instance,
    random_two_set_instance,
)
from .expansion import (
    ExpanderVerdict,
    SplitResult,
    SplitSearchExhausted,
    is_robust_outexpander,
    make_expander_checker,
    non_expander_split,
    regularity_falsifier,
    robust_out_neighbourhood,
    tournament_split,
)
from .reports import (
    CampaignSummary,
    InstanceReport,
    run_campaign,
    verify_sharpness,
    verify_sumner,
)
from .props import (
    PropertyConfig,
    available_suites,
    run_property_suites,
    shrink_tournament,
    shrink_tree,
)

__all__ = [
    "__version__",
    # graphs
    "DirectedTree",
    "GraphDefectError",
    "HypothesisViolation",
    "InfeasiblePinning",
    "ParseError",
    "PartialMapError",
    "Tournament",
    "as_fraction",
    "canonical_form",
    "degrees",
    "density",
    "directed_edge_count",
    "induced_subtournament",
    "is_valid_embedding",
    "restricted_neighbourhood",
    # formats
    "parse_tournament",
    "parse_tree",
    "write_tournament",
    "write_tree",
    # weights
    "CoreTree",
    "WeightProfile",
    "components_against",
    "core_tree",
    "edge_weight",
    "leading_paths",
    "weight_profile",
    # search
    "EmbedOutcome",
    "SearchConstraints",
    "embed_outbranching",
    "exhaustive_embed",
    "forward_arc_count",
    "greedy_embed",
    "median_order",
    "redei_path",
    # generate
    "enumerate_oriented_trees",
    "enumerate_tournaments",
    "inward_star",
    "near_extremal_pair",
    "random_oriented_tree",
    "random_tournament",
    "rotational_regular_tournament",
    "stream",
    "transitive_tournament",
    # strategies
    "OneByOneInstance",
    "PortfolioConfig",
    "RoundTheBackInstance",
    "TwoSetInstance",
    "component_by_component",
    "dual_component_by_component",
    "embed_star_shaped",
    "extend_one_by_one",
    "portfolio_embed",
    "round_the_back",
    # instances
    "break_one_by_one",
    "break_round_the_back",
    "break_two_set",
    "random_one_by_one_instance",
    "random_round_the_back_instance",
    "random_two_set_instance",
    # expansion
    "ExpanderVerdict",
    "SplitResult",
    "SplitSearchExhausted",
    "is_robust_outexpander",
    "make_expander_checker",
    "non_expander_split",
    "regularity_falsifier",
    "robust_out_neighbourhood",
    "tournament_split",
    # reports
    "CampaignSummary",
    "InstanceReport",
    "run_campaign",
    "verify_sharpness",
    "verify_sumner",
    # props
    "PropertyConfig",
    "available_suites",
    "run_property_suites",
    "shrink_tournament",
    "shrink_tree",
]
