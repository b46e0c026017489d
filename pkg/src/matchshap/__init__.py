"""Shapley values of matching games on weighted graphs."""

from .exact import (
    InstanceTooLarge,
    MethodNotApplicable,
    RawShapleyVector,
    ShapleyVector,
    is_pivotal,
    is_zero_shapley,
    raw_shapley,
    shapley_auto,
    shapley_brute_force,
    shapley_by_components,
    shapley_from_pivotal_counts,
    shapley_permutation_oracle,
)
from .fpras import approx_all, approx_raw_shapley, approx_shapley, sample_count
from .graph import (
    Coalition,
    GraphParseError,
    WeightedGraph,
    complement,
    connected_components,
    format_graph,
    induced_subgraph,
    parse_graph,
)
from .kernels import BACKEND
from .matching import (
    Matching,
    coalition_value,
    find_augmenting_path,
    is_perfectly_matchable,
    max_weight_matching,
)
from .reduction import (
    count_matchable_subsets,
    pascal_matrix_determinant_check,
    recover_alpha_from_shapley,
    verify_reduction,
)
from .structured import (
    TypePartition,
    eta_path,
    find_modular_decomposition,
    shapley_by_player_types,
    shapley_cycle,
    shapley_degree_two,
    shapley_modular,
    shapley_path,
)

__version__ = "0.1.0"
