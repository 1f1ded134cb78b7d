"""General position sets and numbers of graphs, with exact search and
tree-product constructions."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .graph import (
    DistanceMatrix,
    Graph,
    VertexSet,
    all_pairs_distances,
    build_graph,
    collinear_triples,
    cycle_graph,
    format_edge_list,
    interval,
    is_collinear_triple,
    is_connected,
    parse_edge_list,
    path_graph,
    read_edge_list,
    star_graph,
)
from .trees import (
    TreeProfile,
    gp_number_tree,
    is_tree,
    nonleaf_in_some_gp_set,
    tree_gp_set,
    tree_profile,
    two_components_one_path,
)
from .solver import (
    GpInstance,
    GpResult,
    gp_number,
    gp_number_exact,
    greedy_gp_lower_bound,
    is_maximal_gp,
    make_instance,
    verify_general_position,
)
from .product import (
    Layer,
    ProductGraph,
    cartesian_product,
    construct_maximal_gp,
    layer,
    product_distance,
    product_instance,
    product_interval,
    theorem_prediction,
)
from .enumeration import (
    SweepReport,
    TreeCatalog,
    canonical_tree_key,
    enumerate_free_trees,
    sweep_verify_membership,
    sweep_verify_theorem,
)
