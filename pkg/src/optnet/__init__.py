"""Minimal spanning trees, Euclidean Steiner minimal trees and minimal fillings."""

from .fillings import (
    eremin_value,
    four_point_mf,
    kuratowski_network,
    mf,
    mpf,
    reconstruct_additive_tree,
)
from .graphs import (
    GraphError,
    TreeTopology,
    WeightedGraph,
    WeightedTree,
    enumerate_binary_topologies,
    kruskal_mst,
    spanning_tree_count,
)
from .metric import (
    FiniteMetricSpace,
    MetricError,
    check_four_point,
    euclidean_space,
    kuratowski_embed,
    min_half_perimeter,
    validate_metric,
)
from .plane import GeometryError, PlaneNetwork, delaunay_graph, euclidean_mst, twisting_number
from .ratios import ratio_report, ratio_search
from .steiner import GuardError, melzak_solve, relax_topology, smt, torricelli_point

__version__ = "0.1.0"

__all__ = [
    "FiniteMetricSpace",
    "GeometryError",
    "GraphError",
    "GuardError",
    "MetricError",
    "PlaneNetwork",
    "TreeTopology",
    "WeightedGraph",
    "WeightedTree",
    "check_four_point",
    "delaunay_graph",
    "enumerate_binary_topologies",
    "eremin_value",
    "euclidean_mst",
    "euclidean_space",
    "four_point_mf",
    "kruskal_mst",
    "kuratowski_embed",
    "kuratowski_network",
    "melzak_solve",
    "mf",
    "min_half_perimeter",
    "mpf",
    "ratio_report",
    "ratio_search",
    "reconstruct_additive_tree",
    "relax_topology",
    "smt",
    "spanning_tree_count",
    "torricelli_point",
    "twisting_number",
    "validate_metric",
]
