from dropgnn.graphs.core import (
    Graph,
    Neighborhood,
    d_hop_neighborhood,
    disjoint_union,
    induced_neighborhood,
    relabel,
)
from dropgnn.graphs.io import graph_from_json, graph_to_json, load_graph, save_graph
from dropgnn.graphs.unfolding import NeighborhoodSignature, unfolding_signature
from dropgnn.graphs.wl import Coloring, isomorphic_small, wl_distinguishable, wl_refine

__all__ = [
    "Coloring",
    "Graph",
    "Neighborhood",
    "NeighborhoodSignature",
    "d_hop_neighborhood",
    "disjoint_union",
    "graph_from_json",
    "graph_to_json",
    "induced_neighborhood",
    "isomorphic_small",
    "load_graph",
    "relabel",
    "save_graph",
    "unfolding_signature",
    "wl_distinguishable",
    "wl_refine",
]
