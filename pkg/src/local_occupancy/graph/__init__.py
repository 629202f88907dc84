from .core import (
    Graph,
    VertexSubset,
    induced_subgraph,
    iter_bits,
    mask_of,
    neighbourhood_edge_count,
    neighbourhood_graph,
)
from .generators import (
    blow_up,
    complete,
    complete_bipartite,
    cycle,
    empty,
    erdos_renyi,
    generate,
    kneser,
    path,
    petersen,
    random_regular,
    random_triangle_free,
)
from .io import dump_graph, load_graph
from .parameters import (
    clique_number,
    degeneracy,
    hall_ratio,
    independence_number,
    local_path_count,
    max_average_degree,
)

__all__ = [
    "Graph",
    "VertexSubset",
    "blow_up",
    "clique_number",
    "complete",
    "complete_bipartite",
    "cycle",
    "degeneracy",
    "dump_graph",
    "empty",
    "erdos_renyi",
    "generate",
    "hall_ratio",
    "independence_number",
    "induced_subgraph",
    "iter_bits",
    "kneser",
    "load_graph",
    "local_path_count",
    "mask_of",
    "max_average_degree",
    "neighbourhood_edge_count",
    "neighbourhood_graph",
    "path",
    "petersen",
    "random_regular",
    "random_triangle_free",
]
