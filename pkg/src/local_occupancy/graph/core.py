"""Immutable simple graphs backed by integer adjacency bitsets."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, List, Sequence, Tuple

from local_occupancy.errors import GraphError


def iter_bits(mask: int) -> Iterator[int]:
    """Yield set bit positions of mask in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


@dataclass(frozen=True)
class VertexSubset:
    """Bitset of vertices of a host graph on n vertices."""

    n: int
    members: int = 0

    def __post_init__(self) -> None:
        if self.members < 0 or self.members >> self.n:
            raise GraphError(f"subset {bin(self.members)} not inside 0..{self.n - 1}")

    @classmethod
    def of(cls, n: int, vertices: Iterable[int]) -> "VertexSubset":
        vertices = list(vertices)
        for v in vertices:
            if not 0 <= v < n:
                raise GraphError(f"vertex {v} out of range 0..{n - 1}")
        return cls(n, mask_of(vertices))

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.members)

    def __len__(self) -> int:
        return self.members.bit_count()

    def __contains__(self, v: object) -> bool:
        return isinstance(v, int) and 0 <= v < self.n and bool(self.members >> v & 1)

    def to_list(self) -> List[int]:
        return list(iter_bits(self.members))


@dataclass(frozen=True)
class Graph:
    """
    Simple undirected graph on vertices 0..n-1.

    adjacency[v] is the neighbour bitset of v; symmetry and absence of
    loops are checked on construction.
    """

    n: int
    adjacency: Tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 0 or len(self.adjacency) != self.n:
            raise GraphError("adjacency length must equal n")
        full = (1 << self.n) - 1
        for v, nb in enumerate(self.adjacency):
            if nb & ~full:
                raise GraphError(f"vertex {v} has a neighbour outside 0..{self.n - 1}")
            if nb >> v & 1:
                raise GraphError(f"self-loop at vertex {v}")
            for w in iter_bits(nb):
                if not self.adjacency[w] >> v & 1:
                    raise GraphError(f"edge {v}-{w} is not symmetric")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Tuple[int, int]]) -> "Graph":
        adj = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range 0..{n - 1}")
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, (0,) * n)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def degree(self, v: int) -> int:
        return self.adjacency[v].bit_count()

    def degrees(self) -> List[int]:
        return [nb.bit_count() for nb in self.adjacency]

    @property
    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    @property
    def edge_count(self) -> int:
        return sum(self.degrees()) // 2

    def neighbours(self, v: int) -> List[int]:
        return list(iter_bits(self.adjacency[v]))

    def closed_neighbourhood(self, v: int) -> int:
        return self.adjacency[v] | (1 << v)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adjacency[u] >> v & 1)

    def edges(self) -> List[Tuple[int, int]]:
        """Edges (u, v) with u < v in lexicographic order."""
        return [(u, v) for u in range(self.n) for v in iter_bits(self.adjacency[u] >> u << u)]

    def edges_within(self, mask: int) -> int:
        """Number of edges with both ends in mask."""
        return sum((self.adjacency[v] & mask).bit_count() for v in iter_bits(mask)) // 2

    def is_independent(self, mask: int) -> bool:
        return all(not (self.adjacency[v] & mask) for v in iter_bits(mask))

    def check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise GraphError(f"vertex {v} out of range 0..{self.n - 1}")

    def complement(self) -> "Graph":
        full = self.full_mask
        return Graph(self.n, tuple(full & ~nb & ~(1 << v) for v, nb in enumerate(self.adjacency)))

    def induced(self, mask: int) -> "Graph":
        """Induced subgraph on mask, relabelled 0..k-1 in increasing order."""
        if mask < 0 or mask & ~self.full_mask:
            raise GraphError("subset contains vertices outside the graph")
        order = list(iter_bits(mask))
        index = {v: i for i, v in enumerate(order)}
        adj = []
        for v in order:
            adj.append(mask_of(index[w] for w in iter_bits(self.adjacency[v] & mask)))
        return Graph(len(order), tuple(adj))

    def remove_vertices(self, mask: int) -> "Graph":
        return self.induced(self.full_mask & ~mask)


def induced_subgraph(g: Graph, s: VertexSubset | Sequence[int]) -> Graph:
    if isinstance(s, VertexSubset):
        if s.n != g.n:
            raise GraphError(f"subset is over {s.n} vertices, graph has {g.n}")
        return g.induced(s.members)
    return g.induced(VertexSubset.of(g.n, s).members)


def neighbourhood_graph(g: Graph, u: int) -> Graph:
    g.check_vertex(u)
    return g.induced(g.adjacency[u])


def neighbourhood_edge_count(g: Graph, u: int) -> int:
    g.check_vertex(u)
    return g.edges_within(g.adjacency[u])
