"""Covers (correspondence assignments), partial colourings and their serialisation."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError
from pydantic.alias_generators import to_camel

from local_occupancy.errors import CoverError
from local_occupancy.graph.core import Graph, iter_bits, mask_of
from local_occupancy.hardcore import as_rng


@dataclass(frozen=True)
class Cover:
    """
    Cover (L, H) of a base graph G.

    Node x of the conflict graph H belongs to block blocks[owner[x]]; blocks are
    bitsets over V(H). labels carry the colour of each node for list covers.
    """

    base: Graph
    conflict: Graph
    blocks: Tuple[int, ...]
    owner: Tuple[int, ...]
    from_lists: bool = False
    labels: Optional[Tuple[int, ...]] = None

    def __post_init__(self) -> None:
        audit(self)

    @property
    def size(self) -> int:
        return self.conflict.n

    def block(self, u: int) -> List[int]:
        return list(iter_bits(self.blocks[u]))

    def cross(self, x: int) -> int:
        """Neighbours of x in H outside its own block (the graph H*)."""
        return self.conflict.adjacency[x] & ~self.blocks[self.owner[x]]

    def blocks_of(self, vertices: int) -> int:
        mask = 0
        for u in iter_bits(vertices):
            mask |= self.blocks[u]
        return mask

    def label(self, x: int) -> int:
        return self.labels[x] if self.labels is not None else x


def audit(cover: Cover) -> None:
    """Raise CoverError unless (L, H) is a cover of the base graph."""
    g, h = cover.base, cover.conflict
    if len(cover.blocks) != g.n:
        raise CoverError(f"{len(cover.blocks)} blocks for {g.n} base vertices")
    if len(cover.owner) != h.n:
        raise CoverError("owner must name a base vertex for every conflict node")
    if cover.labels is not None and len(cover.labels) != h.n:
        raise CoverError("labels must have one entry per conflict node")
    seen = 0
    for u, block in enumerate(cover.blocks):
        if not block:
            raise CoverError(f"empty list at vertex {u}")
        if block & seen:
            raise CoverError(f"block of vertex {u} overlaps another block")
        seen |= block
        for x in iter_bits(block):
            if cover.owner[x] != u:
                raise CoverError(f"node {x} is in block {u} but owned by {cover.owner[x]}")
            if (h.adjacency[x] | (1 << x)) & block != block:
                raise CoverError(f"block of vertex {u} is not a clique")
    if seen != h.full_mask:
        raise CoverError("blocks do not cover every conflict node")
    for x in range(h.n):
        u = cover.owner[x]
        for y in iter_bits(cover.cross(x)):
            v = cover.owner[y]
            if not g.has_edge(u, v):
                raise CoverError(f"conflict edge {x}-{y} joins non-adjacent vertices {u}, {v}")
            if (cover.conflict.adjacency[x] & cover.blocks[v]).bit_count() > 1:
                raise CoverError(f"conflict edges between blocks {u} and {v} are not a matching")


def _build(g: Graph, sizes: Sequence[int], edges: Iterable[Tuple[int, int]],
           from_lists: bool, labels: Optional[Sequence[int]] = None) -> Cover:
    owner: List[int] = []
    blocks: List[int] = []
    for u, size in enumerate(sizes):
        start = len(owner)
        owner.extend([u] * size)
        blocks.append(((1 << size) - 1) << start)
    adj = [0] * len(owner)
    for block in blocks:
        for x in iter_bits(block):
            adj[x] |= block & ~(1 << x)
    for x, y in edges:
        adj[x] |= 1 << y
        adj[y] |= 1 << x
    return Cover(g, Graph(len(owner), tuple(adj)), tuple(blocks), tuple(owner), from_lists,
                 tuple(labels) if labels is not None else None)


def cover_from_lists(g: Graph, lists: Sequence[Iterable[int]]) -> Cover:
    """The cover of a list assignment: one node per (vertex, colour), equal colours conflict."""
    if len(lists) != g.n:
        raise CoverError(f"{len(lists)} lists for {g.n} vertices")
    colours = [sorted(set(lst)) for lst in lists]
    for u, lst in enumerate(colours):
        if not lst:
            raise CoverError(f"empty list at vertex {u}")
    index: List[Dict[int, int]] = []
    labels: List[int] = []
    for lst in colours:
        index.append({c: len(labels) + i for i, c in enumerate(lst)})
        labels.extend(lst)
    edges = [
        (index[u][c], index[v][c])
        for u, v in g.edges()
        for c in colours[u]
        if c in index[v]
    ]
    return _build(g, [len(lst) for lst in colours], edges, True, labels)


def random_cover(g: Graph, k: int, seed: Optional[int] = None, density: float = 1.0) -> Cover:
    """
    k-fold cover with an independent uniform matching between the blocks of
    every edge; each matching edge is kept with probability density.
    """
    if k < 1:
        raise CoverError("k must be at least 1")
    if not 0 <= density <= 1:
        raise CoverError("density must lie in [0, 1]")
    rng = as_rng(seed)
    edges = []
    for u, v in g.edges():
        perm = rng.permutation(k)
        keep = rng.random(k) < density
        edges.extend((u * k + i, v * k + int(perm[i])) for i in range(k) if keep[i])
    return _build(g, [k] * g.n, edges, False)


def verify_colouring(cover: Cover, chosen: int | Iterable[int]) -> bool:
    """True iff chosen is independent in H and meets every block exactly once."""
    mask = chosen if isinstance(chosen, int) else mask_of(chosen)
    if mask >> cover.size:
        return False
    if any((mask & block).bit_count() != 1 for block in cover.blocks):
        return False
    return cover.conflict.is_independent(mask)


@dataclass(frozen=True)
class PartialColouring:
    """An independent set I of H read as a partial colouring of the base graph."""

    cover: Cover
    chosen: int

    def __post_init__(self) -> None:
        if not self.cover.conflict.is_independent(self.chosen):
            raise CoverError("chosen nodes are not independent in H")

    @property
    def domain(self) -> int:
        return mask_of(u for u, block in enumerate(self.cover.blocks) if block & self.chosen)

    @property
    def uncoloured(self) -> List[int]:
        return list(iter_bits(self.cover.base.full_mask & ~self.domain))

    @property
    def residual(self) -> int:
        """V(H) - N_H[I]."""
        covered = self.chosen
        for x in iter_bits(self.chosen):
            covered |= self.cover.conflict.adjacency[x]
        return self.cover.conflict.full_mask & ~covered

    def residual_list(self, u: int) -> int:
        return self.cover.blocks[u] & self.residual

    def residual_lists(self) -> Dict[int, List[int]]:
        rest = self.residual
        return {u: list(iter_bits(self.cover.blocks[u] & rest)) for u in self.uncoloured}

    def residual_degree(self, x: int) -> int:
        """deg* of x in the residual cover."""
        return (self.cover.cross(x) & self.residual).bit_count()

    def colour_of(self, u: int) -> Optional[int]:
        hit = self.cover.blocks[u] & self.chosen
        return hit.bit_length() - 1 if hit else None


# -- serialisation ------------------------------------------------------------


class CoverDocument(BaseModel):
    model_config = ConfigDict(alias_generator=to_camel, populate_by_name=True)

    n: int = Field(..., ge=0)
    blocks: List[List[int]]
    conflict_edges: List[Tuple[int, int]]
    from_lists: bool = False
    labels: Optional[List[int]] = None


def cover_to_document(cover: Cover) -> CoverDocument:
    h = cover.conflict
    return CoverDocument(
        n=cover.base.n,
        blocks=[cover.block(u) for u in range(cover.base.n)],
        conflict_edges=[(x, y) for x, y in h.edges() if cover.owner[x] != cover.owner[y]],
        from_lists=cover.from_lists,
        labels=list(cover.labels) if cover.labels is not None else None,
    )


def cover_to_json(cover: Cover) -> str:
    return cover_to_document(cover).model_dump_json(by_alias=True)


def cover_from_document(doc: CoverDocument, g: Graph) -> Cover:
    if doc.n != g.n or len(doc.blocks) != g.n:
        raise CoverError(f"cover is for {doc.n} vertices, graph has {g.n}")
    size = sum(len(b) for b in doc.blocks)
    owner = [-1] * size
    blocks = []
    for u, block in enumerate(doc.blocks):
        for x in block:
            if not 0 <= x < size or owner[x] != -1:
                raise CoverError(f"node {x} of block {u} is out of range or repeated")
            owner[x] = u
        blocks.append(mask_of(block))
    adj = [0] * size
    for block in blocks:
        for x in iter_bits(block):
            adj[x] |= block & ~(1 << x)
    for x, y in doc.conflict_edges:
        if not (0 <= x < size and 0 <= y < size) or x == y:
            raise CoverError(f"bad conflict edge ({x}, {y})")
        adj[x] |= 1 << y
        adj[y] |= 1 << x
    labels = tuple(doc.labels) if doc.labels is not None else None
    return Cover(g, Graph(size, tuple(adj)), tuple(blocks), tuple(owner), doc.from_lists, labels)


def cover_from_json(text: str | bytes, g: Graph) -> Cover:
    try:
        doc = CoverDocument.model_validate_json(text)
    except ValidationError as e:
        raise CoverError(f"invalid cover document: {e.errors()[0]['msg']}") from e
    return cover_from_document(doc, g)


_LIST_LINE = re.compile(r"^\s*(\d+)\s*:\s*(.*)$")


def parse_lists(text: str | bytes, n: int) -> List[List[int]]:
    """Lists file: one '<vertex>: <c1> <c2> ...' line per vertex, '#' comments."""
    if isinstance(text, bytes):
        text = text.decode()
    lists: List[Optional[List[int]]] = [None] * n
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        match = _LIST_LINE.match(line)
        if not match:
            raise CoverError(f"line {number}: expected '<vertex>: <colours>'")
        u = int(match.group(1))
        if u >= n:
            raise CoverError(f"line {number}: vertex {u} out of range 0..{n - 1}")
        if lists[u] is not None:
            raise CoverError(f"line {number}: vertex {u} listed twice")
        try:
            lists[u] = [int(c) for c in match.group(2).split()]
        except ValueError as e:
            raise CoverError(f"line {number}: colours must be integers") from e
    missing = [u for u, lst in enumerate(lists) if lst is None]
    if missing:
        raise CoverError(f"no list for vertices {missing[:10]}")
    return [lst for lst in lists if lst is not None]


def format_lists(lists: Sequence[Iterable[int]]) -> str:
    return "".join(f"{u}: {' '.join(str(c) for c in sorted(lst))}\n"
                   for u, lst in enumerate(lists))
