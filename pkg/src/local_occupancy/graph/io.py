"""Edge-list text format: `p <n> <m>` header, `e <u> <v>` edges, `c` comments."""

from typing import List, Optional, Tuple

from local_occupancy.errors import GraphError, GraphFormatError
from local_occupancy.graph.core import Graph
from local_occupancy.observability import enrich_context


def _parse_int(token: str, lineno: int) -> int:
    try:
        value = int(token)
    except ValueError:
        raise GraphFormatError(f"expected an integer, got {token!r}", lineno) from None
    if value < 0:
        raise GraphFormatError(f"negative index {value}", lineno)
    return value


def load_graph(text: str | bytes) -> Graph:
    """Parse the edge-list format into a Graph (duplicate edges collapse)."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")

    n: Optional[int] = None
    declared_m: Optional[int] = None
    edges: List[Tuple[int, int, int]] = []
    bare_seen = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        tokens = line.split()
        head = tokens[0]
        if head == "p":
            if n is not None:
                raise GraphFormatError("duplicate header", lineno)
            if bare_seen or edges:
                raise GraphFormatError("header must precede edges", lineno)
            # DIMACS writes `p edge <n> <m>`
            numbers = tokens[2:] if len(tokens) == 4 and tokens[1] == "edge" else tokens[1:]
            if len(numbers) != 2:
                raise GraphFormatError("header must be 'p <n> <m>'", lineno)
            n = _parse_int(numbers[0], lineno)
            declared_m = _parse_int(numbers[1], lineno)
        elif head == "e":
            if len(tokens) != 3:
                raise GraphFormatError("edge line must be 'e <u> <v>'", lineno)
            edges.append((_parse_int(tokens[1], lineno), _parse_int(tokens[2], lineno), lineno))
        elif len(tokens) == 2:
            if n is not None:
                raise GraphFormatError("bare edge lines are only allowed without a header", lineno)
            bare_seen = True
            edges.append((_parse_int(tokens[0], lineno), _parse_int(tokens[1], lineno), lineno))
        else:
            raise GraphFormatError(f"unrecognised line {line!r}", lineno)

    if n is None:
        n = max((max(u, v) for u, v, _ in edges), default=-1) + 1

    pairs = set()
    for u, v, lineno in edges:
        if u == v:
            raise GraphFormatError(f"self-loop at vertex {u}", lineno)
        if u >= n or v >= n:
            raise GraphFormatError(f"edge ({u}, {v}) out of range for n={n}", lineno)
        pairs.add((min(u, v), max(u, v)))

    if declared_m is not None and declared_m != len(pairs):
        enrich_context(event="load_graph").warning(
            "Header edge count differs from distinct edges", declared=declared_m, found=len(pairs)
        )
    try:
        return Graph.from_edges(n, sorted(pairs))
    except GraphError as e:
        raise GraphFormatError(str(e)) from e


def dump_graph(g: Graph) -> str:
    """Canonical `p`/`e` form, edges sorted, LF endings."""
    edges = g.edges()
    lines = [f"p {g.n} {len(edges)}"]
    lines.extend(f"e {u} {v}" for u, v in edges)
    return "\n".join(lines) + "\n"
