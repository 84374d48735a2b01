"""Path evaluation over provenance graphs.

All three evaluators enumerate simple paths (no repeated vertex) over
non-attribute edges and return canonically sorted, deduplicated matches.

* ``eval_query`` walks effect steps only (along stored orientation,
  backward in time), guided by a parsed path expression.
* ``eval_directed_path`` walks cause steps only and therefore reports
  paths in chronological order; paths need at least three vertices.
* ``eval_general_path`` may take either direction at every hop and
  records which one it took; paths need at least three vertices.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import PathLimitError, QueryError
from .graph import Direction, Edge, ProvenanceGraph
from .pathexpr import (
    Axis,
    NodeTest,
    PathExpr,
    parse_path_expr,
    step_matches,
    test_matches,
)

#: Default ceiling on enumerated paths; hitting it raises PathLimitError
#: rather than silently truncating.
DEFAULT_MAX_PATHS = 1_000_000

#: Minimum vertex count for directed and general path matches. Two
#: selector hits joined by a single edge do not form a path partition.
MIN_PATH_VERTICES = 3


@dataclass(frozen=True)
class PathMatch:
    """One witness path: vertex ids in traversal order, the direction taken
    at each hop, and the stored edges crossed."""

    vertices: tuple[str, ...]
    directions: tuple[Direction, ...] = ()
    edges: tuple[Edge, ...] = ()

    def __post_init__(self) -> None:
        if len(self.directions) != len(self.vertices) - 1 or len(self.edges) != len(
            self.directions
        ):
            raise ValueError("hop counts do not line up with the vertex sequence")


class _Collector:
    """Dedup by vertex sequence, enforce the enumeration cap."""

    def __init__(self, max_paths: int) -> None:
        self.max_paths = max_paths
        self.seen: dict[tuple[str, ...], PathMatch] = {}

    def add(self, match: PathMatch) -> None:
        if match.vertices in self.seen:
            return
        if len(self.seen) >= self.max_paths:
            raise PathLimitError(self.max_paths)
        self.seen[match.vertices] = match

    def sorted(self) -> list[PathMatch]:
        return [self.seen[key] for key in sorted(self.seen)]


def _first_edge_per_target(edges: tuple[Edge, ...], by_dst: bool) -> list[Edge]:
    """One edge per neighbor, chosen deterministically when labels differ."""
    picked: dict[str, Edge] = {}
    for e in edges:  # adjacency is pre-sorted, so the first edge wins
        key = e.dst if by_dst else e.src
        picked.setdefault(key, e)
    return [picked[k] for k in sorted(picked)]


# ==== expression queries ====


def eval_query(
    g: ProvenanceGraph,
    expr: PathExpr | str,
    *,
    max_paths: int = DEFAULT_MAX_PATHS,
) -> list[PathMatch]:
    """Evaluate a path expression; every hop is an effect step.

    The first step anchors at any matching vertex. A child axis advances
    exactly one effect step; a descendant axis advances one or more, with
    unconstrained intermediate vertices. Single-step expressions yield
    single-vertex matches.
    """
    if isinstance(expr, str):
        expr = parse_path_expr(expr)
    for step in expr.steps:
        if step.axis in (Axis.FOLLOWING, Axis.PRECEDING):
            raise QueryError(
                "following/preceding axes are only meaningful inside "
                "subgraphs(...) partition expressions"
            )

    out = _Collector(max_paths)
    steps = expr.steps

    def extend(path: list[str], edges: list[Edge], used: set[str], idx: int) -> None:
        if idx == len(steps):
            out.add(
                PathMatch(
                    tuple(path),
                    (Direction.EFFECT,) * len(edges),
                    tuple(edges),
                )
            )
            return
        step = steps[idx]
        for e in _first_edge_per_target(g.effect_edges(path[-1]), by_dst=True):
            if e.dst in used:
                continue
            matched = step_matches(step, g, e.dst)
            if step.axis is Axis.CHILD and not matched:
                continue
            path.append(e.dst)
            edges.append(e)
            used.add(e.dst)
            if matched:
                extend(path, edges, used, idx + 1)
            if step.axis is Axis.DESCENDANT:
                # keep walking the gap whether or not this vertex matched
                extend(path, edges, used, idx)
            used.discard(e.dst)
            edges.pop()
            path.pop()

    for vid in sorted(g.vertices):
        if step_matches(steps[0], g, vid):
            extend([vid], [], {vid}, 1)
    return out.sorted()


# ==== directed paths ====


def eval_directed_path(
    g: ProvenanceGraph,
    from_test: NodeTest,
    to_test: NodeTest,
    *,
    via: tuple[NodeTest, ...] = (),
    max_paths: int = DEFAULT_MAX_PATHS,
) -> list[PathMatch]:
    """Chronological paths from a from-match to a to-match using cause
    steps only, passing through each via test in order (strictly between
    the endpoints). Matches shorter than three vertices are discarded."""
    out = _Collector(max_paths)

    def vias_satisfied(interior: list[str]) -> bool:
        pos = 0
        for test in via:
            while pos < len(interior) and not test_matches(test, g, interior[pos]):
                pos += 1
            if pos == len(interior):
                return False
            pos += 1
        return True

    def walk(path: list[str], edges: list[Edge], used: set[str]) -> None:
        if (
            len(path) >= MIN_PATH_VERTICES
            and test_matches(to_test, g, path[-1])
            and vias_satisfied(path[1:-1])
        ):
            out.add(
                PathMatch(tuple(path), (Direction.CAUSE,) * len(edges), tuple(edges))
            )
        for e in _first_edge_per_target(g.cause_edges(path[-1]), by_dst=False):
            if e.src in used:
                continue
            path.append(e.src)
            edges.append(e)
            used.add(e.src)
            walk(path, edges, used)
            used.discard(e.src)
            edges.pop()
            path.pop()

    for vid in sorted(g.vertices):
        if test_matches(from_test, g, vid):
            walk([vid], [], {vid})
    return out.sorted()


# ==== general paths ====


def eval_general_path(
    g: ProvenanceGraph,
    from_test: NodeTest,
    to_test: NodeTest,
    *,
    max_paths: int = DEFAULT_MAX_PATHS,
) -> list[PathMatch]:
    """Paths from a from-match to a to-match where every hop may be either
    a cause or an effect step; the direction taken is recorded per hop.
    Matches shorter than three vertices are discarded."""
    out = _Collector(max_paths)

    def moves(vid: str) -> list[tuple[str, Direction, Edge]]:
        found: dict[str, tuple[str, Direction, Edge]] = {}
        for e in g.cause_edges(vid):  # stored edge (u, vid): cause step vid -> u
            found.setdefault(e.src, (e.src, Direction.CAUSE, e))
        for e in g.effect_edges(vid):
            found.setdefault(e.dst, (e.dst, Direction.EFFECT, e))
        return [found[k] for k in sorted(found)]

    def walk(
        path: list[str],
        dirs: list[Direction],
        edges: list[Edge],
        used: set[str],
    ) -> None:
        if len(path) >= MIN_PATH_VERTICES and test_matches(to_test, g, path[-1]):
            out.add(PathMatch(tuple(path), tuple(dirs), tuple(edges)))
        for nxt, direction, e in moves(path[-1]):
            if nxt in used:
                continue
            path.append(nxt)
            dirs.append(direction)
            edges.append(e)
            used.add(nxt)
            walk(path, dirs, edges, used)
            used.discard(nxt)
            edges.pop()
            dirs.pop()
            path.pop()

    for vid in sorted(g.vertices):
        if test_matches(from_test, g, vid):
            walk([vid], [], [], {vid})
    return out.sorted()
