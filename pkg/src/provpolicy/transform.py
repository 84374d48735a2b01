"""Graph transformations: scope expansion, cluster removal with edge
merging, and cluster replacement.

Removal deletes a vertex cluster and bridges every dependency that ran
through it; with the original-dependency label the bridge label is folded
pairwise through the edge-merge table, and any ambiguity or schema
violation falls back to wasCausedBy. Replacement collapses a cluster into
a single vertex named by its category. Both return a fresh graph plus a
JSON-serializable audit log; inputs are never mutated.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .errors import TransformError
from .graph import (
    Edge,
    EdgeLabel,
    ProvenanceGraph,
    Vertex,
    VertexType,
    edge_is_legal,
    edge_sort_key,
    validate_graph,
)
from .partition import Partition, partition_to_text, resolve
from .policy import (
    Category,
    CategoryDictionary,
    DependencyLabel,
    EdgeMergeTable,
    Mode,
    Scope,
    Transformation,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Cluster:
    """A nonempty vertex group slated for one transformation step;
    ``category`` names the dictionary category that formed it, if any."""

    vertex_ids: frozenset[str]
    category: str | None = None


@dataclass(frozen=True)
class TransformResult:
    graph: ProvenanceGraph
    log: tuple[dict, ...]


# ==== scope expansion ====


def expand_scope(
    g: ProvenanceGraph, base: Partition, scope: Scope, vcd: CategoryDictionary
) -> list[Cluster]:
    """Grow a resolved partition into the clusters a transformation acts
    on.

    Original keeps the partition as one cluster. Conjunction grows one
    cluster by transitively absorbing neighbors that share a category
    with a base member. Extension collects every connected component of
    each base category's member set anywhere in the graph. Under the
    latter two, base vertices in no category become singleton clusters.
    """
    ids = base.vertex_ids
    if not ids:
        return []
    for vid in ids:
        g.vertex(vid)
    if scope is Scope.ORIGINAL:
        return [Cluster(ids)]

    by_category: dict[str, set[str]] = {}
    singletons: list[str] = []
    for vid in sorted(ids):
        cat = vcd.category_of(g, vid)
        if cat is None:
            singletons.append(vid)
        else:
            by_category.setdefault(cat.name, set()).add(vid)
    if singletons:
        log.warning(
            "scope %s: %d base vertex(es) in no category kept as singletons: %s",
            scope.value,
            len(singletons),
            ", ".join(singletons),
        )

    clusters: list[Cluster] = []
    if scope is Scope.CONJUNCTION:
        if by_category:
            grown = set().union(*by_category.values())
            frontier = sorted(grown)
            while frontier:
                nxt: set[str] = set()
                for vid in frontier:
                    for n in g.all_neighbors(vid):
                        if n in grown:
                            continue
                        cat = vcd.category_of(g, n)
                        if cat is not None and cat.name in by_category:
                            grown.add(n)
                            nxt.add(n)
                frontier = sorted(nxt)
            only = next(iter(by_category)) if len(by_category) == 1 else None
            clusters.append(Cluster(frozenset(grown), only))
    else:  # Scope.EXTENSION
        for cat in vcd.categories:
            if cat.name not in by_category:
                continue
            members = {
                vid for vid in g.vertices if _in_category(vcd, g, vid, cat.name)
            }
            for component in _components(g, members):
                clusters.append(Cluster(frozenset(component), cat.name))
    clusters.extend(Cluster(frozenset((vid,))) for vid in singletons)
    return clusters


def _in_category(
    vcd: CategoryDictionary, g: ProvenanceGraph, vid: str, name: str
) -> bool:
    cat = vcd.category_of(g, vid)
    return cat is not None and cat.name == name


def _components(g: ProvenanceGraph, ids: set[str]) -> list[set[str]]:
    """Connected components of ``ids`` under every edge kind, ordered by
    smallest member id."""
    seen: set[str] = set()
    out: list[set[str]] = []
    for start in sorted(ids):
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            vid = stack.pop()
            for n in g.all_neighbors(vid):
                if n in ids and n not in comp:
                    comp.add(n)
                    stack.append(n)
        seen |= comp
        out.append(comp)
    return out


# ==== removal ====


def apply_remove(
    g: ProvenanceGraph,
    c: Cluster,
    label: DependencyLabel,
    emt: EdgeMergeTable,
) -> TransformResult:
    """Delete a cluster, bridging external dependencies that passed
    through it.

    A bridge u→w is created when u had an edge into the cluster and some
    internal path led on to an edge out to w. Removing a cluster that is
    entirely absent from the graph is a no-op; a partially absent cluster
    is an error.
    """
    present = {vid for vid in c.vertex_ids if vid in g.vertices}
    if not present:
        record = {"op": "remove", "cluster": [], "category": c.category,
                  "label": label.value, "bridges": [], "removed_attributes": []}
        return TransformResult(g, (record,))
    if present != set(c.vertex_ids):
        missing = sorted(set(c.vertex_ids) - present)
        raise TransformError(
            f"cluster is partially absent from graph {g.id!r}: missing {missing}"
        )
    internal = present

    in_edges = [
        e
        for e in g.edges
        if e.dst in internal and e.src not in internal
        and e.label is not EdgeLabel.HAS_ATTRIBUTES
    ]
    out_edges = [
        e
        for e in g.edges
        if e.src in internal and e.dst not in internal
        and e.label is not EdgeLabel.HAS_ATTRIBUTES
    ]
    internal_edges = [
        e
        for e in g.edges
        if e.src in internal and e.dst in internal
        and e.label is not EdgeLabel.HAS_ATTRIBUTES
    ]
    topo = _topo_order(internal, internal_edges)

    # Per external pair, every bridge label obtainable by folding the
    # merge table left to right along some internal route.
    folds: dict[tuple[str, str], set[EdgeLabel]] = {}
    if label is DependencyLabel.ORIGINAL:
        for e_in in sorted(in_edges, key=edge_sort_key):
            labels_at: dict[str, set[EdgeLabel]] = {e_in.dst: {e_in.label}}
            for vid in topo:
                if vid not in labels_at:
                    continue
                for e in g.effect_edges(vid):
                    if e.dst in internal:
                        merged = {emt.merged(l, e.label) for l in labels_at[vid]}
                        labels_at.setdefault(e.dst, set()).update(merged)
            for e_out in out_edges:
                if e_out.src in labels_at:
                    pair = (e_in.src, e_out.dst)
                    folds.setdefault(pair, set()).update(
                        emt.merged(l, e_out.label) for l in labels_at[e_out.src]
                    )
    else:
        reach = _internal_reach(internal, internal_edges)
        for e_in in in_edges:
            for e_out in out_edges:
                if e_out.src in reach[e_in.dst]:
                    folds.setdefault((e_in.src, e_out.dst), set()).add(
                        EdgeLabel.WAS_CAUSED_BY
                    )

    bridges: list[Edge] = []
    for (u, w), labels in sorted(folds.items()):
        merged = labels.pop() if len(labels) == 1 else EdgeLabel.WAS_CAUSED_BY
        if not edge_is_legal(
            g.vertices[u].vtype, g.vertices[w].vtype, merged, allow_was_caused_by=True
        ):
            merged = EdgeLabel.WAS_CAUSED_BY
        bridges.append(Edge(u, w, merged))

    orphans = _orphaned_attributes(g, internal)
    removed = internal | orphans
    vertices = [v for vid, v in sorted(g.vertices.items()) if vid not in removed]
    edges = [e for e in g.edges if e.src not in removed and e.dst not in removed]
    edges = sorted(set(edges) | set(bridges), key=edge_sort_key)
    out = ProvenanceGraph(g.id, vertices, edges)
    _check_valid(out, "remove")

    record = {
        "op": "remove",
        "cluster": sorted(internal),
        "category": c.category,
        "label": label.value,
        "bridges": [
            {"src": e.src, "dst": e.dst, "label": e.label.value} for e in bridges
        ],
        "removed_attributes": sorted(orphans),
    }
    return TransformResult(out, (record,))


def _topo_order(ids: set[str], edges: list[Edge]) -> list[str]:
    indeg = {vid: 0 for vid in ids}
    for e in edges:
        indeg[e.dst] += 1
    ready = sorted(vid for vid, d in indeg.items() if d == 0)
    order: list[str] = []
    while ready:
        vid = ready.pop()
        order.append(vid)
        for e in edges:
            if e.src == vid:
                indeg[e.dst] -= 1
                if indeg[e.dst] == 0:
                    ready.append(e.dst)
        ready.sort()
    return order


def _internal_reach(ids: set[str], edges: list[Edge]) -> dict[str, set[str]]:
    """Reflexive reachability inside the cluster along stored edges."""
    succ: dict[str, set[str]] = {vid: set() for vid in ids}
    for e in edges:
        succ[e.src].add(e.dst)
    reach: dict[str, set[str]] = {}

    def visit(vid: str) -> set[str]:
        if vid in reach:
            return reach[vid]
        acc = {vid}
        reach[vid] = acc  # DAG: no revisit of an in-progress vertex
        for n in succ[vid]:
            acc |= visit(n)
        reach[vid] = acc
        return acc

    for vid in ids:
        visit(vid)
    return reach


def _orphaned_attributes(g: ProvenanceGraph, removed: set[str]) -> set[str]:
    """Attribute vertices all of whose hosts are being removed."""
    orphans: set[str] = set()
    for vid, v in g.vertices.items():
        if v.vtype is not VertexType.ATTRIBUTE or vid in removed:
            continue
        hosts = {e.src for e in g.attribute_host_edges(vid)}
        if hosts and hosts <= removed:
            orphans.add(vid)
    return orphans


def _check_valid(g: ProvenanceGraph, op: str) -> None:
    violations = validate_graph(g, allow_was_caused_by=True)
    if violations:
        detail = "; ".join(f"{v.kind}: {v.message}" for v in violations)
        raise TransformError(f"{op} produced an invalid graph: {detail}")


# ==== replacement ====


def apply_replace(
    g: ProvenanceGraph,
    c: Cluster,
    vcd: CategoryDictionary,
    label: DependencyLabel,
    *,
    vertex_id: str | None = None,
) -> TransformResult:
    """Collapse a cluster into one vertex named by its category label.

    External non-attribute edges are rewired to the new vertex; under the
    false-dependency label they all become wasCausedBy, otherwise each
    keeps its label when still schema-legal and falls back to wasCausedBy.
    Attribute attachments of the cluster are dropped, not carried over.
    A collapse that would close a cycle is rejected.
    """
    internal = set(c.vertex_ids)
    if not internal:
        raise TransformError("cannot replace an empty cluster")
    for vid in internal:
        g.vertex(vid)
    category = cluster_category(g, c, vcd)

    orphans = _orphaned_attributes(g, internal)
    removed = internal | orphans
    base = vertex_id if vertex_id is not None else f"merged:{category.name}"
    new_id = _fresh_id(base, set(g.vertices) - removed)
    new_vertex = Vertex(new_id, category.replacement_type, category.label)

    edges: set[Edge] = set()
    dropped_attribute_edges = 0
    rewired: list[dict] = []
    for e in g.edges:
        src_in = e.src in removed
        dst_in = e.dst in removed
        if not src_in and not dst_in:
            edges.add(e)
            continue
        if src_in and dst_in:
            continue
        if e.label is EdgeLabel.HAS_ATTRIBUTES:
            dropped_attribute_edges += 1
            continue
        src = new_id if src_in else e.src
        dst = new_id if dst_in else e.dst
        src_type = new_vertex.vtype if src_in else g.vertices[e.src].vtype
        dst_type = new_vertex.vtype if dst_in else g.vertices[e.dst].vtype
        if label is DependencyLabel.FALSE:
            new_label = EdgeLabel.WAS_CAUSED_BY
        elif edge_is_legal(src_type, dst_type, e.label, allow_was_caused_by=True):
            new_label = e.label
        else:
            new_label = EdgeLabel.WAS_CAUSED_BY
        if not edge_is_legal(src_type, dst_type, new_label, allow_was_caused_by=True):
            raise TransformError(
                f"no legal label for rewired edge {src!r} -> {dst!r} "
                f"(replacement type {new_vertex.vtype.value})"
            )
        edges.add(Edge(src, dst, new_label, e.tag))
        rewired.append(
            {"src": src, "dst": dst, "label": new_label.value, "was": e.label.value}
        )

    vertices = [v for vid, v in sorted(g.vertices.items()) if vid not in removed]
    vertices.append(new_vertex)
    vertices.sort(key=lambda v: v.id)
    out = ProvenanceGraph(g.id, vertices, sorted(edges, key=edge_sort_key))
    _check_valid(out, "replace")

    record = {
        "op": "replace",
        "cluster": sorted(internal),
        "category": category.name,
        "label": label.value,
        "new_vertex": {
            "id": new_id,
            "type": category.replacement_type.value,
            "name": category.label,
        },
        "rewired": sorted(rewired, key=lambda r: (r["src"], r["dst"], r["label"])),
        "removed_attributes": sorted(orphans),
        "dropped_attribute_edges": dropped_attribute_edges,
    }
    return TransformResult(out, (record,))


def cluster_category(
    g: ProvenanceGraph, c: Cluster, vcd: CategoryDictionary
) -> Category:
    if c.category is not None:
        cat = vcd.by_name(c.category)
        if cat is None:
            raise TransformError(f"cluster names unknown category {c.category!r}")
        return cat
    found: dict[str, Category] = {}
    for vid in sorted(c.vertex_ids):
        cat = vcd.category_of(g, vid)
        if cat is not None:
            found[cat.name] = cat
    if len(found) == 1:
        return next(iter(found.values()))
    if not found:
        raise TransformError(
            "no category covers any cluster member; replacement needs one"
        )
    raise TransformError(
        "cluster members span categories "
        + ", ".join(sorted(found))
        + "; replacement needs exactly one"
    )


def _fresh_id(base: str, taken: set[str]) -> str:
    if base not in taken:
        return base
    n = 2
    while f"{base}-{n}" in taken:
        n += 1
    return f"{base}-{n}"


# ==== pipelines ====


def apply_transformations(
    g: ProvenanceGraph,
    transformations: list[Transformation] | tuple[Transformation, ...],
    vcd: CategoryDictionary,
    emt: EdgeMergeTable,
) -> TransformResult:
    """Apply a transformation list in order, each resolving its partition
    on the current intermediate graph. Empty partitions are logged no-ops."""
    working = g
    records: list[dict] = []
    for ti, t in enumerate(transformations):
        context = {
            "transformation": ti,
            "partition": partition_to_text(t.partition),
            "scope": t.scope.value,
            "mode": t.mode.value,
        }
        part = resolve(working, t.partition)
        if part.is_empty:
            records.append({**context, "op": "skip", "reason": "empty partition"})
            continue
        clusters = expand_scope(working, part, t.scope, vcd)
        for c in clusters:
            live = frozenset(vid for vid in c.vertex_ids if vid in working.vertices)
            if not live:
                records.append(
                    {**context, "op": "skip", "reason": "cluster already removed",
                     "cluster": sorted(c.vertex_ids)}
                )
                continue
            c = Cluster(live, c.category)
            if t.mode is Mode.REMOVE:
                step = apply_remove(working, c, t.label, emt)
            else:
                category = cluster_category(working, c, vcd)
                step = apply_replace(
                    working, c, vcd, t.label,
                    vertex_id=f"merged:{ti}:{category.name}",
                )
            working = step.graph
            records.extend({**context, **r} for r in step.log)
    _check_valid(working, "transformation pipeline")
    return TransformResult(working, tuple(records))
