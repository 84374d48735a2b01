"""Access-request evaluation: policy selection, per-vertex effect
combination, and application of the winning transformation plan.

Effects combine per vertex under absolute permit > deny > permit; a
vertex no applicable policy covers defaults to permit, and a request no
policy applies to at all is denied outright. Deny-side transformations
whose clusters survive the absolute-permit shield are applied in
canonical (policy id, transformation index) order; where a remove
cluster and a replace cluster overlap, removal wins.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from enum import Enum

from .errors import EvaluationError, TransformError
from .graph import EdgeLabel, ProvenanceGraph
from .partition import resolve
from .policy import (
    AccessRequest,
    CategoryDictionary,
    EdgeMergeTable,
    Effect,
    Mode,
    Policy,
    Transformation,
    applicable,
)
from .query import eval_query
from .transform import (
    Cluster,
    TransformResult,
    apply_remove,
    apply_replace,
    cluster_category,
    expand_scope,
)

__all__ = [
    "AccessRequest",
    "Decision",
    "Outcome",
    "PlanStep",
    "combine_effects",
    "decision_to_dict",
    "evaluate",
]


class Outcome(Enum):
    PERMIT_FULL = "PermitFull"
    PERMIT_TRANSFORMED = "PermitTransformed"
    DENY_ALL = "DenyAll"


@dataclass(frozen=True)
class PlanStep:
    """One concrete transformation application: which policy asked for
    it, the transformation's index inside that policy, and the cluster
    it acts on after shielding and overlap resolution."""

    policy_id: str
    tindex: int
    transformation: Transformation
    cluster: Cluster


@dataclass(frozen=True)
class Decision:
    outcome: Outcome
    applied_policies: tuple[str, ...]
    plan: tuple[PlanStep, ...]
    effects: Mapping[str, Effect]
    hidden_vertex_count: int


def combine_effects(
    per_policy: Iterable[tuple[Effect, Iterable[str]]],
    vertices: Iterable[str] = (),
) -> dict[str, Effect]:
    """Winning effect per vertex: the strongest effect of any covering
    policy, permit for vertices in no coverage set."""
    out: dict[str, Effect] = {vid: Effect.PERMIT for vid in vertices}
    for effect, ids in per_policy:
        for vid in ids:
            current = out.get(vid, Effect.PERMIT)
            if effect.rank > current.rank:
                out[vid] = effect
    return out


def evaluate(
    req: AccessRequest,
    policies: Iterable[Policy],
    g: ProvenanceGraph,
    vcd: CategoryDictionary,
    emt: EdgeMergeTable,
) -> tuple[Decision, TransformResult]:
    if req.graph_id != g.id:
        raise EvaluationError(
            f"request targets graph {req.graph_id!r} but got {g.id!r}"
        )
    policies = list(policies)
    seen_ids: set[str] = set()
    for p in policies:
        if p.id in seen_ids:
            raise EvaluationError(f"duplicate policy id {p.id!r}")
        seen_ids.add(p.id)

    apps = sorted((p for p in policies if applicable(p, req, g)), key=lambda p: p.id)
    if not apps:
        effects = {vid: Effect.DENY for vid in g.vertices}
        decision = Decision(Outcome.DENY_ALL, (), (), effects, len(g.vertices))
        empty = ProvenanceGraph(g.id, (), ())
        record = {"op": "deny-all", "reason": "no applicable policy"}
        return decision, TransformResult(empty, (record,))

    # Every policy's clusters resolve against the original graph; they
    # declare coverage even when the policy's effect never transforms.
    clusters_of: dict[str, list[tuple[int, Transformation, Cluster]]] = {}
    for p in apps:
        rows: list[tuple[int, Transformation, Cluster]] = []
        for ti, t in enumerate(p.transformations):
            part = resolve(g, t.partition)
            for c in expand_scope(g, part, t.scope, vcd):
                rows.append((ti, t, c))
        clusters_of[p.id] = rows

    effects = combine_effects(
        (
            (p.effect, set().union(*(c.vertex_ids for _, _, c in clusters_of[p.id])))
            for p in apps
        ),
        g.vertices,
    )
    protected = {vid for vid, e in effects.items() if e is Effect.ABSOLUTE_PERMIT}
    hidden = {vid for vid, e in effects.items() if e is Effect.DENY}

    steps: list[PlanStep] = []
    for p in apps:
        if p.effect is not Effect.DENY:
            continue
        for ti, t, c in clusters_of[p.id]:
            live = c.vertex_ids - protected
            if live:
                steps.append(PlanStep(p.id, ti, t, Cluster(live, c.category)))

    remove_union: set[str] = set()
    for s in steps:
        if s.transformation.mode is Mode.REMOVE:
            remove_union |= s.cluster.vertex_ids
    plan: list[PlanStep] = []
    for s in steps:
        if s.transformation.mode is Mode.REPLACE:
            live = s.cluster.vertex_ids - remove_union
            if not live:
                continue
            s = PlanStep(s.policy_id, s.tindex, s.transformation,
                         Cluster(live, s.cluster.category))
        plan.append(s)

    working = g
    records: list[dict] = []
    applied: list[PlanStep] = []
    for s in plan:
        live = frozenset(v for v in s.cluster.vertex_ids if v in working.vertices)
        context = {"policy": s.policy_id, "transformation": s.tindex}
        if not live:
            records.append({**context, "op": "skip",
                            "reason": "cluster already removed"})
            continue
        c = Cluster(live, s.cluster.category)
        try:
            if s.transformation.mode is Mode.REMOVE:
                step = apply_remove(working, c, s.transformation.label, emt)
            else:
                category = cluster_category(working, c, vcd)
                step = apply_replace(
                    working, c, vcd, s.transformation.label,
                    vertex_id=f"merged:{s.tindex}:{category.name}",
                )
        except TransformError as e:
            raise TransformError(f"policy {s.policy_id!r}: {e}") from e
        working = step.graph
        applied.append(PlanStep(s.policy_id, s.tindex, s.transformation, c))
        records.extend({**context, **r} for r in step.log)

    outcome = Outcome.PERMIT_FULL if not applied else Outcome.PERMIT_TRANSFORMED
    view = working
    if req.query is not None:
        matches = eval_query(view, req.query)
        keep = {vid for m in matches for vid in m.vertices}
        keep |= {
            e.dst
            for e in view.edges
            if e.label is EdgeLabel.HAS_ATTRIBUTES and e.src in keep
        }
        view = ProvenanceGraph(
            view.id,
            (v for vid, v in sorted(view.vertices.items()) if vid in keep),
            (e for e in view.edges if e.src in keep and e.dst in keep),
        )
        records.append({"op": "query", "matches": len(matches),
                        "kept_vertices": len(keep)})

    decision = Decision(
        outcome, tuple(p.id for p in apps), tuple(applied), effects, len(hidden)
    )
    return decision, TransformResult(view, tuple(records))


def decision_to_dict(decision: Decision, result: TransformResult) -> dict:
    """The JSON shape the command line prints for an apply run."""
    return {
        "outcome": decision.outcome.value,
        "appliedPolicies": list(decision.applied_policies),
        "hiddenVertexCount": decision.hidden_vertex_count,
        "log": list(result.log),
    }
