"""Random workload generation and the benchmark harness.

Three pieces: a seeded generator for schema-valid provenance DAGs, an
expressiveness comparison that checks which sampled partitions the full
partition grammar can name exactly versus a deliberately limited baseline
(explicit enumeration up to a cap, plus single directed paths), and a
policy-combination timing loop. Everything is a deterministic function of
its seed.
"""

from __future__ import annotations

import csv
import json
import random
import statistics
import time
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Callable, Iterable, Iterator

from .errors import InfeasibleConfigError, PathLimitError
from .evaluator import evaluate
from .graph import Edge, EdgeLabel, ProvenanceGraph, Vertex, VertexType, induced_edges
from .partition import (
    DirectedPathSpec,
    GeneralPathSpec,
    Partition,
    PartitionSpec,
    SubgraphSpec,
    VerticesSpec,
    resolve,
)
from .pathexpr import (
    AttributeValueTest,
    NameTest,
    NodeTest,
    Terminal,
    TypedNameTest,
    TypeTest,
    WildcardTest,
    test_matches,
)
from .policy import (
    AccessRequest,
    CategoryDictionary,
    DependencyLabel,
    EdgeMergeTable,
    Effect,
    Mode,
    Policy,
    Scope,
    Target,
    Transformation,
)

# ==== graph generation ====


@dataclass(frozen=True)
class GenConfig:
    graphs: int = 20
    processes: int = 6
    artifacts: int = 8
    agents: int = 2
    attributes: int = 3
    edge_density: float = 0.35
    name_collision_rate: float = 0.2
    seed: int = 0


_PROCESS_NAMES = ("upload", "review", "grade", "merge", "sign", "archive")
_ARTIFACT_NAMES = ("draft", "report", "dataset", "image", "bundle")
_AGENT_NAMES = ("alice", "bob", "carol", "dora")
_ATTR_NAMES = ("quality", "date", "origin", "status")
_ATTR_VALUES = ("high", "low", "2016", "2017", "internal", "external")


def _check_config(cfg: GenConfig) -> None:
    if cfg.graphs < 1:
        raise InfeasibleConfigError("graphs must be at least 1")
    for field_name in ("processes", "artifacts", "agents", "attributes"):
        if getattr(cfg, field_name) < 0:
            raise InfeasibleConfigError(f"{field_name} must not be negative")
    if not 0.0 <= cfg.edge_density <= 1.0:
        raise InfeasibleConfigError("edge_density must lie in [0, 1]")
    if not 0.0 <= cfg.name_collision_rate <= 1.0:
        raise InfeasibleConfigError("name_collision_rate must lie in [0, 1]")
    if cfg.attributes > 0 and cfg.processes + cfg.artifacts + cfg.agents == 0:
        raise InfeasibleConfigError("attributes need host vertices")
    if cfg.edge_density > 0:
        some_edge_possible = (
            (cfg.processes >= 1 and cfg.artifacts >= 1)
            or cfg.artifacts >= 2
            or cfg.processes >= 2
            or (cfg.processes >= 1 and cfg.agents >= 1)
        )
        if not some_edge_possible:
            raise InfeasibleConfigError(
                "edge_density > 0 but no legal edge can exist for these counts"
            )


def _pick_name(rng: random.Random, pool: tuple[str, ...], used: list[str], rate: float) -> str:
    if used and rng.random() < rate:
        return rng.choice(used)
    j = len(used)
    word = pool[j % len(pool)]
    if j >= len(pool):
        word = f"{word}{j // len(pool) + 1}"
    return word


def _gen_one(index: int, cfg: GenConfig) -> ProvenanceGraph:
    rng = random.Random(f"{cfg.seed}:{index}")
    vertices: list[Vertex] = []
    edges: list[Edge] = []

    agent_names: list[str] = []
    for k in range(cfg.agents):
        name = _pick_name(rng, _AGENT_NAMES, agent_names, cfg.name_collision_rate)
        agent_names.append(name)
        vertices.append(Vertex(f"ag{k}", VertexType.AGENT, name))
    agents = [v.id for v in vertices]

    # Timeline order: each new vertex may only depend on earlier ones, so
    # the stored effect-to-cause edges can never close a cycle.
    slots = ["P"] * cfg.processes + ["A"] * cfg.artifacts
    rng.shuffle(slots)
    earlier_p: list[str] = []
    earlier_a: list[str] = []
    p_names: list[str] = []
    a_names: list[str] = []
    for slot in slots:
        if slot == "P":
            vid = f"p{len(earlier_p)}"
            name = _pick_name(rng, _PROCESS_NAMES, p_names, cfg.name_collision_rate)
            p_names.append(name)
            vertices.append(Vertex(vid, VertexType.PROCESS, name))
            options = [(a, EdgeLabel.USED) for a in earlier_a]
            options += [(p, EdgeLabel.WAS_TRIGGERED_BY) for p in earlier_p]
            options += [(ag, EdgeLabel.WAS_CONTROLLED_BY) for ag in agents]
        else:
            vid = f"a{len(earlier_a)}"
            name = _pick_name(rng, _ARTIFACT_NAMES, a_names, cfg.name_collision_rate)
            a_names.append(name)
            vertices.append(Vertex(vid, VertexType.ARTIFACT, name))
            options = [(p, EdgeLabel.WAS_GENERATED_BY) for p in earlier_p]
            options += [(a, EdgeLabel.WAS_DERIVED_FROM) for a in earlier_a]
        chosen = [opt for opt in options if rng.random() < cfg.edge_density]
        if not chosen and options and cfg.edge_density > 0:
            chosen = [rng.choice(options)]
        edges.extend(Edge(vid, dst, label) for dst, label in chosen)
        if slot == "P":
            earlier_p.append(vid)
        else:
            earlier_a.append(vid)

    hosts = agents + earlier_p + earlier_a
    for k in range(cfg.attributes):
        vid = f"att{k}"
        name = rng.choice(_ATTR_NAMES)
        value = rng.choice(_ATTR_VALUES)
        vertices.append(Vertex(vid, VertexType.ATTRIBUTE, name, value))
        edges.append(Edge(rng.choice(hosts), vid, EdgeLabel.HAS_ATTRIBUTES))

    return ProvenanceGraph(f"bench-{cfg.seed}-{index}", vertices, edges)


def gen_graphs(cfg: GenConfig) -> list[ProvenanceGraph]:
    """Seeded, reproducible, schema-valid DAGs."""
    _check_config(cfg)
    return [_gen_one(i, cfg) for i in range(cfg.graphs)]


# ==== partition sampling ====


def sample_partitions(g: ProvenanceGraph, n: int, seed: int) -> list[Partition]:
    """Draw ``n`` connected partitions by random walk over the
    non-attribute adjacency, then close each under the one-step
    agent/attribute hull."""
    if n < 1:
        raise InfeasibleConfigError("partition count must be at least 1")
    walkable = sorted(
        vid for vid, v in g.vertices.items() if v.vtype is not VertexType.ATTRIBUTE
    )
    if not walkable:
        raise InfeasibleConfigError(f"graph {g.id!r} has no walkable vertices")
    rng = random.Random(f"{seed}:{g.id}")
    out: list[Partition] = []
    for _ in range(n):
        start = rng.choice(walkable)
        target = rng.randint(1, 8)
        visited = {start}
        cur = start
        for _ in range(4 * target):
            if len(visited) >= target:
                break
            neighbors = sorted(g.undirected_neighbors(cur))
            if not neighbors:
                break
            cur = rng.choice(neighbors)
            visited.add(cur)
        hull = set(visited)
        for vid in sorted(visited):
            for nb in g.all_neighbors(vid):
                if g.vertices[nb].vtype in (VertexType.AGENT, VertexType.ATTRIBUTE):
                    hull.add(nb)
        ids = frozenset(hull)
        out.append(Partition(ids, induced_edges(g, ids)))
    return out


# ==== expressiveness ====


def _blocks_of(adjacency: dict[str, list[str]]) -> list[frozenset[str]]:
    """Biconnected components of an undirected simple graph (iterative
    Hopcroft-Tarjan). Isolated vertices belong to no block."""
    visited: set[str] = set()
    blocks: list[frozenset[str]] = []
    for start in sorted(adjacency):
        if start in visited:
            continue
        discovery = {start: 0}
        low = {start: 0}
        visited.add(start)
        edge_stack: list[tuple[str, str]] = []
        edge_index: dict[tuple[str, str], int] = {}
        stack = [(start, start, iter(adjacency[start]))]
        while stack:
            grandparent, parent, children = stack[-1]
            advanced = False
            for child in children:
                if child == grandparent:
                    continue
                if child in visited:
                    if discovery[child] <= discovery[parent]:
                        low[parent] = min(low[parent], discovery[child])
                        edge_index[(parent, child)] = len(edge_stack)
                        edge_stack.append((parent, child))
                else:
                    discovery[child] = low[child] = len(discovery)
                    visited.add(child)
                    edge_index[(parent, child)] = len(edge_stack)
                    edge_stack.append((parent, child))
                    stack.append((parent, child, iter(adjacency[child])))
                    advanced = True
                    break
            if advanced:
                continue
            stack.pop()
            if len(stack) >= 1 and parent != start:
                if low[parent] >= discovery[grandparent]:
                    ind = edge_index[(grandparent, parent)]
                    comp: set[str] = set()
                    for a, b in edge_stack[ind:]:
                        comp.add(a)
                        comp.add(b)
                    del edge_stack[ind:]
                    blocks.append(frozenset(comp))
                low[grandparent] = min(low[grandparent], low[parent])
    return blocks


class _PathIndex:
    """Closed-form path unions over one graph.

    Directed: in a DAG, a vertex lies on a simple chronological path
    between two endpoints exactly when it is forward-reachable from the
    start and backward-reachable from the end. Mixed-direction: a vertex
    lies on a simple path between two endpoints exactly when its block
    sits on the block-cut-tree path between them.
    """

    def __init__(self, g: ProvenanceGraph) -> None:
        self.g = g
        self._reach: dict[str, frozenset[str]] = {}
        self._coreach: dict[str, frozenset[str]] = {}
        adjacency = {
            vid: sorted(g.undirected_neighbors(vid))
            for vid, v in g.vertices.items()
            if v.vtype is not VertexType.ATTRIBUTE
        }
        self._blocks = _blocks_of(adjacency)
        self._vertex_blocks: dict[str, list[int]] = {}
        for bi, block in enumerate(self._blocks):
            for vid in block:
                self._vertex_blocks.setdefault(vid, []).append(bi)
        self._cuts = {v for v, bs in self._vertex_blocks.items() if len(bs) > 1}
        self._tree: dict[tuple, set[tuple]] = {}
        for bi, block in enumerate(self._blocks):
            bnode = ("b", bi)
            self._tree.setdefault(bnode, set())
            for c in block & self._cuts:
                cnode = ("c", c)
                self._tree[bnode].add(cnode)
                self._tree.setdefault(cnode, set()).add(bnode)

    def _bfs(self, vid: str, successors: Callable) -> frozenset[str]:
        seen = {vid}
        frontier = [vid]
        while frontier:
            nxt = []
            for v in frontier:
                for u, _label in successors(v):
                    if u not in seen:
                        seen.add(u)
                        nxt.append(u)
            frontier = nxt
        return frozenset(seen)

    def reach(self, vid: str) -> frozenset[str]:
        if vid not in self._reach:
            self._reach[vid] = self._bfs(vid, self.g.cause_successors)
        return self._reach[vid]

    def coreach(self, vid: str) -> frozenset[str]:
        if vid not in self._coreach:
            self._coreach[vid] = self._bfs(vid, self.g.effect_successors)
        return self._coreach[vid]

    def directed_union(self, sources: set[str], sinks: set[str]) -> set[str]:
        out: set[str] = set()
        for s in sources:
            for e in sinks:
                if s == e or e not in self.reach(s):
                    continue
                between = self.reach(s) & self.coreach(e)
                if len(between) > 2:
                    out |= between
        return out

    def directed_path_count(self, sources: set[str], sinks: set[str]) -> int:
        """Distinct chronological paths with at least one interior vertex."""
        total = 0
        for e in sorted(sinks):
            ways: dict[str, int] = {e: 1}

            def count(v: str) -> int:
                if v not in ways:
                    ways[v] = sum(count(u) for u, _ in self.g.cause_successors(v))
                return ways[v]

            for s in sorted(sources):
                if s == e:
                    continue
                direct = sum(1 for u, _ in self.g.cause_successors(s) if u == e)
                total += count(s) - direct
        return total

    def _node_of(self, vid: str) -> tuple | None:
        if vid in self._cuts:
            return ("c", vid)
        bs = self._vertex_blocks.get(vid)
        return ("b", bs[0]) if bs else None

    def _tree_path(self, a: tuple, b: tuple) -> list[tuple] | None:
        if a == b:
            return [a]
        prev: dict[tuple, tuple | None] = {a: None}
        frontier = [a]
        while frontier and b not in prev:
            nxt = []
            for n in frontier:
                for m in self._tree.get(n, ()):
                    if m not in prev:
                        prev[m] = n
                        nxt.append(m)
            frontier = nxt
        if b not in prev:
            return None
        path = [b]
        while path[-1] != a:
            path.append(prev[path[-1]])  # type: ignore[arg-type]
        return path

    def pair_general(self, u: str, v: str) -> set[str]:
        nu, nv = self._node_of(u), self._node_of(v)
        if nu is None or nv is None:
            return set()
        path = self._tree_path(nu, nv)
        if path is None:
            return set()
        union: set[str] = set()
        for node in path:
            if node[0] == "b":
                union |= self._blocks[node[1]]
            else:
                union.add(node[1])
        if union == {u, v}:
            return set()  # a lone bridge admits no three-vertex path
        return union

    def general_union(self, sources: set[str], sinks: set[str]) -> set[str]:
        out: set[str] = set()
        for s in sources:
            for e in sinks:
                if s != e:
                    out |= self.pair_general(s, e)
        return out

    def subgraph_union(self, sources: set[str], sinks: set[str]) -> set[str]:
        core = self.general_union(sources, sinks)
        core |= sources & sinks
        hull = set(core)
        for vid in core:
            for nb in self.g.all_neighbors(vid):
                if self.g.vertices[nb].vtype in (
                    VertexType.AGENT,
                    VertexType.ATTRIBUTE,
                ):
                    hull.add(nb)
        return hull


def _match_set(
    g: ProvenanceGraph, memo: dict, endpoint: NodeTest | Terminal
) -> set[str]:
    if endpoint not in memo:
        if endpoint is Terminal.START:
            memo[endpoint] = set(g.start_vertices())
        elif endpoint is Terminal.END:
            memo[endpoint] = set(g.end_vertices())
        else:
            memo[endpoint] = {
                vid for vid in g.vertices if test_matches(endpoint, g, vid)
            }
    return memo[endpoint]


def _partition_names(g: ProvenanceGraph, p: Partition) -> tuple[str, ...]:
    return tuple(sorted({g.vertices[vid].name for vid in p.vertex_ids}))


def _boundary(g: ProvenanceGraph, p: Partition) -> tuple[list[str], list[str]]:
    """Chronologically first / last members of the partition; attribute
    vertices never anchor a path."""
    starts: list[str] = []
    ends: list[str] = []
    for vid in sorted(p.vertex_ids):
        if g.vertices[vid].vtype is VertexType.ATTRIBUTE:
            continue
        if not any(u in p.vertex_ids for u, _ in g.effect_successors(vid)):
            starts.append(vid)
        if not any(u in p.vertex_ids for u, _ in g.cause_successors(vid)):
            ends.append(vid)
    return starts, ends


def _anchor_tests(g: ProvenanceGraph, vid: str) -> tuple[NodeTest, ...]:
    v = g.vertices[vid]
    return (NameTest((v.name,)), TypedNameTest(v.vtype, (v.name,)))


def paclp_candidates(g: ProvenanceGraph, p: Partition) -> Iterator[PartitionSpec]:
    """Every partition spec the full grammar would plausibly use to name
    ``p``: whole-set selectors, then directed / general / subgraph specs
    anchored at the partition's boundary vertices, then terminal spans."""
    ids = sorted(p.vertex_ids)
    names = _partition_names(g, p)
    yield VerticesSpec(WildcardTest())
    if names:
        yield VerticesSpec(NameTest(names))
    for t in VertexType:
        yield VerticesSpec(TypeTest(t))
    types = {g.vertices[vid].vtype for vid in ids}
    if len(types) == 1 and names:
        t = next(iter(types))
        yield VerticesSpec(TypedNameTest(t, names))
        values: set[str] = set()
        for vid in ids:
            if t is VertexType.ATTRIBUTE:
                values.add(g.vertices[vid].value or "")
            else:
                values.update(val for _, val in g.attribute_pairs(vid))
        for val in sorted(values):
            yield VerticesSpec(AttributeValueTest(t, val))
    starts, ends = _boundary(g, p)
    for s in starts:
        for e in ends:
            if s == e:
                continue
            for a in _anchor_tests(g, s):
                for b in _anchor_tests(g, e):
                    yield DirectedPathSpec(a, (), b)
                    yield GeneralPathSpec(a, b)
                    yield SubgraphSpec(a, b)
    for e in ends:
        for b in _anchor_tests(g, e):
            yield SubgraphSpec(Terminal.START, b)
    for s in starts:
        for a in _anchor_tests(g, s):
            yield SubgraphSpec(a, Terminal.END)


def _fast_resolves_to(
    g: ProvenanceGraph,
    idx: _PathIndex,
    memo: dict,
    spec: PartitionSpec,
    p: Partition,
) -> bool:
    """Equality of ``resolve(g, spec)`` with ``p``, using the closed-form
    unions for path-based specs instead of path enumeration."""
    target = p.vertex_ids
    if isinstance(spec, VerticesSpec):
        try:
            return resolve(g, spec).vertex_ids == target
        except PathLimitError:
            return False
    if isinstance(spec, DirectedPathSpec):
        sources = _match_set(g, memo, spec.start)
        sinks = _match_set(g, memo, spec.end)
        return idx.directed_union(sources, sinks) == target
    if isinstance(spec, GeneralPathSpec):
        sources = _match_set(g, memo, spec.start)
        sinks = _match_set(g, memo, spec.end)
        return idx.general_union(sources, sinks) == target
    sources = _match_set(g, memo, spec.start)
    sinks = _match_set(g, memo, spec.end)
    return idx.subgraph_union(sources, sinks) == target


def expressible_paclp(g: ProvenanceGraph, p: Partition) -> bool:
    """Can any partition spec of the full grammar name ``p`` exactly?"""
    if not p.vertex_ids:
        return False
    idx = _PathIndex(g)
    memo: dict = {}
    return any(
        _fast_resolves_to(g, idx, memo, spec, p) for spec in paclp_candidates(g, p)
    )


def expressible_lpac(g: ProvenanceGraph, p: Partition, *, enum_cap: int = 8) -> bool:
    """Baseline without attribute, type, or subgraph selectors: explicit
    name enumeration up to ``enum_cap``, or a start/end pair selecting
    exactly one directed path. Every candidate here is also a candidate
    of the full grammar, so the baseline can never express more."""
    if not p.vertex_ids:
        return False
    names = _partition_names(g, p)
    if len(names) <= enum_cap:
        spec = VerticesSpec(NameTest(names))
        if resolve(g, spec).vertex_ids == p.vertex_ids:
            return True
    idx = _PathIndex(g)
    memo: dict = {}
    starts, ends = _boundary(g, p)
    for s in starts:
        for e in ends:
            if s == e:
                continue
            sources = _match_set(g, memo, NameTest((g.vertices[s].name,)))
            sinks = _match_set(g, memo, NameTest((g.vertices[e].name,)))
            if (
                idx.directed_union(sources, sinks) == p.vertex_ids
                and idx.directed_path_count(sources, sinks) == 1
            ):
                return True
    return False


@dataclass(frozen=True)
class PartitionVerdict:
    partition_id: str
    size: int
    paclp: bool
    lpac: bool


@dataclass(frozen=True)
class ExpressivenessReport:
    sampled: int
    paclp_count: int
    lpac_count: int
    verdicts: tuple[PartitionVerdict, ...]


def run_expressiveness(
    cfg: GenConfig, n_partitions: int = 300
) -> ExpressivenessReport:
    """Sample partitions round-robin across the generated graphs and
    record which engine can express each one."""
    if n_partitions < 1:
        raise InfeasibleConfigError("partition count must be at least 1")
    graphs = gen_graphs(cfg)
    counts = [
        n_partitions // len(graphs) + (1 if i < n_partitions % len(graphs) else 0)
        for i in range(len(graphs))
    ]
    verdicts: list[PartitionVerdict] = []
    serial = 0
    for g, count in zip(graphs, counts):
        if count == 0:
            continue
        for p in sample_partitions(g, count, cfg.seed):
            verdicts.append(
                PartitionVerdict(
                    partition_id=f"{g.id}:p{serial:03d}",
                    size=len(p.vertex_ids),
                    paclp=expressible_paclp(g, p),
                    lpac=expressible_lpac(g, p),
                )
            )
            serial += 1
    return ExpressivenessReport(
        sampled=len(verdicts),
        paclp_count=sum(v.paclp for v in verdicts),
        lpac_count=sum(v.lpac for v in verdicts),
        verdicts=tuple(verdicts),
    )


# ==== policy-combination timing ====

SCENARIOS = ("absolute-permit", "deny", "mixed")
DEFAULT_SIZES = (5, 10, 15, 20)


def gen_scenario_policies(
    g: ProvenanceGraph, count: int, scenario: str, seed: int
) -> list[Policy]:
    """Policies whose targets match the graph by construction; their
    transformations remove small random vertex groups."""
    if scenario not in SCENARIOS:
        raise InfeasibleConfigError(
            f"unknown scenario {scenario!r} (one of: {', '.join(SCENARIOS)})"
        )
    rng = random.Random(f"{seed}:{scenario}:{g.id}")
    candidates = sorted(
        vid for vid, v in g.vertices.items() if v.vtype is not VertexType.ATTRIBUTE
    )
    if not candidates:
        raise InfeasibleConfigError(f"graph {g.id!r} has no non-attribute vertices")
    policies: list[Policy] = []
    for i in range(count):
        picked = rng.sample(candidates, rng.randint(1, min(3, len(candidates))))
        spec = VerticesSpec(NameTest(tuple(sorted(picked))))
        label = rng.choice((DependencyLabel.ORIGINAL, DependencyLabel.FALSE))
        if scenario == "absolute-permit":
            effect = Effect.ABSOLUTE_PERMIT
        elif scenario == "deny":
            effect = Effect.DENY
        else:
            effect = rng.choice((Effect.ABSOLUTE_PERMIT, Effect.DENY))
        policies.append(
            Policy(
                id=f"{scenario}-{i:03d}",
                target=Target(graph_ids=(g.id,)),
                effect=effect,
                transformations=(
                    Transformation(spec, Scope.ORIGINAL, Mode.REMOVE, label),
                ),
            )
        )
    return policies


def bench_combination(
    policies: list[Policy],
    g: ProvenanceGraph,
    repetitions: int = 3,
    *,
    sizes: tuple[int, ...] = DEFAULT_SIZES,
    scenario: str = "custom",
    vcd: CategoryDictionary | None = None,
    emt: EdgeMergeTable | None = None,
) -> list[dict]:
    """Time evaluate() over growing prefixes of the policy list."""
    if repetitions < 1:
        raise InfeasibleConfigError("repetitions must be at least 1")
    vcd = vcd if vcd is not None else CategoryDictionary()
    emt = emt if emt is not None else EdgeMergeTable.default()
    req = AccessRequest(g.id, {})
    rows: list[dict] = []
    for size in sizes:
        if size > len(policies):
            continue
        prefix = policies[:size]
        samples: list[int] = []
        for _ in range(repetitions):
            t0 = time.perf_counter_ns()
            evaluate(req, prefix, g, vcd, emt)
            samples.append(time.perf_counter_ns() - t0)
        rows.append(
            {
                "scenario": scenario,
                "policy_count": size,
                "mean_ns": round(statistics.fmean(samples)),
                "median_ns": round(statistics.median(samples)),
            }
        )
    return rows


def run_combination(
    g: ProvenanceGraph,
    *,
    sizes: tuple[int, ...] = DEFAULT_SIZES,
    repetitions: int = 3,
    seed: int = 0,
) -> list[dict]:
    rows: list[dict] = []
    for scenario in SCENARIOS:
        policies = gen_scenario_policies(g, max(sizes), scenario, seed)
        rows.extend(
            bench_combination(
                policies, g, repetitions, sizes=sizes, scenario=scenario
            )
        )
    return rows


# ==== output files ====

EXPRESSIVENESS_HEADER = ("partition_id", "size", "paclp", "lpac")
TIMING_HEADER = ("scenario", "policy_count", "mean_ns", "median_ns")


def write_expressiveness_csv(report: ExpressivenessReport, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(EXPRESSIVENESS_HEADER)
        for v in report.verdicts:
            w.writerow(
                [v.partition_id, v.size, str(v.paclp).lower(), str(v.lpac).lower()]
            )


def write_timing_csv(rows: Iterable[dict], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(TIMING_HEADER)
        for row in rows:
            w.writerow([row[k] for k in TIMING_HEADER])


def write_manifest(path: str | Path, cfg: GenConfig, extras: dict | None = None) -> None:
    payload = {"config": asdict(cfg)}
    if extras:
        payload.update(extras)
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
