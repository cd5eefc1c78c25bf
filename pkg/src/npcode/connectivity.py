"""Edge/node connectivity, min cuts, and edge-disjoint path search.

Single-pair questions reduce to unit-capacity max-flow with shortest
augmenting paths (each undirected edge carries one unit in at most one
direction); flow decomposition with lowest-edge-id tie-breaking turns
the flow into concrete pairwise edge-disjoint paths, whose count equals
the minimum cut.  Node connectivity goes through the usual node
splitting into in/out halves.

The multi-pair variant (distinct source-receiver pairs that must be
mutually edge-disjoint) is NP-complete in general, so it is solved by
exact backtracking with admissible pruning and an explicit size guard,
except when all sources (or all receivers) coincide, which collapses to
a single max-flow.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterator, Sequence

from .graph import DisjointPathSet, Graph, GraphError, Path

__all__ = [
    "CutReport",
    "MAX_EDGES",
    "MAX_PAIRS",
    "SearchBudgetExceeded",
    "edge_connectivity",
    "find_disjoint_paths_multi",
    "is_k_edge_connected",
    "iter_disjoint_path_sets",
    "max_edge_disjoint_paths",
    "node_connectivity",
]

MAX_PAIRS = 12
MAX_EDGES = 200


class SearchBudgetExceeded(RuntimeError):
    """Instance too large for exact search."""


@dataclass(frozen=True)
class CutReport:
    """A minimum cut: its size and a witness (edge ids or node ids)."""

    value: int
    witness: tuple[str, ...]


# -- unit-capacity undirected max-flow ---------------------------------------------
# flow[e] is -1, 0, or +1: one unit along the edge in the stored (u, v)
# direction (+1), the reverse (-1), or unused.


def _bfs_augment(g: Graph, s: str, t: str, allowed: set[str] | None, flow: dict[str, int]):
    parent: dict[str, tuple[str, str, int] | None] = {s: None}
    queue = deque([s])
    while queue:
        x = queue.popleft()
        for e in g._adj[x]:
            if allowed is not None and e not in allowed:
                continue
            u, v = g.edges[e]
            dirn = 1 if x == u else -1
            if flow.get(e, 0) == dirn:
                continue
            y = v if x == u else u
            if y in parent:
                continue
            parent[y] = (x, e, dirn)
            if y == t:
                node = y
                while parent[node] is not None:
                    px, pe, pd = parent[node]
                    flow[pe] = flow.get(pe, 0) + pd
                    node = px
                return True, parent.keys()
            queue.append(y)
    return False, parent.keys()


def _max_flow(g: Graph, s: str, t: str, allowed: set[str] | None = None):
    """Returns (value, flow map, residual-reachable node set from s)."""
    flow: dict[str, int] = {}
    value = 0
    while True:
        augmented, reach = _bfs_augment(g, s, t, allowed, flow)
        if not augmented:
            return value, flow, set(reach)
        value += 1


def _walk_path(g: Graph, s: str, t: str, flow: dict[str, int]) -> Path:
    """Follow one unit of flow from s to t, splicing out flow cycles."""
    nodes = [s]
    edges: list[str] = []
    pos = {s: 0}
    x = s
    while x != t:
        chosen = None
        for e in g._adj[x]:
            u, v = g.edges[e]
            dirn = 1 if x == u else -1
            if flow.get(e, 0) == dirn:
                chosen = e
                break
        if chosen is None:
            raise AssertionError("flow conservation violated during decomposition")
        y = g.other_end(chosen, x)
        if y in pos:
            i = pos[y]
            for ce in edges[i:]:
                flow[ce] = 0
            flow[chosen] = 0
            for n2 in nodes[i + 1 :]:
                del pos[n2]
            del nodes[i + 1 :]
            del edges[i:]
            x = y
        else:
            edges.append(chosen)
            nodes.append(y)
            pos[y] = len(nodes) - 1
            x = y
    for e in edges:
        flow[e] = 0
    return Path(tuple(nodes), tuple(edges))


def max_edge_disjoint_paths(g: Graph, s: str, r: str) -> DisjointPathSet:
    """A maximum set of pairwise edge-disjoint s-r paths (max-flow value)."""
    g._require_node(s)
    g._require_node(r)
    if s == r:
        raise ValueError("source and receiver must differ")
    value, flow, _ = _max_flow(g, s, r)
    paths = tuple(_walk_path(g, s, r, flow) for _ in range(value))
    return DisjointPathSet(paths)


def _crossing_edges(g: Graph, reach: set[str]) -> tuple[str, ...]:
    return tuple(e for e, (u, v) in g.edges.items() if (u in reach) != (v in reach))


def edge_connectivity(g: Graph) -> CutReport:
    """Size and witness of a smallest edge cut (0 if already disconnected)."""
    if g.num_nodes < 2:
        raise GraphError("edge connectivity needs at least 2 nodes")
    if not g.is_connected():
        return CutReport(0, ())
    nodes = list(g.nodes)
    s = nodes[0]
    best_value = None
    best_witness: tuple[str, ...] = ()
    for t in nodes[1:]:
        value, _, reach = _max_flow(g, s, t)
        if best_value is None or value < best_value:
            best_value = value
            best_witness = _crossing_edges(g, reach)
    return CutReport(best_value, best_witness)


def is_k_edge_connected(g: Graph, k: int) -> bool:
    if k <= 0:
        return True
    if g.num_nodes < 2:
        return False
    if not g.is_connected():
        return False
    return edge_connectivity(g).value >= k


# -- node connectivity via node splitting ------------------------------------------


def _directed_max_flow(n: int, arcs_fn, s: int, t: int):
    """Edmonds-Karp on an arc list built by arcs_fn(add_arc)."""
    adj: list[list[list[int]]] = [[] for _ in range(n)]

    def add_arc(u: int, v: int, cap: int) -> None:
        adj[u].append([v, cap, len(adj[v])])
        adj[v].append([u, 0, len(adj[u]) - 1])

    arcs_fn(add_arc)
    value = 0
    while True:
        parent: list[tuple[int, int] | None] = [None] * n
        parent[s] = (-1, -1)
        queue = deque([s])
        while queue and parent[t] is None:
            x = queue.popleft()
            for ai, arc in enumerate(adj[x]):
                if arc[1] > 0 and parent[arc[0]] is None:
                    parent[arc[0]] = (x, ai)
                    queue.append(arc[0])
        if parent[t] is None:
            reach = {i for i in range(n) if parent[i] is not None}
            return value, adj, reach
        bottleneck = None
        node = t
        while node != s:
            px, ai = parent[node]
            cap = adj[px][ai][1]
            bottleneck = cap if bottleneck is None else min(bottleneck, cap)
            node = px
        node = t
        while node != s:
            px, ai = parent[node]
            arc = adj[px][ai]
            arc[1] -= bottleneck
            adj[arc[0]][arc[2]][1] += bottleneck
            node = px
        value += bottleneck


def node_connectivity(g: Graph) -> CutReport:
    """Fewest node removals that disconnect g (or reduce it to one node)."""
    if g.num_nodes == 0:
        raise GraphError("node connectivity needs at least 1 node")
    if g.num_nodes == 1:
        return CutReport(0, ())
    if not g.is_connected():
        return CutReport(0, ())
    nodes = list(g.nodes)
    index = {v: i for i, v in enumerate(nodes)}
    non_adjacent = [
        (x, y)
        for i, x in enumerate(nodes)
        for y in nodes[i + 1 :]
        if y not in g.neighbors(x)
    ]
    if not non_adjacent:
        # every pair adjacent: removals can only reduce to a one-node graph
        return CutReport(g.num_nodes - 1, tuple(nodes[1:]))
    big = g.num_nodes
    best_value = None
    best_witness: tuple[str, ...] = ()
    for s, t in non_adjacent:
        n2 = 2 * len(nodes)

        def build(add_arc, s=s, t=t):
            for v in nodes:
                cap = big if v in (s, t) else 1
                add_arc(2 * index[v], 2 * index[v] + 1, cap)
            for u, v in g.edges.values():
                add_arc(2 * index[u] + 1, 2 * index[v], big)
                add_arc(2 * index[v] + 1, 2 * index[u], big)

        value, _, reach = _directed_max_flow(n2, build, 2 * index[s] + 1, 2 * index[t])
        if best_value is None or value < best_value:
            best_value = value
            best_witness = tuple(
                v for v in nodes if 2 * index[v] in reach and 2 * index[v] + 1 not in reach
            )
    return CutReport(best_value, best_witness)


# -- multi-pair edge-disjoint paths --------------------------------------------------


def _check_guard(g: Graph, pairs: Sequence[tuple[str, str]]) -> None:
    if len(pairs) > MAX_PAIRS or g.num_edges > MAX_EDGES:
        raise SearchBudgetExceeded(
            f"instance too large for exact search "
            f"({len(pairs)} pairs > {MAX_PAIRS} or {g.num_edges} edges > {MAX_EDGES})"
        )


def _validate_pairs(g: Graph, pairs: Sequence[tuple[str, str]]) -> None:
    if not pairs:
        raise ValueError("need at least one source-receiver pair")
    for s, r in pairs:
        g._require_node(s)
        g._require_node(r)
        if s == r:
            raise ValueError(f"pair has identical endpoints {s!r}")


def _fresh_id(existing, prefix: str) -> str:
    i = 0
    while f"{prefix}{i}" in existing:
        i += 1
    return f"{prefix}{i}"


def _shared_source_flow(g: Graph, pairs: Sequence[tuple[str, str]]) -> DisjointPathSet | None:
    """All pairs share a source: a super-sink max-flow settles it exactly."""
    source = pairs[0][0]
    aux = g.copy()
    sink = aux.add_node("relay", _fresh_id(aux.nodes, "_sink"))
    tag_of = {}
    for i, (_, r) in enumerate(pairs):
        eid = aux.add_edge(r, sink, _fresh_id(aux.edges, f"_snk{i}_"))
        tag_of[eid] = i
    value, flow, _ = _max_flow(aux, source, sink)
    if value < len(pairs):
        return None
    result: list[Path | None] = [None] * len(pairs)
    for _ in range(value):
        walk = _walk_path(aux, source, sink, flow)
        pair_idx = tag_of[walk.edges[-1]]
        result[pair_idx] = Path(walk.nodes[:-1], walk.edges[:-1])
    return DisjointPathSet(tuple(result))


def _reverse_path(p: Path) -> Path:
    return Path(tuple(reversed(p.nodes)), tuple(reversed(p.edges)))


def _bfs_dist(g: Graph, s: str, t: str, allowed: set[str] | None) -> int | None:
    if s == t:
        return 0
    dist = {s: 0}
    queue = deque([s])
    while queue:
        x = queue.popleft()
        for e in g._adj[x]:
            if allowed is not None and e not in allowed:
                continue
            y = g.other_end(e, x)
            if y not in dist:
                dist[y] = dist[x] + 1
                if y == t:
                    return dist[y]
                queue.append(y)
    return None


def _remaining_bound(g: Graph, pairs, start: int, allowed: set[str]) -> int | None:
    """Admissible lower bound on edges still needed; None if hopeless."""
    total = 0
    groups: dict[tuple[str, str], int] = {}
    for s, r in pairs[start:]:
        d = _bfs_dist(g, s, r, allowed)
        if d is None:
            return None
        total += d
        groups[(s, r)] = groups.get((s, r), 0) + 1
    for (s, r), count in groups.items():
        if count > 1:
            value, _, _ = _max_flow(g, s, r, allowed)
            if value < count:
                return None
    return total


def _iter_simple_paths(
    g: Graph, s: str, r: str, allowed: set[str], max_len: int | None
) -> Iterator[Path]:
    """Simple s-r paths in lexicographic edge order, length-pruned."""
    nodes = [s]
    edges: list[str] = []
    on_path = {s}

    def rec() -> Iterator[Path]:
        x = nodes[-1]
        if x == r:
            yield Path(tuple(nodes), tuple(edges))
            return
        if max_len is not None:
            rest = _bfs_dist(g, x, r, allowed - set(edges))
            if rest is None or len(edges) + rest > max_len:
                return
        for e in sorted(g._adj[x], key=g.edge_order):
            if e not in allowed or e in edges:
                continue
            y = g.other_end(e, x)
            if y in on_path:
                continue
            nodes.append(y)
            edges.append(e)
            on_path.add(y)
            yield from rec()
            nodes.pop()
            edges.pop()
            on_path.remove(y)

    yield from rec()


def iter_disjoint_path_sets(
    g: Graph, pairs: Sequence[tuple[str, str]], allowed: set[str] | None = None
) -> Iterator[DisjointPathSet]:
    """Exhaustively enumerate every pairwise edge-disjoint path assignment."""
    _validate_pairs(g, pairs)
    _check_guard(g, pairs)
    pool = set(g.edges) if allowed is None else set(allowed)

    def rec(i: int, avail: set[str]) -> Iterator[list[Path]]:
        if i == len(pairs):
            yield []
            return
        if _remaining_bound(g, pairs, i, avail) is None:
            return
        s, r = pairs[i]
        for path in _iter_simple_paths(g, s, r, avail, None):
            rest_avail = avail - set(path.edges)
            for rest in rec(i + 1, rest_avail):
                yield [path] + rest

    for combo in rec(0, pool):
        yield DisjointPathSet(tuple(combo))


def find_disjoint_paths_multi(
    g: Graph, pairs: Sequence[tuple[str, str]]
) -> DisjointPathSet | None:
    """Exact search for mutually edge-disjoint paths, one per pair.

    Returns a witness set or None once the search space is exhausted.
    Coinciding sources (or receivers) short-circuit to a polynomial
    max-flow; otherwise iterative deepening on the total edge count with
    per-pair residual reachability/flow pruning keeps the backtracking
    honest without losing completeness.
    """
    _validate_pairs(g, pairs)
    _check_guard(g, pairs)
    sources = {s for s, _ in pairs}
    receivers = {r for _, r in pairs}
    if len(sources) == 1:
        return _shared_source_flow(g, pairs)
    if len(receivers) == 1:
        flipped = [(r, s) for s, r in pairs]
        found = _shared_source_flow(g, flipped)
        if found is None:
            return None
        return DisjointPathSet(tuple(_reverse_path(p) for p in found.paths))

    all_edges = set(g.edges)
    base = _remaining_bound(g, pairs, 0, all_edges)
    if base is None:
        return None

    def dfs(i: int, budget: int, avail: set[str]) -> list[Path] | None:
        if i == len(pairs):
            return []
        bound = _remaining_bound(g, pairs, i, avail)
        if bound is None or bound > budget:
            return None
        s, r = pairs[i]
        rest_bound = _remaining_bound(g, pairs, i + 1, avail)
        if rest_bound is None:
            rest_bound = 0
        for path in _iter_simple_paths(g, s, r, avail, budget - rest_bound):
            rest = dfs(i + 1, budget - len(path), avail - set(path.edges))
            if rest is not None:
                return [path] + rest
        return None

    for budget in range(base, g.num_edges + 1):
        combo = dfs(0, budget, all_edges)
        if combo is not None:
            return DisjointPathSet(tuple(combo))
    return None
