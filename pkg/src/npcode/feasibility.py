"""Protection-deployment feasibility: paths plus source/receiver trees.

An instance is deployable when three structures coexist in the graph:
k pairwise edge-disjoint paths (one per source-receiver pair), a tree
connecting all sources, and a tree connecting all receivers.  In strict
mode (the default) the three edge sets must be pairwise disjoint; the
relaxed flag lets the trees reuse path edges, which weakens the verdict
(the bridged 3-regular counterexample below is relaxed-feasible but
strictly infeasible).

The search is exact: path assignments are enumerated exhaustively (with
flow-based pruning) and, for each, minimal source-connecting trees are
enumerated in the leftover edges until a receiver tree fits too.  A
"feasible" answer always carries a full witness; an "infeasible" answer
means the whole space was exhausted.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Iterator, Sequence

from .connectivity import (
    SearchBudgetExceeded,
    find_disjoint_paths_multi,
    is_k_edge_connected,
    iter_disjoint_path_sets,
)
from .graph import DisjointPathSet, Graph, GraphError, connected_within

__all__ = [
    "FeasibilityReport",
    "InfeasibleInstanceError",
    "ProtectionInstance",
    "build_fig2_fixture",
    "check_feasibility",
    "check_single_source",
    "verify_report",
]

_TREE_ENUM_CAP = 1_000_000
_PAIRING_MAX = 6
_HAMILTON_MAX = 16

REASON_PATHS = "paths"
REASON_SOURCE_TREE = "source-tree"
REASON_RECEIVER_TREE = "receiver-tree"


class InfeasibleInstanceError(ValueError):
    """Raised by callers that require a feasible instance."""

    def __init__(self, report: "FeasibilityReport"):
        super().__init__(f"instance infeasible: {report.failure_reason}")
        self.report = report


@dataclass(frozen=True)
class ProtectionInstance:
    """A graph with ordered sources S and receivers R to protect.

    Accepted shapes: |S| = |R| = k (pairs by index), |S| = 1 with k
    receivers, or |S| = |R| = 1 with num_paths = k parallel demands.
    """

    graph: Graph
    sources: tuple[str, ...]
    receivers: tuple[str, ...]
    num_paths: int | None = None

    def __init__(self, graph: Graph, sources: Sequence[str], receivers: Sequence[str],
                 num_paths: int | None = None):
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "sources", tuple(sources))
        object.__setattr__(self, "receivers", tuple(receivers))
        object.__setattr__(self, "num_paths", num_paths)
        self._validate()

    def _validate(self) -> None:
        s, r = self.sources, self.receivers
        if not s or not r:
            raise ValueError("sources and receivers must be non-empty")
        if len(set(s)) != len(s) or len(set(r)) != len(r):
            raise ValueError("duplicate node in sources or receivers")
        if set(s) & set(r):
            raise ValueError("sources and receivers must be disjoint node sets")
        for node in (*s, *r):
            self.graph._require_node(node)
        if len(s) == 1:
            if len(r) == 1:
                if self.num_paths is not None and self.num_paths < 1:
                    raise ValueError("num_paths must be positive")
            elif self.num_paths not in (None, len(r)):
                raise ValueError("num_paths must equal the receiver count")
        elif len(s) == len(r):
            if self.num_paths not in (None, len(s)):
                raise ValueError("num_paths must equal the pair count")
        else:
            raise ValueError("need |S| = |R|, or a single source")

    @property
    def k(self) -> int:
        if len(self.sources) == 1:
            if len(self.receivers) == 1:
                return self.num_paths if self.num_paths is not None else 1
            return len(self.receivers)
        return len(self.sources)

    def pairs(self) -> list[tuple[str, str]]:
        if len(self.sources) == 1:
            if len(self.receivers) == 1:
                return [(self.sources[0], self.receivers[0])] * self.k
            return [(self.sources[0], r) for r in self.receivers]
        return list(zip(self.sources, self.receivers))


@dataclass(frozen=True)
class FeasibilityReport:
    feasible: bool
    paths: DisjointPathSet | None = None
    source_tree: tuple[str, ...] = ()
    receiver_tree: tuple[str, ...] = ()
    failure_reason: str | None = None
    relaxed: bool = False
    pairing: tuple[str, ...] | None = None
    k_edge_connected: bool | None = None
    hamiltonian: bool | None = None


# -- tree machinery -----------------------------------------------------------------


def _prune_to_terminals(g: Graph, edges: frozenset[str], terminals: set[str]) -> tuple[str, ...]:
    """Drop leaf branches that end outside the terminal set."""
    chosen = set(edges)
    while True:
        degree: dict[str, list[str]] = {}
        for e in chosen:
            u, v = g.edges[e]
            degree.setdefault(u, []).append(e)
            degree.setdefault(v, []).append(e)
        removable = [
            elist[0]
            for node, elist in degree.items()
            if len(elist) == 1 and node not in terminals
        ]
        if not removable:
            break
        chosen.difference_update(removable)
    return tuple(sorted(chosen, key=g.edge_order))


def _tree_for_terminals(g: Graph, pool: set[str], terminals: Sequence[str]) -> tuple[str, ...] | None:
    """First tree connecting the terminals inside the pool, or None."""
    terms = list(terminals)
    if len(terms) <= 1:
        return ()
    root = terms[0]
    parent_edge: dict[str, str] = {}
    seen = {root}
    queue = [root]
    while queue:
        x = queue.pop(0)
        for e in g._adj[x]:
            if e not in pool:
                continue
            y = g.other_end(e, x)
            if y not in seen:
                seen.add(y)
                parent_edge[y] = e
                queue.append(y)
    if not set(terms) <= seen:
        return None
    chosen: set[str] = set()
    for t in terms[1:]:
        node = t
        while node != root:
            e = parent_edge[node]
            if e in chosen:
                break
            chosen.add(e)
            node = g.other_end(e, node)
    return _prune_to_terminals(g, frozenset(chosen), set(terms))


def _iter_steiner_trees(g: Graph, pool: set[str], terminals: Sequence[str]) -> Iterator[frozenset[str]]:
    """All inclusion-minimal trees connecting the terminals, each once."""
    terms = set(terminals)
    if len(terms) <= 1:
        yield frozenset()
        return
    root = next(iter(terminals))
    seen_trees: set[frozenset[str]] = set()
    states = 0

    def reachable_ok(component: set[str], banned: set[str]) -> bool:
        live = pool - banned
        seen = set(component)
        stack = list(component)
        while stack:
            x = stack.pop()
            for e in g._adj[x]:
                if e not in live:
                    continue
                y = g.other_end(e, x)
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return terms <= seen

    def rec(component: set[str], chosen: tuple[str, ...], banned: set[str]) -> Iterator[frozenset[str]]:
        nonlocal states
        states += 1
        if states > _TREE_ENUM_CAP:
            raise SearchBudgetExceeded("tree enumeration cap exceeded")
        if terms <= component:
            tree = frozenset(_prune_to_terminals(g, frozenset(chosen), terms))
            if tree not in seen_trees:
                seen_trees.add(tree)
                yield tree
            return
        boundary = None
        for e in sorted(pool - banned, key=g.edge_order):
            if e in chosen:
                continue
            u, v = g.edges[e]
            if (u in component) != (v in component):
                boundary = e
                break
        if boundary is None:
            return
        u, v = g.edges[boundary]
        grown = v if u in component else u
        yield from rec(component | {grown}, chosen + (boundary,), banned)
        banned2 = banned | {boundary}
        if reachable_ok(component, banned2):
            yield from rec(component, chosen, banned2)

    yield from rec({root}, (), set())


# -- the feasibility search -----------------------------------------------------------


def _witness_for_path_set(
    g: Graph,
    paths: DisjointPathSet,
    sources: Sequence[str],
    receivers: Sequence[str],
    relaxed: bool,
) -> tuple[tuple[str, ...] | None, tuple[str, ...] | None, bool]:
    """Try to place both trees around a fixed path set.

    Returns (source_tree, receiver_tree, source_tree_found); the trees
    are None when no placement exists for this path set.  An empty
    tuple is a valid tree for a single terminal.
    """
    used = paths.edge_ids()
    spool = set(g.edges) if relaxed else set(g.edges) - used
    if len(sources) <= 1:
        rtree = _tree_for_terminals(g, spool, receivers)
        if rtree is not None:
            return (), rtree, True
        return None, None, True
    source_tree_found = False
    for stree in _iter_steiner_trees(g, spool, sources):
        source_tree_found = True
        rtree = _tree_for_terminals(g, spool - stree, receivers)
        if rtree is not None:
            return tuple(sorted(stree, key=g.edge_order)), rtree, True
    return None, None, source_tree_found


def _search(g: Graph, pairs: list[tuple[str, str]], sources, receivers, relaxed: bool):
    """Exact witness search; returns a report without pairing metadata."""
    fast = find_disjoint_paths_multi(g, pairs)
    if fast is None:
        return FeasibilityReport(False, failure_reason=REASON_PATHS, relaxed=relaxed)
    any_source_tree = False
    stree, rtree, s_found = _witness_for_path_set(g, fast, sources, receivers, relaxed)
    any_source_tree = any_source_tree or s_found
    if rtree is not None:
        return FeasibilityReport(True, fast, stree, rtree, relaxed=relaxed)
    for candidate in iter_disjoint_path_sets(g, pairs):
        stree, rtree, s_found = _witness_for_path_set(g, candidate, sources, receivers, relaxed)
        any_source_tree = any_source_tree or s_found
        if rtree is not None:
            return FeasibilityReport(True, candidate, stree, rtree, relaxed=relaxed)
    if len(sources) > 1 and not any_source_tree:
        return FeasibilityReport(False, failure_reason=REASON_SOURCE_TREE, relaxed=relaxed)
    return FeasibilityReport(False, failure_reason=REASON_RECEIVER_TREE, relaxed=relaxed)


def check_feasibility(
    inst: ProtectionInstance,
    relaxed: bool = False,
    pairing: str = "fixed",
) -> FeasibilityReport:
    """Decide deployability and produce a witness or a certified refusal.

    pairing="fixed" keeps the given source/receiver index pairing;
    "auto" tries every receiver permutation (pair count <= 6 only).
    """
    g = inst.graph
    if pairing not in ("fixed", "auto"):
        raise ValueError(f"unknown pairing mode {pairing!r}")
    if pairing == "auto" and len(inst.sources) > 1:
        if len(inst.sources) > _PAIRING_MAX:
            raise SearchBudgetExceeded(
                f"auto pairing supports at most {_PAIRING_MAX} pairs"
            )
        fixed_report = None
        for perm in permutations(inst.receivers):
            pairs = list(zip(inst.sources, perm))
            report = _search(g, pairs, inst.sources, perm, relaxed)
            if report.feasible:
                return FeasibilityReport(
                    True, report.paths, report.source_tree, report.receiver_tree,
                    relaxed=relaxed, pairing=perm,
                )
            if fixed_report is None:
                fixed_report = report
        return FeasibilityReport(
            False, failure_reason=fixed_report.failure_reason, relaxed=relaxed
        )
    return _search(g, inst.pairs(), inst.sources, inst.receivers, relaxed)


def check_single_source(inst: ProtectionInstance, relaxed: bool = False) -> FeasibilityReport:
    """Single-source feasibility plus the sufficient-condition report.

    Also answers whether the graph is k-edge connected and (for up to
    16 nodes, by exact backtracking) whether it carries a Hamiltonian
    cycle; together these two are a sufficient condition for
    deployability from any source to any k receivers.
    """
    if len(inst.sources) != 1:
        raise ValueError("check_single_source needs exactly one source")
    base = check_feasibility(inst, relaxed=relaxed)
    g = inst.graph
    k_conn = is_k_edge_connected(g, inst.k)
    ham = _hamiltonian_cycle_exists(g) if g.num_nodes <= _HAMILTON_MAX else None
    return FeasibilityReport(
        base.feasible, base.paths, base.source_tree, base.receiver_tree,
        base.failure_reason, relaxed, base.pairing, k_conn, ham,
    )


def _hamiltonian_cycle_exists(g: Graph) -> bool:
    n = g.num_nodes
    if n < 3:
        return False
    if not g.is_connected():
        return False
    if any(g.degree(v) < 2 for v in g.nodes):
        return False
    nodes = list(g.nodes)
    start = nodes[0]
    adj = {v: sorted(g.neighbors(v)) for v in nodes}
    visited = {start}
    order = [start]

    def rec() -> bool:
        x = order[-1]
        if len(order) == n:
            return start in adj[x]
        for y in adj[x]:
            if y not in visited:
                visited.add(y)
                order.append(y)
                if rec():
                    return True
                order.pop()
                visited.remove(y)
        return False

    return rec()


# -- independent witness verification -------------------------------------------------


def verify_report(inst: ProtectionInstance, report: FeasibilityReport) -> list[str]:
    """Re-check a feasible report's witness from scratch; returns problems."""
    problems: list[str] = []
    if not report.feasible:
        return ["report is not feasible; nothing to verify"]
    g = inst.graph
    paths = report.paths
    pairs = (
        list(zip(inst.sources, report.pairing))
        if report.pairing is not None
        else inst.pairs()
    )
    if paths is None or len(paths) != len(pairs):
        return ["witness path count does not match the instance"]
    try:
        paths.validate(g)
    except GraphError as exc:
        problems.append(f"paths invalid: {exc}")
    for p, (s, r) in zip(paths, pairs):
        if p.start != s or p.end != r:
            problems.append(f"path endpoints {p.start}-{p.end} differ from pair {s}-{r}")
    receiver_terms = list(dict.fromkeys(r for _, r in pairs))
    for name, tree, terms in (
        ("source tree", report.source_tree, list(inst.sources)),
        ("receiver tree", report.receiver_tree, receiver_terms),
    ):
        if len(terms) <= 1:
            if tree:
                problems.append(f"{name} should be empty for a single terminal")
            continue
        if not tree:
            problems.append(f"{name} missing")
            continue
        nodes_in_tree: set[str] = set()
        for e in tree:
            if e not in g.edges:
                problems.append(f"{name} uses unknown edge {e!r}")
                break
            nodes_in_tree.update(g.edges[e])
        else:
            # connected with |V|-1 edges means acyclic, hence a tree
            if len(tree) != len(nodes_in_tree) - 1 or not connected_within(
                g, list(nodes_in_tree), set(tree)
            ):
                problems.append(f"{name} is not a tree")
            if not connected_within(g, terms, set(tree)) or not set(terms) <= nodes_in_tree:
                problems.append(f"{name} does not span its terminals")
    path_edges = paths.edge_ids() if paths else set()
    stree, rtree = set(report.source_tree), set(report.receiver_tree)
    if stree & rtree:
        problems.append("source and receiver trees share edges")
    if not report.relaxed:
        if path_edges & stree:
            problems.append("source tree reuses path edges in strict mode")
        if path_edges & rtree:
            problems.append("receiver tree reuses path edges in strict mode")
    return problems


# -- the 3-regular bridged counterexample ---------------------------------------------


def build_fig2_fixture() -> ProtectionInstance:
    """A 10-node 3-regular graph where deployment provably fails.

    Two blocks, each a 5-cycle a-b-c-d-e with chords b-d and c-e, joined
    by the single bridge a1-a2.  Every degree is 3 and the bridge is a
    cut edge, so paths from the source to the far-side receiver always
    consume the bridge and the receivers cannot be interconnected
    afterwards: the receiver-tree condition fails for every path choice.
    """
    g = Graph()
    for blk in ("1", "2"):
        for name in "abcde":
            g.add_node("relay", f"{name}{blk}")
        cycle = ["a", "b", "c", "d", "e"]
        for i, x in enumerate(cycle):
            y = cycle[(i + 1) % 5]
            g.add_edge(f"{x}{blk}", f"{y}{blk}")
        g.add_edge(f"b{blk}", f"d{blk}")
        g.add_edge(f"c{blk}", f"e{blk}")
    g.add_edge("a1", "a2")
    g.set_role("b1", "source")
    for r in ("d1", "e1", "b2"):
        g.set_role(r, "receiver")
    return ProtectionInstance(g, ("b1",), ("d1", "e1", "b2"))
