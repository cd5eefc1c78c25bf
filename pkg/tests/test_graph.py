import json
from pathlib import Path as FsPath

import pytest

from npcode.connectivity import edge_connectivity
from npcode.graph import (
    DisjointPathSet,
    Graph,
    GraphError,
    GraphFormatError,
    Path,
    connected_within,
    load,
    save,
)

FIG2 = FsPath(__file__).parent / "data" / "fig2.json"


def test_basic_mutation_and_degrees():
    g = Graph()
    a = g.add_node()
    b = g.add_node("receiver")
    e = g.add_edge(a, b)
    assert g.degree(a) == g.degree(b) == 1
    assert g.neighbors(a) == {b}
    assert g.endpoints(e) == (a, b)


def test_triangle_degrees():
    g = Graph()
    ids = [g.add_node() for _ in range(3)]
    for i in range(3):
        g.add_edge(ids[i], ids[(i + 1) % 3])
    assert all(g.degree(v) == 2 for v in ids)


def test_multigraph_double_edge_counts_twice():
    g = Graph()
    u, v = g.add_node(), g.add_node()
    g.add_edge(u, v)
    g.add_edge(u, v)
    assert g.degree(u) == 2
    assert g.neighbors(u) == {v}
    assert g.has_parallel(u, v)


def test_degree_sum_is_twice_edges():
    import random

    rng = random.Random(0)
    for _ in range(20):
        g = Graph()
        nodes = [g.add_node() for _ in range(rng.randrange(2, 9))]
        for _ in range(rng.randrange(0, 15)):
            u, v = rng.sample(nodes, 2)
            g.add_edge(u, v)
        assert sum(g.degree(v) for v in g.nodes) == 2 * g.num_edges


def test_errors():
    g = Graph()
    a = g.add_node()
    with pytest.raises(GraphError):
        g.add_edge(a, a)
    with pytest.raises(GraphError):
        g.add_edge(a, "ghost")
    with pytest.raises(GraphError):
        g.remove_edge("nope")
    with pytest.raises(GraphError):
        g.add_node(role="router")
    b = g.add_node(node_id="b")
    with pytest.raises(GraphError):
        g.add_node(node_id="b")
    e = g.add_edge(a, b)
    with pytest.raises(GraphError):
        g.add_edge(a, b, edge_id=e)


def test_remove_and_readd_restores_connectivity():
    g = Graph()
    ids = [g.add_node() for _ in range(4)]
    for i in range(4):
        g.add_edge(ids[i], ids[(i + 1) % 4], f"c{i}")
    before = edge_connectivity(g).value
    g.remove_edge("c2")
    assert edge_connectivity(g).value == 1
    g.add_edge(ids[2], ids[3], "c2")
    assert edge_connectivity(g).value == before == 2


def test_save_load_round_trip():
    g = Graph()
    s = g.add_node("source", "s")
    r = g.add_node("receiver", "r")
    w = g.add_node("relay", "w")
    g.add_edge(s, w, "a")
    g.add_edge(w, r, "b")
    g.add_edge(s, r, "c")
    reparsed = load(save(g))
    assert reparsed.nodes == g.nodes
    assert reparsed.edges == g.edges
    assert json.loads(save(reparsed)) == json.loads(save(g))


def test_load_rejects_bad_documents():
    ok = {"nodes": [{"id": "a", "role": "relay"}, {"id": "b", "role": "relay"}],
          "edges": [{"id": "e", "u": "a", "v": "b"}]}
    load(json.dumps(ok))
    bad_endpoint = {"nodes": ok["nodes"], "edges": [{"id": "e", "u": "a", "v": "zz"}]}
    with pytest.raises(GraphFormatError):
        load(json.dumps(bad_endpoint))
    dup_node = {"nodes": ok["nodes"] + [{"id": "a", "role": "relay"}], "edges": []}
    with pytest.raises(GraphFormatError):
        load(json.dumps(dup_node))
    self_loop = {"nodes": ok["nodes"], "edges": [{"id": "e", "u": "a", "v": "a"}]}
    with pytest.raises(GraphFormatError):
        load(json.dumps(self_loop))
    bad_role = {"nodes": [{"id": "a", "role": "router"}], "edges": []}
    with pytest.raises(GraphFormatError):
        load(json.dumps(bad_role))
    with pytest.raises(GraphFormatError):
        load("not json at all")
    with pytest.raises(GraphFormatError):
        load(json.dumps([1, 2, 3]))
    dup_edge = {"nodes": ok["nodes"], "edges": [ok["edges"][0], ok["edges"][0]]}
    with pytest.raises(GraphFormatError):
        load(json.dumps(dup_edge))


def test_fig2_fixture_file_loads():
    g = load(FIG2.read_text())
    assert g.num_nodes == 10
    assert g.num_edges == 15
    assert g.nodes_with_role("source") == ["b1"]
    assert set(g.nodes_with_role("receiver")) == {"d1", "e1", "b2"}
    assert all(g.degree(v) == 3 for v in g.nodes)


def test_path_validation():
    g = Graph()
    a, b, c = (g.add_node() for _ in range(3))
    e1 = g.add_edge(a, b)
    e2 = g.add_edge(b, c)
    p = Path((a, b, c), (e1, e2))
    p.validate(g)
    assert p.start == a and p.end == c and len(p) == 2
    with pytest.raises(GraphError):
        Path((a, c), (e1,)).validate(g)  # wrong endpoints
    with pytest.raises(GraphError):
        Path((a, b, a), (e1, e1)).validate(g)  # repeats node and edge
    e3 = g.add_edge(a, c)
    good = DisjointPathSet((Path((a, b), (e1,)), Path((a, c), (e3,))))
    good.validate(g)
    bad = DisjointPathSet((Path((a, b), (e1,)), Path((c, b, a), (e2, e1))))
    with pytest.raises(GraphError):
        bad.validate(g)


def test_connected_within():
    g = Graph()
    a, b, c = (g.add_node() for _ in range(3))
    e1 = g.add_edge(a, b)
    g.add_edge(b, c)
    assert connected_within(g, [a, c])
    assert not connected_within(g, [a, c], {e1})
    assert connected_within(g, [a])
