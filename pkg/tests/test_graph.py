import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strand_id.channel import consistent_with_codeword
from strand_id.graph import (
    NodeClass,
    address_orders,
    build_graph,
    classify,
    confusability_graph,
    dump_graph,
    has_cycle,
    labelling_digraph,
    labelling_digraph_has_cycle,
    subcube,
    two_hop,
    two_hop_sizes,
)
from strand_id.model import generate_instance, instance_from_words


def dfs_has_cycle(graph):
    """Cycle search by DFS on the bipartite graph; nodes are ('x', i) / ('r', j)."""
    adj = {}
    for x, r in graph.edges():
        adj.setdefault(("x", x), []).append(("r", r))
        adj.setdefault(("r", r), []).append(("x", x))
    seen = set()
    for start in adj:
        if start in seen:
            continue
        stack = [(start, None)]
        while stack:
            node, parent = stack.pop()
            if node in seen:
                return True
            seen.add(node)
            stack.extend((nb, node) for nb in adj[node] if nb != parent)
    return False


def test_subcube():
    assert sorted(subcube(0b100, 0b011)) == [4, 5, 6, 7]
    assert subcube(5, 0) == [5]


def test_edges_match_consistency():
    inst = generate_instance(3, 1, 2, 0.4, 4)
    g = build_graph(inst)
    want = {(x, r.read_id) for r in inst.reads for x in range(8) if consistent_with_codeword(r.address, x)}
    assert set(g.edges()) == want


def test_fig1_classes(fig1):
    g = build_graph(fig1)
    assert classify(g, address=0b00) is NodeClass.TYPE_B_LEFT
    assert classify(g, address=0b10) is NodeClass.TYPE_A_LEFT
    assert classify(g, address=0b11) is NodeClass.TYPE_A_LEFT
    assert classify(g, address=0b01) is NodeClass.ORDINARY
    assert classify(g, read=0) is NodeClass.GOOD_RIGHT
    assert classify(g, read=3) is NodeClass.ORDINARY
    with pytest.raises(TypeError):
        classify(g)


def test_fig2_two_hop(fig2):
    g = build_graph(fig2)
    assert sorted(two_hop(g, 5)) == [2, 3, 4]
    assert len(two_hop(g, 2)) == 5
    assert list(two_hop_sizes(fig2)) == [len(two_hop(g, r)) for r in range(6)]


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.floats(0.05, 0.9), st.integers(0, 2**30))
def test_union_find_matches_dfs(n, N, p, seed):
    g = build_graph(generate_instance(n, 1, N, p, seed))
    assert has_cycle(g) == dfs_has_cycle(g)


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 4), st.integers(1, 3), st.floats(0.05, 0.9), st.integers(0, 2**30))
def test_two_hop_sizes_vectorised(n, N, p, seed):
    inst = generate_instance(n, 1, N, p, seed)
    g = build_graph(inst)
    assert list(two_hop_sizes(inst, block=3)) == [len(two_hop(g, r)) for r in range(inst.num_reads)]


def test_orders_are_powers_of_two():
    inst = generate_instance(5, 1, 3, 0.5, 2)
    orders = address_orders(inst)
    assert all(o & (o - 1) == 0 for o in orders)
    g = build_graph(inst)
    for x in range(inst.M):
        assert orders[x] == min(len(g.right[r.read_id]) for r in inst.reads if r.true_source == x)


def test_labelling_digraph_cycle():
    # each group fully erased: both addresses are candidates for both groups
    inst = instance_from_words(1, 1, [("*", "0", 0), ("*", "1", 1)])
    assert sorted(labelling_digraph(inst)) == [(0, 1), (1, 0)]
    assert labelling_digraph_has_cycle(inst)
    inst = instance_from_words(1, 1, [("0", "0", 0), ("*", "1", 1)])
    assert not labelling_digraph_has_cycle(inst)


def test_confusability_edges():
    inst = instance_from_words(2, 1, [("0*", "0", 0), ("0*", "0", 1), ("11", "0", 3), ("1*", "0", 2)])
    t = confusability_graph(inst)
    assert t.edges == {(0, 1), (1, 0), (2, 3)}
    assert not t.connected


def test_dump_graph(tmp_path, fig1):
    dump_graph(build_graph(fig1), tmp_path / "g.txt")
    lines = (tmp_path / "g.txt").read_text().splitlines()
    k = lines.index("# classes")
    assert len(lines[:k]) == build_graph(fig1).num_edges()
    assert lines[k + 1].split()[0] == "good_right"
    assert any(line.split()[:1] == [NodeClass.TYPE_A_LEFT.value] and "2" in line.split() for line in lines[k:])
