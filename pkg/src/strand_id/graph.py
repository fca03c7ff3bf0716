"""Identification graph G and the derived structures G'' and T.

Left nodes are the 2^n addresses (plain ints), right nodes are read ids.
Because the address book is the whole space, the candidate set of a read is
the subcube spanned by its erased positions; it is enumerated once at build
time (n <= 12 at desk scale keeps every set below 4096 entries).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from strand_id.model import Instance

ENUMERATION_CUTOFF = 1 << 12


class NodeClass(enum.Enum):
    GOOD_RIGHT = "good_right"
    TYPE_A_LEFT = "type_a"
    TYPE_B_LEFT = "type_b"
    ORDINARY = "ordinary"


def subcube(value: int, mask: int) -> list[int]:
    """All addresses agreeing with ``value`` outside ``mask``."""
    base = value & ~mask
    out = []
    sub = mask
    while True:
        out.append(base | sub)
        if sub == 0:
            return out
        sub = (sub - 1) & mask


class IdentGraph:
    """Mutable bipartite graph between addresses and reads.

    ``right[r]`` is the set of candidate addresses of read ``r`` and
    ``left[x]`` the set of reads adjacent to address ``x``.  ``pattern``
    keeps each read's candidate set in (value, mask) form for as long as it
    remains a subcube; peeling may break that, pruning never does.
    """

    def __init__(self, n: int, N: int, patterns: list[tuple[int, int]]):
        self.n = n
        self.N = N
        self.pattern = list(patterns)
        self.right: list[set[int]] = []
        self.left: list[set[int]] = [set() for _ in range(1 << n)]
        for rid, (value, mask) in enumerate(patterns):
            if 1 << bin(mask).count("1") > ENUMERATION_CUTOFF:
                raise ValueError(f"read {rid} has more than {ENUMERATION_CUTOFF} candidates")
            cands = set(subcube(value, mask))
            self.right.append(cands)
            for x in cands:
                self.left[x].add(rid)

    @property
    def M(self) -> int:
        return 1 << self.n

    @property
    def num_reads(self) -> int:
        return len(self.right)

    def edges(self):
        for rid, cands in enumerate(self.right):
            for x in cands:
                yield x, rid

    def num_edges(self) -> int:
        return sum(len(c) for c in self.right)

    def copy(self) -> "IdentGraph":
        g = IdentGraph.__new__(IdentGraph)
        g.n, g.N = self.n, self.N
        g.pattern = list(self.pattern)
        g.right = [set(c) for c in self.right]
        g.left = [set(c) for c in self.left]
        return g

    def restrict(self, rid: int, value: int, mask: int) -> None:
        """Shrink the candidate set of ``rid`` to the subcube (value, mask)."""
        keep = set(subcube(value, mask))
        for x in self.right[rid] - keep:
            self.left[x].discard(rid)
        self.right[rid] &= keep
        self.pattern[rid] = (value & ~mask, mask)

    def good_count(self, x: int) -> int:
        return sum(1 for r in self.left[x] if len(self.right[r]) == 1)


def build_graph(instance: Instance) -> IdentGraph:
    vals, masks = instance.address_arrays
    return IdentGraph(instance.n, instance.N, list(zip(vals.tolist(), masks.tolist())))


def classify(graph: IdentGraph, *, address: int | None = None, read: int | None = None) -> NodeClass:
    if (address is None) == (read is None):
        raise TypeError("pass exactly one of address= or read=")
    if read is not None:
        return NodeClass.GOOD_RIGHT if len(graph.right[read]) == 1 else NodeClass.ORDINARY
    if len(graph.left[address]) == graph.N:
        return NodeClass.TYPE_A_LEFT
    if graph.good_count(address) == graph.N:
        return NodeClass.TYPE_B_LEFT
    return NodeClass.ORDINARY


def has_cycle(graph: IdentGraph) -> bool:
    """Union-find over the edge list; a redundant edge closes a cycle."""
    parent = list(range(graph.M + graph.num_reads))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for x, rid in graph.edges():
        ra, rb = find(x), find(graph.M + rid)
        if ra == rb:
            return True
        parent[ra] = rb
    return False


def two_hop(graph: IdentGraph, read: int) -> list[int]:
    """Reads sharing at least one candidate address with ``read``."""
    out: set[int] = set()
    for x in graph.right[read]:
        out |= graph.left[x]
    out.discard(read)
    return sorted(out)


def compatible_mask(values: np.ndarray, masks: np.ndarray, value: int, mask: int) -> np.ndarray:
    """Vectorised address agreement of one pattern against many.

    For the full address space, two candidate subcubes intersect iff the
    patterns agree on their mutually unerased bits, so this equals two-hop
    membership on a graph whose candidate sets are all subcubes.
    """
    return ((values ^ value) & ~(masks | mask)) == 0


def two_hop_sizes(instance: Instance, block: int = 1024) -> np.ndarray:
    vals, masks = instance.address_arrays
    out = np.empty(len(vals), np.int64)
    for lo in range(0, len(vals), block):
        v = vals[lo : lo + block, None]
        m = masks[lo : lo + block, None]
        hit = ((vals[None, :] ^ v) & ~(masks[None, :] | m)) == 0
        out[lo : lo + block] = hit.sum(axis=1) - 1
    return out


def _true_groups(instance: Instance) -> list[list[int]]:
    groups: list[list[int]] = [[] for _ in range(instance.M)]
    for r in instance.reads:
        groups[r.true_source].append(r.read_id)
    return groups


def labelling_digraph(instance: Instance) -> list[tuple[int, int]]:
    """Edges x -> x~ of G'': x~ lies in every candidate set of x's N reads."""
    vals, masks = instance.address_arrays
    edges = []
    for x, group in enumerate(_true_groups(instance)):
        common = int(np.bitwise_and.reduce(masks[group]))
        edges.extend((x, t) for t in subcube(x, common) if t != x)
    return edges


def _digraph(M: int, edges) -> coo_matrix:
    if edges:
        src, dst = zip(*edges)
    else:
        src, dst = (), ()
    return coo_matrix((np.ones(len(src)), (src, dst)), shape=(M, M))


def labelling_digraph_has_cycle(instance: Instance) -> bool:
    edges = labelling_digraph(instance)
    if not edges:
        return False
    _, labels = connected_components(_digraph(instance.M, edges), directed=True, connection="strong")
    return bool(np.bincount(labels).max() > 1)


@dataclass(frozen=True)
class ConfusabilityGraph:
    M: int
    edges: frozenset
    connected: bool


def confusability_graph(instance: Instance) -> ConfusabilityGraph:
    """Distance-1 confusability edges present before any pruning."""
    edges = set()
    for r in instance.reads:
        mask = r.address.erased
        if mask and mask & (mask - 1) == 0:
            edges.add((r.true_source, r.true_source ^ mask))
    ncomp, _ = connected_components(_digraph(instance.M, sorted(edges)), directed=True, connection="weak")
    return ConfusabilityGraph(instance.M, frozenset(edges), ncomp == 1)


def address_orders(instance: Instance) -> np.ndarray:
    """Order of each address: smallest candidate-set size among its reads."""
    _, masks = instance.address_arrays
    erasures = np.array([bin(m).count("1") for m in masks.tolist()], dtype=np.int64)
    best = np.full(instance.M, instance.n, np.int64)
    src = np.array([r.true_source for r in instance.reads])
    np.minimum.at(best, src, erasures)
    return 1 << best


def dump_graph(graph: IdentGraph, path) -> None:
    lines = [f"{x} {rid}" for x, rid in sorted(graph.edges())]
    lines.append("# classes")
    goods = [r for r in range(graph.num_reads) if len(graph.right[r]) == 1]
    lines.append("good_right " + " ".join(map(str, goods)))
    for cls in (NodeClass.TYPE_A_LEFT, NodeClass.TYPE_B_LEFT):
        xs = [x for x in range(graph.M) if graph.left[x] and classify(graph, address=x) is cls]
        lines.append(f"{cls.value} " + " ".join(map(str, xs)))
    Path(path).write_text("\n".join(lines) + "\n")
