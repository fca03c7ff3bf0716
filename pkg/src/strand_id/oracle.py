"""Exhaustive ground truth for tiny instances.

These routines are exact or refuse: size guards raise instead of truncating.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from strand_id.channel import consistent_with_codeword, reads_compatible
from strand_id.model import Instance

MAX_PARTITION_READS = 16
MAX_LABEL_ADDRESSES = 8

Group = tuple[int, ...]
Partitioning = tuple[Group, ...]


class OracleSizeError(ValueError):
    pass


@dataclass(frozen=True)
class PartitioningEnum:
    partitionings: tuple[Partitioning, ...]
    true: Partitioning

    def __len__(self) -> int:
        return len(self.partitionings)

    @property
    def unique(self) -> bool:
        return len(self.partitionings) == 1


@dataclass(frozen=True)
class Labellings:
    count: int
    labellings: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class FaultyReport:
    reads: frozenset
    sources: frozenset


def true_partitioning(instance: Instance) -> Partitioning:
    groups: dict[int, list[int]] = {}
    for r in instance.reads:
        groups.setdefault(r.true_source, []).append(r.read_id)
    return tuple(sorted(tuple(sorted(g)) for g in groups.values()))


def true_labelling(instance: Instance, partitioning: Partitioning) -> tuple[int, ...]:
    src = {r.read_id: r.true_source for r in instance.reads}
    return tuple(src[g[0]] for g in partitioning)


def agreement_graph(instance: Instance) -> np.ndarray:
    """Adjacency of G': reads agreeing on address and payload."""
    obs = instance.observed
    R = len(obs)
    adj = np.zeros((R, R), bool)
    for i in range(R):
        for j in range(i + 1, R):
            adj[i, j] = adj[j, i] = reads_compatible(obs[i], obs[j])
    return adj


def enumerate_partitionings(instance: Instance) -> PartitioningEnum:
    """All ways to split the reads into 2^n cliques of size N in G'."""
    R = instance.num_reads
    if R > MAX_PARTITION_READS:
        raise OracleSizeError(f"{R} reads exceed the oracle limit of {MAX_PARTITION_READS}")
    adj = agreement_graph(instance)
    N = instance.N
    found: list[Partitioning] = []

    def extend(remaining: tuple[int, ...], acc: list[Group]) -> None:
        if not remaining:
            found.append(tuple(acc))
            return
        head, rest = remaining[0], remaining[1:]
        options = [r for r in rest if adj[head, r]]
        for combo in combinations(options, N - 1):
            if all(adj[a, b] for a, b in combinations(combo, 2)):
                left = tuple(r for r in rest if r not in combo)
                extend(left, acc + [(head, *combo)])

    extend(tuple(range(R)), [])
    return PartitioningEnum(tuple(sorted(found)), true_partitioning(instance))


def enumerate_labellings(instance: Instance, partitioning: Partitioning) -> Labellings:
    """Distinct-address assignments where every member is consistent with its label."""
    M = instance.M
    if M > MAX_LABEL_ADDRESSES:
        raise OracleSizeError(f"{M} addresses exceed the oracle limit of {MAX_LABEL_ADDRESSES}")
    obs = instance.observed
    allowed = [
        [x for x in range(M) if all(consistent_with_codeword(obs[r].address, x) for r in group)]
        for group in partitioning
    ]
    out: list[tuple[int, ...]] = []

    def assign(k: int, used: tuple[int, ...]) -> None:
        if k == len(partitioning):
            out.append(used)
            return
        for x in allowed[k]:
            if x not in used:
                assign(k + 1, used + (x,))

    assign(0, ())
    return Labellings(len(out), tuple(out))


def find_faulty_reads(instance: Instance) -> FaultyReport:
    """Reads agreeing (address and payload) with some read of another strand."""
    vals, masks = instance.address_arrays
    pv, pm = instance.payload_arrays
    src = np.array([r.true_source for r in instance.reads])
    faulty = np.zeros(len(vals), bool)
    for i in range(len(vals)):
        addr = ((vals ^ vals[i]) & ~(masks | masks[i])) == 0
        data = ~(((pv ^ pv[i]) & ~(pm | pm[i])).any(axis=1))
        faulty[i] = np.any(addr & data & (src != src[i]))
    clean_sources = set(src[~faulty].tolist())
    return FaultyReport(
        frozenset(np.flatnonzero(faulty).tolist()),
        frozenset(x for x in range(instance.M) if x not in clean_sources),
    )


def exact_p_read_faulty(n: int, L: int, N: int, p: float) -> float:
    """Exact probability that a read is faulty.

    Conditions on the read's own erasure counts (a in the address, b in the
    payload). Given those, other strands are independent of each other; a
    strand whose address differs from ours on j positions we did not erase,
    and whose payload differs on k of our L-b unerased positions, fails to
    produce a compatible read with probability (1 - p^(j+k))^N.
    """
    total = 0.0
    for a in range(n + 1):
        pa = comb(n, a) * p**a * (1 - p) ** (n - a)
        for b in range(L + 1):
            pb = comb(L, b) * p**b * (1 - p) ** (L - b)
            free = L - b
            miss = [
                sum(comb(free, k) * (1 - p ** (j + k)) ** N for k in range(free + 1)) / 2**free
                for j in range(n + 1)
            ]
            clean = 1.0
            for i in range(a + 1):
                for j in range(n - a + 1):
                    if i + j == 0:
                        continue
                    clean *= miss[j] ** (comb(a, i) * comb(n - a, j))
            total += pa * pb * (1.0 - clean)
    return total
