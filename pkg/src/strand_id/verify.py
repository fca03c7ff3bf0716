"""Exhaustive enumeration of tiny worlds and the equivalence checks run on them.

A world fixes every strand's payload and every read's erasure pattern.
Two reductions keep the enumeration small without changing any checked
predicate: reads of the same strand are enumerated as a multiset (read order
is irrelevant to every algorithm), and the first strand's payload is fixed to
zero (flipping one payload position in every strand preserves all agreement
relations).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement, product
from math import comb
from typing import Iterator

import numpy as np

from strand_id.channel import NoisyWord, reads_compatible
from strand_id.graph import build_graph, has_cycle, labelling_digraph_has_cycle
from strand_id.model import Instance, Read, is_correct, true_assignment
from strand_id.oracle import enumerate_labellings, enumerate_partitionings, true_labelling
from strand_id.pma import run_pma
from strand_id.pruner import run_pruning


def world_count(n: int, N: int, L: int, payload_values: bool = True, payload_erasures: bool = True) -> int:
    M = 1 << n
    states = (1 << n) * ((1 << L) if payload_erasures else 1)
    per_strand = comb(states + N - 1, N)
    values = (1 << (L * (M - 1))) if payload_values else 1
    return per_strand**M * values


def worlds(
    n: int, N: int, L: int, payload_values: bool = True, payload_erasures: bool = True
) -> Iterator[Instance]:
    """Every world of the given shape, up to the two reductions above.

    Switching off ``payload_values`` pins every payload to zero; switching
    off ``payload_erasures`` leaves payloads unerased. Either is only sound
    for checks whose code path never reads payloads.
    """
    M = 1 << n
    pay_states = (1 << L) if payload_erasures else 1
    read_states = [(am, pm) for am in range(1 << n) for pm in range(pay_states)]
    per_strand = list(combinations_with_replacement(range(len(read_states)), N))
    value_sets = product(range(1 << L), repeat=M - 1) if payload_values else [(0,) * (M - 1)]
    for values in value_sets:
        pays = (0, *values)
        for choice in product(per_strand, repeat=M):
            reads = []
            for x, sib in enumerate(choice):
                for s in sib:
                    am, pm = read_states[s]
                    reads.append(
                        Read(len(reads), NoisyWord(n, x, am), NoisyWord(L, pays[x], pm), true_source=x)
                    )
            yield Instance(n, L, N, 0.5, tuple(reads))


def sample_worlds(n: int, N: int, L: int, count: int, seed: int, p: float = 0.5) -> Iterator[Instance]:
    """Seeded uniform sample over the same world space (used where exhaustion is too slow)."""
    rng = np.random.default_rng([seed, n, N, L])
    M = 1 << n
    for _ in range(count):
        pays = rng.integers(0, 1 << L, M)
        reads = []
        for x in range(M):
            for _ in range(N):
                am = int(np.packbits(rng.random(8) < p)[0]) >> (8 - n)
                pm = int(np.packbits(rng.random(8) < p)[0]) >> (8 - L)
                reads.append(Read(len(reads), NoisyWord(n, x, am), NoisyWord(L, int(pays[x]), pm), true_source=x))
        yield Instance(n, L, N, p, tuple(reads))


def set_partitions(items: tuple[int, ...], size: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Every split of ``items`` into blocks of ``size``, ignoring compatibility."""
    if not items:
        yield ()
        return
    head, rest = items[0], items[1:]
    for combo in combinations(rest, size - 1):
        left = tuple(r for r in rest if r not in combo)
        for tail in set_partitions(left, size):
            yield ((head, *combo), *tail)


def brute_force_partitionings(world: Instance) -> set:
    """Filter every N-block split by pairwise agreement on full reads."""
    obs = world.observed
    out = set()
    for part in set_partitions(tuple(range(world.num_reads)), world.N):
        if all(reads_compatible(obs[a], obs[b]) for g in part for i, a in enumerate(g) for b in g[i + 1 :]):
            out.add(tuple(sorted(part)))
    return out


def _induced(partitioning, labelling) -> dict[int, int]:
    return {r: x for group, x in zip(partitioning, labelling) for r in group}


@dataclass
class CheckTally:
    cases: Counter = field(default_factory=Counter)
    failures: Counter = field(default_factory=Counter)
    witnesses: dict = field(default_factory=dict)

    def record(self, name: str, ok: bool, world: Instance | None = None) -> None:
        self.cases[name] += 1
        if not ok:
            self.failures[name] += 1
            if world is not None:
                self.witnesses.setdefault(name, world)

    @property
    def names(self) -> list[str]:
        return sorted(self.cases)

    def passed(self, name: str) -> bool:
        return self.failures[name] == 0


def check_peeling(world: Instance, tally: CheckTally) -> None:
    g = build_graph(world)
    cyc = has_cycle(g)
    res = run_pma(g)
    tally.record("pma_success_iff_acyclic", res.success == (not cyc), world)
    tally.record("pma_acyclic_implies_success", cyc or res.success, world)
    tally.record("pma_success_is_truth", (not res.success) or res.assignment == true_assignment(world), world)


def check_uniqueness(world: Instance, tally: CheckTally, with_pruning: bool = True) -> None:
    parts = enumerate_partitionings(world)
    star = parts.true
    tally.record("true_partitioning_enumerated", star in parts.partitionings, world)
    tally.record("partitionings_match_bruteforce", set(parts.partitionings) == brute_force_partitionings(world), world)
    tally.record("unique_partitioning_is_true", (not parts.unique) or parts.partitionings == (star,), world)
    labels = enumerate_labellings(world, star)
    truth = true_labelling(world, star)
    tally.record("true_labelling_enumerated", truth in labels.labellings, world)
    tally.record("unique_labelling_iff_acyclic_G2", (labels.count == 1) == (not labelling_digraph_has_cycle(world)), world)
    target = true_assignment(world)
    for other in parts.partitionings:
        if other != star:
            induced = (_induced(other, lab) for lab in enumerate_labellings(world, other).labellings)
            tally.record("true_labelling_absent_elsewhere", target not in induced, world)
    if with_pruning and parts.unique and labels.count == 1:
        tally.record("unique_implies_pruning_truth", is_correct(run_pruning(world), world), world)


PEELING_SHAPES = ((1, 1), (1, 2), (2, 1), (2, 2))
UNIQUENESS_SHAPES = tuple((n, N, L) for n in (1, 2) for N in (1, 2) for L in (1, 2))
EXHAUSTIVE_LIMIT = 50_000


@dataclass
class Coverage:
    shape: tuple
    mode: str
    worlds: int


def run_peeling_checks(tally: CheckTally) -> list[Coverage]:
    """Peeling never reads payloads, so payload erasures are not enumerated."""
    out = []
    for n, N in PEELING_SHAPES:
        k = 0
        for w in worlds(n, N, 1, payload_erasures=False):
            check_peeling(w, tally)
            k += 1
        out.append(Coverage((n, N, 1), "exhaustive-address+payload-values", k))
    return out


def run_uniqueness_checks(tally: CheckTally, sample: int = 20_000, seed: int = 0) -> list[Coverage]:
    out = []
    for n, N, L in UNIQUENESS_SHAPES:
        k = 0
        if world_count(n, N, L) <= EXHAUSTIVE_LIMIT:
            for w in worlds(n, N, L):
                check_uniqueness(w, tally)
                k += 1
            out.append(Coverage((n, N, L), "exhaustive", k))
            continue
        if N == 1:
            # singleton groups: partitioning is forced and pruning cannot
            # shrink any candidate set, so payload erasures change nothing
            for w in worlds(n, N, L, payload_erasures=False):
                check_uniqueness(w, tally)
                k += 1
            out.append(Coverage((n, N, L), "exhaustive-address+payload-values", k))
            continue
        for w in worlds(n, N, L, payload_values=False, payload_erasures=False):
            check_uniqueness(w, tally)
            k += 1
        out.append(Coverage((n, N, L), "exhaustive-address", k))
        k = 0
        for w in sample_worlds(n, N, L, sample, seed):
            check_uniqueness(w, tally)
            k += 1
        out.append(Coverage((n, N, L), "sampled", k))
    return out
