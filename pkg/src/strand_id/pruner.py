"""Data-driven pruning: group reads by payload agreement inside two-hop
neighbourhoods, shrink their candidate sets, then hand over to peeling."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from strand_id.graph import IdentGraph, build_graph, compatible_mask, two_hop_sizes
from strand_id.model import Instance, MatchResult
from strand_id.pma import run_pma


@dataclass
class PruneState:
    graph: IdentGraph
    N: int
    addr_values: np.ndarray
    addr_masks: np.ndarray
    pay_values: np.ndarray
    pay_masks: np.ndarray
    hop_size: np.ndarray
    pruned: np.ndarray = field(init=False)
    resolved: np.ndarray = field(init=False)
    comparisons: int = 0
    rounds: int = 0
    groups_resolved: int = 0

    def __post_init__(self):
        self.pruned = np.zeros(len(self.addr_values), bool)
        self.resolved = np.zeros(len(self.addr_values), bool)

    @classmethod
    def start(cls, instance: Instance) -> "PruneState":
        vals, masks = instance.address_arrays
        pv, pm = instance.payload_arrays
        return cls(build_graph(instance), instance.N, vals, masks, pv, pm, two_hop_sizes(instance))

    def neighbours(self, r: int) -> np.ndarray:
        """Two-hop neighbourhood of ``r`` minus reads in resolved groups."""
        hit = compatible_mask(self.addr_values, self.addr_masks, self.addr_values[r], self.addr_masks[r])
        hit &= ~self.resolved
        hit[r] = False
        return np.flatnonzero(hit)

    def select(self) -> int:
        """Unpruned read with the smallest current two-hop size, lowest id on ties."""
        keys = np.where(self.pruned, np.iinfo(np.int64).max, self.hop_size)
        return int(np.argmin(keys))


def payload_agrees(state: PruneState, r: int, others: np.ndarray) -> np.ndarray:
    diff = (state.pay_values[others] ^ state.pay_values[r]) & ~(state.pay_masks[others] | state.pay_masks[r])
    return ~diff.any(axis=1)


def prune(state: PruneState, r: int) -> None:
    if state.pruned[r]:
        raise ValueError(f"read {r} is already pruned")
    state.pruned[r] = True
    state.rounds += 1
    hood = state.neighbours(r)
    state.comparisons += len(hood)
    matches = hood[payload_agrees(state, r, hood)]
    if len(matches) != state.N - 1:
        return
    group = np.append(matches, r)
    # the selected read's own constraints are included in the intersection
    mask = int(np.bitwise_and.reduce(state.addr_masks[group]))
    value = int(np.bitwise_or.reduce(state.addr_values[group])) & ~mask
    for m in group.tolist():
        state.graph.restrict(m, value, mask)
    for m in group.tolist():
        lost = compatible_mask(state.addr_values, state.addr_masks, state.addr_values[m], state.addr_masks[m])
        lost[m] = False
        state.hop_size -= lost
    state.resolved[group] = True
    state.pruned[group] = True
    state.groups_resolved += 1


def run_pruning(instance: Instance) -> MatchResult:
    state = PruneState.start(instance)
    while not state.pruned.all():
        prune(state, state.select())
    result = run_pma(state.graph, inplace=True)
    result.comparisons_used = state.comparisons
    result.prune_rounds = state.rounds
    result.groups_resolved = state.groups_resolved
    return result


def stats_record(result: MatchResult) -> dict:
    return {
        "status": result.status.value,
        "comparisons": result.comparisons_used,
        "prune_rounds": result.prune_rounds,
        "groups_resolved": result.groups_resolved,
        "pma_peels": result.peels_type_a + result.peels_type_b,
    }
