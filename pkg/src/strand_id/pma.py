"""Peeling matching over the identification graph (addresses only, no data)."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from strand_id.graph import IdentGraph, NodeClass, classify
from strand_id.model import MatchResult, Status

GOOD_LEFT = (NodeClass.TYPE_A_LEFT, NodeClass.TYPE_B_LEFT)


@dataclass
class PeelState:
    graph: IdentGraph
    matched: dict[int, int] = field(default_factory=dict)
    frontier: deque = field(default_factory=deque)
    peels_type_a: int = 0
    peels_type_b: int = 0

    def __post_init__(self):
        self._queued = set(self.frontier)

    def enqueue(self, xs) -> None:
        for x in sorted(xs):
            if x not in self._queued and classify(self.graph, address=x) in GOOD_LEFT:
                self.frontier.append(x)
                self._queued.add(x)

    def take(self, rng: np.random.Generator | None = None) -> int:
        if rng is None:
            x = self.frontier.popleft()
        else:
            k = int(rng.integers(len(self.frontier)))
            self.frontier.rotate(-k)
            x = self.frontier.popleft()
        self._queued.discard(x)
        return x


def peel(state: PeelState, x: int) -> None:
    g = state.graph
    kind = classify(g, address=x)
    touched = set()
    if kind is NodeClass.TYPE_A_LEFT:
        for r in list(g.left[x]):
            state.matched[r] = x
            for other in g.right[r]:
                if other != x:
                    g.left[other].discard(r)
                    touched.add(other)
            g.right[r] = set()
        state.peels_type_a += 1
    elif kind is NodeClass.TYPE_B_LEFT:
        for r in list(g.left[x]):
            if len(g.right[r]) == 1:
                state.matched[r] = x
                g.right[r] = set()
            else:
                g.right[r].discard(x)
                if len(g.right[r]) == 1:
                    touched |= g.right[r]
        state.peels_type_b += 1
    else:
        raise ValueError(f"address {x} is not a good left node")
    g.left[x] = set()
    state.enqueue(touched)


def run_pma(graph: IdentGraph, rng: np.random.Generator | None = None, inplace: bool = False) -> MatchResult:
    """Peel until no good left node remains.

    ``rng`` randomises the frontier order (used to check that the outcome
    does not depend on it); by default the frontier is FIFO, seeded in
    address order.
    """
    g = graph if inplace else graph.copy()
    state = PeelState(g)
    state.enqueue(range(g.M))
    while state.frontier:
        x = state.take(rng)
        if classify(g, address=x) in GOOD_LEFT:
            peel(state, x)
    ok = len(state.matched) == g.N * g.M
    return MatchResult(
        Status.SUCCESS if ok else Status.FAILURE,
        dict(sorted(state.matched.items())) if ok else None,
        peels_type_a=state.peels_type_a,
        peels_type_b=state.peels_type_b,
    )
