"""Strands, reads and seeded instance generation."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Sequence

import numpy as np

from strand_id.channel import NoisyWord, bits_to_int, stream, transmit

MAX_ADDRESS_BITS = 30

CHANNEL_LANE, PAYLOAD_LANE, SHUFFLE_LANE = 0, 1, 2


class SizingError(ValueError):
    """Requested instance does not fit the desk-scale limits."""


@dataclass(frozen=True)
class Strand:
    address: int
    payload: int
    source_index: int


@dataclass(frozen=True)
class ObservedRead:
    """What an identification algorithm is allowed to see."""

    read_id: int
    address: NoisyWord
    payload: NoisyWord


@dataclass(frozen=True)
class Read(ObservedRead):
    # evaluation only; algorithms receive ObservedRead views
    true_source: int = field(default=-1, repr=False)

    def observed(self) -> ObservedRead:
        return ObservedRead(self.read_id, self.address, self.payload)


class Status(enum.Enum):
    SUCCESS = "SUCCESS"
    FAILURE = "FAILURE"


@dataclass
class MatchResult:
    status: Status
    assignment: dict[int, int] | None = None
    comparisons_used: int = 0
    peels_type_a: int = 0
    peels_type_b: int = 0
    prune_rounds: int = 0
    groups_resolved: int = 0

    @property
    def success(self) -> bool:
        return self.status is Status.SUCCESS


@dataclass(frozen=True)
class Instance:
    n: int
    L: int
    N: int
    p: float
    reads: tuple[Read, ...]
    seed: int = 0

    def __post_init__(self):
        counts = np.bincount([r.true_source for r in self.reads], minlength=self.M)
        if len(counts) != self.M or np.any(counts != self.N):
            raise ValueError(f"every address needs exactly N={self.N} reads")
        if [r.read_id for r in self.reads] != list(range(len(self.reads))):
            raise ValueError("read ids must be 0..NM-1 in order")

    @property
    def M(self) -> int:
        return 1 << self.n

    @property
    def num_reads(self) -> int:
        return self.N << self.n

    @cached_property
    def observed(self) -> tuple[ObservedRead, ...]:
        return tuple(r.observed() for r in self.reads)

    @cached_property
    def address_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """(values, erasure masks) of the noisy addresses as int64 arrays."""
        vals = np.fromiter((r.address.values for r in self.reads), np.int64, len(self.reads))
        mask = np.fromiter((r.address.erased for r in self.reads), np.int64, len(self.reads))
        return vals, mask

    @cached_property
    def payload_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Payload (values, erasure masks) packed into uint64 chunks, shape (NM, W)."""
        return _pack([r.payload for r in self.reads], self.L)


def _pack(words: Sequence[NoisyWord], length: int) -> tuple[np.ndarray, np.ndarray]:
    chunks = (length + 63) // 64
    low = (1 << 64) - 1
    vals = np.zeros((len(words), chunks), np.uint64)
    mask = np.zeros((len(words), chunks), np.uint64)
    for i, w in enumerate(words):
        for c in range(chunks):
            vals[i, c] = (w.values >> (64 * c)) & low
            mask[i, c] = (w.erased >> (64 * c)) & low
    return vals, mask


def payload_length(n: int, beta) -> int:
    """L = ceil(beta * n); floats get a small slack against round-off."""
    if isinstance(beta, (int, Fraction)):
        return math.ceil(Fraction(beta) * n)
    return math.ceil(beta * n - 1e-9)


def generate_instance(n: int, beta, N: int, p: float, seed: int) -> Instance:
    if n > MAX_ADDRESS_BITS:
        raise SizingError(f"n={n} exceeds the {MAX_ADDRESS_BITS}-bit address cap")
    if n < 1 or N < 1:
        raise ValueError("n and N must be positive")
    if not 0.0 < p < 1.0:
        raise ValueError(f"erasure probability must lie in (0, 1), got {p}")
    if beta <= 0:
        raise ValueError("beta must be positive")
    L = payload_length(n, beta)
    return _simulate(n, L, N, p, seed)


def _simulate(n: int, L: int, N: int, p: float, seed: int) -> Instance:
    M = 1 << n
    rows = []
    strands = [Strand(x, bits_to_int(stream(seed, PAYLOAD_LANE, x, 0).random(L) < 0.5), x) for x in range(M)]
    for s in strands:
        for j in range(N):
            g = stream(seed, CHANNEL_LANE, s.source_index, j)
            y = transmit(s.address, n, p, g)
            d = transmit(s.payload, L, p, g)
            rows.append((y, d, s.source_index))
    order = stream(seed, SHUFFLE_LANE, 0, 0).permutation(len(rows))
    reads = tuple(
        Read(rid, rows[k][0], rows[k][1], true_source=rows[k][2]) for rid, k in enumerate(order)
    )
    return Instance(n, L, N, p, reads, seed)


def instance_from_words(
    n: int, N: int, rows: Sequence[tuple[str, str, int]], p: float = 0.5, seed: int = 0
) -> Instance:
    """Hand-built instance from ``(address-word, payload-word, true_source)`` text rows."""
    reads = []
    for rid, (a, d, src) in enumerate(rows):
        aw, dw = NoisyWord.parse(a), NoisyWord.parse(d)
        if aw.length != n:
            raise ValueError(f"address {a!r} is not {n} symbols long")
        reads.append(Read(rid, aw, dw, true_source=src))
    L = reads[0].payload.length
    return Instance(n, L, N, p, tuple(reads), seed)


def true_assignment(instance: Instance) -> dict[int, int]:
    return {r.read_id: r.true_source for r in instance.reads}


def is_correct(result: MatchResult, instance: Instance) -> bool:
    return result.success and result.assignment == true_assignment(instance)


def dump_instance(instance: Instance, path) -> None:
    lines = [f"{instance.n} {instance.L} {instance.N} {instance.p!r} {instance.seed}"]
    for r in instance.reads:
        lines.append(f"{r.read_id} {r.address} {r.payload} {r.true_source}")
    Path(path).write_text("\n".join(lines) + "\n")


def load_instance(path) -> Instance:
    head, *body = Path(path).read_text().splitlines()
    n, L, N, p, seed = head.split()
    reads = []
    for line in body:
        rid, a, d, src = line.split()
        reads.append(Read(int(rid), NoisyWord.parse(a), NoisyWord.parse(d), true_source=int(src)))
    inst = Instance(int(n), int(L), int(N), float(p), tuple(reads), int(seed))
    if any(r.payload.length != inst.L for r in reads):
        raise ValueError("payload length disagrees with header")
    return inst
