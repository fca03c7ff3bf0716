from itertools import product

import numpy as np
import pytest

from strand_id.channel import NoisyWord
from strand_id.model import Instance, Read, generate_instance, instance_from_words
from strand_id.oracle import (
    OracleSizeError,
    enumerate_labellings,
    enumerate_partitionings,
    exact_p_read_faulty,
    find_faulty_reads,
    true_labelling,
    true_partitioning,
)


def test_clean_reads_unique():
    inst = instance_from_words(2, 2, [(format(x, "02b"), format(x, "02b"), x) for x in range(4) for _ in range(2)])
    parts = enumerate_partitionings(inst)
    assert parts.unique and parts.partitionings == (true_partitioning(inst),)
    labs = enumerate_labellings(inst, parts.true)
    assert labs.count == 1 and labs.labellings[0] == true_labelling(inst, parts.true)


def test_fully_erased_many_partitions():
    inst = instance_from_words(1, 2, [("*", "0", 0), ("*", "0", 0), ("*", "0", 1), ("*", "0", 1)])
    assert len(enumerate_partitionings(inst)) == 3
    assert enumerate_labellings(inst, true_partitioning(inst)).count == 2


def test_guards():
    with pytest.raises(OracleSizeError):
        enumerate_partitionings(generate_instance(3, 1, 3, 0.3, 0))
    with pytest.raises(OracleSizeError):
        inst = generate_instance(4, 1, 1, 0.3, 0)
        enumerate_labellings(inst, true_partitioning(inst))


def test_faulty_examples():
    inst = instance_from_words(1, 1, [("0", "01", 0), ("1", "10", 1)])
    assert find_faulty_reads(inst).reads == frozenset()
    inst = instance_from_words(1, 2, [("*", "01", 0), ("*", "01", 0), ("*", "01", 1), ("*", "01", 1)])
    rep = find_faulty_reads(inst)
    assert rep.reads == {0, 1, 2, 3} and rep.sources == {0, 1}


def _enumerated_faulty(n, L, N, p):
    """Probability-weighted mean faulty fraction over every payload and erasure pattern."""
    M = 1 << n
    R = M * N
    total = 0.0
    for pays in product(range(1 << L), repeat=M):
        for pats in product(range(1 << (n + L)), repeat=R):
            w = 1.0
            reads = []
            for k, pat in enumerate(pats):
                x = k // N
                am, pm = pat >> L, pat & ((1 << L) - 1)
                e = bin(pat).count("1")
                w *= p**e * (1 - p) ** (n + L - e)
                reads.append(Read(k, NoisyWord(n, x, am), NoisyWord(L, pays[x], pm), true_source=x))
            frac = len(find_faulty_reads(Instance(n, L, N, p, tuple(reads))).reads) / R
            total += w * frac
    return total / (1 << (L * M))


@pytest.mark.parametrize("n,L,N", [(1, 1, 1), (1, 1, 2), (1, 2, 1)])
def test_exact_faulty_matches_enumeration(n, L, N):
    assert exact_p_read_faulty(n, L, N, 0.3) == pytest.approx(_enumerated_faulty(n, L, N, 0.3), abs=1e-12)


def test_exact_faulty_matches_monte_carlo():
    n, L, N, p = 6, 6, 2, 0.3
    fracs = [len(find_faulty_reads(generate_instance(n, 1, N, p, s)).reads) / 128 for s in range(120)]
    mean, se = np.mean(fracs), np.std(fracs, ddof=1) / np.sqrt(len(fracs))
    assert abs(mean - exact_p_read_faulty(n, L, N, p)) < 4 * se
