import pytest

from strand_id.model import instance_from_words
from strand_id.oracle import enumerate_partitionings
from strand_id.verify import (
    CheckTally,
    brute_force_partitionings,
    check_peeling,
    check_uniqueness,
    set_partitions,
    world_count,
    worlds,
)


@pytest.mark.parametrize("shape", [(1, 1, 1), (1, 2, 1), (2, 1, 1), (1, 2, 2)])
def test_world_count_matches_enumeration(shape):
    assert sum(1 for _ in worlds(*shape)) == world_count(*shape)


def test_set_partitions_count():
    # 6 items into pairs: 5 * 3 * 1
    assert sum(1 for _ in set_partitions(tuple(range(6)), 2)) == 15
    assert list(set_partitions((0, 1, 2), 1)) == [((0,), (1,), (2,))]


def test_tally_records_witness():
    t = CheckTally()
    t.record("a", True)
    t.record("a", False, world="w")
    assert t.cases["a"] == 2 and t.failures["a"] == 1 and t.witnesses["a"] == "w"
    assert not t.passed("a")


def test_peeling_converse_counterexample():
    w = instance_from_words(1, 2, [("0", "0", 0), ("0", "0", 0), ("*", "0", 1), ("*", "0", 1)])
    t = CheckTally()
    check_peeling(w, t)
    assert not t.passed("pma_success_iff_acyclic")
    assert t.passed("pma_acyclic_implies_success") and t.passed("pma_success_is_truth")


def test_uniqueness_checks_on_small_world():
    w = instance_from_words(1, 2, [("0", "00", 0), ("*", "00", 0), ("*", "01", 1), ("1", "01", 1)])
    t = CheckTally()
    check_uniqueness(w, t)
    assert all(t.passed(k) for k in t.names)
    assert set(enumerate_partitionings(w).partitionings) == brute_force_partitionings(w)
