import numpy as np
import pytest

from monopat.sequence import (
    BudgetExceeded,
    InvalidInput,
    QueryOracle,
    RandomStream,
    Sequence,
    decreasing_perm,
    descending_runs,
    non_adaptivity_check,
    read_sequence,
    write_sequence,
)
from monopat.exact import lis_length


def test_construction():
    assert Sequence([5]).tolist() == [5]
    assert Sequence([3, 1, 2]).n == 3
    assert decreasing_perm(4).tolist() == [4, 3, 2, 1]


def test_rejects_bad_input():
    with pytest.raises(InvalidInput):
        Sequence([])
    with pytest.raises(InvalidInput):
        Sequence([[1, 2]])
    with pytest.raises(InvalidInput):
        Sequence([1.0, float("nan")])
    with pytest.raises(InvalidInput):
        Sequence(["a", "b"])


def test_real_values_are_rank_reduced():
    s = Sequence([0.5, -2.0, 0.5, 3.25])
    assert s.tolist() == [1, 0, 1, 2]


def test_values_are_read_only():
    s = Sequence([1, 2, 3])
    with pytest.raises(ValueError):
        s.values[0] = 7


def test_equality_and_hash():
    assert Sequence([1, 2]) == Sequence(np.array([1, 2]))
    assert hash(Sequence([1, 2])) == hash(Sequence([1, 2]))
    assert Sequence([1, 2]) != Sequence([2, 1])


def test_descending_runs_lis():
    for n in range(1, 30):
        for runs in range(1, 6):
            assert lis_length(descending_runs(n, runs).tolist()) == min(runs, n)


def test_file_round_trip(tmp_path):
    s = Sequence([4, 0, 7, 7, 2])
    path = tmp_path / "s.txt"
    write_sequence(s, path)
    assert read_sequence(path) == s
    path.write_text("1\nx\n")
    with pytest.raises(InvalidInput):
        read_sequence(path)


def test_query_counting():
    o = QueryOracle(Sequence([7, 8, 9]))
    assert o.query_count == 0
    assert o.query(1) == 8
    assert o.query_count == 1
    o.query(1)
    assert o.query_count == 2
    with pytest.raises(IndexError):
        o.query(3)
    assert o.query_count == 2


def test_query_many_counts_duplicates():
    o = QueryOracle(Sequence([7, 8, 9]))
    assert o.query_many([0, 0, 2]).tolist() == [7, 7, 9]
    assert o.query_count == 3
    assert o.query_log.tolist() == [0, 0, 2]
    with pytest.raises(IndexError):
        o.query_many([1, 5])


def test_budget():
    o = QueryOracle(Sequence([1, 2, 3]), budget=2)
    o.query_many([0, 1])
    with pytest.raises(BudgetExceeded):
        o.query(2)
    assert o.query_count == 2


def test_non_adaptivity_check():
    o = QueryOracle(Sequence(list(range(10))))
    assert non_adaptivity_check(o, set())
    o.query(2)
    o.query(5)
    assert non_adaptivity_check(o, {2, 5, 9})
    assert not non_adaptivity_check(o, {5})


def test_streams_are_reproducible_and_independent():
    a = RandomStream(11).integers(0, 1 << 30, size=5)
    b = RandomStream(11).integers(0, 1 << 30, size=5)
    assert a.tolist() == b.tolist()
    t0 = RandomStream.for_trial(11, 0).integers(0, 1 << 30, size=5)
    t1 = RandomStream.for_trial(11, 1).integers(0, 1 << 30, size=5)
    assert t0.tolist() != t1.tolist()
    s = RandomStream(3)
    assert s.spawn(1).random() != s.spawn(2).random()


def test_stream_position_advances():
    s = RandomStream(0)
    s.integers(0, 5, size=4)
    s.random()
    assert s.position == 5
