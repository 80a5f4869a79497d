import itertools

import pytest

from monopat.exact import (
    DisjointFamily,
    PatternWitness,
    TupleArray,
    c_gap,
    c_gap_partition,
    check_rematching,
    find_increasing,
    find_pattern_exact,
    find_pattern_in_subset,
    greedy_disjoint_tuples,
    lis_length,
    maximal_disjoint_family,
    patch_to_free,
    verify_family,
    verify_witness,
)
from monopat.hardness import hard_instance
from monopat.sequence import InvalidInput, RandomStream, Sequence


def brute_lis(vals):
    best = 0
    for m in range(len(vals) + 1):
        for t in itertools.combinations(range(len(vals)), m):
            if all(vals[a] < vals[b] for a, b in zip(t, t[1:])):
                best = max(best, m)
    return best


def test_find_pattern_examples():
    assert find_pattern_exact(Sequence([1, 2, 3]), 3).indices == (0, 1, 2)
    assert find_pattern_exact(Sequence([3, 2, 1]), 2) is None
    assert find_pattern_exact(Sequence([2, 3, 0, 1]), 2).indices == (0, 1)


def test_find_pattern_in_subset_examples():
    assert find_pattern_in_subset(Sequence([1, 2, 3]), {0, 2}, 2).indices == (0, 2)
    assert find_pattern_in_subset(Sequence([1, 2, 3]), {2}, 2) is None
    assert find_pattern_in_subset(Sequence([2, 3, 0, 1]), {0, 2, 3}, 2).indices == (2, 3)
    with pytest.raises(InvalidInput):
        find_pattern_in_subset(Sequence([1, 2]), {5}, 2)


def test_verify_witness_examples():
    f = Sequence([1, 2, 3])
    assert verify_witness(f, PatternWitness((0, 1, 2)))
    assert not verify_witness(f, (0, 0, 2))
    assert not verify_witness(Sequence([1, 3, 2]), (0, 1, 2))
    assert not verify_witness(f, (0, 3))
    assert not verify_witness(f, ())


def test_lis_against_brute_force():
    rng = RandomStream(1)
    for _ in range(200):
        vals = rng.integers(0, 5, size=int(rng.integers(1, 9))).tolist()
        assert lis_length(vals) == brute_lis(vals)
        for k in range(1, 5):
            w = find_pattern_exact(Sequence(vals), k)
            assert (w is not None) == (brute_lis(vals) >= k)
            if w is not None:
                assert verify_witness(Sequence(vals), w) and w.k == k


def test_find_increasing_ignores_duplicate_positions():
    w = find_increasing([4, 1, 4, 2], [9, 1, 9, 5], 3)
    assert w.indices == (1, 2, 4)
    assert find_increasing([3, 3], [1, 1], 2) is None


def test_disjoint_family_validation():
    with pytest.raises(InvalidInput):
        DisjointFamily(2, [(0, 1), (1, 2)])
    with pytest.raises(InvalidInput):
        DisjointFamily(2, [(0, 1, 2)])
    with pytest.raises(InvalidInput):
        TupleArray(2, [[0, 1], [1, 2]])


def test_tuple_array_matches_family():
    f = Sequence([0, 5, 1, 6, 2, 7])
    arr = TupleArray(2, [[0, 1], [2, 3], [4, 5]])
    assert verify_family(f, arr) and verify_family(f, arr.to_family())
    assert len(arr) == 3 and arr.support() == set(range(6))
    assert not verify_family(f, TupleArray(2, [[1, 2]]))


def test_maximal_family_examples():
    assert len(maximal_disjoint_family(Sequence(list(range(8))), 2)) == 4
    assert len(maximal_disjoint_family(Sequence([3, 2, 1]), 2)) == 0
    assert len(maximal_disjoint_family(hard_instance(8, (1,)), 2)) == 4


def test_maximal_family_is_maximal():
    rng = RandomStream(2)
    for _ in range(100):
        n = int(rng.integers(1, 25))
        f = Sequence(rng.generator.permutation(n))
        for k in (2, 3):
            fam = maximal_disjoint_family(f, k)
            assert verify_family(f, fam)
            rest = [i for i in range(n) if i not in fam.support()]
            assert find_pattern_in_subset(f, rest, k) is None


def test_patching_gives_free_sequence():
    rng = RandomStream(3)
    for _ in range(100):
        n = int(rng.integers(1, 30))
        f = Sequence(rng.integers(0, 10, size=n))
        for k in (2, 3, 4):
            fam = maximal_disjoint_family(f, k)
            g = patch_to_free(f, fam)
            assert lis_length(g.tolist()) < k
            changed = {i for i in range(n) if f[i] != g[i]}
            assert changed <= fam.support()


def test_greedy_examples():
    T = greedy_disjoint_tuples(Sequence([1, 2, 3, 4]), 2, DisjointFamily(2, [(0, 1), (2, 3)]))
    assert T.as_set() == {(0, 1), (2, 3)}
    T = greedy_disjoint_tuples(Sequence([2, 1, 4, 3]), 2, DisjointFamily(2, [(0, 2), (1, 3)]))
    assert T.as_set() == {(0, 2), (1, 3)}
    assert len(greedy_disjoint_tuples(Sequence([3, 2, 1]), 2, DisjointFamily(2, []))) == 0


def test_greedy_frozen_rematching():
    # start 0 (value 2) takes index 2 (value 4) before 3; start 1 is left with 3
    f = Sequence([2, 1, 4, 3])
    T0 = DisjointFamily(2, [(0, 3), (1, 2)])
    T = greedy_disjoint_tuples(f, 2, T0)
    assert [t.indices for t in T] == [(0, 2), (1, 3)]
    assert all(check_rematching(f, T0, T).values())


def reference_greedy(f, k0, T0):
    support = sorted(T0.support())
    used = set()
    out = []
    for s in support:
        if s in used:
            continue
        rest = [x for x in support if x > s and x not in used]
        for tail in itertools.combinations(rest, k0 - 1):
            t = (s,) + tail
            if all(f[a] < f[b] for a, b in zip(t, t[1:])):
                out.append(t)
                used.update(t)
                break
    return out


def test_greedy_against_reference():
    rng = RandomStream(4)
    for _ in range(150):
        n = int(rng.integers(4, 16))
        f = Sequence(rng.integers(0, 8, size=n))
        k0 = int(rng.integers(2, 4))
        T0 = maximal_disjoint_family(f, k0)
        T = greedy_disjoint_tuples(f, k0, T0)
        assert [t.indices for t in T] == reference_greedy(f, k0, T0)


def test_greedy_rejects_bad_family():
    with pytest.raises(InvalidInput):
        greedy_disjoint_tuples(Sequence([2, 1]), 2, DisjointFamily(2, [(0, 1)]))
    with pytest.raises(InvalidInput):
        greedy_disjoint_tuples(Sequence([1, 2]), 3, DisjointFamily(2, [(0, 1)]))


def test_c_gap_examples():
    assert c_gap((0, 1, 9)) == 2
    assert c_gap((0, 8, 9)) == 1
    assert c_gap((0, 4, 8)) == 1
    with pytest.raises(InvalidInput):
        c_gap((3,))


def test_c_gap_partition():
    T = DisjointFamily(3, [(0, 1, 9), (10, 18, 19), (20, 24, 28)])
    parts = c_gap_partition(T)
    assert {c: p.as_set() for c, p in parts.items()} == {1: {(10, 18, 19), (20, 24, 28)}, 2: {(0, 1, 9)}}
    with pytest.raises(InvalidInput):
        c_gap_partition(DisjointFamily(1, [(0,)]))
