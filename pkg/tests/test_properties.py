from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from monopat.exact import (
    DisjointFamily,
    check_rematching,
    find_pattern_exact,
    greedy_disjoint_tuples,
    lis_length,
    maximal_disjoint_family,
    verify_witness,
)
from monopat.hardness import bin_prof, bit_flip, msb_diff
from monopat.sequence import QueryOracle, Sequence, non_adaptivity_check
from monopat.structure import mean_v_value
from monopat.tester import TesterConfig, sampler

small_lists = st.lists(st.integers(-5, 5), min_size=1, max_size=40)


@given(small_lists, st.integers(1, 6))
def test_pattern_found_iff_lis_long_enough(vals, k):
    w = find_pattern_exact(Sequence(vals), k)
    assert (w is not None) == (lis_length(vals) >= k)
    if w is not None:
        assert verify_witness(Sequence(vals), w)


@given(st.lists(st.floats(-1e6, 1e6, allow_nan=False), min_size=1, max_size=30))
def test_rank_reduction_keeps_order(vals):
    s = Sequence(vals).values
    for i in range(len(vals)):
        for j in range(len(vals)):
            assert (vals[i] < vals[j]) == (s[i] < s[j])


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 1000), min_size=2, max_size=300), st.integers(2, 5), st.integers(0, 2 ** 32))
def test_sampler_one_sided(vals, k, seed):
    f = Sequence(vals)
    o = QueryOracle(f)
    rep = sampler(o, TesterConfig(k, 0.25, seed=seed))
    if rep.outcome is not None:
        assert rep.outcome.k == k and verify_witness(f, rep.outcome)
    if lis_length(vals) < k:
        assert rep.outcome is None
    assert non_adaptivity_check(o, rep.planned_queries)


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(0, 20), min_size=1, max_size=40), st.integers(1, 4))
def test_rematching_properties(vals, k0):
    f = Sequence(vals)
    T0 = maximal_disjoint_family(f, k0)
    T = greedy_disjoint_tuples(f, k0, T0)
    assert all(check_rematching(f, T0, T).values())


@settings(max_examples=80, deadline=None)
@given(st.sets(st.integers(0, 255), max_size=24), st.integers(1, 2))
def test_profile_count_bound(Q, h):
    prof = bin_prof(Q, h, 256, backend="levels")
    assert len(prof) <= max(len(Q) - 1, 0)
    assert prof == bin_prof(Q, h, 256, backend="chain")


@given(st.integers(0, 63), st.integers(0, 63), st.integers(1, 6))
def test_flip_keeps_msb(x, y, i):
    if x != y:
        assert msb_diff(bit_flip(x, i, 64), bit_flip(y, i, 64)) == msb_diff(x, y)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(2, 80), st.integers(1, 80), st.integers(0, 5)), min_size=1, max_size=12))
def test_density_mean_bound_on_c_gap_pairs(specs):
    tuples, pos = [], 0
    for big, small, skip in specs:
        small = min(small, big)
        t = (pos + skip, pos + skip + big, pos + skip + big + small)
        tuples.append(t)
        pos = t[-1] + 1
    n = pos + 1
    U = DisjointFamily(3, tuples)
    assert mean_v_value(n, U, 1) >= Fraction(len(U), 3 * n)
