"""Sublinear testing of monotone subsequences, with exact oracles and lower-bound instances."""

from .sequence import (
    BudgetExceeded,
    InvalidInput,
    QueryOracle,
    RandomStream,
    Sequence,
    decreasing_perm,
    descending_runs,
    make_sequence,
    non_adaptivity_check,
    read_sequence,
    write_sequence,
)
from .exact import (
    DisjointFamily,
    PatternWitness,
    c_gap,
    c_gap_partition,
    check_rematching,
    find_pattern_exact,
    find_pattern_in_subset,
    greedy_disjoint_tuples,
    maximal_disjoint_family,
    patch_to_free,
    verify_family,
    verify_witness,
)
from .hardness import (
    adversary_success,
    bin_prof,
    bit_flip,
    hard_copies,
    hard_instance,
    msb_diff,
    pad_instance,
    verify_copy_profile_equivalence,
)
from .tester import (
    TesterConfig,
    TesterReport,
    growing_suffix_probe,
    sample_helper,
    sample_splittable,
    sample_suffix,
    run_tester,
    sampler,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "InvalidInput",
    "QueryOracle",
    "RandomStream",
    "Sequence",
    "decreasing_perm",
    "descending_runs",
    "make_sequence",
    "non_adaptivity_check",
    "read_sequence",
    "write_sequence",
    "DisjointFamily",
    "PatternWitness",
    "c_gap",
    "c_gap_partition",
    "check_rematching",
    "find_pattern_exact",
    "find_pattern_in_subset",
    "greedy_disjoint_tuples",
    "maximal_disjoint_family",
    "patch_to_free",
    "verify_family",
    "verify_witness",
    "adversary_success",
    "bin_prof",
    "bit_flip",
    "hard_copies",
    "hard_instance",
    "msb_diff",
    "pad_instance",
    "verify_copy_profile_equivalence",
    "TesterConfig",
    "TesterReport",
    "growing_suffix_probe",
    "sample_helper",
    "sample_splittable",
    "sample_suffix",
    "run_tester",
    "sampler",
]
