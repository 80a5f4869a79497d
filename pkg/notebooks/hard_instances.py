"""Walk through the hard instances and what a query set can learn from them.

Run:  python notebooks/hard_instances.py
"""

from monopat.exact import lis_length
from monopat.hardness import (
    adversary_success,
    bin_prof,
    hard_copies,
    hard_instance,
    pad_instance,
    padding_layout,
    verify_copy_profile_equivalence,
)

# A hard instance on 16 points with one flipped bit: a decreasing sequence
# in which the pairs differing first at bit 2 are turned into rises.
f = hard_instance(16, (2,))
print("values  :", f.values.tolist())
print("LIS     :", lis_length(f.values))
print("copies  :", [t.indices for t in hard_copies(16, (2,))])

# Two flips give length-4 copies.  Every increasing 4-tuple has exactly the
# flip profile, which the exhaustive check confirms.
print("k=4 copies on 64 points:", len(hard_copies(64, (1, 4))))
print("copy/profile equivalence:", verify_copy_profile_equivalence(64, (1, 4)))

# Sizes that are not a power of two get decreasing padding blocks; each block
# extends the pattern length by one.
print("layout for n=100, k=5:", padding_layout(100, 5))
print("padded:", pad_instance(hard_instance(16, (1, 3)), 24, 5).values.tolist())

# A query set only sees a copy if it contains one; the profiles it captures
# bound the chance of hitting a random hard instance.
Q = [0, 3, 5, 6, 9, 12, 15]
print("captured 2-profiles of", Q, ":", sorted(bin_prof(Q, 2, 16)))
print("success against random flip pairs:", adversary_success(Q, 16, 4))
