"""Hard instances for non-adaptive one-sided testers and binary profiles.

Bit positions are 1-based from the least significant bit, positions in the
domain are ``0 .. n-1``.  For ``k = 2**h`` the hard permutation with flip
positions ``i_1 < ... < i_h`` is the decreasing permutation precomposed with
the corresponding bit flips; its increasing pairs are exactly the pairs whose
most significant differing bit is a flip position.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Iterable

import numpy as np

from .exact import DisjointFamily, PatternWitness, TupleArray, find_pattern_exact
from .sequence import InvalidInput, Sequence


def _log2_exact(n: int) -> int:
    if n < 1 or n & (n - 1):
        raise InvalidInput(f"{n} is not a power of two")
    return n.bit_length() - 1


def msb_diff(x: int, y: int) -> int:
    """Most significant differing bit of ``x`` and ``y`` (1 = least significant)."""
    if x == y:
        raise InvalidInput("msb_diff needs distinct arguments")
    return (int(x) ^ int(y)).bit_length()


def bit_flip(t: int, i: int, n: int) -> int:
    L = _log2_exact(n)
    if not 1 <= i <= L:
        raise InvalidInput(f"bit position {i} outside [1, {L}]")
    if not 0 <= t < n:
        raise InvalidInput(f"{t} outside [0, {n})")
    return t ^ (1 << (i - 1))


def _check_flips(n: int, flip_indices) -> tuple[int, ...]:
    L = _log2_exact(n)
    flips = tuple(int(i) for i in flip_indices)
    if any(b <= a for a, b in zip(flips, flips[1:])):
        raise InvalidInput("flip positions must be strictly increasing")
    if flips and (flips[0] < 1 or flips[-1] > L):
        raise InvalidInput(f"flip positions must lie in [1, {L}]")
    return flips


def hard_instance(n: int, flip_indices: Iterable[int]) -> Sequence:
    flips = _check_flips(n, flip_indices)
    mask = sum(1 << (i - 1) for i in flips)
    x = np.arange(n, dtype=np.int64)
    return Sequence(n - 1 - (x ^ mask))


def hard_copies(n: int, flip_indices: Iterable[int]) -> DisjointFamily:
    """The ``n / 2**h`` disjoint copies: classes of positions agreeing off the flip bits."""
    flips = _check_flips(n, flip_indices)
    mask = sum(1 << (i - 1) for i in flips)
    offsets = sorted(
        sum(1 << (i - 1) for i, bit in zip(flips, bits) if bit)
        for bits in itertools.product((0, 1), repeat=len(flips))
    )
    bases = [x for x in range(n) if x & mask == 0]
    return DisjointFamily(len(offsets), [PatternWitness([b + o for o in offsets]) for b in bases])


def hard_copy_array(n: int, flip_indices: Iterable[int]) -> TupleArray:
    """Same copies as :func:`hard_copies`, built with array arithmetic."""
    flips = _check_flips(n, flip_indices)
    mask = sum(1 << (i - 1) for i in flips)
    offsets = np.array(sorted(
        sum(1 << (i - 1) for i, bit in zip(flips, bits) if bit)
        for bits in itertools.product((0, 1), repeat=len(flips))
    ), dtype=np.int64)
    x = np.arange(n, dtype=np.int64)
    bases = x[(x & mask) == 0]
    return TupleArray(len(offsets), bases[:, None] + offsets[None, :])


def all_flip_sets(n: int, h: int) -> list[tuple[int, ...]]:
    """Support of the hard distribution: every h-subset of bit positions."""
    L = _log2_exact(n)
    return list(itertools.combinations(range(1, L + 1), h))


def random_flip_set(n: int, h: int, rng) -> tuple[int, ...]:
    L = _log2_exact(n)
    if not 0 <= h <= L:
        raise InvalidInput(f"need 0 <= h <= {L}")
    gen = rng.generator if hasattr(rng, "generator") else rng
    return tuple(sorted(int(i) + 1 for i in gen.choice(L, size=h, replace=False)))


def padding_layout(n: int, k: int) -> tuple[int, int, int, list[int]]:
    """``(k', n', t, block_sizes)`` for extending a power-of-two instance to general n, k."""
    if k < 2 or n < k:
        raise InvalidInput("need 2 <= k <= n")
    h = k.bit_length() - 1
    kp = 1 << h
    t = k - kp
    n_prime = 1 << ((n * kp // k).bit_length() - 1)
    if n_prime < kp:
        raise InvalidInput("n too small to pad")
    rest = n - n_prime
    if t == 0:
        return kp, n_prime, 0, []
    sizes = [rest // t + (1 if b < rest % t else 0) for b in range(t)]
    if min(sizes) < n_prime // kp:
        raise InvalidInput("padding blocks too small")
    return kp, n_prime, t, sizes


def pad_instance(base: Sequence, n: int, k: int) -> Sequence:
    """Extend an instance on ``n'`` points by ``t = k - k'`` decreasing blocks.

    The blocks sit to the right of ``base``, each above ``base`` and above
    the blocks before it in value, so every copy of the shorter pattern in
    ``base`` extends by one element per block.  When ``t = 0`` the suffix
    ``[n', n)`` is a single decreasing run placed below everything.
    """
    kp, n_prime, t, sizes = padding_layout(n, k)
    if base.n != n_prime:
        raise InvalidInput(f"base instance must have {n_prime} points, got {base.n}")
    parts = [base.values.astype(np.int64)]
    top = int(base.values.max()) + 1
    if t == 0 and n > n_prime:
        low = int(base.values.min())
        parts.append(np.arange(low - 1, low - 1 - (n - n_prime), -1))
    for size in sizes:
        parts.append(np.arange(top + size - 1, top - 1, -1))
        top += size
    raw = np.concatenate(parts)
    ranks = np.empty(n, dtype=np.int64)
    ranks[np.argsort(raw, kind="stable")] = np.arange(n)
    return Sequence(ranks)


def profile_sequence(h: int) -> list[int]:
    """Which flip slot each consecutive gap uses: ``[1, 2, 1, 3, 1, 2, 1, ...]`` (1-based)."""
    return [msb_diff(j - 1, j) for j in range(1, 1 << h)]


def has_profile(tup, profile) -> bool:
    tup = tuple(int(x) for x in tup)
    profile = tuple(profile)
    h = len(profile)
    if h < 1 or len(tup) != 1 << h:
        raise InvalidInput("tuple length must be 2**len(profile)")
    if any(b <= a for a, b in zip(tup, tup[1:])):
        raise InvalidInput("tuple must be strictly increasing")
    slots = profile_sequence(h)
    return all(msb_diff(tup[j], tup[j + 1]) == profile[slots[j] - 1] for j in range(len(tup) - 1))


def _bin_prof_enumerate(Q, h):
    k = 1 << h
    out = set()
    for tup in itertools.combinations(sorted(Q), k):
        ms = [msb_diff(a, b) for a, b in zip(tup, tup[1:])]
        slots = profile_sequence(h)
        prof = [0] * h
        ok = True
        for m, s in zip(ms, slots):
            if prof[s - 1] == 0:
                prof[s - 1] = m
            elif prof[s - 1] != m:
                ok = False
                break
        if ok and all(a < b for a, b in zip(prof, prof[1:])):
            out.add(tuple(prof))
    return out


def _bin_prof_chain(Q, h):
    """Chain dynamic program over sorted Q.

    A state after choosing ``j`` elements is ``(last element, partial
    profile)``; extending by ``y > last`` must respect the profile slot the
    gap uses and keep the profile increasing.  All states are kept, so this is
    an exhaustive search over tuples, deduplicated by state.
    """
    q = sorted(set(Q))
    k = 1 << h
    if len(q) < k:
        return set()
    slots = profile_sequence(h)
    states = {(x, (0,) * h) for x in q}
    for j in range(k - 1):
        s = slots[j] - 1
        nxt = set()
        for last, prof in states:
            for y in q:
                if y <= last:
                    continue
                m = (last ^ y).bit_length()
                if prof[s]:
                    if prof[s] != m:
                        continue
                    nxt.add((y, prof))
                else:
                    # slot s is first used here; slots are filled in increasing order
                    if s and m <= prof[s - 1]:
                        continue
                    nxt.add((y, prof[:s] + (m,) + prof[s + 1:]))
        states = nxt
        if not states:
            return set()
    return {prof for _, prof in states}


def level_sets(Q, L: int) -> list[list[int]]:
    """The nested sets ``B_1 ⊇ B_2 ⊇ ... ⊇ B_L`` (index ``j-1`` holds ``B_j``).

    ``B_j`` is a maximal subset of ``Q`` containing ``B_{j+1}`` with no two
    elements differing first below bit ``j``, built by a left-to-right greedy
    scan.  Equivalently it keeps one representative per occupied aligned
    block of size ``2**(j-1)``.
    """
    q = sorted(set(Q))
    out: list[list[int]] = [[] for _ in range(L + 1)]
    current: list[int] = []
    for j in range(L, 0, -1):
        shift = j - 1
        taken = {x >> shift for x in current}
        chosen = list(current)
        for x in q:
            if (x >> shift) not in taken:
                taken.add(x >> shift)
                chosen.append(x)
        current = sorted(chosen)
        out[j - 1] = current
    return out[:L]


def _bin_prof_levels(Q, h, L):
    """Recursive backend built on the level sets.

    Profiles starting with ``j`` are exactly those captured inside ``B_j``.
    There, a gap with most significant bit ``j`` joins two representatives in
    opposite halves of one aligned ``2**j`` block, so such pairs contract to
    block ids and the remaining ``h - 1`` entries form a profile of the
    contracted set over ``L - j`` bits.
    """
    q = sorted(set(Q))
    if h == 0:
        return {()} if q else set()
    if len(q) < 1 << h:
        return set()
    out = set()
    levels = level_sets(q, L)
    for j in range(1, L + 1):
        Bj = levels[j - 1]
        halves: dict[int, set[int]] = {}
        for x in Bj:
            halves.setdefault(x >> j, set()).add((x >> (j - 1)) & 1)
        blocks = [b for b, hs in halves.items() if len(hs) == 2]
        if h == 1:
            if blocks:
                out.add((j,))
            continue
        for rest in _bin_prof_levels(blocks, h - 1, L - j):
            out.add((j,) + tuple(r + j for r in rest))
    return out


def bin_prof(Q: Iterable[int], h: int, n: int, backend: str = "chain") -> set[tuple[int, ...]]:
    """All h-profiles captured by ``Q``.

    Backends: ``"chain"`` (exhaustive tuple search, deduplicated by state),
    ``"levels"`` (recursion over the nested level sets), ``"enumerate"``
    (literal enumeration of all ``2**h``-subsets; tiny ``Q`` only).
    """
    L = _log2_exact(n)
    if h < 1:
        raise InvalidInput("h must be at least 1")
    q = sorted(set(int(x) for x in Q))
    if q and (q[0] < 0 or q[-1] >= n):
        raise InvalidInput("Q leaves the domain")
    if backend == "chain":
        return _bin_prof_chain(q, h)
    if backend == "levels":
        return _bin_prof_levels(q, h, L)
    if backend == "enumerate":
        return _bin_prof_enumerate(q, h)
    raise InvalidInput(f"unknown backend {backend!r}")


def adversary_success(Q: Iterable[int], n: int, k: int) -> Fraction:
    """Probability that ``Q`` captures a copy in a uniformly drawn hard instance."""
    h = _log2_exact(k)
    L = _log2_exact(n)
    if h > L:
        raise InvalidInput("k must not exceed n")
    return Fraction(len(bin_prof(Q, h, n)), math.comb(L, h))


def _count_chains(masks) -> int:
    """Number of tuples ``x_1 < ... < x_m`` with ``masks[j][x_j, x_{j+1}]`` true for every step."""
    n = masks[0].shape[0]
    cnt = np.ones(n, dtype=np.int64)
    for mask in masks:
        cnt = cnt @ mask.astype(np.int64)
    return int(cnt.sum())


def verify_copy_profile_equivalence(n: int, flip_indices) -> bool:
    """Exhaustively compare the copy set of a hard instance with its profile set.

    Every increasing tuple is accounted for by chain counting: with ``C`` the
    copies, ``P`` the tuples of the matching profile, the check is
    ``|C| == |P| == |C ∩ P|``, which forces ``C == P``.  Also checks that the
    longest increasing subsequence has length exactly ``2**h``.
    """
    flips = _check_flips(n, flip_indices)
    h = len(flips)
    k = 1 << h
    f = hard_instance(n, flips)
    if find_pattern_exact(f, k) is None or find_pattern_exact(f, k + 1) is not None:
        return False
    x = np.arange(n)
    later = x[:, None] < x[None, :]
    rising = later & (f.values[:, None] < f.values[None, :])
    msb = np.zeros((n, n), dtype=np.int64)
    diff = x[:, None] ^ x[None, :]
    nz = diff > 0
    msb[nz] = np.floor(np.log2(diff[nz])).astype(np.int64) + 1
    steps = [later & (msb == flips[s - 1]) for s in profile_sequence(h)]
    copies = _count_chains([rising] * (k - 1))
    profiled = _count_chains(steps)
    both = _count_chains([m & rising for m in steps])
    return copies == profiled == both
