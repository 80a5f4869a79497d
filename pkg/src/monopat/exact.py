"""Full-access ground truth: pattern search, disjoint families, greedy rematching.

Everything here reads the whole sequence.  These are the oracles the
sublinear testers and the instance generators are checked against.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .sequence import InvalidInput, Sequence


@dataclass(frozen=True)
class PatternWitness:
    """k positions claimed to carry a strictly increasing subsequence."""

    indices: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(int(i) for i in self.indices))

    @property
    def k(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __len__(self):
        return len(self.indices)

    def __getitem__(self, i):
        return self.indices[i]


@dataclass
class DisjointFamily:
    """Pairwise index-disjoint length-``k0`` tuples."""

    k0: int
    tuples: list[PatternWitness] = field(default_factory=list)

    def __post_init__(self):
        self.tuples = [t if isinstance(t, PatternWitness) else PatternWitness(t) for t in self.tuples]
        for t in self.tuples:
            if t.k != self.k0:
                raise InvalidInput(f"tuple {t.indices} does not have length {self.k0}")
        if len(self.support()) != self.k0 * len(self.tuples):
            raise InvalidInput("tuples of a disjoint family must not share indices")

    def __len__(self):
        return len(self.tuples)

    def __iter__(self):
        return iter(self.tuples)

    def support(self) -> set[int]:
        """E(T): every index used by some tuple."""
        return {i for t in self.tuples for i in t.indices}

    def as_set(self) -> set[tuple[int, ...]]:
        return {t.indices for t in self.tuples}


class TupleArray:
    """A disjoint family stored as an ``(m, k0)`` integer array, one tuple per row.

    Same reading interface as :class:`DisjointFamily`; meant for the large
    certificates of generated instances, where per-tuple objects are too slow.
    """

    def __init__(self, k0: int, rows):
        arr = np.asarray(rows, dtype=np.int64).reshape(-1, k0)
        if np.unique(arr).size != arr.size:
            raise InvalidInput("tuples of a disjoint family must not share indices")
        arr.setflags(write=False)
        self.k0 = k0
        self.rows = arr

    def __len__(self):
        return self.rows.shape[0]

    def __iter__(self):
        return (PatternWitness(r) for r in self.rows.tolist())

    @property
    def tuples(self) -> list[PatternWitness]:
        return list(self)

    def support(self) -> set[int]:
        return set(self.rows.ravel().tolist())

    def as_set(self) -> set[tuple[int, ...]]:
        return {tuple(r) for r in self.rows.tolist()}

    def to_family(self) -> DisjointFamily:
        return DisjointFamily(self.k0, self.tuples)


def verify_witness(f: Sequence, w) -> bool:
    idx = tuple(w.indices if isinstance(w, PatternWitness) else w)
    if not idx:
        return False
    if any(not 0 <= i < f.n for i in idx):
        return False
    vals = f.values
    return all(idx[j] < idx[j + 1] and vals[idx[j]] < vals[idx[j + 1]] for j in range(len(idx) - 1))


def verify_family(f: Sequence, family: DisjointFamily) -> bool:
    """All tuples are witnesses and pairwise disjoint (disjointness is a constructor invariant)."""
    if isinstance(family, TupleArray):
        rows = family.rows
        if rows.size == 0:
            return True
        if rows.min() < 0 or rows.max() >= f.n:
            return False
        vals = f.values[rows]
        return bool((np.diff(rows, axis=1) > 0).all() and (np.diff(vals, axis=1) > 0).all())
    return all(verify_witness(f, t) for t in family)


def _lis_positions(values, k: int) -> list[int] | None:
    """Positions (into ``values``) of a strictly increasing run of length ``k``, or None.

    Patience sorting with back-pointers; stops as soon as a pile of height
    ``k`` appears.
    """
    if k <= 0:
        return []
    tails: list = []
    tail_pos: list[int] = []
    back = [-1] * len(values)
    for p, v in enumerate(values):
        h = bisect_left(tails, v)
        if h == len(tails):
            tails.append(v)
            tail_pos.append(p)
        else:
            tails[h] = v
            tail_pos[h] = p
        back[p] = tail_pos[h - 1] if h > 0 else -1
        if h + 1 == k:
            out = [p]
            while back[out[-1]] >= 0:
                out.append(back[out[-1]])
            return out[::-1]
    return None


def lis_length(values) -> int:
    tails: list = []
    for v in values:
        h = bisect_left(tails, v)
        if h == len(tails):
            tails.append(v)
        else:
            tails[h] = v
    return len(tails)


def find_increasing(indices, values, k: int) -> PatternWitness | None:
    """Search a set of already-known (position, value) pairs for a length-k pattern.

    This is what the testers call on their query answers: it never looks at
    anything except the pairs it is given.
    """
    if k < 1:
        raise InvalidInput("k must be at least 1")
    idx = np.asarray(indices, dtype=np.int64)
    vals = np.asarray(values)
    if idx.size < k:
        return None
    order = np.argsort(idx, kind="stable")
    idx, vals = idx[order], vals[order]
    keep = np.ones(idx.size, dtype=bool)
    keep[1:] = idx[1:] != idx[:-1]
    idx, vals = idx[keep], vals[keep]
    found = _lis_positions(vals.tolist(), k)
    if found is None:
        return None
    return PatternWitness(idx[found].tolist())


def find_pattern_exact(f: Sequence, k: int) -> PatternWitness | None:
    if k < 1:
        raise InvalidInput("k must be at least 1")
    found = _lis_positions(f.values.tolist(), k)
    return None if found is None else PatternWitness(found)


def find_pattern_in_subset(f: Sequence, Q: Iterable[int], k: int) -> PatternWitness | None:
    q = np.unique(np.fromiter(Q, dtype=np.int64))
    if q.size and (q[0] < 0 or q[-1] >= f.n):
        raise InvalidInput("subset leaves the domain")
    return find_increasing(q, f.values[q], k)


def maximal_disjoint_family(f: Sequence, k: int) -> DisjointFamily:
    """A maximal (not maximum) family of disjoint length-k increasing subsequences.

    Repeatedly extracts a pattern from the not-yet-used positions until none
    is left, so no length-k pattern avoids the support of the result.
    """
    if k < 1:
        raise InvalidInput("k must be at least 1")
    free = np.arange(f.n)
    tuples = []
    while free.size >= k:
        found = _lis_positions(f.values[free].tolist(), k)
        if found is None:
            break
        tuples.append(PatternWitness(free[found].tolist()))
        free = np.delete(free, found)
    return DisjointFamily(k, tuples)


def patch_to_free(f: Sequence, family: DisjointFamily) -> Sequence:
    """Edit only the support of a maximal family so that the result is pattern-free.

    Each used position copies the value of the closest unused position to its
    left, or the global maximum when there is none.  If ``family`` is maximal
    for length k, the output has no length-k increasing subsequence.
    """
    used = np.zeros(f.n, dtype=bool)
    used[list(family.support())] = True
    out = f.values.copy()
    top = f.values.max()
    last = None
    for i in range(f.n):
        if used[i]:
            out[i] = top if last is None else last
        else:
            last = out[i]
    return Sequence(out)


class _MaxTree:
    """Fenwick tree for prefix maxima over value ranks."""

    def __init__(self, size):
        self.tree = [0] * (size + 1)

    def update(self, i, v):
        i += 1
        while i < len(self.tree):
            if self.tree[i] < v:
                self.tree[i] = v
            i += i & -i

    def query(self, i):
        """max over ranks [0, i)."""
        best = 0
        while i > 0:
            if self.tree[i] > best:
                best = self.tree[i]
            i -= i & -i
        return best


def _extension_lengths(vals, avail):
    """For each position p, the longest strictly increasing run starting at p using only available positions."""
    m = len(vals)
    ranks = {v: r for r, v in enumerate(sorted(set(vals)))}
    nr = len(ranks)
    tree = _MaxTree(nr)
    ext = [0] * m
    # scan right to left; query ranks strictly greater via reversed rank order
    for p in range(m - 1, -1, -1):
        if not avail[p]:
            continue
        r = nr - 1 - ranks[vals[p]]
        ext[p] = 1 + tree.query(r)
        tree.update(r, ext[p])
    return ext


def greedy_disjoint_tuples(f: Sequence, k0: int, T0: DisjointFamily) -> DisjointFamily:
    """Greedy rematching of a disjoint family.

    Scans the support of ``T0`` left to right.  At each start index still
    unused, it builds the lexicographically smallest length-``k0`` increasing
    subsequence inside the unused part of the support, if one exists.
    """
    if k0 < 1 or T0.k0 != k0:
        raise InvalidInput("T0 must be a family of length-k0 tuples")
    if not verify_family(f, T0):
        raise InvalidInput("T0 contains a tuple that is not an increasing subsequence")
    support = sorted(T0.support())
    vals = [f.values[i].item() for i in support]
    m = len(support)
    avail = [True] * m
    ext = _extension_lengths(vals, avail)
    out = []
    for p in range(m):
        if not avail[p] or ext[p] < k0:
            continue
        chosen = [p]
        for step in range(1, k0):
            need = k0 - step
            prev = chosen[-1]
            nxt = next(
                q for q in range(prev + 1, m)
                if avail[q] and vals[q] > vals[prev] and ext[q] >= need
            )
            chosen.append(nxt)
        for q in chosen:
            avail[q] = False
        out.append(PatternWitness([support[q] for q in chosen]))
        ext = _extension_lengths(vals, avail)
    return DisjointFamily(k0, out)


def check_rematching(f: Sequence, T0: DisjointFamily, T: DisjointFamily) -> dict[str, bool]:
    """Direct check of the three rematching guarantees plus ``E(T) ⊆ E(T0)``."""
    k0 = T0.k0
    tuples = [t.indices for t in T]
    vals = f.values
    interleave = True
    for a in tuples:
        for b in tuples:
            if a[0] >= b[0]:
                continue
            for ell in range(k0 - 1):
                if a[ell] < b[ell] and a[ell + 1] > b[ell + 1] and not vals[a[ell + 1]] > vals[b[ell + 1]]:
                    interleave = False
    return {
        "subset": T.support() <= T0.support(),
        "monotone": verify_family(f, T) and T.k0 == k0,
        "size": len(T) * k0 >= len(T0),
        "interleave": interleave,
    }


def c_gap(indices) -> int:
    """1-based position c of the first largest consecutive gap."""
    idx = tuple(indices)
    if len(idx) < 2:
        raise InvalidInput("a tuple needs two entries to have a gap")
    gaps = [idx[b + 1] - idx[b] for b in range(len(idx) - 1)]
    return gaps.index(max(gaps)) + 1


def c_gap_partition(T: DisjointFamily) -> dict[int, DisjointFamily]:
    if T.k0 < 2:
        raise InvalidInput("c-gap partition needs k0 >= 2")
    parts: dict[int, list] = {}
    for t in T:
        parts.setdefault(c_gap(t.indices), []).append(t)
    return {c: DisjointFamily(T.k0, ts) for c, ts in sorted(parts.items())}
