"""Sequences, query-counted oracle access and seeded random streams."""

from __future__ import annotations

from pathlib import Path
from typing import Iterable

import numpy as np


class InvalidInput(ValueError):
    """Raised when arguments violate an operation's preconditions."""


class BudgetExceeded(RuntimeError):
    """Raised when an oracle would answer more queries than its budget allows."""


class Sequence:
    """An immutable sequence of ``n >= 1`` totally ordered integer entries.

    Entries that are not integers are rank-reduced on ingestion: the tester
    only ever compares values, so replacing them by their dense ranks keeps
    every pattern intact.
    """

    __slots__ = ("_values",)

    def __init__(self, values):
        arr = np.asarray(values)
        if arr.ndim != 1:
            raise InvalidInput("a sequence must be one-dimensional")
        if arr.size == 0:
            raise InvalidInput("a sequence needs at least one entry")
        if arr.dtype.kind in "iub":
            arr = arr.astype(np.int64, copy=True)
        elif arr.dtype.kind == "f":
            if np.isnan(arr).any():
                raise InvalidInput("NaN entries are not comparable")
            arr = np.unique(arr, return_inverse=True)[1].astype(np.int64)
        else:
            raise InvalidInput(f"unsupported entry type {arr.dtype}")
        arr.setflags(write=False)
        self._values = arr

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def n(self) -> int:
        return int(self._values.size)

    def __len__(self):
        return self.n

    def __getitem__(self, i):
        return self._values[i]

    def __eq__(self, other):
        if not isinstance(other, Sequence):
            return NotImplemented
        return np.array_equal(self._values, other._values)

    def __hash__(self):
        return hash(self._values.tobytes())

    def __repr__(self):
        if self.n <= 12:
            return f"Sequence(n={self.n}, values={self._values.tolist()})"
        return f"Sequence(n={self.n})"

    def tolist(self) -> list[int]:
        return self._values.tolist()


def make_sequence(values) -> Sequence:
    return Sequence(values)


def decreasing_perm(n: int) -> Sequence:
    """The decreasing permutation of ``[1, n]``, i.e. ``x -> n + 1 - x`` on 1-based positions."""
    if n < 1:
        raise InvalidInput("n must be positive")
    return Sequence(np.arange(n, 0, -1))


def descending_runs(n: int, runs: int) -> Sequence:
    """Concatenation of ``runs`` decreasing runs with increasing value bands.

    The result has longest increasing subsequence exactly ``min(runs, n)``, so
    it is (12...k)-free whenever ``runs < k``.
    """
    if runs < 1 or n < 1:
        raise InvalidInput("need n >= 1 and runs >= 1")
    sizes = np.full(runs, n // runs)
    sizes[: n % runs] += 1
    out = []
    base = 0
    for size in sizes:
        out.append(np.arange(base + size - 1, base - 1, -1))
        base += size
    return Sequence(np.concatenate(out))


def read_sequence(path) -> Sequence:
    """Read the one-integer-per-line text format."""
    lines = [ln.strip() for ln in Path(path).read_text().splitlines()]
    lines = [ln for ln in lines if ln]
    try:
        values = [int(ln) for ln in lines]
    except ValueError as exc:
        raise InvalidInput(f"{path}: {exc}") from None
    return Sequence(values)


def write_sequence(seq: Sequence, path) -> None:
    Path(path).write_text("".join(f"{v}\n" for v in seq.values.tolist()))


class QueryOracle:
    """Query access to a hidden sequence with exact accounting.

    Every answered query is logged, repeated positions included.  With a
    ``budget`` set, a query batch that would push the count past it raises
    :class:`BudgetExceeded` before anything is answered.
    """

    def __init__(self, seq: Sequence, budget: int | None = None):
        if budget is not None and budget < 1:
            raise InvalidInput("budget must be a positive integer")
        self._seq = seq
        self.budget = budget
        self._chunks: list[np.ndarray] = []
        self.query_count = 0

    @property
    def n(self) -> int:
        return self._seq.n

    @property
    def query_log(self) -> np.ndarray:
        if not self._chunks:
            return np.empty(0, dtype=np.int64)
        if len(self._chunks) > 1:
            self._chunks = [np.concatenate(self._chunks)]
        return self._chunks[0]

    def _charge(self, count: int) -> None:
        if self.budget is not None and self.query_count + count > self.budget:
            raise BudgetExceeded(
                f"{self.query_count} + {count} queries exceeds budget {self.budget}"
            )

    def query(self, i: int):
        i = int(i)
        if not 0 <= i < self.n:
            raise IndexError(f"position {i} outside [0, {self.n})")
        self._charge(1)
        self._chunks.append(np.array([i], dtype=np.int64))
        self.query_count += 1
        return self._seq.values[i]

    def query_many(self, positions) -> np.ndarray:
        """Answer a batch of queries; each entry counts, duplicates included."""
        pos = np.asarray(positions, dtype=np.int64).ravel()
        if pos.size == 0:
            return np.empty(0, dtype=np.int64)
        if pos.min() < 0 or pos.max() >= self.n:
            raise IndexError(f"query batch leaves [0, {self.n})")
        self._charge(pos.size)
        self._chunks.append(pos.copy())
        self.query_count += int(pos.size)
        return self._seq.values[pos]


def non_adaptivity_check(oracle: QueryOracle, planned: Iterable[int]) -> bool:
    """True iff every logged query was in the pre-committed ``planned`` set."""
    log = oracle.query_log
    if log.size == 0:
        return True
    if not isinstance(planned, np.ndarray):
        planned = np.fromiter(planned, dtype=np.int64)
    return bool(np.isin(log, planned).all())


class RandomStream:
    """A reproducible stream of random draws keyed by a 64-bit seed.

    ``spawn`` derives independent child streams, so trial ``t`` of an
    experiment with master seed ``s`` always sees the same randomness no
    matter how trials are scheduled.
    """

    def __init__(self, seed: int = 0, key: tuple[int, ...] = ()):
        self.seed = int(seed) & 0xFFFF_FFFF_FFFF_FFFF
        self.key = tuple(int(x) for x in key)
        self._gen = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence(self.seed, spawn_key=self.key))
        )
        self.position = 0

    @classmethod
    def for_trial(cls, master_seed: int, trial: int) -> "RandomStream":
        return cls(master_seed, (trial,))

    def spawn(self, tag: int) -> "RandomStream":
        return RandomStream(self.seed, self.key + (tag,))

    @property
    def generator(self) -> np.random.Generator:
        return self._gen

    def integers(self, low, high=None, size=None):
        self.position += 1 if size is None else int(np.prod(size))
        return self._gen.integers(low, high, size=size)

    def random(self, size=None):
        self.position += 1 if size is None else int(np.prod(size))
        return self._gen.random(size)

    def binomial(self, n, p, size=None):
        out = self._gen.binomial(n, p, size=size)
        self.position += int(np.size(out))
        return out

    def choice(self, a, size=None, replace=True):
        out = self._gen.choice(a, size=size, replace=replace)
        self.position += int(np.size(out))
        return out

    def __repr__(self):
        return f"RandomStream(seed={self.seed}, key={self.key}, position={self.position})"
