"""Partitions, permutations, standard tableaux and row-insertion RSK."""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from itertools import accumulate
from typing import Iterable, Sequence, Union

from .errors import ValidationError

__all__ = [
    "Partition",
    "Permutation",
    "StandardTableau",
    "RskPair",
    "SubsequenceWitness",
    "conjugate",
    "contains",
    "dominates",
    "rsk",
    "rsk_inverse",
    "shape_of",
    "shape_tuple",
    "pattern_of",
    "standardize",
    "longest_increasing_positions",
    "longest_decreasing_positions",
]


@dataclass(frozen=True, order=True)
class Partition:
    """A weakly decreasing tuple of positive parts; trailing zeros are dropped."""

    parts: tuple[int, ...] = ()

    def __init__(self, parts: Iterable[int] = ()):
        parts = tuple(int(p) for p in parts)
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        if any(p < 1 for p in parts):
            raise ValidationError(f"partition parts must be positive: {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValidationError(f"partition parts must be weakly decreasing: {parts}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def parse(cls, text: str) -> Partition:
        text = text.strip()
        if text in ("", "0", "()"):
            return cls(())
        try:
            return cls(int(t) for t in text.split(","))
        except ValueError as exc:
            if isinstance(exc, ValidationError):
                raise
            raise ValidationError(f"cannot parse partition {text!r}") from None

    @classmethod
    def rectangle(cls, m: int, k: int) -> Partition:
        """The shape (m^k): k rows of length m."""
        return cls((m,) * k if m > 0 else ())

    @classmethod
    def hook(cls, m: int, k: int) -> Partition:
        """The hook (m, 1^(k-1))."""
        if m < 1 or k < 1:
            raise ValidationError(f"hook needs m, k >= 1, got m={m}, k={k}")
        return cls((m,) + (1,) * (k - 1))

    def size(self) -> int:
        return sum(self.parts)

    def part(self, i: int) -> int:
        """The i-th part (0-based), reading missing parts as 0."""
        return self.parts[i] if 0 <= i < len(self.parts) else 0

    def conjugate(self) -> Partition:
        return conjugate(self)

    def is_rectangle(self) -> bool:
        return len(set(self.parts)) <= 1

    def is_hook(self) -> bool:
        return len(self.parts) <= 1 or self.parts[1] == 1

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def __str__(self) -> str:
        return ",".join(map(str, self.parts))


def conjugate(lam: Partition) -> Partition:
    parts = lam.parts
    if not parts:
        return Partition(())
    return Partition(sum(1 for p in parts if p > i) for i in range(parts[0]))


def contains(mu: Partition, lam: Partition) -> bool:
    """True iff the diagram of ``mu`` fits inside the diagram of ``lam``."""
    if len(mu) > len(lam):
        return False
    return all(a <= b for a, b in zip(mu.parts, lam.parts))


def dominates(lam: Partition, mu: Partition) -> bool:
    """True iff every prefix sum of ``mu`` is at most that of ``lam``."""
    length = max(len(lam), len(mu))
    lam_sums = accumulate(lam.part(i) for i in range(length))
    mu_sums = accumulate(mu.part(i) for i in range(length))
    return all(b <= a for a, b in zip(lam_sums, mu_sums))


@dataclass(frozen=True)
class Permutation:
    """One-line notation of a bijection of {1..n}."""

    word: tuple[int, ...]

    def __init__(self, word: Iterable[int]):
        word = tuple(int(x) for x in word)
        if sorted(word) != list(range(1, len(word) + 1)):
            raise ValidationError(f"not a permutation of 1..{len(word)}: {word}")
        object.__setattr__(self, "word", word)

    @classmethod
    def parse(cls, text: str) -> Permutation:
        """Comma-separated word, or a bare digit string when n <= 9."""
        text = text.strip()
        try:
            if "," in text:
                return cls(int(t) for t in text.split(","))
            if text.isdigit() and len(text) <= 9:
                return cls(int(c) for c in text)
        except ValueError as exc:
            if isinstance(exc, ValidationError):
                raise
        raise ValidationError(
            f"cannot parse permutation {text!r}; use comma-separated values "
            "(digit strings only for n <= 9)"
        )

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(range(1, n + 1))

    def reverse(self) -> Permutation:
        return Permutation(self.word[::-1])

    def __len__(self) -> int:
        return len(self.word)

    def __iter__(self):
        return iter(self.word)

    def __getitem__(self, i):
        return self.word[i]

    def __str__(self) -> str:
        return ",".join(map(str, self.word))


@dataclass(frozen=True)
class StandardTableau:
    rows: tuple[tuple[int, ...], ...]

    def __init__(self, rows: Iterable[Iterable[int]]):
        rows = tuple(tuple(int(x) for x in row) for row in rows)
        rows = tuple(row for row in rows if row)
        lengths = [len(r) for r in rows]
        if any(lengths[i] < lengths[i + 1] for i in range(len(lengths) - 1)):
            raise ValidationError(f"tableau rows must have weakly decreasing lengths: {rows}")
        entries = sorted(x for row in rows for x in row)
        if entries != list(range(1, len(entries) + 1)):
            raise ValidationError(f"tableau entries must be exactly 1..n: {rows}")
        for r, row in enumerate(rows):
            for c, x in enumerate(row):
                if c > 0 and row[c - 1] >= x:
                    raise ValidationError(f"row {r} is not increasing: {row}")
                if r > 0 and rows[r - 1][c] >= x:
                    raise ValidationError(f"column {c} is not increasing at row {r}")
        object.__setattr__(self, "rows", rows)

    @property
    def shape(self) -> Partition:
        return Partition(len(r) for r in self.rows)

    def size(self) -> int:
        return sum(len(r) for r in self.rows)

    def find(self, value: int) -> tuple[int, int]:
        for r, row in enumerate(self.rows):
            if value in row:
                return r, row.index(value)
        raise KeyError(value)

    def __str__(self) -> str:
        return "\n".join(" ".join(map(str, row)) for row in self.rows)


@dataclass(frozen=True)
class RskPair:
    p: StandardTableau
    q: StandardTableau

    def __post_init__(self):
        if self.p.shape != self.q.shape:
            raise ValidationError(
                f"insertion and recording shapes differ: {self.p.shape} vs {self.q.shape}"
            )

    @property
    def shape(self) -> Partition:
        return self.p.shape


@dataclass(frozen=True)
class SubsequenceWitness:
    """Positions (0-based, increasing) in a host permutation and their certified shape."""

    positions: tuple[int, ...]
    shape: Partition
    pattern: Permutation = field(compare=False)

    @classmethod
    def certify(cls, host: Sequence[int], positions: Iterable[int]) -> SubsequenceWitness:
        positions = tuple(sorted(positions))
        pattern = pattern_of(host, positions)
        return cls(positions, shape_of(pattern), pattern)

    def values(self, host: Sequence[int]) -> tuple[int, ...]:
        return tuple(host[i] for i in self.positions)


def _insert_rows(word: Sequence[int]) -> list[list[int]]:
    rows: list[list[int]] = []
    for x in word:
        for row in rows:
            j = bisect_right(row, x)
            if j == len(row):
                row.append(x)
                break
            row[j], x = x, row[j]
        else:
            rows.append([x])
    return rows


def shape_tuple(word: Sequence[int]) -> tuple[int, ...]:
    """RSK shape of any sequence of distinct integers, as a plain tuple."""
    return tuple(len(row) for row in _insert_rows(word))


def rsk(perm: Permutation) -> RskPair:
    p_rows: list[list[int]] = []
    q_rows: list[list[int]] = []
    for step, x in enumerate(perm.word, start=1):
        r = 0
        while True:
            if r == len(p_rows):
                p_rows.append([x])
                q_rows.append([step])
                break
            row = p_rows[r]
            j = bisect_right(row, x)
            if j == len(row):
                row.append(x)
                q_rows[r].append(step)
                break
            row[j], x = x, row[j]
            r += 1
    return RskPair(StandardTableau(p_rows), StandardTableau(q_rows))


def rsk_inverse(pair: RskPair) -> Permutation:
    if not isinstance(pair, RskPair):
        raise ValidationError("rsk_inverse expects an RskPair")
    p_rows = [list(row) for row in pair.p.rows]
    where = {}
    for r, row in enumerate(pair.q.rows):
        for c, step in enumerate(row):
            where[step] = (r, c)
    n = len(where)
    word = [0] * n
    for step in range(n, 0, -1):
        r, c = where[step]
        if c != len(p_rows[r]) - 1:
            raise ValidationError("recording tableau is not consistent with the insertion tableau")
        x = p_rows[r].pop()
        if not p_rows[r]:
            p_rows.pop()
        for rr in range(r - 1, -1, -1):
            row = p_rows[rr]
            j = bisect_left(row, x) - 1
            row[j], x = x, row[j]
        word[step - 1] = x
    return Permutation(word)


def shape_of(perm: Union[Permutation, Sequence[int]]) -> Partition:
    word = perm.word if isinstance(perm, Permutation) else perm
    return Partition(shape_tuple(word))


def standardize(values: Sequence[int]) -> tuple[int, ...]:
    """The permutation of 1..len(values) order-isomorphic to ``values``."""
    ranks = {v: i for i, v in enumerate(sorted(values), start=1)}
    if len(ranks) != len(values):
        raise ValidationError(f"values must be distinct: {tuple(values)}")
    return tuple(ranks[v] for v in values)


def pattern_of(perm: Union[Permutation, Sequence[int]], positions: Iterable[int]) -> Permutation:
    word = perm.word if isinstance(perm, Permutation) else tuple(perm)
    positions = tuple(positions)
    if any(not 0 <= i < len(word) for i in positions):
        raise ValidationError(f"positions out of range for n={len(word)}: {positions}")
    if any(positions[i] >= positions[i + 1] for i in range(len(positions) - 1)):
        raise ValidationError(f"positions must be strictly increasing: {positions}")
    return Permutation(standardize([word[i] for i in positions]))


def longest_increasing_positions(word: Sequence[int]) -> list[int]:
    """Positions of one longest increasing subsequence (patience sorting)."""
    tails: list[int] = []
    tail_pos: list[int] = []
    prev = [-1] * len(word)
    for i, x in enumerate(word):
        j = bisect_left(tails, x)
        if j == len(tails):
            tails.append(x)
            tail_pos.append(i)
        else:
            tails[j] = x
            tail_pos[j] = i
        prev[i] = tail_pos[j - 1] if j > 0 else -1
    out = []
    i = tail_pos[-1] if tail_pos else -1
    while i != -1:
        out.append(i)
        i = prev[i]
    return out[::-1]


def longest_decreasing_positions(word: Sequence[int]) -> list[int]:
    return longest_increasing_positions([-x for x in word])
