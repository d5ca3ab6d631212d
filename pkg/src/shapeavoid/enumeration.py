"""Exact counts of shape-avoiding permutations, Knuth cells and growth series.

Every count is an exact Python integer.  Floats only appear in
:class:`GrowthSeries`.  Scans over S_n are split into n shards by the first
letter of the word and summed in shard order, so results never depend on
the number of workers.
"""

from __future__ import annotations

import math
import os
from bisect import bisect_left, bisect_right
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations
from typing import Iterable, Iterator, Optional, Sequence, Union

from .core import (
    Partition,
    Permutation,
    RskPair,
    StandardTableau,
    conjugate,
    contains,
    rsk_inverse,
    shape_tuple,
    standardize,
)
from .errors import BudgetExceeded, PreconditionError, ValidationError

DEFAULT_BUDGET = 10_000_000

METHODS = ("brute", "hook-formula", "two-two-formula", "cell-sum-bound")


@dataclass(frozen=True)
class CountRecord:
    n: int
    target: Union[Partition, Permutation]
    count: int
    method: str

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValidationError(f"unknown count method {self.method!r}")
        if self.count < 0 or not _at_most_factorial(self.count, self.n):
            raise ValidationError(f"count {self.count} out of range for n={self.n}")

    @property
    def is_upper_bound(self) -> bool:
        return self.method == "cell-sum-bound"


@dataclass(frozen=True)
class GrowthSeries:
    """Points (n, count ** (1/2n)) with the reference constants they are compared to."""

    points: tuple[tuple[int, float], ...]
    lower_ref: float
    upper_ref: float
    hook_limit: Optional[float] = None

    def roots(self) -> list[float]:
        return [r for _, r in self.points]


@dataclass(frozen=True)
class CellIdentityReport:
    """Comparison of the avoiders of ``mu`` with the permutations whose shape omits ``mu``.

    ``avoid_only`` counts avoiders whose shape contains mu; ``union_only``
    counts non-avoiders whose shape does not contain mu.
    """

    n: int
    mu: Partition
    total: int
    avoiders: int
    union_size: int
    avoid_only: int
    union_only: int
    examples: dict = field(default_factory=dict, compare=False)

    @property
    def relation(self) -> str:
        if not self.avoid_only and not self.union_only:
            return "equal"
        if not self.avoid_only:
            return "strict-subset"
        if not self.union_only:
            return "strict-superset"
        return "neither"


def _at_most_factorial(count: int, n: int) -> bool:
    if n <= 2000:
        return count <= _factorial(n)
    # exact n! is costly to rebuild per record at this size; compare magnitudes
    return count.bit_length() <= math.lgamma(n + 1) / math.log(2) + 1


def _check_budget(what: str, work: int, budget: Optional[int]) -> None:
    if budget is not None and work > budget:
        raise BudgetExceeded(what, work, budget)


def _partition_tuples(
    n: int, max_part: Optional[int] = None, max_length: Optional[int] = None
) -> Iterator[tuple[int, ...]]:
    top = n if max_part is None else min(max_part, n)
    limit = n if max_length is None else max_length
    if n == 0:
        yield ()
        return
    parts: list[int] = []
    # one frame per depth: [remaining sum, next candidate part]
    stack = [[n, top]]
    while stack:
        frame = stack[-1]
        rest, v = frame
        if v < 1 or v * (limit - len(parts)) < rest:
            stack.pop()
            if parts:
                parts.pop()
            continue
        frame[1] = v - 1
        if v == rest:
            yield tuple(parts) + (v,)
            continue
        if v == 1:
            yield tuple(parts) + (1,) * rest
            continue
        parts.append(v)
        stack.append([rest - v, min(v, rest - v)])


def partitions_of(
    n: int, max_part: Optional[int] = None, max_length: Optional[int] = None
) -> Iterator[Partition]:
    """Partitions of n in reverse lexicographic order, optionally bounded in width/length."""
    if n < 0:
        raise PreconditionError(f"n must be >= 0, got {n}")
    for parts in _partition_tuples(n, max_part, max_length):
        yield Partition(parts)


@lru_cache(maxsize=None)
def _factorial(n: int) -> int:
    return math.factorial(n)


def _syt_count(parts: tuple[int, ...]) -> int:
    """n! * prod_{i<j} (l_i - l_j) / prod l_i!  with l_i = parts_i + (rows - 1 - i).

    Evaluated on whichever of the shape and its conjugate has fewer rows.
    """
    if not parts:
        return 1
    if len(parts) > parts[0]:
        neg = [-p for p in parts]
        parts = tuple(bisect_right(neg, -j) for j in range(1, parts[0] + 1))
    rows = len(parts)
    shifted = [p + rows - 1 - i for i, p in enumerate(parts)]
    num = _factorial(sum(parts))
    for i in range(rows):
        for j in range(i + 1, rows):
            num *= shifted[i] - shifted[j]
    den = 1
    for x in shifted:
        den *= _factorial(x)
    return num // den


def syt_count(lam: Partition) -> int:
    """Number of standard tableaux of shape ``lam`` by the hook length formula."""
    return _syt_count(lam.parts)


def standard_tableaux(lam: Partition) -> Iterator[StandardTableau]:
    """All standard tableaux of shape ``lam`` (the largest entry sits in some corner)."""

    def rec(shape: list[int]) -> Iterator[list[list[int]]]:
        size = sum(shape)
        if size == 0:
            yield [[] for _ in shape]
            return
        for r, length in enumerate(shape):
            if length and (r + 1 == len(shape) or shape[r + 1] < length):
                shape[r] -= 1
                for rows in rec(shape):
                    yield [row + [size] if i == r else row for i, row in enumerate(rows)]
                shape[r] += 1

    for rows in rec(list(lam.parts)):
        yield StandardTableau(rows)


def knuth_cell(mu: Partition, budget: Optional[int] = DEFAULT_BUDGET) -> list[Permutation]:
    """All permutations of shape ``mu``, sorted, built as RSK preimages of tableau pairs."""
    f = syt_count(mu)
    _check_budget(f"knuth cell of {mu}", f * f, budget)
    tableaux = list(standard_tableaux(mu))
    cell = [rsk_inverse(RskPair(p, q)) for p in tableaux for q in tableaux]
    return sorted(cell, key=lambda perm: perm.word)


def _prefix_patterns(patterns: Iterable[Sequence[int]]) -> frozenset:
    prefixes = set()
    for sigma in patterns:
        for t in range(1, len(sigma) + 1):
            prefixes.add(standardize(sigma[:t]))
    return frozenset(prefixes)


def _contains_any(word: Sequence[int], prefixes: frozenset, m: int) -> bool:
    """Backtrack over increasing positions, keeping only partial patterns that
    standardize to a prefix of some target pattern."""
    n = len(word)
    if m == 0:
        return True
    chosen: list[int] = []

    def dfs(start: int, key: tuple[int, ...]) -> bool:
        depth = len(key)
        if depth == m:
            return True
        for i in range(start, n - (m - depth) + 1):
            v = word[i]
            r = bisect_left(chosen, v)
            new_key = tuple(x + 1 if x > r else x for x in key) + (r + 1,)
            if new_key in prefixes:
                chosen.insert(r, v)
                found = dfs(i + 1, new_key)
                del chosen[r]
                if found:
                    return True
        return False

    return dfs(0, ())


def _word(perm) -> tuple[int, ...]:
    return perm.word if isinstance(perm, Permutation) else tuple(perm)


def contains_pattern(perm, sigma, budget: Optional[int] = DEFAULT_BUDGET) -> bool:
    """True iff some subsequence of ``perm`` is order-isomorphic to ``sigma``."""
    word, sigma = _word(perm), _word(sigma)
    if len(sigma) > len(word):
        return False
    _check_budget("pattern search", math.comb(len(word), len(sigma)), budget)
    return _contains_any(word, _prefix_patterns([sigma]), len(sigma))


def avoids_shape(perm, mu: Partition, budget: Optional[int] = DEFAULT_BUDGET) -> bool:
    """True iff ``perm`` contains no pattern whose shape is ``mu``."""
    word = _word(perm)
    m = mu.size()
    if m > len(word):
        return True
    cell = knuth_cell(mu, budget)
    _check_budget("shape search", math.comb(len(word), m), budget)
    return not _contains_any(word, _prefix_patterns(p.word for p in cell), m)


# --- sharded scans over S_n -------------------------------------------------


def _shard_words(n: int, first: int) -> Iterator[tuple[int, ...]]:
    rest = [x for x in range(1, n + 1) if x != first]
    for tail in permutations(rest):
        yield (first,) + tail


def _count_avoiders_shard(args) -> int:
    n, first, prefixes, m = args
    return sum(1 for w in _shard_words(n, first) if not _contains_any(w, prefixes, m))


def _classify_shard(args) -> tuple[int, int, int, int, tuple, tuple]:
    n, first, prefixes, m, mu_parts = args
    avoiders = union = avoid_only = union_only = 0
    avoid_only_example = union_only_example = ()
    mu = Partition(mu_parts)
    for w in _shard_words(n, first):
        avoid = not _contains_any(w, prefixes, m)
        in_union = not contains(mu, Partition(shape_tuple(w)))
        avoiders += avoid
        union += in_union
        if avoid and not in_union:
            avoid_only += 1
            avoid_only_example = avoid_only_example or w
        if in_union and not avoid:
            union_only += 1
            union_only_example = union_only_example or w
    return avoiders, union, avoid_only, union_only, avoid_only_example, union_only_example


def default_jobs() -> int:
    return os.cpu_count() or 1


def _run_shards(func, tasks: list, jobs: Optional[int]) -> list:
    jobs = default_jobs() if jobs is None else jobs
    if jobs <= 1 or len(tasks) <= 1:
        return [func(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as pool:
        return list(pool.map(func, tasks))


def _scan_budget(n: int, budget: Optional[int]) -> None:
    _check_budget(f"scan of S_{n}", math.factorial(n), budget)


def avoid_count_brute(
    n: int, mu: Partition, jobs: Optional[int] = None, budget: Optional[int] = DEFAULT_BUDGET
) -> CountRecord:
    """Exact number of permutations of size n avoiding the shape ``mu``, by scanning S_n."""
    if n < 0:
        raise PreconditionError(f"n must be >= 0, got {n}")
    _scan_budget(n, budget)
    m = mu.size()
    if m > n or n == 0:
        count = math.factorial(n) if m > n else 0
        return CountRecord(n, mu, count, "brute")
    prefixes = _prefix_patterns(p.word for p in knuth_cell(mu, budget))
    tasks = [(n, first, prefixes, m) for first in range(1, n + 1)]
    return CountRecord(n, mu, sum(_run_shards(_count_avoiders_shard, tasks, jobs)), "brute")


def single_pattern_avoid_count(
    n: int, sigma, jobs: Optional[int] = None, budget: Optional[int] = DEFAULT_BUDGET
) -> CountRecord:
    sigma = sigma if isinstance(sigma, Permutation) else Permutation(sigma)
    if n < 0:
        raise PreconditionError(f"n must be >= 0, got {n}")
    _scan_budget(n, budget)
    m = len(sigma)
    if m > n or n == 0:
        count = math.factorial(n) if m > n else 0
        return CountRecord(n, sigma, count, "brute")
    prefixes = _prefix_patterns([sigma.word])
    tasks = [(n, first, prefixes, m) for first in range(1, n + 1)]
    return CountRecord(n, sigma, sum(_run_shards(_count_avoiders_shard, tasks, jobs)), "brute")


def verify_cell_identity(
    n: int, mu: Partition, jobs: Optional[int] = None, budget: Optional[int] = DEFAULT_BUDGET
) -> CellIdentityReport:
    """Classify S_n by avoidance of ``mu`` and by whether the shape contains ``mu``."""
    if n < 1:
        raise PreconditionError(f"n must be >= 1, got {n}")
    _scan_budget(n, budget)
    m = mu.size()
    prefixes = _prefix_patterns(p.word for p in knuth_cell(mu, budget))
    tasks = [(n, first, prefixes, m, mu.parts) for first in range(1, n + 1)]
    results = _run_shards(_classify_shard, tasks, jobs)
    avoiders = sum(r[0] for r in results)
    union = sum(r[1] for r in results)
    avoid_only = sum(r[2] for r in results)
    union_only = sum(r[3] for r in results)
    examples = {}
    for label, idx in (("avoid_only", 4), ("union_only", 5)):
        found = next((r[idx] for r in results if r[idx]), None)
        if found:
            examples[label] = Permutation(found)
    return CellIdentityReport(
        n, mu, math.factorial(n), avoiders, union, avoid_only, union_only, examples
    )


# --- closed forms -----------------------------------------------------------


def hook_formula_regime(n: int, m: int, k: int) -> Optional[str]:
    """None when the two-cell-sum formula is proven exact, else the reason it is not."""
    if m <= 3 or k <= 3:
        if n > (m - 1) * (k - 1):
            return None
        return (
            f"n={n} <= (m-1)(k-1)={(m - 1) * (k - 1)}: the avoiders of ({m}) and of "
            f"(1^{k}) may overlap"
        )
    bound = (2 * m - 4) * (2 * k - 4)
    if n > bound:
        return None
    return (
        f"m, k >= 4 needs n > (2m-4)(2k-4)={bound} (n >= 4mk={4 * m * k} also suffices), got n={n}"
    )


def avoid_count_hook(n: int, m: int, k: int) -> CountRecord:
    """Avoiders of the hook (m, 1^(k-1)) as two sums of squared tableau counts."""
    if m < 1 or k < 1:
        raise PreconditionError(f"hook needs m, k >= 1, got m={m}, k={k}")
    reason = hook_formula_regime(n, m, k)
    if reason is not None:
        raise PreconditionError(f"hook formula refused: {reason}")
    narrow = sum(_syt_count(t) ** 2 for t in _partition_tuples(n, max_part=m - 1)) if m > 1 else 0
    short = sum(_syt_count(t) ** 2 for t in _partition_tuples(n, max_length=k - 1)) if k > 1 else 0
    return CountRecord(n, Partition.hook(m, k), narrow + short, "hook-formula")


def avoid_count_22(n: int) -> CountRecord:
    """Avoiders of the 2x2 square: a(1)=1, a(2)=2, a(n)=4a(n-1)-2a(n-2)."""
    if n < 1:
        raise PreconditionError(f"n must be >= 1, got {n}")
    if n == 1:
        return CountRecord(1, Partition((2, 2)), 1, "two-two-formula")
    prev, cur = 1, 2
    for _ in range(3, n + 1):
        prev, cur = cur, 4 * cur - 2 * prev
    return CountRecord(n, Partition((2, 2)), cur, "two-two-formula")


def avoid_count_22_series(n_max: int, n_min: int = 1) -> list[CountRecord]:
    """avoid_count_22(n) for n_min <= n <= n_max in one pass of the recursion."""
    if n_min < 1:
        raise PreconditionError(f"n must be >= 1, got {n_min}")
    out = []
    prev, cur = 0, 1  # a(0) would be 1/2; start the loop at a(1)
    for n in range(1, n_max + 1):
        if n == 2:
            prev, cur = cur, 2
        elif n > 2:
            prev, cur = cur, 4 * cur - 2 * prev
        if n >= n_min:
            out.append(CountRecord(n, Partition((2, 2)), cur, "two-two-formula"))
    return out


def avoid_count_22_closed_form(n: int) -> float:
    s = math.sqrt(2)
    return 0.5 * (2 + s) ** (n - 1) + 0.5 * (2 - s) ** (n - 1)


def cell_sum_bound(n: int, mu: Partition) -> CountRecord:
    """Upper bound: number of permutations whose shape misses the rectangle (mu_1^k)."""
    if n < 0:
        raise PreconditionError(f"n must be >= 0, got {n}")
    if not mu.parts:
        return CountRecord(n, mu, 0, "cell-sum-bound")
    width, height = mu[0], len(mu)
    # (width^height) fits in lam iff lam has a row height whose length is >= width
    total = sum(
        _syt_count(t) ** 2
        for t in _partition_tuples(n)
        if len(t) < height or t[height - 1] < width
    )
    return CountRecord(n, mu, total, "cell-sum-bound")


@dataclass(frozen=True)
class LowerBoundReport:
    n: int
    mu: Partition
    row_avoiders: int
    column_avoiders: int
    overlap: int
    outside: int  # members of the union that do not avoid mu; should be 0
    disjoint_regime: bool


def lower_bound_report(
    n: int, mu: Partition, jobs: Optional[int] = None, budget: Optional[int] = DEFAULT_BUDGET
) -> LowerBoundReport:
    """Check that avoiders of (mu_1) and of (1^mu'_1) all avoid ``mu``."""
    if not mu.parts:
        raise PreconditionError("mu must be nonempty")
    _scan_budget(n, budget)
    width, height = mu[0], conjugate(mu)[0]
    mu_prefixes = _prefix_patterns(p.word for p in knuth_cell(mu, budget))
    row = col = both = outside = 0
    for first in range(1, n + 1):
        for w in _shard_words(n, first):
            shape = shape_tuple(w)
            in_row, in_col = shape[0] < width, len(shape) < height
            row += in_row
            col += in_col
            both += in_row and in_col
            if (in_row or in_col) and _contains_any(w, mu_prefixes, mu.size()):
                outside += 1
    return LowerBoundReport(
        n, mu, row, col, both, outside, n > (width - 1) * (height - 1)
    )


def growth_series(counts: Sequence[CountRecord], mu: Partition) -> GrowthSeries:
    """The roots count ** (1/2n) with the width/height reference constants of ``mu``."""
    if not counts:
        raise PreconditionError("growth_series needs at least one count")
    if not mu.parts:
        raise PreconditionError("mu must be nonempty")
    points = []
    for rec in counts:
        if rec.target != mu:
            raise PreconditionError(f"count for {rec.target} mixed into series for {mu}")
        if rec.n < 1 or rec.count < 1:
            continue
        points.append((rec.n, math.exp(math.log(rec.count) / (2 * rec.n))))
    height, width = conjugate(mu)[0] - 1, mu[0] - 1
    hook_limit = float(max(width, height)) if mu.is_hook() else None
    return GrowthSeries(
        tuple(sorted(points)), float(max(height, width)), float(height + width), hook_limit
    )
