"""Constructive subsequence extraction for rectangles, general shapes and hooks.

Every extractor returns a :class:`SubsequenceWitness` whose shape has been
recomputed from the extracted pattern; a mismatch is a bug and raises.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, islice
from math import comb
from typing import Optional, Sequence

from .core import (
    Partition,
    Permutation,
    SubsequenceWitness,
    contains,
    conjugate,
    longest_decreasing_positions,
    longest_increasing_positions,
    shape_tuple,
)
from .errors import BudgetExceeded, PreconditionError
from .greene import extract_chain_union, greedy_decompose

DEFAULT_ORACLE_BUDGET = 5_000_000

EXAMPLE_NO_HOOK = Permutation((6, 5, 1, 2, 7, 8, 4, 3))
EXAMPLE_EXTRA_SQUARE = Permutation((2, 5, 3, 1, 4))


def _word(perm) -> tuple[int, ...]:
    return perm.word if isinstance(perm, Permutation) else tuple(perm)


def _certified(word: Sequence[int], positions, expected: Partition) -> SubsequenceWitness:
    witness = SubsequenceWitness.certify(word, positions)
    if witness.shape != expected:
        raise AssertionError(
            f"extraction produced shape {witness.shape}, expected {expected} "
            f"(word={tuple(word)}, positions={witness.positions})"
        )
    return witness


@dataclass(frozen=True)
class RectangularGrid:
    """Cells of a rectangular-shape permutation indexed by (chain row, chain column).

    ``cells[i][j]`` is the position shared by increasing chain ``i`` and
    decreasing chain ``j`` (both 0-based, ordered by first position).
    """

    m: int
    k: int
    rows: tuple[tuple[int, ...], ...]
    columns: tuple[tuple[int, ...], ...]
    cells: tuple[tuple[int, ...], ...]

    def cell(self, i: int, j: int) -> int:
        return self.cells[i][j]


def rectangular_grid(perm) -> RectangularGrid:
    word = _word(perm)
    shape = shape_tuple(word)
    if not shape or len(set(shape)) != 1:
        raise PreconditionError(f"shape {Partition(shape)} is not a rectangle")
    m, k = shape[0], len(shape)
    rows = greedy_decompose(word, "increasing").chains
    columns = greedy_decompose(word, "decreasing").chains
    assert len(rows) == k and all(len(r) == m for r in rows)
    assert len(columns) == m and all(len(c) == k for c in columns)
    column_of = {p: j for j, col in enumerate(columns) for p in col}
    cells = []
    for row in rows:
        line = [-1] * m
        for p in row:
            line[column_of[p]] = p
        if -1 in line:
            raise AssertionError(f"row {row} misses a column of {columns}")
        cells.append(tuple(line))
    return RectangularGrid(m, k, rows, columns, tuple(cells))


def extract_subshape_rectangular(perm, mu: Partition) -> SubsequenceWitness:
    """Cells (i, j) with j < mu_i of the grid of a rectangular-shape permutation."""
    word = _word(perm)
    grid = rectangular_grid(word)
    rect = Partition.rectangle(grid.m, grid.k)
    if not contains(mu, rect):
        raise PreconditionError(f"{mu} is not contained in the rectangle {rect}")
    positions = [grid.cells[i][j] for i in range(len(mu)) for j in range(mu[i])]
    return _certified(word, positions, mu)


@lru_cache(maxsize=8192)
def _rectangle_positions(word: tuple[int, ...], m: int, k: int) -> tuple[int, ...]:
    outer = extract_chain_union(word, k, "increasing").positions()
    sub = tuple(word[p] for p in outer)
    inner = extract_chain_union(sub, m, "decreasing").positions()
    return tuple(outer[p] for p in inner)


def extract_rectangle(perm, m: int, k: int) -> SubsequenceWitness:
    """Subsequence of shape (m^k) via a k-increasing union then an m-decreasing union."""
    if m < 1 or k < 1:
        raise PreconditionError(f"rectangle needs m, k >= 1, got m={m}, k={k}")
    word = _word(perm)
    rect = Partition.rectangle(m, k)
    shape = Partition(shape_tuple(word))
    if not contains(rect, shape):
        raise PreconditionError(f"rectangle {rect} is not contained in shape {shape}")
    return _certified(word, _rectangle_positions(word, m, k), rect)


def extract_shape(perm, mu: Partition) -> SubsequenceWitness:
    """Subsequence of shape ``mu`` whenever the shape contains (mu_1^k), k = len(mu)."""
    word = _word(perm)
    if not mu.parts:
        return SubsequenceWitness.certify(word, ())
    m, k = mu[0], len(mu)
    rect = Partition.rectangle(m, k)
    shape = Partition(shape_tuple(word))
    if not contains(rect, shape):
        raise PreconditionError(
            f"shape {shape} does not contain the rectangle {rect} needed for {mu}"
        )
    outer = _rectangle_positions(word, m, k)
    inner = extract_subshape_rectangular([word[p] for p in outer], mu)
    return _certified(word, [outer[p] for p in inner.positions], mu)


@dataclass(frozen=True)
class HookWitness(SubsequenceWitness):
    """A hook-shaped witness with its increasing arm and decreasing leg."""

    increasing: tuple[int, ...] = ()
    decreasing: tuple[int, ...] = ()


def _window(chain: list[int], length: int, keep: int) -> list[int]:
    """``length`` consecutive entries of ``chain`` that include ``chain[keep]``."""
    start = min(max(0, keep - length + 1), len(chain) - length)
    return chain[start:start + length]


def _hook_from_chains(word, alpha: list[int], beta: list[int], m: int, k: int):
    """Increasing m-chain and decreasing k-chain sharing one position.

    ``alpha`` is increasing of length >= max(m, 2m-3), ``beta`` decreasing of
    length >= k; both are position lists.  Requires m >= 2.
    """
    common = set(alpha) & set(beta)
    if common:
        (p,) = common
        return _window(alpha, m, alpha.index(p)), _window(beta, k, beta.index(p))

    beta = beta[:k]
    pivot = alpha[m - 2]  # the (m-1)-th element of the increasing chain
    x = word[pivot]
    # where the pivot falls among beta, by position
    j = sum(1 for b in beta if b < pivot)
    before = beta[j - 1] if j > 0 else None
    after = beta[j] if j < len(beta) else None

    if (before is None or word[before] > x) and (after is None or x > word[after]):
        # pivot slots into beta: a decreasing chain of length k+1 through it
        grown = beta[:j] + [pivot] + beta[j:]
        inc = _window(alpha, m, m - 2)
        return inc, _window(grown, k, j)
    if after is not None and x < word[after]:
        inc = alpha[: m - 1] + [after]
        return inc, beta
    # remaining case: before exists and x > word[before]
    assert before is not None and x > word[before]
    inc = [before] + alpha[m - 2 : 2 * m - 3]
    return inc, beta


def _extract_hook_direct(word, m: int, k: int):
    """Works when LIS >= max(m, 2m-3) and LDS >= k."""
    if k == 1:
        inc = longest_increasing_positions(word)[:m]
        return inc, inc[:1]
    if m == 1:
        dec = longest_decreasing_positions(word)[:k]
        return dec[:1], dec
    alpha = longest_increasing_positions(word)[: max(m, 2 * m - 3)]
    beta = longest_decreasing_positions(word)[:k]
    return _hook_from_chains(word, alpha, beta, m, k)


def _extract_hook_swapped(word, m: int, k: int):
    """Same construction on the reversed word, where the roles of m and k swap."""
    n = len(word)
    inc_r, dec_r = _extract_hook_direct(word[::-1], k, m)
    return sorted(n - 1 - p for p in dec_r), sorted(n - 1 - p for p in inc_r)


def extract_hook(perm, m: int, k: int) -> HookWitness:
    """Subsequence of shape (m, 1^(k-1)), built from an intersecting pair of chains.

    For m <= 3 or k <= 3 the shape only needs to contain the hook itself;
    otherwise it must contain (2m-3, 1^(k-1)) or (m, 1^(2k-4)).
    """
    if m < 1 or k < 1:
        raise PreconditionError(f"hook needs m, k >= 1, got m={m}, k={k}")
    word = _word(perm)
    target = Partition.hook(m, k)
    shape = Partition(shape_tuple(word))
    lis, lds = shape.part(0), conjugate(shape).part(0)
    if m <= 3 or k <= 3:
        if not contains(target, shape):
            raise PreconditionError(f"shape {shape} does not contain the hook {target}")
        if m <= 3:
            inc, dec = _extract_hook_direct(word, m, k)
        else:
            inc, dec = _extract_hook_swapped(word, m, k)
    elif lis >= 2 * m - 3 and lds >= k:
        inc, dec = _extract_hook_direct(word, m, k)
    elif lis >= m and lds >= 2 * k - 3:
        inc, dec = _extract_hook_swapped(word, m, k)
    else:
        raise PreconditionError(
            f"shape {shape} contains neither {Partition.hook(2 * m - 3, k)} "
            f"nor {Partition.hook(m, 2 * k - 3)}"
        )
    positions = sorted(set(inc) | set(dec))
    base = _certified(word, positions, target)
    return HookWitness(base.positions, base.shape, base.pattern, tuple(inc), tuple(dec))


def hook_counterexample(m: int, k: int) -> Permutation:
    """A permutation whose shape contains (2m-4, 1^(2k-5)) yet has no (m, 1^(k-1)) subsequence.

    Concatenates a falling block, a rising block, a rising block and a falling
    block; m = k = 4 gives 6,5,1,2,7,8,4,3.
    """
    if m < 4 or k < 4:
        raise PreconditionError(f"counterexample needs m, k >= 4, got m={m}, k={k}")
    rising_low = list(range(1, m - 1))
    falling_low = list(range(m + k - 4, m - 2, -1))
    falling_high = list(range(m + 2 * k - 6, m + k - 4, -1))
    rising_high = list(range(m + 2 * k - 5, 2 * m + 2 * k - 7))
    return Permutation(falling_high + rising_low + rising_high + falling_low)


def square_counterexample(n: int) -> Permutation:
    """A hook-shaped permutation of size n >= 5 with a (2,2)-shaped subsequence.

    Prepends new maxima to 2,5,3,1,4; each one lengthens the longest
    decreasing subsequence and nothing else, so the shape stays a hook.
    """
    if n < 5:
        raise PreconditionError(f"needs n >= 5, got {n}")
    word = Permutation(tuple(range(n, 5, -1)) + EXAMPLE_EXTRA_SQUARE.word)
    shape = Partition(shape_tuple(word.word))
    if contains(Partition((2, 2)), shape) or brute_force_find_shape(word, Partition((2, 2))) is None:
        raise AssertionError(f"padding broke the construction for n={n}: {word}")
    return word


def brute_force_find_shape(
    perm,
    mu: Partition,
    budget: Optional[int] = DEFAULT_ORACLE_BUDGET,
    start: int = 0,
    stop: Optional[int] = None,
) -> Optional[SubsequenceWitness]:
    """Oracle: first |mu|-subset (lexicographic positions) whose pattern has shape ``mu``.

    ``start``/``stop`` restrict the scan to a range of subset ranks so that
    callers can split the work.
    """
    word = _word(perm)
    size = mu.size()
    total = comb(len(word), size)
    stop = total if stop is None else min(stop, total)
    work = max(0, stop - start)
    if budget is not None and work > budget:
        raise BudgetExceeded(f"subsequence scan C({len(word)},{size})", work, budget)
    target = mu.parts
    for positions in islice(combinations(range(len(word)), size), start, stop):
        if shape_tuple([word[p] for p in positions]) == target:
            return SubsequenceWitness.certify(word, positions)
    return None
