"""Greene invariants: maximal unions of k monotone subsequences.

``extract_chain_union`` solves the problem exactly as a min-cost flow on the
position DAG.  Removing longest increasing subsequences one at a time is not
optimal in general, so we don't.
"""

from __future__ import annotations

import heapq
from bisect import bisect_right
from dataclasses import dataclass
from functools import lru_cache
from typing import Literal, Sequence, Union

from .core import Permutation, shape_tuple
from .errors import BudgetExceeded, PreconditionError, ValidationError

Direction = Literal["increasing", "decreasing"]
DIRECTIONS: tuple[Direction, ...] = ("increasing", "decreasing")

ORACLE_MAX_N = 16


@dataclass(frozen=True)
class ChainUnion:
    chains: tuple[tuple[int, ...], ...]
    direction: Direction

    @property
    def total_size(self) -> int:
        return sum(len(c) for c in self.chains)

    def positions(self) -> tuple[int, ...]:
        return tuple(sorted(p for c in self.chains for p in c))

    def lengths(self) -> tuple[int, ...]:
        return tuple(sorted((len(c) for c in self.chains), reverse=True))

    def check(self, word: Sequence[int]) -> None:
        """Raise ValidationError unless chains are disjoint and monotone."""
        seen: set[int] = set()
        for chain in self.chains:
            if seen.intersection(chain):
                raise ValidationError(f"chains overlap: {self.chains}")
            seen.update(chain)
            for a, b in zip(chain, chain[1:]):
                if a >= b:
                    raise ValidationError(f"chain positions not increasing: {chain}")
                if (word[a] < word[b]) != (self.direction == "increasing"):
                    raise ValidationError(f"chain {chain} is not {self.direction}")


def _word(perm: Union[Permutation, Sequence[int]]) -> tuple[int, ...]:
    return perm.word if isinstance(perm, Permutation) else tuple(perm)


def _check_direction(direction: str) -> None:
    if direction not in DIRECTIONS:
        raise ValidationError(f"direction must be one of {DIRECTIONS}, got {direction!r}")


def _conjugate_tuple(parts: tuple[int, ...]) -> tuple[int, ...]:
    if not parts:
        return ()
    return tuple(sum(1 for p in parts if p > i) for i in range(parts[0]))


def greene_prefix(perm, i: int, direction: Direction = "increasing") -> int:
    """Sum of the first ``i`` rows (increasing) or columns (decreasing) of the shape."""
    _check_direction(direction)
    if i < 1:
        raise PreconditionError(f"i must be >= 1, got {i}")
    parts = shape_tuple(_word(perm))
    if direction == "decreasing":
        parts = _conjugate_tuple(parts)
    return sum(parts[:i])


def _min_cost_chains(word: Sequence[int], k: int) -> list[list[int]]:
    """At most k disjoint increasing chains covering the most positions.

    Node layout: source 0, sink 1, position i split into in=2+2i, out=3+2i.
    Successive shortest paths with Johnson potentials; stops at k units or
    once an extra chain no longer covers anything new.
    """
    n = len(word)
    size = 2 * n + 2
    graph: list[list[list[int]]] = [[] for _ in range(size)]  # edge: [to, cap, cost, rev]

    def add(u: int, v: int, cost: int) -> None:
        graph[u].append([v, 1, cost, len(graph[v])])
        graph[v].append([u, 0, -cost, len(graph[u]) - 1])

    for i in range(n):
        add(0, 2 + 2 * i, 0)
        add(2 + 2 * i, 3 + 2 * i, -1)
        for j in range(i + 1, n):
            if word[i] < word[j]:
                add(3 + 2 * i, 2 + 2 * j, 0)
        add(3 + 2 * i, 1, 0)

    # initial potentials: shortest distances in the DAG, processed in position order
    inf = float("inf")
    pot = [inf] * size
    pot[0] = 0
    for u in [0] + [v for i in range(n) for v in (2 + 2 * i, 3 + 2 * i)]:
        if pot[u] == inf:
            continue
        for v, cap, cost, _ in graph[u]:
            if cap and pot[u] + cost < pot[v]:
                pot[v] = pot[u] + cost
    if pot[1] == inf:
        return []

    for _ in range(k):
        dist = [inf] * size
        parent: list[tuple[int, int] | None] = [None] * size
        dist[0] = 0
        heap = [(0, 0)]
        while heap:
            d, u = heapq.heappop(heap)
            if d > dist[u]:
                continue
            for idx, (v, cap, cost, _) in enumerate(graph[u]):
                if not cap:
                    continue
                nd = d + cost + pot[u] - pot[v]
                if nd < dist[v]:
                    dist[v] = nd
                    parent[v] = (u, idx)
                    heapq.heappush(heap, (nd, v))
        if dist[1] == inf:
            break
        path_cost = dist[1] + pot[1] - pot[0]
        if path_cost >= 0:
            break
        for v in range(size):
            if dist[v] < inf:
                pot[v] += dist[v]
        v = 1
        while v != 0:
            u, idx = parent[v]
            edge = graph[u][idx]
            edge[1] -= 1
            graph[v][edge[3]][1] += 1
            v = u

    # decode: follow saturated forward edges out of the source
    succ = {}
    starts = []
    for v, cap, cost, _ in graph[0]:
        if v >= 2 and cap == 0:
            starts.append((v - 2) // 2)
    for i in range(n):
        for v, cap, cost, _ in graph[3 + 2 * i]:
            if cost == 0 and cap == 0 and (v == 1 or (v >= 2 and v % 2 == 0)):
                if v != 1:
                    succ[i] = (v - 2) // 2
                break
    chains = []
    for s in sorted(starts):
        chain = [s]
        while chain[-1] in succ:
            chain.append(succ[chain[-1]])
        chains.append(chain)
    return chains


def extract_chain_union(perm, k: int, direction: Direction = "increasing") -> ChainUnion:
    """An explicit union of at most ``k`` disjoint monotone chains of maximal total size."""
    _check_direction(direction)
    if k < 1:
        raise PreconditionError(f"k must be >= 1, got {k}")
    word = _word(perm)
    n = len(word)
    if direction == "increasing":
        chains = _min_cost_chains(word, k)
    else:
        # increasing chains of the reversed word are decreasing chains of the word
        chains = [
            sorted(n - 1 - p for p in chain) for chain in _min_cost_chains(word[::-1], k)
        ]
    chains = sorted(tuple(c) for c in chains if c)
    return ChainUnion(tuple(chains), direction)


def greedy_decompose(perm, direction: Direction = "increasing") -> ChainUnion:
    """Split every position into monotone chains by first-fit patience sorting.

    First fit is optimal here: the number of increasing chains equals the
    longest decreasing subsequence, and vice versa.
    """
    _check_direction(direction)
    word = _word(perm)
    sign = 1 if direction == "increasing" else -1
    # keys of chain ends stay sorted, so the first fitting chain is a bisection
    keys: list[int] = []
    chains: list[list[int]] = []
    for pos, x in enumerate(word):
        key = -sign * x
        j = bisect_right(keys, key)
        if j == len(chains):
            chains.append([pos])
            keys.append(key)
        else:
            chains[j].append(pos)
            keys[j] = key
    chains.sort()
    return ChainUnion(tuple(tuple(c) for c in chains), direction)


@lru_cache(maxsize=256)
def _subset_profile(word: tuple[int, ...]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """For every position subset (bitmask), its longest increasing and decreasing lengths."""
    n = len(word)
    total = 1 << n
    lis = [0] * total
    lds = [0] * total
    end_inc = [0] * total
    end_dec = [0] * total
    for mask in range(1, total):
        h = mask.bit_length() - 1
        rest = mask ^ (1 << h)
        best_inc = best_dec = 0
        m = rest
        while m:
            low = m & -m
            j = low.bit_length() - 1
            below = rest & ((low << 1) - 1)
            if word[j] < word[h]:
                if end_inc[below] > best_inc:
                    best_inc = end_inc[below]
            elif end_dec[below] > best_dec:
                best_dec = end_dec[below]
            m ^= low
        end_inc[mask] = best_inc + 1
        end_dec[mask] = best_dec + 1
        lis[mask] = max(lis[rest], best_inc + 1)
        lds[mask] = max(lds[rest], best_dec + 1)
    return tuple(lis), tuple(lds)


@lru_cache(maxsize=256)
def _max_union_table(word: tuple[int, ...], direction: Direction) -> tuple[int, ...]:
    lis, lds = _subset_profile(word)
    # increasing chains: a subset is a union of <= k of them iff its LDS <= k (Dilworth)
    blocker = lds if direction == "increasing" else lis
    n = len(word)
    best = [0] * (n + 1)
    for mask, b in enumerate(blocker):
        c = mask.bit_count()
        if c > best[b]:
            best[b] = c
    for k in range(1, n + 1):
        best[k] = max(best[k], best[k - 1])
    return tuple(best)


def brute_force_max_union(perm, k: int, direction: Direction = "increasing") -> int:
    """Oracle: largest position subset that splits into ``k`` monotone chains.

    Enumerates all 2^n subsets; refused for n > 16.
    """
    _check_direction(direction)
    if k < 1:
        raise PreconditionError(f"k must be >= 1, got {k}")
    word = _word(perm)
    if len(word) > ORACLE_MAX_N:
        raise BudgetExceeded("brute_force_max_union (2^n subsets)", 1 << len(word), 1 << ORACLE_MAX_N)
    table = _max_union_table(word, direction)
    return table[min(k, len(word))]
