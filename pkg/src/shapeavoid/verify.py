"""Named exhaustive property suites, runnable from the command line."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import permutations
from typing import Callable, Optional

from .core import Partition, contains, shape_tuple
from .enumeration import (
    avoid_count_22,
    avoid_count_brute,
    avoid_count_hook,
    hook_formula_regime,
    knuth_cell,
    partitions_of,
    verify_cell_identity,
)
from .greene import DIRECTIONS, brute_force_max_union, extract_chain_union, greene_prefix
from .witness import (
    brute_force_find_shape,
    extract_rectangle,
    extract_shape,
    extract_subshape_rectangular,
)


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def expect(self, condition: bool, message: str) -> None:
        self.checked += 1
        if not condition and len(self.failures) < 20:
            self.failures.append(message)


def _all_words(n_max: int):
    for n in range(1, n_max + 1):
        yield from permutations(range(1, n + 1))


def greene_suite(n_max=6, samples=100, sample_n=10, seed=0, **_) -> SuiteResult:
    res = SuiteResult("greene")
    rng = random.Random(seed)
    words = list(_all_words(n_max))
    for _ in range(samples):
        w = list(range(1, sample_n + 1))
        rng.shuffle(w)
        words.append(tuple(w))
    for w in words:
        for d in DIRECTIONS:
            for k in range(1, len(w) + 1):
                union = extract_chain_union(w, k, d)
                union.check(w)
                a, b, c = greene_prefix(w, k, d), union.total_size, brute_force_max_union(w, k, d)
                res.expect(a == b == c, f"{w} k={k} {d}: prefix={a} flow={b} oracle={c}")
    return res


def schensted_cells_suite(n_max=7, jobs=None, budget=None, **_) -> SuiteResult:
    res = SuiteResult("schensted-cells")
    for m in range(1, 5):
        for mu in (Partition((m,)), Partition((1,) * m)):
            for n in range(m, n_max + 1):
                rel = verify_cell_identity(n, mu, jobs=jobs).relation
                res.expect(rel == "equal", f"mu={mu} n={n}: {rel}")
    return res


def rectangle_subshapes_suite(rectangles=((2, 2), (2, 3), (3, 2), (3, 3)), **_) -> SuiteResult:
    res = SuiteResult("rectangle-subshapes")
    for m, k in rectangles:
        rect = Partition.rectangle(m, k)
        targets = [mu for s in range(1, m * k + 1) for mu in partitions_of(s)]
        for perm in knuth_cell(rect):
            for mu in targets:
                inside = contains(mu, rect)
                found = brute_force_find_shape(perm, mu, budget=None) is not None
                res.expect(found == inside, f"{perm} mu={mu}: found={found} contained={inside}")
                if inside:
                    w = extract_subshape_rectangular(perm, mu)
                    res.expect(w.shape == mu, f"{perm} mu={mu}: extracted {w.shape}")
    return res


def rectangle_extraction_suite(n_max=7, **_) -> SuiteResult:
    res = SuiteResult("rectangle-extraction")
    for w in _all_words(n_max):
        shape = shape_tuple(w)
        for k in range(1, len(shape) + 1):
            for m in range(1, shape[k - 1] + 1):
                got = extract_rectangle(w, m, k).shape
                res.expect(got == Partition.rectangle(m, k), f"{w} ({m}^{k}): got {got}")
    return res


def shape_extraction_suite(n_max=7, **_) -> SuiteResult:
    res = SuiteResult("shape-extraction")
    for w in _all_words(n_max):
        lam = Partition(shape_tuple(w))
        for s in range(1, len(w) + 1):
            for mu in partitions_of(s):
                if contains(Partition.rectangle(mu[0], len(mu)), lam):
                    got = extract_shape(w, mu).shape
                    res.expect(got == mu, f"{w} mu={mu}: got {got}")
    return res


def hook_cells_suite(n_max=7, jobs=None, **_) -> SuiteResult:
    res = SuiteResult("hook-cells")
    for m in range(1, n_max + 1):
        for k in range(1, n_max + 2 - m):
            if m > 3 and k > 3:
                continue
            for n in range(m + k - 1, n_max + 1):
                rel = verify_cell_identity(n, Partition.hook(m, k), jobs=jobs).relation
                res.expect(rel == "equal", f"hook ({m},1^{k - 1}) n={n}: {rel}")
    return res


def hook_count_suite(n_max=8, jobs=None, **_) -> SuiteResult:
    res = SuiteResult("hook-count")
    for m, k in ((2, 2), (2, 3), (3, 2), (3, 3), (2, 4)):
        for n in range(1, n_max + 1):
            if hook_formula_regime(n, m, k) is not None:
                continue
            a = avoid_count_hook(n, m, k).count
            b = avoid_count_brute(n, Partition.hook(m, k), jobs=jobs).count
            res.expect(a == b, f"hook ({m},1^{k - 1}) n={n}: formula={a} brute={b}")
    return res


def square_count_suite(n_max=8, jobs=None, **_) -> SuiteResult:
    res = SuiteResult("square-count")
    sq = Partition((2, 2))
    for n in range(1, n_max + 1):
        a, b = avoid_count_22(n).count, avoid_count_brute(n, sq, jobs=jobs).count
        res.expect(a == b, f"n={n}: recursion={a} brute={b}")
    rel = verify_cell_identity(min(n_max, 7), sq, jobs=jobs).relation
    res.expect(rel == "strict-subset", f"square cell relation: {rel}")
    return res


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "greene": greene_suite,
    "schensted-cells": schensted_cells_suite,
    "rectangle-subshapes": rectangle_subshapes_suite,
    "rectangle-extraction": rectangle_extraction_suite,
    "shape-extraction": shape_extraction_suite,
    "hook-cells": hook_cells_suite,
    "hook-count": hook_count_suite,
    "square-count": square_count_suite,
}


def run_suite(name: str, n_max: Optional[int] = None, seed: int = 0, jobs: Optional[int] = None) -> SuiteResult:
    func = SUITES[name]
    kwargs = {"seed": seed, "jobs": jobs}
    if n_max is not None:
        kwargs["n_max"] = n_max
    return func(**kwargs)
