"""Brute-force oracle: exhaustive route enumeration behind every closed form.

Correctness and auditability outrank speed here; the only concessions are a
signature cache (weights depend just on the multiset of reversed-adjacency
entries) and an optional process pool that partitions the route space by its
leading entries.  Partial sums are exact rationals, so any reduction order
gives identical results.
"""

from __future__ import annotations

import itertools
import multiprocessing
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Iterator, Sequence

from .graphs import (
    Route,
    SeedClass,
    balanced_leaf_labels,
    black_labels,
    classify_leaf_free_double,
    classify_leaf_free_route,
    compact_labels,
    reversed_edge_counts,
    route_edges,
    trim_double,
    trim_route,
    zip_routes,
)
from .weights import AffineAlpha, MomentSequence, weight_of_exponents

MEAN_POWER_LIMIT = 4
COVARIANCE_POWER_LIMIT = 4
CENSUS_VERTEX_LIMIT = 5


class CostGuardError(ValueError):
    """Raised when an enumeration would exceed its default cost guard."""


def _check_guard(value: int, limit: int, allow_large: bool, what: str) -> None:
    if value <= limit:
        return
    if allow_large and value <= limit + 1:
        return
    hint = "" if allow_large else "; pass allow_large=True to go one step further"
    raise CostGuardError(f"{what}={value} exceeds the cost guard {limit}{hint}")


# ---------------------------------------------------------------------------
# canonical route pairs


@lru_cache(maxsize=None)
def _surjections(length: int, onto: int) -> tuple[Route, ...]:
    """All tuples in [onto]^length whose value set is exactly [onto]."""
    full = set(range(1, onto + 1))
    return tuple(
        t
        for t in itertools.product(range(1, onto + 1), repeat=length)
        if set(t) == full
    )


@lru_cache(maxsize=None)
def _covering_tuples(length: int, r: int, b: int) -> tuple[Route, ...]:
    """All tuples in [r]^length containing every label in {b+1..r}."""
    needed = set(range(b + 1, r + 1))
    if len(needed) > length:
        return ()
    return tuple(
        t
        for t in itertools.product(range(1, r + 1), repeat=length)
        if needed.issubset(t)
    )


def _validate_pair_params(l: int, r: int, b: int) -> None:
    if l < 1 or r < 1 or b < 1:
        raise ValueError(f"l, r, b must be positive, got {(l, r, b)}")
    if b > min(l, r):
        raise ValueError(f"b={b} exceeds min(l, r)={min(l, r)}")
    if r > 2 * l:
        raise ValueError(f"r={r} exceeds 2l={2 * l}")


def iter_route_pairs(l: int, r: int, b: int) -> Iterator[tuple[Route, Route]]:
    """Pairs (i, k): i covers [b] exactly, k lives in [r] and covers [r]\\[b]."""
    _validate_pair_params(l, r, b)
    ks = _covering_tuples(l, r, b)
    for i in _surjections(l, b):
        for k in ks:
            yield i, k


# ---------------------------------------------------------------------------
# weighted inner sums via exponent signatures


def _pair_signature(i: Route, k: Route) -> tuple[int, ...]:
    """Sorted reversed-adjacency entries of the zipped walk of (i, k)."""
    l = len(i)
    counts: dict[tuple[int, int], int] = {}
    for t in range(l):
        kt = k[t]
        e = (i[t], kt)
        counts[e] = counts.get(e, 0) + 1
        e = (i[(t + 1) % l], kt)
        counts[e] = counts.get(e, 0) + 1
    return tuple(sorted(counts.values()))


def _census_chunk(args: tuple[int, int, int, tuple[Route, ...]]) -> Counter:
    l, r, b, i_chunk = args
    ks = _covering_tuples(l, r, b)
    census: Counter = Counter()
    for i in i_chunk:
        for k in ks:
            census[_pair_signature(i, k)] += 1
    return census


_SIGNATURE_CACHE: dict[tuple[int, int, int], Counter] = {}


def signature_census(l: int, r: int, b: int, *, workers: int | None = None) -> Counter:
    """Count canonical route pairs by the multiset of their weight exponents."""
    _validate_pair_params(l, r, b)
    key = (l, r, b)
    cached = _SIGNATURE_CACHE.get(key)
    if cached is not None:
        return cached
    i_list = _surjections(l, b)
    if workers and workers > 1 and len(i_list) >= workers:
        chunks = [
            (l, r, b, i_list[j::workers]) for j in range(workers) if i_list[j::workers]
        ]
        census: Counter = Counter()
        with multiprocessing.Pool(processes=workers) as pool:
            for partial in pool.map(_census_chunk, chunks):
                census.update(partial)
    else:
        census = _census_chunk((l, r, b, i_list))
    _SIGNATURE_CACHE[key] = census
    return census


def inner_weight_sum(
    l: int, r: int, b: int, moments: MomentSequence, *, workers: int | None = None
) -> Fraction:
    """Sum of walk weights over all canonical route pairs for (l, r, b)."""
    if moments.order < 2 * l:
        raise ValueError(f"moment sequence must cover order {2 * l}")
    total = Fraction(0)
    for signature, count in signature_census(l, r, b, workers=workers).items():
        w = weight_of_exponents(signature, moments)
        if w:
            total += w * count
    return total


def inner_weight_sum_affine(l: int, r: int, b: int, *, workers: int | None = None):
    """Inner weight sum as an exact affine function of the fourth moment.

    Only meaningful for r >= l: walks on that many vertices never contribute
    moments beyond the fourth, so two evaluations pin the affine form.
    """
    if r < l:
        raise ValueError("affine extraction needs r >= l")
    zeros = [0] * (2 * l - 4)
    at0 = inner_weight_sum(
        l, r, b, MomentSequence([1, 0, 1, 0, 0] + zeros, warn_suspicious=False),
        workers=workers,
    )
    at1 = inner_weight_sum(
        l, r, b, MomentSequence([1, 0, 1, 0, 1] + zeros, warn_suspicious=False),
        workers=workers,
    )
    return AffineAlpha(at0, at1 - at0)


# ---------------------------------------------------------------------------
# exact trace moments


@dataclass(frozen=True)
class MomentTerm:
    r: int
    b: int
    multiplicity: Fraction  # C(p,b) * C(n-b, r-b)
    inner_sum: Fraction


@dataclass(frozen=True)
class ExactMomentResult:
    value: Fraction
    terms: tuple[MomentTerm, ...]


def exact_trace_moment(
    l: int,
    p: int,
    n: int,
    moments: MomentSequence,
    *,
    allow_large: bool = False,
    workers: int | None = None,
) -> ExactMomentResult:
    """Exact E[tr(S^l)] for a p x n data matrix with the given entry moments.

    The route decomposition needs the smaller dimension on the row side; for
    p > n the value is reduced through tr(S_{p,n}^l) = (p/n)^l tr(S_{n,p}^l),
    which folds into the same sum with the roles of p and n swapped in the
    binomials (the 1/n^l scale absorbs the ratio exactly).  The reported b
    then counts distinct indexes of the smaller dimension.
    """
    if l < 1 or p < 1 or n < 1:
        raise ValueError(f"l, p, n must be positive, got {(l, p, n)}")
    _check_guard(l, MEAN_POWER_LIMIT, allow_large, "l")
    if moments.order < 2 * l:
        raise ValueError(f"moment sequence must cover order {2 * l}")
    rows, cols = min(p, n), max(p, n)
    scale = Fraction(1, n**l)
    terms: list[MomentTerm] = []
    value = Fraction(0)
    for r in range(1, min(2 * l, cols) + 1):
        for b in range(1, min(l, r, rows) + 1):
            if r - b > l:  # k has only l slots to cover the new labels
                continue
            inner = inner_weight_sum(l, r, b, moments, workers=workers)
            if inner == 0:
                continue
            multiplicity = Fraction(comb(rows, b) * comb(cols - b, r - b))
            terms.append(MomentTerm(r, b, multiplicity, inner))
            value += multiplicity * inner * scale
    return ExactMomentResult(value, tuple(terms))


# ---------------------------------------------------------------------------
# exact power-trace covariances


def _joint_black_pairs(l1: int, l2: int, b: int) -> tuple[tuple[Route, Route], ...]:
    """All (i, j) in [b]^l1 x [b]^l2 whose joint value set is exactly [b]."""
    full = set(range(1, b + 1))
    out = []
    for i in itertools.product(range(1, b + 1), repeat=l1):
        have = set(i)
        for j in itertools.product(range(1, b + 1), repeat=l2):
            if have | set(j) == full:
                out.append((i, j))
    return tuple(out)


def _joint_covering_pairs(
    l1: int, l2: int, r: int, b: int
) -> tuple[tuple[Route, Route], ...]:
    """All (k, m) in [r]^l1 x [r]^l2 jointly covering {b+1..r}."""
    needed = set(range(b + 1, r + 1))
    if len(needed) > l1 + l2:
        return ()
    out = []
    for k in itertools.product(range(1, r + 1), repeat=l1):
        missing = needed - set(k)
        for m in itertools.product(range(1, r + 1), repeat=l2):
            if missing.issubset(m):
                out.append((k, m))
    return tuple(out)


def _covariance_weight_details(
    i: Route, k: Route, j: Route, m: Route, moments: MomentSequence
) -> Fraction:
    c1 = reversed_edge_counts(zip_routes(i, k))
    c2 = reversed_edge_counts(zip_routes(j, m))
    combined = dict(c1)
    for edge, c in c2.items():
        combined[edge] = combined.get(edge, 0) + c
    joint = weight_of_exponents(combined.values(), moments)
    separate = weight_of_exponents(c1.values(), moments) * weight_of_exponents(
        c2.values(), moments
    )
    return joint - separate


def exact_trace_covariance(
    l1: int,
    l2: int,
    p: int,
    n: int,
    moments: MomentSequence,
    *,
    allow_large: bool = False,
) -> Fraction:
    """Exact Cov[tr(S^l1), tr(S^l2)] by enumeration of quadruple routes.

    As in exact_trace_moment, p > n reduces through the transposition
    identity, leaving one sum with the smaller dimension on the row side.
    """
    if min(l1, l2, p, n) < 1:
        raise ValueError(f"l1, l2, p, n must be positive, got {(l1, l2, p, n)}")
    _check_guard(l1 + l2, COVARIANCE_POWER_LIMIT, allow_large, "l1+l2")
    if moments.order < 2 * (l1 + l2):
        raise ValueError(f"moment sequence must cover order {2 * (l1 + l2)}")
    rows, cols = min(p, n), max(p, n)
    scale = Fraction(1, n ** (l1 + l2))
    total = Fraction(0)
    for r in range(1, min(2 * (l1 + l2), cols) + 1):
        for b in range(1, min(l1 + l2, r, rows) + 1):
            if r - b > l1 + l2:
                continue
            km_pairs = _joint_covering_pairs(l1, l2, r, b)
            if not km_pairs:
                continue
            inner = Fraction(0)
            for i, j in _joint_black_pairs(l1, l2, b):
                for k, m in km_pairs:
                    inner += _covariance_weight_details(i, k, j, m, moments)
            if inner == 0:
                continue
            total += Fraction(comb(rows, b) * comb(cols - b, r - b)) * inner * scale
    return total


def covariance_inner_sum(
    l1: int, l2: int, b: int, moments: MomentSequence
) -> Fraction:
    """Inner covariance sum at exactly r = l1 + l2 vertices (Theorem 2's core)."""
    r = l1 + l2
    inner = Fraction(0)
    km_pairs = _joint_covering_pairs(l1, l2, r, b)
    for i, j in _joint_black_pairs(l1, l2, b):
        for k, m in km_pairs:
            inner += _covariance_weight_details(i, k, j, m, moments)
    return inner


# ---------------------------------------------------------------------------
# censuses


def census_by_seed(
    l: int, b: int, *, allow_large: bool = False
) -> dict[SeedClass, int]:
    """Seed-class census of walks on exactly l vertices with black set [b]."""
    if not 1 <= b <= l:
        raise ValueError(f"need 1 <= b <= l, got b={b}, l={l}")
    if l > CENSUS_VERTEX_LIMIT and not allow_large:
        raise CostGuardError(
            f"l={l} exceeds the census cost guard {CENSUS_VERTEX_LIMIT}"
        )
    buckets: dict[SeedClass, int] = {}
    for i, k in iter_route_pairs(l, l, b):
        seed_class = classify_leaf_free_route(trim_route(zip_routes(i, k)))
        buckets[seed_class] = buckets.get(seed_class, 0) + 1
    return buckets


DoubleBucket = tuple[SeedClass, tuple[int, int, int, int]]


def census_double(
    l1: int, l2: int, b: int, *, allow_large: bool = False
) -> dict[DoubleBucket, int]:
    """Census of double walks on exactly l1+l2 vertices with black set [b].

    Buckets carry the double seed class together with the sprout split
    (b1', b2', w1', w2'): black/white vertices of each component outside the
    component's share of the seed.
    """
    if not 1 <= b <= l1 + l2:
        raise ValueError(f"need 1 <= b <= l1+l2, got b={b}")
    _check_guard(l1 + l2, COVARIANCE_POWER_LIMIT, allow_large, "l1+l2")
    r = l1 + l2
    buckets: dict[DoubleBucket, int] = {}
    km_pairs = _joint_covering_pairs(l1, l2, r, b)
    blacks = frozenset(range(1, b + 1))
    for i, j in _joint_black_pairs(l1, l2, b):
        for k, m in km_pairs:
            first = zip_routes(i, k)
            second = zip_routes(j, m)
            seed1, seed2 = trim_double(first, second)
            seed_class = classify_leaf_free_double(seed1, seed2)
            split = (
                len((set(first) & blacks) - set(seed1)),
                len((set(second) & blacks) - set(seed2)),
                len((set(first) - blacks) - set(seed1)),
                len((set(second) - blacks) - set(seed2)),
            )
            key = (seed_class, split)
            buckets[key] = buckets.get(key, 0) + 1
    return buckets


# ---------------------------------------------------------------------------
# sprouting census (walk search with exact final verification)


def census_sprouting(
    seed_route: Sequence[int],
    black_sprouts: Iterable[int],
    white_sprouts: Iterable[int],
) -> int:
    """Count walks trimming to the given seed with the prescribed sprout colors.

    The search walks candidate routes edge by edge under necessary conditions
    (edge budgets between seed vertices, single opposite pairs on any sprout
    connection, color parity) and then verifies each completed route by
    actually trimming it.  Seed vertices are relabelled above the sprouts so
    that the known order-sensitivity of two-vertex seeds cannot bite.
    """
    seed_route = tuple(seed_route)
    blacks = frozenset(black_sprouts)
    whites = frozenset(white_sprouts)
    if blacks & whites:
        raise ValueError("black and white sprout sets overlap")
    if (blacks | whites) & set(seed_route):
        raise ValueError("sprout labels must be disjoint from the seed labels")
    if balanced_leaf_labels(compact_labels(seed_route)):
        raise ValueError(f"seed route {seed_route} still has balanced leaves")
    n_sprouts = len(blacks) + len(whites)
    if n_sprouts == 0:
        return 1

    # sprouts become 1..n_sprouts, seed labels sit above them in order
    sprout_map = {v: idx for idx, v in enumerate(sorted(blacks | whites), start=1)}
    seed_map = {
        v: n_sprouts + idx for idx, v in enumerate(sorted(set(seed_route)), start=1)
    }
    i0 = tuple(seed_map[v] for v in seed_route)
    black_set = frozenset(sprout_map[v] for v in blacks)
    white_set = frozenset(sprout_map[v] for v in whites)
    seed_labels = frozenset(i0)
    sprout_labels = tuple(range(1, n_sprouts + 1))
    all_labels = sprout_labels + tuple(sorted(seed_labels))
    total_len = len(i0) + 2 * n_sprouts

    budgets: dict[tuple[int, int], int] = {}
    for e in route_edges(i0):
        budgets[e] = budgets.get(e, 0) + 1
    seed_edges_left = len(i0)

    route: list[int] = []
    sprout_edges_used: set[tuple[int, int]] = set()
    count = 0

    def edge_ok(a: int, c: int) -> bool:
        if a in seed_labels and c in seed_labels:
            return budgets.get((a, c), 0) > 0
        if a == c:
            return False  # sprout self-loops can never trim away
        return (a, c) not in sprout_edges_used

    def consume(a: int, c: int) -> None:
        nonlocal seed_edges_left
        if a in seed_labels and c in seed_labels:
            budgets[(a, c)] -= 1
            seed_edges_left -= 1
        else:
            sprout_edges_used.add((a, c))

    def release(a: int, c: int) -> None:
        nonlocal seed_edges_left
        if a in seed_labels and c in seed_labels:
            budgets[(a, c)] += 1
            seed_edges_left += 1
        else:
            sprout_edges_used.discard((a, c))

    def finish() -> None:
        nonlocal count
        if seed_edges_left != 0:
            return
        filled = tuple(route)
        visited = set(filled)
        if not (black_set | white_set) <= visited:
            return
        if black_labels(filled) & white_set:
            return
        if not black_set <= black_labels(filled):
            return
        if trim_route(filled) != i0:
            return
        count += 1

    def extend(position: int) -> None:
        if position == total_len:
            a, c = route[-1], route[0]
            if edge_ok(a, c):
                consume(a, c)
                finish()
                release(a, c)
            return
        if seed_edges_left > total_len - position + 1:
            return  # cannot place the remaining seed edges any more
        current = route[-1]
        even_position = position % 2 == 0
        for nxt in all_labels:
            if nxt in white_set and even_position:
                continue  # whites may only stand at even walk positions
            if not edge_ok(current, nxt):
                continue
            consume(current, nxt)
            route.append(nxt)
            extend(position + 1)
            route.pop()
            release(current, nxt)

    for start in all_labels:
        if start in white_set:
            continue  # position 1 is odd, hence black
        route.append(start)
        extend(1)
        route.pop()
    return count


def clear_caches() -> None:
    """Drop memoized enumerations (mostly useful in long-lived sessions)."""
    _SIGNATURE_CACHE.clear()
    _surjections.cache_clear()
    _covering_tuples.cache_clear()
