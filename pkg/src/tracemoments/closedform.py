"""Closed-form coefficients and expansions for trace moments and covariances.

Everything returns exact integers, Fractions, or affine expressions in the
fourth entry moment; numeric evaluation is left to callers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Sequence

from .weights import AffineAlpha, Rational


def binom(n: int, k: int) -> int:
    """Binomial coefficient with C(n, k) = 0 for k < 0 or k > n; n must be >= 0."""
    if n < 0:
        raise ValueError(f"negative upper index {n}")
    if k < 0 or k > n:
        return 0
    return comb(n, k)


def _check_range(cond: bool, message: str) -> None:
    if not cond:
        raise ValueError(message)


# ---------------------------------------------------------------------------
# expansion coefficients


def A_coeff(l: int, b: int) -> Fraction:
    """Ring contribution to the order-(l, b) mean coefficient."""
    _check_range(1 <= b <= l, f"need 1 <= b <= l, got b={b}, l={l}")
    return Fraction(
        factorial(b) * factorial(l - b) * (binom(2 * l, 2 * b) + (2 * b - 1) * binom(l, b) ** 2),
        2,
    )


def B_coeff(l: int, b: int) -> int:
    """Fourth-moment correction to the order-(l, b) mean coefficient; 0 at b = l."""
    _check_range(1 <= b <= l, f"need 1 <= b <= l, got b={b}, l={l}")
    if b >= l:
        return 0
    return factorial(b) * factorial(l - b) * binom(l, b - 1) * binom(l, b + 1)


def C_coeff(l1: int, l2: int, b: int) -> int:
    """Leading covariance coefficient at black count b."""
    _check_range(1 <= b <= l1 + l2, f"need 1 <= b <= l1+l2, got b={b}")
    double_sum = 0
    for k in range(0, b + 1):
        outer = binom(l1, k) * binom(l2, b - k)
        if outer == 0:
            continue
        double_sum += outer * sum(
            m * binom(l1, k + m) * binom(l2, b - m - k) for m in range(0, b - k + 1)
        )
    return 2 * factorial(b) * factorial(l1 + l2 - b) * double_sum


def D_coeff(l1: int, l2: int, b: int) -> int:
    """Fourth-moment correction to the covariance coefficient at black count b."""
    _check_range(1 <= b <= l1 + l2, f"need 1 <= b <= l1+l2, got b={b}")
    inner = sum(
        binom(l1, k) * binom(l1, k + 1) * binom(l2, b - 1 - k) * binom(l2, b - k)
        for k in range(0, b)
    )
    return factorial(b) * factorial(l1 + l2 - b) * inner


# ---------------------------------------------------------------------------
# main expansions


@dataclass(frozen=True)
class ExpansionTerm:
    b: int
    tree_part: Fraction  # coefficient of C(p,b) C(n-b, l+1-b) / n^l
    ring_part: AffineAlpha  # coefficient of C(p,b) C(n-b, l-b) / n^l
    error_order: str


@dataclass(frozen=True)
class CovExpansionTerm:
    b: int
    coeff: AffineAlpha  # coefficient of C(p,b) C(n-b, l1+l2-b) / n^(l1+l2)
    error_order: str


def theorem1_mean(l: int, p: int, n: int) -> tuple[AffineAlpha, tuple[ExpansionTerm, ...]]:
    """Mean expansion of tr(S^l) up to the stated error orders, affine in alpha."""
    _check_range(l >= 1 and p >= 1, f"need l, p >= 1, got l={l}, p={p}")
    _check_range(p <= n, f"need p <= n, got p={p}, n={n}")
    scale = Fraction(1, n**l)
    value = AffineAlpha()
    terms: list[ExpansionTerm] = []
    for b in range(1, min(l, p) + 1):
        tree_part = Fraction(factorial(l) * binom(l - 1, b - 1))
        ring_part = AffineAlpha(A_coeff(l, b) - 3 * B_coeff(l, b), Fraction(B_coeff(l, b)))
        terms.append(
            ExpansionTerm(b, tree_part, ring_part, f"O(p^{b}/n^{b + 1})")
        )
        tree_mult = Fraction(binom(p, b) * binom(n - b, l + 1 - b)) * scale
        ring_mult = Fraction(binom(p, b) * binom(n - b, l - b)) * scale
        value = value + AffineAlpha.constant(tree_mult * tree_part) + ring_part.scale(ring_mult)
    return value, tuple(terms)


def theorem2_cov(
    l1: int, l2: int, p: int, n: int
) -> tuple[AffineAlpha, tuple[CovExpansionTerm, ...]]:
    """Covariance expansion of (tr(S^l1), tr(S^l2)), affine in alpha."""
    _check_range(min(l1, l2, p) >= 1, f"need l1, l2, p >= 1, got {(l1, l2, p)}")
    _check_range(p <= n, f"need p <= n, got p={p}, n={n}")
    total_l = l1 + l2
    scale = Fraction(1, n**total_l)
    value = AffineAlpha()
    terms: list[CovExpansionTerm] = []
    for b in range(1, min(total_l, p) + 1):
        c = C_coeff(l1, l2, b)
        d = D_coeff(l1, l2, b)
        coeff = AffineAlpha(Fraction(c - 3 * d), Fraction(d))
        terms.append(CovExpansionTerm(b, coeff, f"O(p^{b}/n^{b + 1})"))
        mult = Fraction(binom(p, b) * binom(n - b, total_l - b)) * scale
        value = value + coeff.scale(mult)
    return value, tuple(terms)


# ---------------------------------------------------------------------------
# corollaries


@dataclass(frozen=True)
class MeanRatioExpansion:
    """Mean expansion in y = p/n: an n-scaled leading polynomial plus a correction."""

    leading: tuple[Fraction, ...]  # leading[b] multiplies n * y^b, index 0 unused
    correction: tuple[AffineAlpha, ...]  # correction[b] multiplies y^b
    value: AffineAlpha  # both sums evaluated exactly at y = p/n


def corollary_mean_ratio(l: int, p: int, n: int) -> MeanRatioExpansion:
    """Proportional-growth form of the mean expansion, exact at y = p/n."""
    _check_range(l >= 1 and p >= 1 and n >= 1, f"need positive inputs, got {(l, p, n)}")
    y = Fraction(p, n)
    leading = [Fraction(0)] * (l + 1)
    for b in range(1, l + 1):
        leading[b] = Fraction(binom(l, b - 1) * binom(l - 1, b - 1), b)
    correction = [AffineAlpha()] * (l + 1)
    for b in range(1, l):
        const = Fraction(binom(2 * l, 2 * b), 2) - Fraction(binom(l, b) ** 2, 2)
        alpha_part = Fraction(binom(l, b - 1) * binom(l, b + 1))
        correction[b] = AffineAlpha(const - 3 * alpha_part, alpha_part)
    value = AffineAlpha()
    for b in range(1, l + 1):
        value = value + AffineAlpha.constant(n * leading[b] * y**b)
    for b in range(1, l):
        value = value + correction[b].scale(y**b)
    return MeanRatioExpansion(tuple(leading), tuple(correction), value)


def corollary_mean_const_p(l: int, p: int, n: int) -> AffineAlpha:
    """Fixed-dimension mean expansion: p plus the first 1/n correction."""
    _check_range(min(l, p, n) >= 1, f"need positive inputs, got {(l, p, n)}")
    prefactor = Fraction(p * l, 2 * n)
    bracket_const = Fraction(l * p - 2 * l - p + 2)
    return AffineAlpha(
        Fraction(p) + prefactor * bracket_const, prefactor * (l - 1)
    )


@dataclass(frozen=True)
class CovRatioExpansion:
    coeffs: tuple[AffineAlpha, ...]  # coeffs[b] multiplies y^b, index 0 unused
    value: AffineAlpha  # evaluated exactly at y = p/n


def corollary_cov_ratio(l1: int, l2: int, p: int, n: int) -> CovRatioExpansion:
    """Proportional-growth form of the covariance expansion, exact at y = p/n."""
    _check_range(min(l1, l2, p, n) >= 1, f"need positive inputs, got {(l1, l2, p, n)}")
    y = Fraction(p, n)
    total_l = l1 + l2
    coeffs = [AffineAlpha()] * (total_l + 1)
    value = AffineAlpha()
    for b in range(1, total_l + 1):
        denom = factorial(b) * factorial(total_l - b)
        c = Fraction(C_coeff(l1, l2, b), denom)
        d = Fraction(D_coeff(l1, l2, b), denom)
        coeffs[b] = AffineAlpha(c - 3 * d, d)
        value = value + coeffs[b].scale(y**b)
    return CovRatioExpansion(tuple(coeffs), value)


def corollary_cov_const_p(l1: int, l2: int, p: int, n: int) -> AffineAlpha:
    """Fixed-dimension covariance expansion: the displayed two-term truncation."""
    _check_range(min(l1, l2, p, n) >= 1, f"need positive inputs, got {(l1, l2, p, n)}")
    lead = Fraction(p * l1 * l2, n)
    second = Fraction(p * l1 * l2, n**2)
    # (alpha - 1) * lead + second * [(p-1)(l1-1)(l2-1) - (alpha-1) l1 l2]
    alpha_part = lead - second * l1 * l2
    const_part = -lead + second * ((p - 1) * (l1 - 1) * (l2 - 1) + l1 * l2)
    return AffineAlpha(const_part, alpha_part)


# ---------------------------------------------------------------------------
# counting formulas


def count_colored_trees(l: int, b: int) -> int:
    """Number of doubled trees on l+1 labelled vertices with a given b-label black set."""
    if b < 1 or b > l:
        return 0
    return factorial(l) * binom(l - 1, b - 1)


def count_trees_per_adjacency(degrees: Sequence[int]) -> int:
    """Closed walks sharing one doubled-tree adjacency matrix: 2l * prod (deg-1)!."""
    degrees = list(degrees)
    l = len(degrees) - 1
    if l < 1 or sum(degrees) != 2 * l or min(degrees) < 1:
        raise ValueError(f"degree list {degrees} is not that of a tree")
    product = 1
    for d in degrees:
        product *= factorial(d - 1)
    return 2 * l * product


def count_sprouting(l0: int, b_prime: int, w_prime: int) -> int:
    """Sprouting graphs of a fixed seed with given black/white sprout counts."""
    _check_range(l0 >= 1 and b_prime >= 0 and w_prime >= 0, "need l0 >= 1 and b', w' >= 0")
    value = Fraction(
        factorial(l0 + b_prime + w_prime) ** 2,
        factorial(l0 + b_prime) * factorial(l0 + w_prime),
    )
    assert value.denominator == 1
    return value.numerator


ONE_DIRECTIONAL = "one-d"
TWO_DIRECTIONAL = "two-d"


def count_ring_sprouts(kind: str, l0: int, b_prime: int, w_prime: int) -> int:
    """Walks on l0+b'+w' vertices whose seed is a ring of length l0, black set fixed."""
    _check_range(l0 >= 1 and b_prime >= 0 and w_prime >= 0, "need l0 >= 1 and b', w' >= 0")
    l = l0 + b_prime + w_prime
    if kind == ONE_DIRECTIONAL:
        if l0 % 2 != 0 or l0 < 4:
            raise ValueError("aligned rings need even ring length >= 4")
        b = b_prime + l0 // 2
        w = w_prime + l0 // 2
        return factorial(b) * factorial(w) * binom(l, b_prime) * binom(l, w_prime)
    if kind == TWO_DIRECTIONAL:
        b = b_prime + (l0 + 1) // 2
        w = w_prime + l0 // 2
        base = factorial(b) * factorial(w) * binom(l, b_prime) * binom(l, w_prime)
        # length-2 rings admit a single seed route instead of the generic l0 many
        return base if l0 == 2 else l0 * base
    raise ValueError(f"kind must be {ONE_DIRECTIONAL!r} or {TWO_DIRECTIONAL!r}")


def count_double_ring_sprouts(
    kind: str, l0: int, b1_prime: int, b2_prime: int, w1_prime: int, w2_prime: int
) -> int:
    """Double walks whose combined seed is a double ring of even length l0."""
    _check_range(l0 >= 2 and l0 % 2 == 0, f"double rings need even l0 >= 2, got {l0}")
    _check_range(
        min(b1_prime, b2_prime, w1_prime, w2_prime) >= 0, "sprout counts must be >= 0"
    )
    if kind == ONE_DIRECTIONAL and l0 < 4:
        return 0
    if kind not in (ONE_DIRECTIONAL, TWO_DIRECTIONAL):
        raise ValueError(f"kind must be {ONE_DIRECTIONAL!r} or {TWO_DIRECTIONAL!r}")
    half = l0 // 2
    l1 = half + b1_prime + w1_prime
    l2 = half + b2_prime + w2_prime
    b = half + b1_prime + b2_prime
    w = l1 + l2 - b
    return (
        half
        * factorial(b)
        * factorial(w)
        * binom(l1, b1_prime)
        * binom(l1, w1_prime)
        * binom(l2, b2_prime)
        * binom(l2, w2_prime)
    )


def count_bipartite_forced_edge(
    b: int, w: int, d: Sequence[int], e: Sequence[int]
) -> int:
    """Degree-constrained spanning trees of K_{b+1,w+1} containing the edge (a1, c1)."""
    d, e = list(d), list(e)
    if len(d) != b + 1 or len(e) != w + 1:
        raise ValueError("degree lists must have lengths b+1 and w+1")
    if sum(d) != b + w + 1 or sum(e) != b + w + 1:
        raise ValueError(
            f"degree sums must both be b+w+1={b + w + 1}, got {sum(d)} and {sum(e)}"
        )
    if min(d) < 1 or min(e) < 1:
        raise ValueError("spanning-tree degrees are at least 1")

    def multinomial(total: int, parts: list[int]) -> int:
        value = factorial(total)
        for part in parts:
            value //= factorial(part)
        return value

    count = Fraction(
        multinomial(b, [x - 1 for x in e]) * multinomial(w, [x - 1 for x in d])
    )
    if b > 0 and w > 0:
        count *= 1 - Fraction((b - e[0] + 1) * (w - d[0] + 1), b * w)
    assert count.denominator == 1
    return count.numerator


def taylor_identity_check(l: int, b: int) -> bool:
    """Exact check of the binomial identity folding the two ring sums into one."""
    _check_range(1 <= b < l, f"need 1 <= b < l, got b={b}, l={l}")
    lhs = sum(
        (2 * m - 1) * binom(l, b - m) * binom(l, b + m - 1)
        for m in range(1, min(b, l - b + 1) + 1)
    )
    lhs += sum(
        (2 * m + 1) * binom(l, b - m) * binom(l, b + m)
        for m in range(1, min(b, l - b) + 1)
    )
    rhs = Fraction(binom(2 * l, 2 * b) + (2 * b - 1) * binom(l, b) ** 2, 2)
    return Fraction(lhs) == rhs


# ---------------------------------------------------------------------------
# comparison with the classical limit formulas


def mp_moment(l: int, y: Rational) -> Fraction:
    """Moments of the Marchenko-Pastur law with ratio y and unit scale."""
    _check_range(l >= 1, f"need l >= 1, got {l}")
    y = Fraction(y)
    return sum(
        (
            Fraction(binom(l, b - 1) * binom(l - 1, b - 1), b) * y ** (b - 1)
            for b in range(1, l + 1)
        ),
        Fraction(0),
    )


def bs_mean_coefficients(l: int) -> tuple[Fraction, ...]:
    """Coefficients of y^j in the classical limiting mean, via (1 +- sqrt(y))^2l.

    Expands both binomials over the square root and keeps the surviving even
    powers, so the result stays exact without ever forming a square root.
    """
    _check_range(l >= 1, f"need l >= 1, got {l}")
    # quarter * sum over t of [(-1)^t + 1] C(2l, t) s^t with s^2 = y
    coeffs = [Fraction(0)] * (l + 1)
    for t in range(0, 2 * l + 1):
        total = binom(2 * l, t) * ((-1) ** t + 1)
        if total and t % 2 == 0:
            coeffs[t // 2] += Fraction(total, 4)
    for j in range(0, l + 1):
        coeffs[j] -= Fraction(binom(l, j) ** 2, 2)
    return tuple(coeffs)


def bs_mean(l: int, y: Rational) -> Fraction:
    """Classical limiting mean of the centred spectral statistic of x^l."""
    y = Fraction(y)
    return sum(
        (c * y**j for j, c in enumerate(bs_mean_coefficients(l))), Fraction(0)
    )


def bs_cov_coefficient(l1: int, l2: int, b: int) -> Fraction:
    """Coefficient of y^b in the classical limiting covariance of (x^l1, x^l2)."""
    _check_range(1 <= b <= l1 + l2, f"need 1 <= b <= l1+l2, got b={b}")
    shift = l1 + l2 - b
    total = Fraction(0)
    for k1 in range(0, l1):
        for k2 in range(0, l2 + 1):
            if k1 + k2 < shift:
                continue
            outer = (
                binom(l1, k1)
                * binom(l2, k2)
                * binom(k1 + k2, shift)
                * (-1) ** (k1 + k2 - shift)
            )
            if outer == 0:
                continue
            inner = sum(
                m
                * binom(2 * l1 - 1 - (k1 + m), l1 - 1)
                * binom(2 * l2 - 1 - k2 + m, l2 - 1)
                for m in range(1, l1 - k1 + 1)
            )
            total += 2 * outer * inner
    return total
