"""Named verification suites cross-checking closed forms against enumeration."""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Callable

from . import closedform, enumeration
from .graphs import (
    KIND_ONE_D_RING,
    KIND_TWO_D_RING,
    SeedClass,
    double_one_d_ring,
    double_two_d_ring,
    one_d_ring,
    two_d_ring,
)
from .weights import AffineAlpha, MomentSequence


def _suite_taylor(max_l: int, allow_large: bool) -> tuple[int, list[str]]:
    cases, failures = 0, []
    for l in range(2, max_l + 1):
        for b in range(1, l):
            cases += 1
            if not closedform.taylor_identity_check(l, b):
                failures.append(f"taylor identity fails at l={l}, b={b}")
    return cases, failures


def _suite_bs_mean(max_l: int, allow_large: bool) -> tuple[int, list[str]]:
    cases, failures = 0, []
    for l in range(1, max_l + 1):
        coeffs = closedform.bs_mean_coefficients(l)
        for j in range(0, l + 1):
            cases += 1
            expected = Fraction(0)
            if 1 <= j <= l - 1:
                expected = Fraction(closedform.binom(2 * l, 2 * j), 2) - Fraction(
                    closedform.binom(l, j) ** 2, 2
                )
            if coeffs[j] != expected:
                failures.append(f"mean coefficient mismatch at l={l}, j={j}")
    return cases, failures


def _suite_bs_cov(max_l: int, allow_large: bool) -> tuple[int, list[str]]:
    cases, failures = 0, []
    for l1 in range(1, max_l + 1):
        for l2 in range(1, max_l + 1):
            for b in range(1, l1 + l2 + 1):
                cases += 1
                lhs = closedform.bs_cov_coefficient(l1, l2, b)
                rhs = Fraction(
                    closedform.C_coeff(l1, l2, b),
                    factorial(b) * factorial(l1 + l2 - b),
                )
                if lhs != rhs:
                    failures.append(
                        f"covariance coefficient mismatch at l1={l1}, l2={l2}, b={b}"
                    )
    return cases, failures


def _suite_mean_coeffs(max_l: int, allow_large: bool) -> tuple[int, list[str]]:
    cases, failures = 0, []
    for l in range(1, max_l + 1):
        for b in range(1, l + 1):
            cases += 1
            got = enumeration.inner_weight_sum_affine(l, l, b)
            expected = AffineAlpha(
                closedform.A_coeff(l, b) - 3 * closedform.B_coeff(l, b),
                Fraction(closedform.B_coeff(l, b)),
            )
            if got != expected:
                failures.append(f"mean coefficient law fails at l={l}, b={b}")
            if b == l and got.evaluate(3) != l * factorial(l):
                failures.append(f"all-black sum differs from l*l! at l={l}")
    return cases, failures


def _suite_tree_counts(max_l: int, allow_large: bool) -> tuple[int, list[str]]:
    cases, failures = 0, []
    for l in range(1, max_l + 1):
        for b in range(1, l + 1):
            cases += 1
            got = enumeration.inner_weight_sum_affine(l, l + 1, b)
            expected = AffineAlpha.constant(closedform.count_colored_trees(l, b))
            if got != expected:
                failures.append(f"tree count law fails at l={l}, b={b}")
    return cases, failures


def _suite_vanishing(max_l: int, allow_large: bool) -> tuple[int, list[str]]:
    cases, failures = 0, []
    for l in range(2, max_l + 1):  # l = 1 cannot even host l + 2 labels
        for b in range(1, l + 1):
            cases += 1
            got = enumeration.inner_weight_sum_affine(l, l + 2, b)
            if got != AffineAlpha():
                failures.append(f"sum does not vanish at l={l}, r={l + 2}, b={b}")
    return cases, failures


_SPROUTING_SEEDS = {
    1: [(1, 2)],
    2: [(1, 2, 1, 2), (1, 1, 2, 2)],
    3: [(1, 2, 3, 1, 2, 3), (1, 1, 1, 2, 2, 2), (1, 1, 1, 1, 1, 1)],
}


def _suite_sprouting(max_l: int, allow_large: bool) -> tuple[int, list[str]]:
    max_l0 = min(max_l, 3)
    max_sprouts = 3 if allow_large or max_l >= 3 else 2
    cases, failures = 0, []
    for l0, seeds in _SPROUTING_SEEDS.items():
        if l0 > max_l0:
            continue
        for b_prime in range(0, max_sprouts + 1):
            for w_prime in range(0, max_sprouts + 1 - b_prime):
                expected = closedform.count_sprouting(l0, b_prime, w_prime)
                blacks = set(range(101, 101 + b_prime))
                whites = set(range(201, 201 + w_prime))
                for seed in seeds:
                    cases += 1
                    got = enumeration.census_sprouting(seed, blacks, whites)
                    if got != expected:
                        failures.append(
                            f"sprouting census {got} != {expected} for seed {seed}, "
                            f"b'={b_prime}, w'={w_prime}"
                        )
    return cases, failures


def _expected_ring_buckets(l: int, b: int) -> dict[SeedClass, int]:
    expected: dict[SeedClass, int] = {}
    w = l - b
    for l0 in range(1, l + 1):
        b_prime = b - (l0 + 1) // 2
        w_prime = w - l0 // 2
        if b_prime >= 0 and w_prime >= 0:
            count = closedform.count_ring_sprouts(
                closedform.TWO_DIRECTIONAL, l0, b_prime, w_prime
            )
            if count:
                expected[two_d_ring(l0)] = count
        if l0 >= 4 and l0 % 2 == 0:
            b_prime = b - l0 // 2
            w_prime = w - l0 // 2
            if b_prime >= 0 and w_prime >= 0:
                count = closedform.count_ring_sprouts(
                    closedform.ONE_DIRECTIONAL, l0, b_prime, w_prime
                )
                if count:
                    expected[one_d_ring(l0)] = count
    return expected


def _suite_ring_census(max_l: int, allow_large: bool) -> tuple[int, list[str]]:
    cases, failures = 0, []
    for l in range(1, max_l + 1):
        for b in range(1, l + 1):
            census = enumeration.census_by_seed(l, b, allow_large=allow_large)
            # the counting formulas cover opposed rings of any length and
            # aligned rings of even length; odd aligned rings carry weight 0
            rings = {
                cls: count
                for cls, count in census.items()
                if cls.kind == KIND_TWO_D_RING
                or (cls.kind == KIND_ONE_D_RING and (cls.ring_length or 0) % 2 == 0)
            }
            cases += 1
            if rings != _expected_ring_buckets(l, b):
                failures.append(f"ring census mismatch at l={l}, b={b}")
    return cases, failures


def _expected_double_buckets(
    l1: int, l2: int, b: int
) -> dict[enumeration.DoubleBucket, int]:
    expected: dict[enumeration.DoubleBucket, int] = {}
    half_max = min(l1, l2)
    for half in range(1, half_max + 1):
        l0 = 2 * half
        for b1 in range(0, l1 - half + 1):
            b2 = b - half - b1
            w1 = l1 - half - b1
            w2 = l2 - b + b1
            if b2 < 0 or w2 < 0:
                continue
            split = (b1, b2, w1, w2)
            count = closedform.count_double_ring_sprouts(
                closedform.TWO_DIRECTIONAL, l0, b1, b2, w1, w2
            )
            if count:
                expected[(double_two_d_ring(l0), split)] = count
            if l0 >= 4:
                count = closedform.count_double_ring_sprouts(
                    closedform.ONE_DIRECTIONAL, l0, b1, b2, w1, w2
                )
                if count:
                    expected[(double_one_d_ring(l0), split)] = count
    return expected


def _suite_double_census(max_l: int, allow_large: bool) -> tuple[int, list[str]]:
    cases, failures = 0, []
    for l1 in range(1, max_l):
        for l2 in range(1, max_l - l1 + 1):
            for b in range(1, l1 + l2 + 1):
                census = enumeration.census_double(l1, l2, b, allow_large=allow_large)
                rings = {
                    key: count
                    for key, count in census.items()
                    if key[0].ring_length is not None
                }
                cases += 1
                if rings != _expected_double_buckets(l1, l2, b):
                    failures.append(
                        f"double census mismatch at l1={l1}, l2={l2}, b={b}"
                    )
    return cases, failures


def _suite_cov_coeffs(max_l: int, allow_large: bool) -> tuple[int, list[str]]:
    cases, failures = 0, []
    for l1 in range(1, max_l):
        for l2 in range(1, max_l - l1 + 1):
            order = 2 * (l1 + l2)
            zeros = [0] * (order - 4)
            at0 = MomentSequence([1, 0, 1, 0, 0] + zeros, warn_suspicious=False)
            at1 = MomentSequence([1, 0, 1, 0, 1] + zeros, warn_suspicious=False)
            for b in range(1, l1 + l2 + 1):
                cases += 1
                s0 = enumeration.covariance_inner_sum(l1, l2, b, at0)
                s1 = enumeration.covariance_inner_sum(l1, l2, b, at1)
                got = AffineAlpha(s0, s1 - s0)
                c = closedform.C_coeff(l1, l2, b)
                d = closedform.D_coeff(l1, l2, b)
                if got != AffineAlpha(Fraction(c - 3 * d), Fraction(d)):
                    failures.append(
                        f"covariance coefficient law fails at l1={l1}, l2={l2}, b={b}"
                    )
    return cases, failures


_Suite = Callable[[int, bool], tuple[int, list[str]]]

SUITES: dict[str, tuple[_Suite, int]] = {
    # name -> (runner, default max_l)
    "taylor": (_suite_taylor, 30),
    "bs-mean": (_suite_bs_mean, 20),
    "bs-cov": (_suite_bs_cov, 20),
    "mean-coeffs": (_suite_mean_coeffs, 4),
    "tree-counts": (_suite_tree_counts, 4),
    "vanishing": (_suite_vanishing, 4),
    "sprouting": (_suite_sprouting, 3),
    "ring-census": (_suite_ring_census, 4),
    "double-census": (_suite_double_census, 4),
    "cov-coeffs": (_suite_cov_coeffs, 4),
}


def run_suite(name: str, max_l: int | None = None, *, allow_large: bool = False) -> dict:
    """Run one named suite and return {suite, cases, failures}."""
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r} (choose from {sorted(SUITES)})")
    runner, default_max = SUITES[name]
    cases, failures = runner(max_l if max_l is not None else default_max, allow_large)
    return {"suite": name, "cases": cases, "failures": failures}
