"""Monte Carlo validation of exact trace moments and power-trace covariances.

Sampling is keyed by (seed, batch index) through the counter-based Philox
generator, with a fixed batch size, so a run is bit-reproducible no matter how
batches are scheduled; partial final batches only truncate the stream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

import numpy as np

RNG_ALGORITHM = "philox4x64 keyed by (seed, batch)"
BATCH_SIZE = 1024

DISTRIBUTIONS = ("gaussian", "rademacher", "uniform")


@dataclass(frozen=True)
class SimulationConfig:
    p: int
    n: int
    l_list: tuple[int, ...]
    replications: int
    distribution: str
    rng_seed: int

    def __post_init__(self) -> None:
        if self.p < 1 or self.n < 1:
            raise ValueError(f"matrix dimensions must be positive, got {self.p}x{self.n}")
        if not self.l_list or any(l < 1 for l in self.l_list):
            raise ValueError(f"trace powers must be positive, got {self.l_list}")
        if len(set(self.l_list)) != len(self.l_list):
            raise ValueError("trace powers must be distinct")
        if self.replications < 100:
            raise ValueError("need at least 100 replications")
        if self.distribution not in DISTRIBUTIONS:
            raise ValueError(f"unknown distribution {self.distribution!r}")
        if not 0 <= self.rng_seed < 2**64:
            raise ValueError("rng_seed must fit in 64 bits")


@dataclass(frozen=True)
class ExactReferences:
    means: Mapping[int, Fraction] = field(default_factory=dict)
    covariances: Mapping[tuple[int, int], Fraction] = field(default_factory=dict)


@dataclass(frozen=True)
class MeanStat:
    l: int
    empirical: float
    se: float
    exact: float | None
    z: float | None


@dataclass(frozen=True)
class CovStat:
    l1: int
    l2: int
    empirical: float
    se: float  # leave-one-out jackknife
    exact: float | None
    z: float | None


@dataclass(frozen=True)
class SimulationReport:
    config: SimulationConfig
    rng_algorithm: str
    batch_size: int
    means: tuple[MeanStat, ...]
    covariances: tuple[CovStat, ...]

    def to_dict(self) -> dict:
        return {
            "config": {
                "p": self.config.p,
                "n": self.config.n,
                "l_list": list(self.config.l_list),
                "replications": self.config.replications,
                "distribution": self.config.distribution,
                "rng_seed": self.config.rng_seed,
            },
            "rng_algorithm": self.rng_algorithm,
            "batch_size": self.batch_size,
            "means": [vars(s).copy() for s in self.means],
            "covariances": [vars(s).copy() for s in self.covariances],
        }

    def csv_rows(self) -> list[list[str]]:
        rows = [["kind", "l1", "l2", "empirical", "exact", "se", "z"]]
        for s in self.means:
            rows.append(
                ["mean", str(s.l), "", repr(s.empirical),
                 "" if s.exact is None else repr(s.exact),
                 repr(s.se), "" if s.z is None else repr(s.z)]
            )
        for s in self.covariances:
            rows.append(
                ["cov", str(s.l1), str(s.l2), repr(s.empirical),
                 "" if s.exact is None else repr(s.exact),
                 repr(s.se), "" if s.z is None else repr(s.z)]
            )
        return rows


def _draw_batch(
    distribution: str, seed: int, batch_index: int, count: int, p: int, n: int
) -> np.ndarray:
    key = np.array([seed, batch_index], dtype=np.uint64)
    gen = np.random.Generator(np.random.Philox(key=key))
    shape = (count, p, n)
    if distribution == "gaussian":
        return gen.standard_normal(shape)
    if distribution == "rademacher":
        return gen.integers(0, 2, size=shape).astype(np.float64) * 2.0 - 1.0
    return math.sqrt(3.0) * (2.0 * gen.random(shape) - 1.0)


def sample_traces(config: SimulationConfig) -> np.ndarray:
    """Per-replication values of tr(S^l), shape (replications, len(l_list)).

    For p > n the draw is transposed and the traces rescaled by (p/n)^l, which
    leaves the distribution unchanged.
    """
    p, n = config.p, config.n
    transposed = p > n
    if transposed:
        p, n = n, p
    powers = sorted(set(config.l_list))
    max_l = max(powers)
    out = np.empty((config.replications, len(config.l_list)), dtype=np.float64)
    column = {l: idx for idx, l in enumerate(config.l_list)}
    done = 0
    batch = 0
    while done < config.replications:
        count = min(BATCH_SIZE, config.replications - done)
        x = _draw_batch(config.distribution, config.rng_seed, batch, count, p, n)
        gram = x @ x.transpose(0, 2, 1)  # p x p, the smaller side
        power = gram
        for l in range(1, max_l + 1):
            if l > 1:
                power = power @ gram
            if l in column:
                traces = np.einsum("rii->r", power) / float(n) ** l
                if transposed:
                    traces = traces * (config.p / config.n) ** l
                out[done : done + count, column[l]] = traces
        done += count
        batch += 1
    return out


def _z_score(empirical: float, exact: float | None, se: float) -> float | None:
    if exact is None:
        return None
    if se > 0.0:
        return (empirical - exact) / se
    return 0.0 if empirical == exact else math.inf


def _jackknife_cov_se(x: np.ndarray, y: np.ndarray) -> float:
    """Leave-one-out jackknife standard error of the sample covariance."""
    r = len(x)
    sx, sy, sxy = x.sum(), y.sum(), float(x @ y)
    loo = (sxy - x * y - (sx - x) * (sy - y) / (r - 1)) / (r - 2)
    return math.sqrt((r - 1) / r * float(((loo - loo.mean()) ** 2).sum()))


def simulate(
    config: SimulationConfig, reference: ExactReferences | None = None
) -> SimulationReport:
    """Estimate trace means and covariances and score them against exact values."""
    reference = reference or ExactReferences()
    traces = sample_traces(config)
    r = config.replications
    means: list[MeanStat] = []
    for idx, l in enumerate(config.l_list):
        col = traces[:, idx]
        empirical = float(col.mean())
        se = float(col.std(ddof=1)) / math.sqrt(r)
        exact = reference.means.get(l)
        exact_f = None if exact is None else float(exact)
        means.append(MeanStat(l, empirical, se, exact_f, _z_score(empirical, exact_f, se)))
    covs: list[CovStat] = []
    for a in range(len(config.l_list)):
        for b in range(a, len(config.l_list)):
            l1, l2 = config.l_list[a], config.l_list[b]
            x, y = traces[:, a], traces[:, b]
            empirical = float(((x - x.mean()) * (y - y.mean())).sum() / (r - 1))
            se = _jackknife_cov_se(x, y)
            exact = reference.covariances.get((l1, l2))
            if exact is None:
                exact = reference.covariances.get((l2, l1))
            exact_f = None if exact is None else float(exact)
            covs.append(
                CovStat(l1, l2, empirical, se, exact_f, _z_score(empirical, exact_f, se))
            )
    return SimulationReport(config, RNG_ALGORITHM, BATCH_SIZE, tuple(means), tuple(covs))


def oracle_references(
    config: SimulationConfig,
    *,
    cov_pairs: tuple[tuple[int, int], ...] | None = None,
    allow_large: bool = False,
) -> ExactReferences:
    """Exact references for a simulation, computed by the enumeration oracle.

    Covariance references default to every pair of configured powers that fits
    the oracle's cost guard; pass cov_pairs to pin the selection explicitly.
    """
    from .enumeration import (
        COVARIANCE_POWER_LIMIT,
        exact_trace_covariance,
        exact_trace_moment,
    )
    from .weights import preset_moments

    max_l = max(config.l_list)
    means: dict[int, Fraction] = {}
    mean_moments = preset_moments(config.distribution, max(4, 2 * max_l))
    for l in config.l_list:
        means[l] = exact_trace_moment(
            l, config.p, config.n, mean_moments, allow_large=allow_large
        ).value
    if cov_pairs is None:
        limit = COVARIANCE_POWER_LIMIT + (1 if allow_large else 0)
        cov_pairs = tuple(
            (config.l_list[a], config.l_list[b])
            for a in range(len(config.l_list))
            for b in range(a, len(config.l_list))
            if config.l_list[a] + config.l_list[b] <= limit
        )
    covs: dict[tuple[int, int], Fraction] = {}
    for l1, l2 in cov_pairs:
        cov_moments = preset_moments(config.distribution, 2 * (l1 + l2))
        covs[(l1, l2)] = exact_trace_covariance(
            l1, l2, config.p, config.n, cov_moments, allow_large=allow_large
        )
    return ExactReferences(means, covs)
