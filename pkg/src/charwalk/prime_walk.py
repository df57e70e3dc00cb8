"""Walks driven by the first k primes: S_k(p) = sum_{j<=k} chi_p(q_j) over primes p.

Primes p <= q_k are left out of every ensemble so that all symbols are +-1; the
denominator is the number of included primes, which differs from pi(N) by at
most k.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .char_walk import ResidueDistribution, pattern_index, pattern_vector
from .errors import InvalidInputError, ResourceLimitError
from .finite_field import legendre_batch
from .walk_model import WalkKind, psi_exact

MAX_SIEVE_LIMIT = 10 ** 9
SEGMENT = 1 << 21
DEFAULT_MEMORY_BUDGET = 512 << 20
MAX_PATTERN_LENGTH = 20


@dataclass(frozen=True)
class PrimeTable:
    limit: int
    primes: np.ndarray

    @property
    def count(self) -> int:
        return int(self.primes.size)

    def first(self, k: int) -> np.ndarray:
        if k > self.count:
            raise InvalidInputError(f"only {self.count} primes up to {self.limit}")
        return self.primes[:k]


def _small_sieve(n: int) -> np.ndarray:
    flags = np.ones(n + 1, dtype=bool)
    flags[:2] = False
    for i in range(2, math.isqrt(n) + 1):
        if flags[i]:
            flags[i * i::i] = False
    return np.flatnonzero(flags)


def sieve_primes(N: int, memory_budget: int = DEFAULT_MEMORY_BUDGET) -> PrimeTable:
    """All primes <= N by a segmented sieve of Eratosthenes."""
    if not 2 <= N <= MAX_SIEVE_LIMIT:
        raise InvalidInputError(f"sieve limit {N} outside [2, {MAX_SIEVE_LIMIT}]")
    # pi(N) < 1.26 N / ln N; 8 bytes per stored prime
    estimate = 8 * 1.26 * N / math.log(N) + SEGMENT
    if estimate > memory_budget:
        raise ResourceLimitError(f"sieving to {N} needs ~{estimate / 2**20:.0f} MiB")
    root = math.isqrt(N)
    base = _small_sieve(max(root, 2))
    if N <= SEGMENT:
        return PrimeTable(N, _small_sieve(N).astype(np.int64))
    parts = [base.astype(np.int64)]
    lo = root + 1
    while lo <= N:
        hi = min(lo + SEGMENT, N + 1)
        flags = np.ones(hi - lo, dtype=bool)
        for q in base:
            q = int(q)
            start = max(q * q, (lo + q - 1) // q * q)
            if start >= hi:
                continue
            flags[start - lo::q] = False
        parts.append(np.flatnonzero(flags).astype(np.int64) + lo)
        lo = hi
    return PrimeTable(N, np.concatenate(parts))


def _ensemble(N: int, k: int, table: PrimeTable | None):
    if k < 1:
        raise InvalidInputError(f"k={k} must be >= 1")
    table = table if table is not None and table.limit >= N else sieve_primes(N)
    primes = table.primes[table.primes <= N]
    if k >= primes.size:
        raise InvalidInputError(f"q_k must be below N={N}")
    q = primes[:k]
    ps = primes[k:]
    if ps.size == 0:
        raise InvalidInputError(f"no primes in (q_k, N] for k={k}, N={N}")
    return q, ps


def symbol_matrix(N: int, k: int, table: PrimeTable | None = None):
    """(q_1..q_k, included primes, matrix chi_p(q_j) with one row per prime)."""
    q, ps = _ensemble(N, k, table)
    chi = legendre_batch(q[None, :], ps[:, None])
    return q, ps, chi


@dataclass
class PrimeWalkResult:
    N: int
    k: int
    distribution: ResidueDistribution
    included_prime_count: int
    pi_N: int
    model: tuple
    max_discrepancy: float
    advisory_k_limit: float

    @property
    def frequencies(self) -> list:
        return self.distribution.frequencies

    @property
    def k_in_range(self) -> bool:
        return self.k <= self.advisory_k_limit


def _iterated_log_ratio(N: int) -> float:
    l2 = math.log(math.log(N))
    l3 = math.log(l2) if l2 > 1 else math.nan
    return l2 / l3 if l3 and l3 > 0 else math.nan


def psi_N(N: int, k: int, m: int, table: PrimeTable | None = None) -> PrimeWalkResult:
    """Distribution of S_k(p) mod m over primes q_k < p <= N, against the +-1 model."""
    if m < 2:
        raise InvalidInputError(f"m={m} must be >= 2")
    _, ps, chi = symbol_matrix(N, k, table)
    walk = chi.astype(np.int64).sum(axis=1)
    counts = np.bincount(walk % m, minlength=m)
    dist = ResidueDistribution(m, tuple(int(c) for c in counts), int(ps.size))
    model = psi_exact(WalkKind.RADEMACHER, k, m).probabilities
    gap = max(abs(f - g) for f, g in zip(dist.frequencies, model))
    pi_N = int(ps.size) + k
    return PrimeWalkResult(N, k, dist, int(ps.size), pi_N, model, gap,
                           _iterated_log_ratio(N))


def sign_pattern_counts(N: int, k: int, table: PrimeTable | None = None) -> tuple:
    """(counts indexed by pattern code, included prime count)."""
    if not 1 <= k <= MAX_PATTERN_LENGTH:
        raise InvalidInputError(f"k={k} must be in [1, {MAX_PATTERN_LENGTH}]")
    _, ps, chi = symbol_matrix(N, k, table)
    codes = (chi == -1).astype(np.int64) @ (1 << np.arange(k, dtype=np.int64))
    return np.bincount(codes, minlength=1 << k), int(ps.size)


def sign_pattern_fraction(N: int, k: int, v, table: PrimeTable | None = None) -> float:
    """Fraction of included primes whose symbol vector (chi_p(q_j))_j equals v."""
    v = tuple(v)
    if len(v) != k:
        raise InvalidInputError(f"sign vector has length {len(v)}, expected {k}")
    idx = pattern_index(v)
    counts, total = sign_pattern_counts(N, k, table)
    return int(counts[idx]) / total


def pattern_pushforward(counts, k: int, m: int) -> list:
    """Residue counts of sum(v) mod m implied by per-pattern counts."""
    out = [0] * m
    for idx, c in enumerate(counts):
        out[sum(pattern_vector(idx, k)) % m] += int(c)
    return out
