"""Prefix sums of chi_p(F(n)) and their residue-class statistics.

For a square-free F over F_p the scans run over k = 1..p: the signed walk
S_p(F, k) = sum_{n<=k} chi_p(F(n)), and the counters R_p (residues) and N_p
(non-residues). Zeros of F add a 0 step to the signed walk and are skipped by
both counters.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError
from .finite_field import (FpPolynomial, as_modulus, is_squarefree, poly_eval_batch,
                           quadratic_character_table)

MAX_BLOCK_LENGTH = 20


class StatisticKind(enum.Enum):
    SIGNED_SUM = "signed"
    RESIDUE_COUNT = "residue"
    NONRESIDUE_COUNT = "nonresidue"

    @classmethod
    def parse(cls, value) -> "StatisticKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise InvalidInputError(f"unknown statistic {value!r}") from None


@dataclass(frozen=True)
class ResidueDistribution:
    m: int
    counts: tuple
    total: int

    def __post_init__(self):
        if len(self.counts) != self.m:
            raise InvalidInputError("counts must have one entry per residue")
        if sum(self.counts) != self.total:
            raise InvalidInputError("counts must sum to total")

    @property
    def frequencies(self) -> list:
        return [c / self.total for c in self.counts]

    def max_deviation(self) -> float:
        return max(abs(c / self.total - 1 / self.m) for c in self.counts)


def character_values(F: FpPolynomial, start: int, stop: int, chi=None) -> np.ndarray:
    """chi_p(F(n)) for n in [start, stop) as int8."""
    if chi is None:
        chi = quadratic_character_table(F.p)
    return chi[poly_eval_batch(F, np.arange(start, stop, dtype=np.int64))]


def _require_admissible(F: FpPolynomial):
    if F.degree < 1:
        raise InvalidInputError("F must have degree >= 1")
    if not is_squarefree(F):
        raise InvalidInputError(f"{F} is not square-free")


def walk_steps(F: FpPolynomial, stat, chi=None) -> np.ndarray:
    """Per-n increments for n = 1..p of the chosen statistic."""
    stat = StatisticKind.parse(stat)
    values = character_values(F, 1, F.p + 1, chi)
    if stat is StatisticKind.SIGNED_SUM:
        return values
    target = 1 if stat is StatisticKind.RESIDUE_COUNT else -1
    return (values == target).astype(np.int8)


def running_values(F: FpPolynomial, stat, chi=None) -> np.ndarray:
    """The walk itself: entry k-1 holds S_p(F,k), R_p(F,k) or N_p(F,k)."""
    return np.cumsum(walk_steps(F, stat, chi), dtype=np.int64)


def char_walk_distribution(F: FpPolynomial, m: int, stat="signed", chi=None) -> ResidueDistribution:
    """Counts of k in 1..p by the residue of the running statistic mod m."""
    if m < 2:
        raise InvalidInputError(f"m={m} must be >= 2")
    _require_admissible(F)
    walk = running_values(F, stat, chi)
    counts = np.bincount(walk % m, minlength=m)
    return ResidueDistribution(m, tuple(int(c) for c in counts), F.p)


def variance_statistic(dist: ResidueDistribution) -> float:
    """sum_a (counts[a]/total - 1/m)^2"""
    return math.fsum((c / dist.total - 1 / dist.m) ** 2 for c in dist.counts)


def pattern_index(v) -> int:
    """L-bit code of a sign vector: bit j-1 is set when v_j = -1."""
    idx = 0
    for j, x in enumerate(v):
        if x not in (-1, 1):
            raise InvalidInputError(f"sign vector entries must be +-1, got {x}")
        if x == -1:
            idx |= 1 << j
    return idx


def pattern_vector(idx: int, L: int) -> tuple:
    return tuple(-1 if (idx >> j) & 1 else 1 for j in range(L))


def pattern_label(v) -> str:
    return "".join("+" if x == 1 else "-" for x in v)


@dataclass
class PatternCensus:
    p: int
    L: int
    counts: list
    blocks_total: int
    excluded_blocks: int
    prediction: float
    regime_limit: float = field(default=math.inf)

    def count(self, v) -> int:
        return self.counts[pattern_index(v)]

    def as_dict(self) -> dict:
        return {pattern_vector(i, self.L): c for i, c in enumerate(self.counts)}

    def relative_deviations(self) -> list:
        return [(c - self.prediction) / self.prediction for c in self.counts]

    def max_relative_deviation(self) -> float:
        return max(abs(x) for x in self.relative_deviations())

    @property
    def in_regime(self) -> bool:
        """Whether L <= log p / log(4 d_F), the range where H(X) is provably non-square."""
        return self.L <= self.regime_limit


def block_pattern_census(F: FpPolynomial, L: int, chi=None) -> PatternCensus:
    """Sign vectors of chi_p(F(sL + j)), j = 1..L, for s = 0..floor(p/L) - 1."""
    p = F.p
    if not 1 <= L <= MAX_BLOCK_LENGTH:
        raise InvalidInputError(f"block length L={L} must be in [1, {MAX_BLOCK_LENGTH}]")
    if 2 * L > p:
        raise InvalidInputError(f"need 2L <= p, got L={L}, p={p}")
    _require_admissible(F)
    blocks = p // L
    values = character_values(F, 1, blocks * L + 1, chi).reshape(blocks, L)
    has_zero = np.any(values == 0, axis=1)
    neg = (values[~has_zero] == -1).astype(np.int64)
    codes = neg @ (1 << np.arange(L, dtype=np.int64))
    counts = np.bincount(codes, minlength=1 << L)
    return PatternCensus(
        p=p, L=L, counts=[int(c) for c in counts], blocks_total=blocks,
        excluded_blocks=int(np.count_nonzero(has_zero)),
        prediction=p / (2 ** L * L),
        regime_limit=math.log(p) / math.log(4 * F.degree),
    )


def census_pushforward(census: PatternCensus, m: int, kind="rademacher") -> np.ndarray:
    """Block-sum of the (Delta_L - L/m)^2 statistic implied by a pattern census.

    For each block pattern v, counts the prefixes l <= L whose partial sum lies in
    each residue class, and returns sum over blocks and residues of
    (count - L/m)^2. With kind "bernoulli01" the signs are mapped to 0/1 steps.
    """
    L = census.L
    total = 0.0
    for idx, c in enumerate(census.counts):
        if not c:
            continue
        v = pattern_vector(idx, L)
        if kind == "bernoulli01":
            v = tuple((x + 1) // 2 for x in v)
        pos = np.cumsum(v) % m
        hits = np.bincount(pos, minlength=m)
        total += c * float(np.sum((hits - L / m) ** 2))
    return total


@dataclass
class PrimeRow:
    p: int
    skipped: bool
    note: str = ""
    variance: float = math.nan
    max_deviation: float = math.nan
    variance_ratio: float = math.nan
    deviation_ratio: float = math.nan
    advisory_m_ok: bool = True


@dataclass
class TheoremCheck:
    rows: list
    m: int
    stat: str
    variance_budget: float
    deviation_budget: float

    @property
    def passed(self) -> bool:
        used = [r for r in self.rows if not r.skipped]
        return bool(used) and all(r.variance_ratio <= self.variance_budget
                                  and r.deviation_ratio <= self.deviation_budget for r in used)

    @property
    def max_variance_ratio(self) -> float:
        return max((r.variance_ratio for r in self.rows if not r.skipped), default=math.nan)

    @property
    def max_deviation_ratio(self) -> float:
        return max((r.deviation_ratio for r in self.rows if not r.skipped), default=math.nan)

    @property
    def decreasing_trend(self) -> bool:
        """Advisory: variance does not grow from the smallest to the largest prime."""
        v = [r.variance for r in self.rows if not r.skipped]
        return len(v) < 2 or v[-1] <= v[0]


def theorem1_check(primes, template, m: int, constant_budget: float = 10.0,
                   deviation_budget: float | None = None, stat="signed",
                   executor=None) -> TheoremCheck:
    """Normalized variance and max-deviation ratios of Phi_p across primes.

    ``template`` is a sequence of integer coefficients (lowest degree first),
    reduced mod each p. Ratios are V log(p)/m^2 and max_a|Phi_p - 1/m| sqrt(log p)/m.
    Primes where the reduction is not square-free are skipped with a note.
    """
    if m < 2:
        raise InvalidInputError(f"m={m} must be >= 2")
    stat = StatisticKind.parse(stat)
    coeffs = tuple(int(c) for c in template)
    if deviation_budget is None:
        deviation_budget = constant_budget

    def one(p):
        mod = as_modulus(p)
        F = FpPolynomial(mod, coeffs)
        if F.degree < 1 or not is_squarefree(F):
            return PrimeRow(mod.p, True, "template not square-free mod p")
        dist = char_walk_distribution(F, m, stat)
        V = variance_statistic(dist)
        dev = dist.max_deviation()
        lp = math.log(mod.p)
        return PrimeRow(mod.p, False, "", V, dev, V * lp / m ** 2, dev * math.sqrt(lp) / m,
                        advisory_m_ok=m <= lp ** 0.25 * 2)

    rows = list(executor.map(one, primes)) if executor else [one(p) for p in primes]
    return TheoremCheck(rows, m, stat.value, constant_budget, deviation_budget)
