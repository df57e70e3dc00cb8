"""Mixed character sums S_I(P1, P2) = sum_{n in I} chi_p(P1(n)) e_p(P2(n)).

Sums are evaluated directly. Complete sums are compared against D sqrt(p)
and incomplete ones against 2 D sqrt(p) log p, with D = deg P1 + deg P2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, ResourceLimitError
from .finite_field import (FpPolynomial, as_modulus, is_squarefree, poly_eval_batch,
                           quadratic_character_table)

MAX_DIRECT_PRIME = 10 ** 7
PHASE_TABLE_LIMIT = 1 << 22


@dataclass(frozen=True)
class TwistedSumSpec:
    P1: FpPolynomial
    P2: FpPolynomial
    start: int = 0
    length: int | None = None

    def __post_init__(self):
        p = self.P1.p
        if self.P2.p != p:
            raise InvalidInputError("P1 and P2 must share the modulus")
        if self.P1.degree < 1 or not is_squarefree(self.P1):
            raise InvalidInputError("P1 must be square-free of degree >= 1")
        length = p if self.length is None else int(self.length)
        object.__setattr__(self, "length", length)
        if not 1 <= length <= p:
            raise InvalidInputError(f"interval length {length} outside [1, {p}]")
        if not 0 <= self.start < p:
            raise InvalidInputError(f"interval start {self.start} outside [0, {p})")

    @classmethod
    def build(cls, p, P1, P2=(), start=0, length=None) -> "TwistedSumSpec":
        mod = as_modulus(p)
        return cls(FpPolynomial(mod, tuple(P1)), FpPolynomial(mod, tuple(P2)), start, length)

    @property
    def p(self) -> int:
        return self.P1.p

    @property
    def D(self) -> int:
        return self.P1.degree + max(self.P2.degree, 0)

    @property
    def complete(self) -> bool:
        return self.length == self.p


def phase_table(p: int) -> np.ndarray:
    """e_p(x) for x in [0, p)."""
    if p > PHASE_TABLE_LIMIT:
        raise ResourceLimitError(f"phase table for p={p} exceeds {PHASE_TABLE_LIMIT} entries")
    return np.exp(2j * np.pi * np.arange(p) / p)


def _phases(values: np.ndarray, p: int) -> np.ndarray:
    if p <= PHASE_TABLE_LIMIT:
        return phase_table(p)[values]
    return np.exp(2j * np.pi * (values / p))


def twisted_char_sum(spec: TwistedSumSpec) -> complex:
    p = spec.p
    if p > MAX_DIRECT_PRIME:
        raise ResourceLimitError(f"direct evaluation is capped at p <= {MAX_DIRECT_PRIME}")
    # the interval may wrap past p - 1; the sum only depends on n mod p
    n = (spec.start + np.arange(spec.length, dtype=np.int64)) % p
    chi = quadratic_character_table(p)[poly_eval_batch(spec.P1, n)]
    terms = chi * _phases(poly_eval_batch(spec.P2, n), p)
    return complex(math.fsum(terms.real), math.fsum(terms.imag))


@dataclass(frozen=True)
class WeilReport:
    value: complex
    bound: float
    complete: bool

    @property
    def margin(self) -> float:
        return self.bound - abs(self.value)

    @property
    def ok(self) -> bool:
        return self.margin >= 0


def weil_bound(p: int, D: int, complete: bool) -> float:
    return D * math.sqrt(p) if complete else 2 * D * math.sqrt(p) * math.log(p)


def weil_bound_check(spec: TwistedSumSpec) -> WeilReport:
    return WeilReport(twisted_char_sum(spec), weil_bound(spec.p, spec.D, spec.complete),
                      spec.complete)


@dataclass
class SweepResult:
    p: int
    cases: int
    min_margin_complete: float
    min_margin_incomplete: float
    worst: tuple


def weil_sweep_prime(p: int, max_degree: int = 2, p2_choices=((), (0, 1), (0, 0, 1))) -> SweepResult:
    """All monic square-free P1 with 1 <= deg <= max_degree, each P2, full and first-half I.

    Vectorized over P1: builds the matrix chi_p(P1(n)) for all P1 at once.
    Square-freeness is decided with the derivative-gcd test for every P1.
    """
    mod = as_modulus(p)
    if max_degree > 2:
        raise InvalidInputError("sweep enumerates degrees 1 and 2 only")
    chi_table = quadratic_character_table(p)
    n = np.arange(p, dtype=np.int64)
    polys = []
    for c in range(p):
        polys.append((c, 1))
    if max_degree == 2:
        for b in range(p):
            for c in range(p):
                polys.append((c, b, 1))
    polys = [P for P in polys if is_squarefree(FpPolynomial(mod, P))]
    coeffs = np.zeros((len(polys), 3), dtype=np.int64)
    degrees = np.array([len(P) - 1 for P in polys])
    for i, P in enumerate(polys):
        coeffs[i, :len(P)] = P
    vals = (coeffs[:, 0:1] + coeffs[:, 1:2] * n + coeffs[:, 2:3] * (n * n % p)) % p
    chi = chi_table[vals].astype(float)
    half = (p + 1) // 2
    worst = (math.inf, None)
    margins = {True: math.inf, False: math.inf}
    cases = 0
    phases = phase_table(p)
    for P2 in p2_choices:
        g = FpPolynomial(mod, P2)
        e = phases[poly_eval_batch(g, n)]
        d2 = max(g.degree, 0)
        for complete, length in ((True, p), (False, half)):
            S = np.abs(chi[:, :length] @ e[:length])
            bound = np.array([weil_bound(p, d + d2, complete) for d in degrees])
            margin = bound - S
            cases += len(polys)
            i = int(np.argmin(margin))
            margins[complete] = min(margins[complete], float(margin[i]))
            if margin[i] < worst[0]:
                worst = (float(margin[i]), (polys[i], P2, complete))
    return SweepResult(p, cases, margins[True], margins[False], worst[1])
