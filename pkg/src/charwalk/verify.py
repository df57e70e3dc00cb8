"""Bundled verification suite: one function per acceptance criterion.

Each criterion returns a Verdict carrying the measured value and the threshold
it was held to. ``fast`` runs the exact identities and oracle comparisons;
``full`` adds the desk-scale checks at p ~ 10^7 and N = 10^6.
"""
from __future__ import annotations

import math
import time

import numpy as np

from .char_walk import block_pattern_census, char_walk_distribution, theorem1_check
from .errors import InvalidInputError
from .exp_sums import TwistedSumSpec, twisted_char_sum, weil_sweep_prime
from .finite_field import FpPolynomial
from .prime_walk import psi_N, sieve_primes, sign_pattern_counts
from .report import ExperimentConfig, ExperimentReport, Verdict
from .walk_model import (WalkKind, log_psi_decay_bound, psi_decay_bound, psi_enumerate,
                         psi_exact, psi_log_deviation, variance_sum_exact, walk_enumerate)

R, B = WalkKind.RADEMACHER, WalkKind.BERNOULLI01
THEOREM_PRIMES = (10007, 100003, 1000003, 9999991)


def c1_psi_vs_enumeration() -> Verdict:
    worst = 0.0
    for k in range(1, 17):
        for m in range(2, 10):
            exact = psi_exact(R, k, m).probabilities
            brute = psi_enumerate(R, k, m)
            worst = max(worst, max(abs(x - y) for x, y in zip(exact, brute)))
    return Verdict("C1", worst <= 1e-12, worst, 1e-12, "max |psi_exact - enumeration|")


HAND_VARIANCE = {(R, 1, 2): 0.5, (R, 2, 2): 0.0, (R, 2, 3): 1 / 6, (B, 2, 2): 0.25}


def c2_variance_vs_enumeration() -> Verdict:
    worst = 0.0
    for kind in (R, B):
        for N in range(1, 17):
            for m in range(2, 9):
                worst = max(worst, abs(variance_sum_exact(kind, N, m)
                                       - walk_enumerate(kind, N, m).total))
    for (kind, N, m), want in HAND_VARIANCE.items():
        worst = max(worst, abs(variance_sum_exact(kind, N, m) - want),
                    abs(walk_enumerate(kind, N, m).total - want))
    return Verdict("C2", worst <= 1e-12, worst, 1e-12,
                   "max |closed form - enumeration| incl. hand cases")


def c3_decay_bound() -> Verdict:
    """Checks the inequality in log space; also directly wherever the bound exceeds 1e-10."""
    worst = -math.inf
    direct_ok = True
    for m in range(3, 16, 2):
        for k in range(1, 2001):
            excess = float(np.max(psi_log_deviation(k, m))) - log_psi_decay_bound(m, k)
            worst = max(worst, excess)
            bound = psi_decay_bound(m, k)
            if bound > 1e-10:
                law = psi_exact(R, k, m).probabilities
                direct_ok &= all(abs(x - 1 / m) <= bound for x in law)
    return Verdict("C3", worst <= 0 and direct_ok, worst, 0.0,
                   "max over m,k,a of log|Psi-1/m| - log bound")


def c4_variance_scaling() -> Verdict:
    worst = 0.0
    for kind in (R, B):
        for m in range(2, 13):
            for N in range(m * m, 5001):
                worst = max(worst, variance_sum_exact(kind, N, m) * N / (m * m))
    return Verdict("C4", worst <= 2, worst, 2.0, "max N/m^2 * variance sum")


def c5_hand_tables() -> Verdict:
    F = FpPolynomial.from_coefficients([0, 1], 7)
    signed = char_walk_distribution(F, 2, "signed").counts
    residue = char_walk_distribution(F, 2, "residue").counts
    census = block_pattern_census(F, 2).as_dict()
    want = {(1, 1): 1, (-1, 1): 1, (-1, -1): 1, (1, -1): 0}
    ok = signed == (4, 3) and residue == (2, 5) and census == want
    return Verdict("C5", ok, float(ok), 1.0,
                   f"signed={list(signed)} residue={list(residue)}")


def c6_theorem1(executor=None) -> Verdict:
    worst_v = worst_d = 0.0
    ok = True
    for template in ((0, 1), (1, 0, 1)):
        chk = theorem1_check(THEOREM_PRIMES, template, 3, 10.0, 2.0, "signed", executor)
        ok &= chk.passed and not any(r.skipped for r in chk.rows)
        worst_v = max(worst_v, chk.max_variance_ratio)
        worst_d = max(worst_d, chk.max_deviation_ratio)
    return Verdict("C6", ok, worst_v, 10.0,
                   f"max variance ratio (<= 10); max deviation ratio {worst_d:.6g} (<= 2)")


def c7_theorem2(executor=None) -> Verdict:
    worst = 0.0
    ok = True
    for stat in ("residue", "nonresidue"):
        chk = theorem1_check(THEOREM_PRIMES, (0, 1), 3, 10.0, math.inf, stat, executor)
        ok &= chk.passed
        worst = max(worst, chk.max_variance_ratio)
    return Verdict("C7", ok, worst, 10.0, "max variance ratio over R_p and N_p walks")


def c8_census() -> Verdict:
    c = block_pattern_census(FpPolynomial.from_coefficients([0, 1], 9999991), 4)
    worst = c.max_relative_deviation()
    ok = worst <= 0.05 and c.excluded_blocks <= 1 and len(c.counts) == 16
    return Verdict("C8", ok, worst, 0.05,
                   f"max relative deviation; excluded_blocks={c.excluded_blocks} (<= 1)")


def c9_prime_walk() -> Verdict:
    table = sieve_primes(10 ** 6)
    counts, total = sign_pattern_counts(10 ** 6, 6, table)
    worst_pattern = float(np.max(np.abs(counts / total * 64 - 1)))
    gap = psi_N(10 ** 6, 6, 3, table).max_discrepancy
    hand = psi_N(13, 2, 3).frequencies == [0.75, 0.25, 0.0]
    ok = worst_pattern <= 0.10 and gap <= 0.01 and hand
    return Verdict("C9", ok, worst_pattern, 0.10,
                   f"max pattern deviation; psi gap {gap:.6g} (<= 0.01); hand case {hand}")


def c10_weil() -> Verdict:
    worst = math.inf
    for p in sieve_primes(97).primes[1:]:
        res = weil_sweep_prime(int(p))
        worst = min(worst, res.min_margin_complete, res.min_margin_incomplete)
    gauss = abs(twisted_char_sum(TwistedSumSpec.build(5, [0, 1], [0, 1])))
    gauss_err = abs(gauss - math.sqrt(5))
    ok = worst >= 0 and gauss_err <= 1e-9
    return Verdict("C10", ok, worst, 0.0,
                   f"min Weil margin; |Gauss sum p=5| - sqrt 5 = {gauss_err:.3g}")


DETERMINISM_CONFIGS = (
    ExperimentConfig("walk-mc", {"kind": "bernoulli01", "N": 50, "m": 4, "trials": 20000,
                                 "seed": 12345}),
    ExperimentConfig("walk-mc", {"kind": "rademacher", "N": 30, "m": 5, "trials": 5000}),
    ExperimentConfig("char-dist", {"p": 10007, "poly": "1,0,1", "m": 3, "stat": "signed"}),
    ExperimentConfig("walk-exact", {"kind": "rademacher", "k": 7, "m": 5}),
)


def c11_determinism() -> Verdict:
    from .experiments import run_experiment

    same = 0
    for cfg in DETERMINISM_CONFIGS:
        a, b = run_experiment(cfg), run_experiment(ExperimentConfig.from_dict(cfg.to_dict()))
        same += (a.to_json(wall_time=False) == b.to_json(wall_time=False)
                 and a.to_csv() == b.to_csv())
    n = len(DETERMINISM_CONFIGS)
    return Verdict("C11", same == n, float(same), float(n), "configs with identical payloads")


FAST = (c1_psi_vs_enumeration, c2_variance_vs_enumeration, c3_decay_bound,
        c4_variance_scaling, c5_hand_tables, c10_weil, c11_determinism)
FULL = FAST + (c6_theorem1, c7_theorem2, c8_census, c9_prime_walk)
LEVELS = {"fast": FAST, "full": FULL}


def verify_suite(level: str = "fast", executor=None) -> ExperimentReport:
    if level not in LEVELS:
        raise InvalidInputError(f"unknown verify level {level!r}; use fast or full")
    t0 = time.perf_counter()
    verdicts, timings = [], {}
    for fn in LEVELS[level]:
        t = time.perf_counter()
        v = fn(executor) if fn in (c6_theorem1, c7_theorem2) else fn()
        timings[v.criterion] = time.perf_counter() - t
        verdicts.append(v)
    verdicts.sort(key=lambda v: int(v.criterion[1:]))
    rows = [{"criterion": v.criterion, "passed": v.passed, "measured": v.measured,
             "threshold": v.threshold, "note": v.note} for v in verdicts]
    return ExperimentReport("verify", {"command": "verify", "parameters": {"level": level}},
                            {"criteria": rows}, verdicts, time.perf_counter() - t0,
                            timings=timings)
