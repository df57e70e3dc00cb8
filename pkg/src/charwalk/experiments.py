"""Dispatch an ExperimentConfig to the library and collect an ExperimentReport."""
from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager

from .char_walk import (block_pattern_census, char_walk_distribution, pattern_label,
                        pattern_vector, variance_statistic)
from .errors import InvalidInputError
from .exp_sums import TwistedSumSpec, weil_bound_check
from .finite_field import FpPolynomial, as_modulus
from .prime_walk import psi_N, sign_pattern_counts, sieve_primes
from .report import ExperimentConfig, ExperimentReport, Verdict
from .walk_model import (WalkKind, log_psi_decay_bound, psi_exact, psi_log_deviation,
                         variance_sum_exact, walk_monte_carlo)

# Shipped tolerances; every one can be overridden from the config.
DEFAULTS = {
    "census_tolerance": 0.05,
    "pattern_tolerance": 0.10,
    "gap_tolerance": 0.01,
    "budget": 10.0,
    "mc_sigmas": 4.0,
}


def _get(params, name, cast=int, default=None, required=True):
    value = params.get(name, default)
    if value is None:
        if required:
            raise InvalidInputError(f"missing parameter {name!r}")
        return None
    try:
        return cast(value)
    except (TypeError, ValueError):
        raise InvalidInputError(f"parameter {name!r} has invalid value {value!r}") from None


def parse_poly(value) -> tuple:
    """'1,0,1' or [1, 0, 1] -> (1, 0, 1), lowest degree first."""
    if isinstance(value, str):
        parts = [s for s in value.replace(" ", "").split(",") if s]
    else:
        parts = list(value)
    try:
        coeffs = tuple(int(x) for x in parts)
    except ValueError:
        raise InvalidInputError(f"bad polynomial {value!r}") from None
    if not coeffs:
        raise InvalidInputError("empty polynomial")
    return coeffs


def thread_count(params=None) -> int:
    value = (params or {}).get("threads") or os.environ.get("CHARWALK_THREADS") or 1
    try:
        n = int(value)
    except ValueError:
        raise InvalidInputError(f"bad thread count {value!r}") from None
    if n < 1:
        raise InvalidInputError("thread count must be >= 1")
    return n


@contextmanager
def worker_pool(threads: int):
    if threads <= 1:
        yield None
    else:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            yield ex


def _walk_exact(p, pool):
    kind = WalkKind.parse(_get(p, "kind", str, "rademacher"))
    k, m = _get(p, "k"), _get(p, "m")
    law = psi_exact(kind, k, m)
    rows = [{"a": a, "probability": x, "deviation_from_uniform": x - 1 / m}
            for a, x in enumerate(law.probabilities)]
    tv = 0.5 * sum(abs(x - 1 / m) for x in law.probabilities)
    outputs = {"law": rows, "probabilities": list(law.probabilities),
               "summary": {"total_variation": tv}}
    verdicts = []
    if kind is WalkKind.RADEMACHER and m % 2 == 1 and m >= 3:
        excess = float(max(psi_log_deviation(k, m))) - log_psi_decay_bound(m, k)
        outputs["summary"]["log_decay_margin"] = -excess
        verdicts.append(Verdict("decay-bound", excess <= 0, excess, 0.0,
                                "log|Psi - 1/m| - log bound"))
    return outputs, verdicts


def _walk_mc(p, pool):
    kind = WalkKind.parse(_get(p, "kind", str, "rademacher"))
    N, m = _get(p, "N"), _get(p, "m")
    trials, seed = _get(p, "trials", int, 100000), _get(p, "seed")
    sigmas = _get(p, "mc_sigmas", float, DEFAULTS["mc_sigmas"])
    mc = walk_monte_carlo(kind, N, m, trials, seed, executor=pool)
    exact = variance_sum_exact(kind, N, m)
    diff = abs(mc.estimate - exact)
    limit = sigmas * mc.standard_error + 1e-12
    outputs = {"summary": [{"estimate": mc.estimate, "standard_error": mc.standard_error,
                            "exact": exact, "abs_difference": diff, "trials": trials,
                            "seed": mc.seed}]}
    return outputs, [Verdict("mc-vs-exact", diff <= limit, diff, limit)]


def _poly(p, name="poly"):
    mod = as_modulus(_get(p, "p"))
    return FpPolynomial(mod, parse_poly(_get(p, name, lambda x: x)))


def _char_dist(p, pool):
    F = _poly(p)
    m = _get(p, "m")
    stat = _get(p, "stat", str, "signed")
    budget = _get(p, "budget", float, DEFAULTS["budget"])
    dist = char_walk_distribution(F, m, stat)
    rows = [{"a": a, "count": c, "frequency": c / dist.total,
             "deviation_from_uniform": c / dist.total - 1 / m}
            for a, c in enumerate(dist.counts)]
    V = variance_statistic(dist)
    ratio = V * math.log(F.p) / m ** 2
    outputs = {"distribution": rows,
               "summary": {"variance": V, "variance_ratio": ratio,
                           "max_deviation": dist.max_deviation(), "total": dist.total}}
    return outputs, [Verdict("variance-budget", ratio <= budget, ratio, budget)]


def _block_census(p, pool):
    F = _poly(p)
    L = _get(p, "L")
    tol = _get(p, "tolerance", float, DEFAULTS["census_tolerance"])
    c = block_pattern_census(F, L)
    rows = [{"pattern": pattern_label(pattern_vector(i, L)), "index": i, "count": n,
             "prediction": c.prediction, "relative_deviation": d}
            for i, (n, d) in enumerate(zip(c.counts, c.relative_deviations()))]
    worst = c.max_relative_deviation()
    outputs = {"patterns": rows,
               "summary": {"blocks_total": c.blocks_total, "excluded_blocks": c.excluded_blocks,
                           "prediction": c.prediction, "max_relative_deviation": worst,
                           "in_regime": c.in_regime, "regime_limit": c.regime_limit}}
    return outputs, [Verdict("census-tolerance", worst <= tol, worst, tol)]


def _prime_walk(p, pool):
    N, k, m = _get(p, "N"), _get(p, "k"), _get(p, "m")
    gap_tol = _get(p, "gap_tolerance", float, DEFAULTS["gap_tolerance"])
    pat_tol = _get(p, "pattern_tolerance", float, DEFAULTS["pattern_tolerance"])
    table = sieve_primes(N)
    res = psi_N(N, k, m, table)
    rows = [{"a": a, "count": c, "frequency": f, "model": g, "difference": f - g}
            for a, (c, f, g) in enumerate(zip(res.distribution.counts, res.frequencies,
                                              res.model))]
    outputs = {"distribution": rows,
               "summary": {"included_primes": res.included_prime_count, "pi_N": res.pi_N,
                           "max_discrepancy": res.max_discrepancy,
                           "advisory_k_limit": res.advisory_k_limit,
                           "k_in_range": res.k_in_range}}
    verdicts = [Verdict("psi-gap", res.max_discrepancy <= gap_tol, res.max_discrepancy, gap_tol)]
    if k <= 16:
        counts, total = sign_pattern_counts(N, k, table)
        expected = total / 2 ** k
        outputs["patterns"] = [{"pattern": pattern_label(pattern_vector(i, k)), "count": int(n),
                                "fraction": int(n) / total,
                                "relative_deviation": (int(n) - expected) / expected}
                               for i, n in enumerate(counts)]
        worst = max(abs(r["relative_deviation"]) for r in outputs["patterns"])
        verdicts.append(Verdict("pattern-tolerance", worst <= pat_tol, worst, pat_tol))
    return outputs, verdicts


def _weil_check(p, pool):
    mod = as_modulus(_get(p, "p"))
    P1 = parse_poly(_get(p, "P1", lambda x: x))
    P2 = parse_poly(p["P2"]) if p.get("P2") not in (None, "", []) else ()
    start = _get(p, "start", int, 0)
    length = _get(p, "length", int, None, required=False)
    spec = TwistedSumSpec(FpPolynomial(mod, P1), FpPolynomial(mod, P2), start, length)
    rep = weil_bound_check(spec)
    outputs = {"summary": [{"real": rep.value.real, "imag": rep.value.imag,
                            "modulus": abs(rep.value), "bound": rep.bound,
                            "margin": rep.margin, "complete": rep.complete, "D": spec.D}]}
    return outputs, [Verdict("weil-margin", rep.ok, rep.margin, 0.0)]


def _verify(p, pool):
    from .verify import verify_suite
    level = _get(p, "level", str, "fast")
    rep = verify_suite(level, executor=pool)
    return rep.outputs, rep.verdicts


HANDLERS = {
    "walk-exact": _walk_exact,
    "walk-mc": _walk_mc,
    "char-dist": _char_dist,
    "block-census": _block_census,
    "prime-walk": _prime_walk,
    "weil-check": _weil_check,
    "verify": _verify,
}


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    """Run one command; the report echoes the full config (defaults included)."""
    params = dict(config.parameters)
    t0 = time.perf_counter()
    with worker_pool(thread_count(params)) as pool:
        outputs, verdicts = HANDLERS[config.command](params, pool)
    report = ExperimentReport(config.command, config.to_dict(), outputs, verdicts,
                              time.perf_counter() - t0)
    return report.normalized()
