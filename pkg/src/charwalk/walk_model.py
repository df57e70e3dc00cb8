"""Exact laws of the +-1 and 0/1 random walks on Z/mZ.

Two step laws are supported: ``RADEMACHER`` (steps -1, +1) and ``BERNOULLI01``
(steps 0, 1), each with probability 1/2. ``psi_exact`` gives the k-step law,
``variance_sum_exact`` gives sum_a E[(Phi(N; m, a) - 1/m)^2] for the occupation
frequencies Phi of the first N partial sums. Both are Fourier closed forms and
come with brute-force and dynamic-programming oracles in this module.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InvalidInputError
from .rng import splitmix_words

MAX_ENUMERATION_STEPS = 24
_GEOMETRIC_CUTOFF = 1.0 - 1e-9


class WalkKind(enum.Enum):
    RADEMACHER = "rademacher"
    BERNOULLI01 = "bernoulli01"

    @classmethod
    def parse(cls, value) -> "WalkKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise InvalidInputError(f"unknown walk kind {value!r}") from None

    @property
    def steps(self) -> tuple:
        return (-1, 1) if self is WalkKind.RADEMACHER else (0, 1)


@dataclass(frozen=True)
class WalkLaw:
    kind: WalkKind
    m: int
    k: int
    probabilities: tuple

    def __getitem__(self, a):
        return self.probabilities[a]

    def deviation_from_uniform(self) -> list:
        return [x - 1.0 / self.m for x in self.probabilities]


class RootOfUnityCache:
    """e_m(t) = exp(2 pi i t / m) for t in [0, m)."""

    def __init__(self, m: int):
        if m < 1:
            raise InvalidInputError("m must be positive")
        self.m = m
        t = np.arange(m)
        # exact on the axes so that e.g. e_4(1) is exactly i
        self.values = np.exp(2j * np.pi * t / m)
        quarter = (4 * t) % m == 0
        self.values[quarter] = np.array([1, 1j, -1, -1j])[((4 * t) // m)[quarter] % 4]

    def __getitem__(self, t):
        return self.values[np.asarray(t) % self.m]


def _check_mk(m, k, name="k"):
    if m < 2:
        raise InvalidInputError(f"modulus m={m} must be >= 2")
    if k < 1:
        raise InvalidInputError(f"{name}={k} must be >= 1")


def complex_power(z: complex, n: int) -> complex:
    """z**n by square-and-multiply, magnitudes clamped to 1 when |z| <= 1."""
    clamp = abs(z) <= 1.0
    result = 1 + 0j
    base = z
    while n:
        if n & 1:
            result *= base
            if clamp and abs(result) > 1.0:
                result /= abs(result)
        n >>= 1
        if n:
            base *= base
            if clamp and abs(base) > 1.0:
                base /= abs(base)
    return result


def step_characteristic(kind: WalkKind, m: int) -> np.ndarray:
    """E[e_m(t X)] for t in [0, m): cos(2 pi t/m) or (1 + e_m(t))/2."""
    kind = WalkKind.parse(kind)
    roots = RootOfUnityCache(m).values
    if kind is WalkKind.RADEMACHER:
        return roots.real.copy()
    return (1 + roots) / 2


def psi_exact(kind, k: int, m: int) -> WalkLaw:
    """k-step law Prob(S_k = a mod m) via the finite Fourier inversion."""
    kind = WalkKind.parse(kind)
    _check_mk(m, k)
    roots = RootOfUnityCache(m)
    w = step_characteristic(kind, m)
    powers = np.array([complex_power(complex(x), k) for x in w])
    probs = []
    for a in range(m):
        phase = roots[-a * np.arange(m)]
        probs.append(float(np.real(np.sum(phase * powers))) / m)
    if kind is WalkKind.RADEMACHER and m % 2 == 0:
        probs = [x if (a - k) % 2 == 0 else 0.0 for a, x in enumerate(probs)]
    out = []
    for x in probs:
        if x < 0:
            if x < -1e-12:
                raise ArithmeticError(f"negative probability {x} beyond round-off")
            x = 0.0
        out.append(x)
    return WalkLaw(kind, m, k, tuple(out))


def psi_log_deviation(k: int, m: int) -> np.ndarray:
    """log|Psi_rand(k; m, a) - 1/m| for the +-1 walk, one entry per a.

    Factors out the largest |cos(2 pi t/m)|**k so nothing underflows for large k.
    Entries are -inf where the deviation vanishes exactly.
    """
    _check_mk(m, k)
    t = np.arange(1, m)
    w = np.cos(2 * np.pi * t / m)
    top = np.max(np.abs(w))
    scaled = np.sign(w) ** k * (np.abs(w) / top) ** k
    out = np.empty(m)
    for a in range(m):
        s = float(np.sum(np.cos(2 * np.pi * a * t / m) * scaled)) / m
        out[a] = -math.inf if s == 0 else math.log(abs(s)) + k * math.log(top)
    return out


def psi_decay_bound(m: int, k: int) -> float:
    """((m-1)/m) * (1 - pi^2/(3 m^2))**k, valid for odd m >= 3."""
    if m < 3 or m % 2 == 0:
        raise InvalidInputError(f"decay bound needs odd m >= 3, got {m}")
    if k < 1:
        raise InvalidInputError(f"k={k} must be >= 1")
    return (m - 1) / m * (1 - math.pi ** 2 / (3 * m * m)) ** k


def log_psi_decay_bound(m: int, k: int) -> float:
    psi_decay_bound(m, 1)  # validates m
    return math.log((m - 1) / m) + k * math.log1p(-math.pi ** 2 / (3 * m * m))


def psi_enumerate(kind, k: int, m: int) -> list:
    """Oracle: count all 2**k step sequences by their endpoint mod m."""
    kind = WalkKind.parse(kind)
    _check_mk(m, k)
    if k > MAX_ENUMERATION_STEPS:
        raise InvalidInputError(f"enumeration limited to k <= {MAX_ENUMERATION_STEPS}")
    lo, hi = kind.steps
    idx = np.arange(1 << k, dtype=np.int64)
    ones = np.zeros(idx.shape, dtype=np.int64)
    for j in range(k):
        ones += (idx >> j) & 1
    ends = (ones * hi + (k - ones) * lo) % m
    counts = np.bincount(ends, minlength=m)
    return [int(c) / (1 << k) for c in counts]


def psi_convolve(kind, k: int, m: int) -> list:
    """Oracle: k-fold convolution of the step law on Z/mZ, O(k m)."""
    kind = WalkKind.parse(kind)
    _check_mk(m, k)
    lo, hi = kind.steps
    law = np.zeros(m)
    law[0] = 1.0
    for _ in range(k):
        law = 0.5 * np.roll(law, lo) + 0.5 * np.roll(law, hi)
    return law.tolist()


def _cross_sum(w: complex, N: int) -> complex:
    """sum_{d=1}^{N-1} (N - d) w**d."""
    if N < 2:
        return 0j
    if abs(w) < _GEOMETRIC_CUTOFF:
        wN = complex_power(w, N)
        return w * (N * (1 - w) - (1 - wN)) / (1 - w) ** 2
    d = np.arange(1, N)
    return complex(np.sum((N - d) * np.power(complex(w), d)))


def variance_sum_exact(kind, N: int, m: int) -> float:
    """sum_a E[(Phi(N; m, a) - 1/m)^2] in closed form.

    (m-1)/(m N) + 2/(m N^2) * sum_{t=1}^{m-1} Re sum_{d<N} (N-d) w(t)^d, where
    w(t) is the step characteristic at frequency t.
    """
    kind = WalkKind.parse(kind)
    _check_mk(m, N, "N")
    w = step_characteristic(kind, m)
    cross = math.fsum(_cross_sum(complex(w[t]), N).real for t in range(1, m))
    return (m - 1) / (m * N) + 2.0 * cross / (m * N * N)


def variance_sum_curve(kind, N_max: int, m: int) -> np.ndarray:
    """variance_sum_exact for N = 1..N_max at once via prefix sums over d."""
    kind = WalkKind.parse(kind)
    _check_mk(m, N_max, "N_max")
    w = step_characteristic(kind, m)[1:]
    d = np.arange(1, N_max)
    total_a = np.zeros(N_max)
    total_b = np.zeros(N_max)
    for wt in w:
        pw = np.real(np.power(complex(wt), d))
        total_a[1:] += np.cumsum(pw)
        total_b[1:] += np.cumsum(d * pw)
    N = np.arange(1, N_max + 1, dtype=float)
    # sum_{d<N} (N-d) w^d = N * A(N-1) - B(N-1)
    a_prev = np.concatenate(([0.0], total_a[1:]))
    b_prev = np.concatenate(([0.0], total_b[1:]))
    cross = N * a_prev - b_prev
    return (m - 1) / (m * N) + 2.0 * cross / (m * N * N)


@dataclass(frozen=True)
class EnumerationResult:
    per_residue: tuple
    total: float
    exact_total: Fraction


def walk_enumerate(kind, N: int, m: int) -> EnumerationResult:
    """Oracle: average (Phi(N; m, a) - 1/m)^2 over all 2**N step sequences.

    Accumulates the integers (m c_a - N)^2 exactly and divides once at the end.
    """
    kind = WalkKind.parse(kind)
    _check_mk(m, N, "N")
    if N > MAX_ENUMERATION_STEPS:
        raise InvalidInputError(f"enumeration limited to N <= {MAX_ENUMERATION_STEPS}")
    lo, hi = kind.steps
    sums = [0] * m
    chunk = 1 << min(N, 18)
    for start in range(0, 1 << N, chunk):
        idx = np.arange(start, start + chunk, dtype=np.int64)
        bits = (idx[:, None] >> np.arange(N)) & 1
        pos = np.cumsum(np.where(bits == 1, hi, lo), axis=1) % m
        for a in range(m):
            c = np.count_nonzero(pos == a, axis=1).astype(np.int64)
            sums[a] += int(np.sum((m * c - N) ** 2))
    denom = (1 << N) * m * m * N * N
    per = tuple(Fraction(s, denom) for s in sums)
    exact = sum(per, Fraction(0))
    return EnumerationResult(tuple(float(x) for x in per), float(exact), exact)


@dataclass(frozen=True)
class MonteCarloResult:
    estimate: float
    standard_error: float
    trials: int
    seed: int


def trial_statistics(kind, N: int, m: int, first_trial: int, count: int, seed: int) -> np.ndarray:
    """Per-trial sum_a (Phi - 1/m)^2 for trials first_trial .. first_trial+count-1."""
    lo, hi = kind.steps
    n_words = (N + 63) // 64
    trials = np.arange(first_trial, first_trial + count, dtype=np.uint64)
    words = splitmix_words(seed, trials, n_words)
    bits = ((words[:, :, None] >> np.arange(64, dtype=np.uint64)) & np.uint64(1))
    bits = bits.reshape(count, n_words * 64)[:, :N].astype(np.int64)
    pos = np.cumsum(bits * (hi - lo) + lo, axis=1) % m
    flat = pos + m * np.arange(count, dtype=np.int64)[:, None]
    counts = np.bincount(flat.ravel(), minlength=count * m).reshape(count, m)
    return np.sum((counts / N - 1.0 / m) ** 2, axis=1)


def walk_monte_carlo(kind, N: int, m: int, trials: int, seed: int,
                     batch: int = 1 << 14, executor=None) -> MonteCarloResult:
    """Sample-mean estimate of the variance sum with its standard error.

    Trial i draws its steps from a SplitMix64 stream keyed by (seed, i), so the
    result does not depend on batch size or on the order batches finish.
    """
    kind = WalkKind.parse(kind)
    _check_mk(m, N, "N")
    if trials < 100:
        raise InvalidInputError("trials must be >= 100")
    seed = int(seed) & ((1 << 64) - 1)
    step = max(1, min(batch, (1 << 24) // max(N, 1)))
    starts = list(range(0, trials, step))

    def run(s):
        return trial_statistics(kind, N, m, s, min(step, trials - s), seed)

    parts = list(executor.map(run, starts)) if executor else [run(s) for s in starts]
    values = np.concatenate(parts)
    mean = math.fsum(values) / trials
    var = math.fsum((values - mean) ** 2) / (trials - 1)
    return MonteCarloResult(mean, math.sqrt(var / trials), trials, seed)
