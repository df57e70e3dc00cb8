"""Counter-based SplitMix64 streams.

Trial i of a run with seed s reads the SplitMix64 sequence whose initial state
is ``mix64(s ^ (i * GAMMA))``: word w of that trial is
``mix64(state + (w + 1) * GAMMA)``. Every word is a pure function of
(seed, trial, w), which is what makes Monte Carlo runs order-independent.
"""
import numpy as np

GAMMA = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
MASK64 = (1 << 64) - 1


def mix64(z: int) -> int:
    """SplitMix64 output finalizer on a Python int."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def _mix64_array(z: np.ndarray) -> np.ndarray:
    z = z ^ (z >> np.uint64(30))
    z = z * np.uint64(_M1)
    z = z ^ (z >> np.uint64(27))
    z = z * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


def trial_state(seed: int, trials) -> np.ndarray:
    trials = np.asarray(trials, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return _mix64_array(np.uint64(seed & MASK64) ^ (trials * np.uint64(GAMMA)))


def splitmix_words(seed: int, trials, n_words: int) -> np.ndarray:
    """uint64 array of shape (len(trials), n_words)."""
    state = trial_state(seed, trials)
    offsets = np.arange(1, n_words + 1, dtype=np.uint64) * np.uint64(GAMMA)
    with np.errstate(over="ignore"):
        return _mix64_array(state[:, None] + offsets[None, :])


class SplitMix64:
    """Scalar reference generator, used to check the vectorized streams."""

    def __init__(self, state: int):
        self.state = state & MASK64

    def next(self) -> int:
        self.state = (self.state + GAMMA) & MASK64
        return mix64(self.state)

    @classmethod
    def for_trial(cls, seed: int, trial: int) -> "SplitMix64":
        return cls(mix64((seed & MASK64) ^ ((trial * GAMMA) & MASK64)))
