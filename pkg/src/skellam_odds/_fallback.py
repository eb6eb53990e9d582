"""Pure-Python kernels.

Reference implementation of the hot loops. The compiled ``_kernels`` module
mirrors every function here operation for operation, so both backends give
bitwise-identical results for the same inputs and seed.

Random numbers come from SplitMix64 (Steele, Lea & Flood 2014). A path with
index ``i`` under master seed ``s`` uses the stream whose state starts at
``derive_seed(s, i)``; consuming order within a path is: home count, away
count, home jump times, away jump times.
"""

from __future__ import annotations

import math

import numpy as np

MASK64 = 0xFFFFFFFFFFFFFFFF
GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_TWO_M53 = 2.0**-53
# Poisson draws are split into chunks no larger than this so exp(-mu) never underflows
POISSON_CHUNK = 30.0
BESSEL_RTOL = 1e-16


def bessel_i(order: int, x: float) -> float:
    """Modified Bessel function of the first kind by its power series."""
    if order < 0 or not x >= 0.0:
        raise ValueError(f"bessel_i needs order >= 0 and x >= 0, got ({order}, {x})")
    if x == 0.0:
        return 1.0 if order == 0 else 0.0
    half = 0.5 * x
    term = 1.0
    for j in range(1, order + 1):
        term = term * half / j
    quarter = half * half
    total = term
    k = 0
    while True:
        k += 1
        term = term * quarter / (k * (order + k))
        total += term
        if term <= BESSEL_RTOL * total:
            break
    return total


def log_bessel_i(order: int, x: float) -> float:
    """log I_order(x) from the series normalized by its leading term (no underflow)."""
    if x == 0.0:
        return 0.0 if order == 0 else -math.inf
    half = 0.5 * x
    log_lead = 0.0
    if order > 0:
        log_lead = order * math.log(half)
        for j in range(2, order + 1):
            log_lead -= math.log(j)
    quarter = half * half
    term = 1.0
    total = 1.0
    k = 0
    while True:
        k += 1
        term = term * quarter / (k * (order + k))
        total += term
        if term <= BESSEL_RTOL * total:
            break
    return log_lead + math.log(total)


def skellam_pmf_pos(x: int, lambda_a: float, lambda_b: float) -> float:
    """Skellam pmf at ``x`` for strictly positive rates, evaluated in log space."""
    n = -x if x < 0 else x
    log_bess = log_bessel_i(n, 2.0 * (math.sqrt(lambda_a) * math.sqrt(lambda_b)))
    if log_bess == -math.inf:
        return 0.0
    log_scale = -(lambda_a + lambda_b) + 0.5 * x * (math.log(lambda_a) - math.log(lambda_b))
    return math.exp(log_scale + log_bess)


def _mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31)


def derive_seed(master: int, index: int) -> int:
    """Seed of the ``index``-th per-path substream under ``master``."""
    return _mix((master + (index + 1) * GOLDEN) & MASK64)


class SplitMix64:
    """Scalar SplitMix64 stream."""

    __slots__ = ("state",)

    def __init__(self, seed: int) -> None:
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN) & MASK64
        return _mix(self.state)

    def uniform(self) -> float:
        """Uniform on [0, 1)."""
        return (self.next_u64() >> 11) * _TWO_M53

    def uniform_open0(self) -> float:
        """Uniform on (0, 1]."""
        return ((self.next_u64() >> 11) + 1) * _TWO_M53

    def poisson(self, lam: float) -> int:
        if lam <= 0.0:
            return 0
        chunks = max(1, int(math.ceil(lam / POISSON_CHUNK)))
        mu = lam / chunks
        emu = math.exp(-mu)
        total = 0
        for _ in range(chunks):
            u = self.uniform()
            k = 0
            p = emu
            cdf = p
            while u > cdf and p > 0.0:
                k += 1
                p = p * mu / k
                cdf += p
            total += k
        return total


def sample_path(lambda_a: float, lambda_b: float, t0: float, seed: int):
    """Jump times and signs of one score-difference path on (t0, 1]."""
    rng = SplitMix64(seed)
    n_a = rng.poisson(lambda_a)
    n_b = rng.poisson(lambda_b)
    span = 1.0 - t0
    times_a = sorted(t0 + span * rng.uniform_open0() for _ in range(n_a))
    times_b = sorted(t0 + span * rng.uniform_open0() for _ in range(n_b))
    times = np.empty(n_a + n_b, dtype=np.float64)
    signs = np.empty(n_a + n_b, dtype=np.int8)
    i = j = m = 0
    while i < n_a or j < n_b:
        # ties go to the home side first, same as the compiled merge
        if j >= n_b or (i < n_a and times_a[i] <= times_b[j]):
            times[m] = times_a[i]
            signs[m] = 1
            i += 1
        else:
            times[m] = times_b[j]
            signs[m] = -1
            j += 1
        m += 1
    return times, signs


def _mix_vec(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    return z ^ (z >> np.uint64(31))


def _poisson_vec(state: np.ndarray, lam: float) -> np.ndarray:
    """Vectorized SplitMix64 Poisson draws; advances ``state`` in place."""
    n = state.shape[0]
    total = np.zeros(n, dtype=np.int64)
    if lam <= 0.0:
        return total
    chunks = max(1, int(math.ceil(lam / POISSON_CHUNK)))
    mu = lam / chunks
    emu = math.exp(-mu)
    for _ in range(chunks):
        state += np.uint64(GOLDEN)
        u = (_mix_vec(state) >> np.uint64(11)).astype(np.float64) * _TWO_M53
        k = np.zeros(n, dtype=np.int64)
        p = np.full(n, emu)
        cdf = p.copy()
        active = np.flatnonzero(u > cdf)
        kk = 0
        while active.size:
            kk += 1
            p[active] = p[active] * mu / kk
            cdf[active] += p[active]
            k[active] = kk
            active = active[(u[active] > cdf[active]) & (p[active] > 0.0)]
        total += k
    return total


def terminal_diffs(lambda_a: float, lambda_b: float, seed: int, n_paths: int) -> np.ndarray:
    """Home-minus-away goal counts of ``n_paths`` independent paths."""
    idx = np.arange(1, n_paths + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        state = _mix_vec(np.uint64(seed & MASK64) + idx * np.uint64(GOLDEN))
        n_a = _poisson_vec(state, lambda_a)
        n_b = _poisson_vec(state, lambda_b)
    return n_a - n_b
