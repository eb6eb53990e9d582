"""Skellam distribution of the final score difference.

The score difference of the remaining game is the difference of two
independent Poisson counts with means ``lambda_a`` and ``lambda_b``. Its pmf is

.. math::
    P(N = x) = e^{-(\\lambda_a + \\lambda_b)} (\\lambda_a / \\lambda_b)^{x/2}
        I_{|x|}(2 \\sqrt{\\lambda_a \\lambda_b})

with :math:`I_r` the modified Bessel function of the first kind.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from ._backend import kernels
from .errors import DegenerateInputError, DomainError

__all__ = [
    "ScoringRates",
    "ScoreDiffDist",
    "InflationKind",
    "InflationModel",
    "bessel_i",
    "skellam_pmf",
    "skellam_dist",
    "prob_win",
    "prob_draw",
    "prob_lose",
    "outcome_probs",
    "draw_prob_even",
    "skellam_moments",
    "inflate",
    "DEFAULT_TAIL_EPS",
]

DEFAULT_TAIL_EPS = 1e-9
# truncation used for win/lose tail sums
_OUTCOME_TAIL_EPS = 1e-13


@dataclass(frozen=True)
class ScoringRates:
    """Expected goals of each side over the rest of the game."""

    lambda_a: float
    lambda_b: float

    def __post_init__(self):
        for name in ("lambda_a", "lambda_b"):
            value = float(getattr(self, name))
            if not math.isfinite(value) or value < 0.0:
                raise DomainError(f"{name} must be finite and >= 0, got {value!r}")
            object.__setattr__(self, name, value)

    @property
    def total(self) -> float:
        return self.lambda_a + self.lambda_b

    @property
    def spread(self) -> float:
        return self.lambda_a - self.lambda_b

    def scaled(self, factor: float) -> "ScoringRates":
        return ScoringRates(self.lambda_a * factor, self.lambda_b * factor)


@dataclass(frozen=True, eq=False)
class ScoreDiffDist:
    """Probabilities over the contiguous integer range ``[k_min, k_max]``.

    Instances are normalized on construction check (|sum - 1| <= 1e-9); use
    :meth:`from_weights` to build one from unnormalized mass.
    """

    k_min: int
    probs: np.ndarray

    def __post_init__(self):
        probs = np.array(self.probs, dtype=np.float64)
        if probs.ndim != 1 or probs.size == 0:
            raise DomainError("distribution support must be a nonempty 1-d range")
        if not np.all(np.isfinite(probs)) or np.any(probs < 0.0):
            raise DomainError("probabilities must be finite and nonnegative")
        total = math.fsum(probs)
        if abs(total - 1.0) > 1e-9:
            raise DomainError(f"probabilities sum to {total!r}, expected 1")
        probs.setflags(write=False)
        object.__setattr__(self, "k_min", int(self.k_min))
        object.__setattr__(self, "probs", probs)

    @classmethod
    def from_weights(cls, k_min: int, weights) -> "ScoreDiffDist":
        """Normalize nonnegative ``weights`` starting at ``k_min``."""
        w = np.asarray(weights, dtype=np.float64)
        total = math.fsum(w)
        if not total > 0.0:
            raise DegenerateInputError("distribution has no mass")
        return cls(k_min, w / total)

    @classmethod
    def from_mapping(cls, mapping: Mapping[int, float], normalize: bool = False) -> "ScoreDiffDist":
        """Build from ``{diff: prob}``; gaps inside the range get probability 0."""
        if not mapping:
            raise DomainError("empty mapping")
        lo, hi = min(mapping), max(mapping)
        w = np.zeros(hi - lo + 1)
        for k, p in mapping.items():
            w[k - lo] = p
        if normalize:
            return cls.from_weights(lo, w)
        return cls(lo, w)

    @classmethod
    def point_mass(cls, k: int) -> "ScoreDiffDist":
        return cls(k, np.ones(1))

    @property
    def k_max(self) -> int:
        return self.k_min + self.probs.size - 1

    @property
    def support(self) -> np.ndarray:
        return np.arange(self.k_min, self.k_max + 1)

    def __len__(self) -> int:
        return self.probs.size

    def pmf(self, k: int) -> float:
        if self.k_min <= k <= self.k_max:
            return float(self.probs[k - self.k_min])
        return 0.0

    def as_dict(self) -> dict[int, float]:
        return {int(k): float(p) for k, p in zip(self.support, self.probs)}

    def moments(self) -> tuple[float, float]:
        """Mean and variance."""
        k = self.support.astype(np.float64)
        mean = math.fsum(k * self.probs)
        var = math.fsum((k - mean) ** 2 * self.probs)
        return mean, var

    def shifted(self, by: int) -> "ScoreDiffDist":
        return ScoreDiffDist(self.k_min + by, self.probs)

    def restricted(self, k_min: int, k_max: int) -> "ScoreDiffDist":
        """Renormalized restriction to ``[k_min, k_max]``."""
        w = [self.pmf(k) for k in range(k_min, k_max + 1)]
        return ScoreDiffDist.from_weights(k_min, w)

    def total_variation(self, other: "ScoreDiffDist") -> float:
        lo = min(self.k_min, other.k_min)
        hi = max(self.k_max, other.k_max)
        return 0.5 * math.fsum(abs(self.pmf(k) - other.pmf(k)) for k in range(lo, hi + 1))


def bessel_i(order: int, x: float) -> float:
    """Modified Bessel function of the first kind, integer order.

    Summed from the power series until a term drops below 1e-16 of the
    running total. Accurate to about 1e-15 relative for ``x`` up to ~40.

    Raises
    ------
    DomainError
        If ``order < 0`` or ``x`` is negative or not finite.
    """
    if order < 0 or not (math.isfinite(x) and x >= 0.0):
        raise DomainError(f"bessel_i needs order >= 0 and finite x >= 0, got ({order}, {x})")
    return kernels.bessel_i(int(order), float(x))


def _poisson_pmf(k: int, lam: float) -> float:
    if k < 0:
        return 0.0
    return math.exp(k * math.log(lam) - lam - math.lgamma(k + 1))


def skellam_pmf(x: int, rates: ScoringRates) -> float:
    """P(score difference of the remaining game equals ``x``)."""
    a, b = rates.lambda_a, rates.lambda_b
    if a > 0.0 and b > 0.0:
        return kernels.skellam_pmf_pos(int(x), a, b)
    # a zero rate makes the ratio term 0/0; the distribution is a (negated) Poisson
    if a > 0.0:
        return _poisson_pmf(x, a)
    if b > 0.0:
        return _poisson_pmf(-x, b)
    return 1.0 if x == 0 else 0.0


def _mode(rates: ScoringRates) -> int:
    centre = rates.spread
    lo, hi = math.floor(centre) - 1, math.ceil(centre) + 1
    return max(range(lo, hi + 1), key=lambda k: skellam_pmf(k, rates))


def skellam_dist(rates: ScoringRates, tail_eps: float = DEFAULT_TAIL_EPS) -> ScoreDiffDist:
    """Materialize the pmf on the smallest window around the mode holding 1 - tail_eps.

    The window is symmetric about the mode and the result is renormalized.
    """
    if not 0.0 < tail_eps < 1.0:
        raise DomainError(f"tail_eps must lie in (0, 1), got {tail_eps!r}")
    if rates.total == 0.0:
        return ScoreDiffDist.point_mass(0)
    mode = _mode(rates)
    weights = [skellam_pmf(mode, rates)]
    left: list[float] = []
    mass = weights[0]
    radius = 0
    while 1.0 - mass >= tail_eps:
        radius += 1
        lo = skellam_pmf(mode - radius, rates)
        hi = skellam_pmf(mode + radius, rates)
        left.append(lo)
        weights.append(hi)
        mass += lo + hi
        if lo == 0.0 and hi == 0.0 and radius > rates.total + 50:
            break
    probs = left[::-1] + weights
    return ScoreDiffDist.from_weights(mode - radius, probs)


def prob_win(rates: ScoringRates, lead: int = 0) -> float:
    """P(home side ends ahead) given the current ``lead`` and remaining-game rates."""
    dist = skellam_dist(rates, _OUTCOME_TAIL_EPS)
    k = dist.support
    return min(1.0, math.fsum(dist.probs[k > -lead]))


def prob_draw(rates: ScoringRates, lead: int = 0) -> float:
    """P(the game ends level) given the current ``lead``."""
    return skellam_pmf(-lead, rates)


def prob_lose(rates: ScoringRates, lead: int = 0) -> float:
    return max(0.0, 1.0 - prob_win(rates, lead) - prob_draw(rates, lead))


def outcome_probs(rates: ScoringRates, lead: int = 0) -> tuple[float, float, float]:
    """(win, draw, lose) for the home side."""
    win = prob_win(rates, lead)
    draw = prob_draw(rates, lead)
    return win, draw, max(0.0, 1.0 - win - draw)


def draw_prob_even(lam: float) -> float:
    """Draw probability when both sides score at rate ``lam``: exp(-2 lam) I0(2 lam)."""
    if not (math.isfinite(lam) and lam >= 0.0):
        raise DomainError(f"lambda must be finite and >= 0, got {lam!r}")
    if lam == 0.0:
        return 1.0
    return math.exp(-2.0 * lam) * kernels.bessel_i(0, 2.0 * lam)


def skellam_moments(rates: ScoringRates, lead: int = 0) -> tuple[float, float]:
    """Mean and variance of the final difference: (lead + a - b, a + b)."""
    return lead + rates.spread, rates.total


class InflationKind(str, enum.Enum):
    NONE = "none"
    TYPE_ONE = "type1"
    TYPE_TWO = "type2"


@dataclass(frozen=True)
class InflationModel:
    """Extra draw mass on top of a base score-difference distribution.

    ``TYPE_ONE`` mixes a point mass at zero with weight ``factor`` (0 < p < 1).
    ``TYPE_TWO`` scales the draw by ``1 + factor`` (theta >= 0) and shrinks every
    other outcome by ``1 - gamma`` where ``gamma = theta * P0 / (1 - P0)``.
    """

    kind: InflationKind = InflationKind.NONE
    factor: float = 0.0

    def __post_init__(self):
        kind = InflationKind(self.kind)
        factor = float(self.factor)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "factor", factor)
        if not math.isfinite(factor):
            raise DomainError("inflation factor must be finite")
        if kind is InflationKind.TYPE_ONE and not 0.0 < factor < 1.0:
            raise DomainError(f"type-one inflation needs 0 < p < 1, got {factor!r}")
        if kind is InflationKind.TYPE_TWO and factor < 0.0:
            raise DomainError(f"type-two inflation needs theta >= 0, got {factor!r}")

    @classmethod
    def none(cls) -> "InflationModel":
        return cls(InflationKind.NONE, 0.0)

    @classmethod
    def parse(cls, text: str) -> "InflationModel":
        """Parse ``none``, ``type1:p`` or ``type2:theta``."""
        text = text.strip().lower()
        if text == "none":
            return cls.none()
        kind, sep, value = text.partition(":")
        if not sep:
            raise DomainError(f"expected none|type1:p|type2:theta, got {text!r}")
        try:
            return cls(InflationKind(kind), float(value))
        except ValueError as exc:
            raise DomainError(f"bad inflation setting {text!r}: {exc}") from None

    def gamma(self, p0: float) -> float:
        """Deflation of non-draw outcomes for a base draw probability ``p0``."""
        if self.kind is not InflationKind.TYPE_TWO:
            return 0.0
        if p0 >= 1.0:
            raise DegenerateInputError("type-two inflation is undefined when the draw is certain")
        return self.factor * p0 / (1.0 - p0)

    def __str__(self) -> str:
        if self.kind is InflationKind.NONE:
            return "none"
        return f"{self.kind.value}:{self.factor!r}"


def inflate(dist: ScoreDiffDist, model: InflationModel) -> ScoreDiffDist:
    """Apply zero inflation to ``dist``.

    Raises
    ------
    DegenerateInputError
        Type two with a certain draw (P0 = 1).
    DomainError
        Type two with ``gamma >= 1``: theta too large for this base draw mass.
    """
    if model.kind is InflationKind.NONE:
        return dist
    if dist.k_min > 0 or dist.k_max < 0:
        # put 0 inside the support so the draw can receive mass
        lo, hi = min(dist.k_min, 0), max(dist.k_max, 0)
        dist = ScoreDiffDist(lo, [dist.pmf(k) for k in range(lo, hi + 1)])
    probs = dist.probs.copy()
    zero = -dist.k_min
    p0 = probs[zero]
    if model.kind is InflationKind.TYPE_ONE:
        p = model.factor
        probs *= 1.0 - p
        probs[zero] = p + (1.0 - p) * p0
    else:
        gamma = model.gamma(p0)
        if gamma >= 1.0:
            raise DomainError(f"theta={model.factor!r} gives gamma={gamma!r} >= 1 for P0={p0!r}")
        probs *= 1.0 - gamma
        probs[zero] = (1.0 + model.factor) * p0
    return ScoreDiffDist.from_weights(dist.k_min, probs)
