"""Moment-matching calibration of scoring rates, implied volatility and inflation fits."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .errors import DegenerateInputError, DomainError, InputFormatError, TimelineError
from .odds import GameState, OddsMatrix, adjust_for_state, market_moments, market_score_diff, read_odds_csv
from .skellam import (
    DEFAULT_TAIL_EPS,
    InflationKind,
    InflationModel,
    ScoreDiffDist,
    ScoringRates,
    inflate,
    outcome_probs,
    skellam_dist,
)

__all__ = [
    "CalibrationResult",
    "TimelinePoint",
    "InflationFit",
    "calibrate",
    "calibrate_moments",
    "implied_volatility",
    "fit_inflation",
    "golden_section",
    "calibrate_timeline",
    "read_manifest",
    "MANIFEST_COLUMNS",
]

MANIFEST_COLUMNS = ("t", "score_a", "score_b", "odds_file")


@dataclass(frozen=True)
class CalibrationResult:
    """Fitted rates and the moment residuals they leave."""

    rates: ScoringRates
    residual_mean: float
    residual_var: float
    objective: float
    implied_vol: float


def implied_volatility(rates: ScoringRates) -> float:
    """Standard deviation of the remaining score difference, ``sqrt(lambda_a + lambda_b)``."""
    return math.sqrt(rates.total)


def calibrate_moments(mean: float, var: float, lead: int = 0) -> CalibrationResult:
    """Closest nonnegative rates to the moment targets ``mean`` and ``var``.

    With ``d = lambda_a - lambda_b`` and ``s = lambda_a + lambda_b`` the squared
    residuals are the Euclidean distance from ``(mean - lead, var)`` to
    ``(d, s)``, and nonnegative rates are the cone ``s >= |d|``; the minimizer is
    the projection onto that cone.
    """
    m = mean - lead
    v = var
    if v >= abs(m):
        d, s = m, v
    elif v > -abs(m):
        s = 0.5 * (abs(m) + v)
        d = math.copysign(s, m)
    else:
        d = s = 0.0
    lam_a = max(0.0, 0.5 * (s + d))
    lam_b = max(0.0, 0.5 * (s - d))
    rates = ScoringRates(lam_a, lam_b)
    res_mean = mean - (lead + rates.spread)
    res_var = var - rates.total
    return CalibrationResult(
        rates=rates,
        residual_mean=res_mean,
        residual_var=res_var,
        objective=res_mean * res_mean + res_var * res_var,
        implied_vol=implied_volatility(rates),
    )


def calibrate(dist: ScoreDiffDist, lead: int = 0) -> CalibrationResult:
    """Fit ``(lambda_a, lambda_b)`` to a score-difference distribution given the current lead."""
    mean, var = market_moments(dist)
    return calibrate_moments(mean, var, lead)


def golden_section(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-10) -> float:
    """Minimizer of a unimodal ``f`` on ``[lo, hi]``, to interval width ``tol``."""
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = f(d)
    # the bracket endpoints are candidates too when the minimum sits on a bound
    return min((a, b, 0.5 * (a + b)), key=f)


@dataclass(frozen=True)
class InflationFit:
    model: InflationModel
    sse: float


def fit_inflation(
    market: ScoreDiffDist,
    base_rates: ScoringRates,
    kind: InflationKind | str,
    tail_eps: float = DEFAULT_TAIL_EPS,
) -> InflationFit:
    """Inflation factor minimizing squared error to ``market`` over the market support.

    Searches p in (0, 0.5] for type one and theta in [0, 5] (capped so gamma < 1)
    for type two.

    Raises
    ------
    DegenerateInputError
        If the base model's draw probability is 0 or 1.
    """
    kind = InflationKind(kind)
    base = skellam_dist(base_rates, tail_eps)
    p0 = base.pmf(0)
    if not 0.0 < p0 < 1.0:
        raise DegenerateInputError(f"base draw probability {p0!r} leaves nothing to inflate")
    support = range(market.k_min, market.k_max + 1)
    target = [market.pmf(k) for k in support]

    def sse(factor: float) -> float:
        fitted = inflate(base, InflationModel(kind, factor))
        return math.fsum((fitted.pmf(k) - q) ** 2 for k, q in zip(support, target))

    if kind is InflationKind.NONE:
        return InflationFit(InflationModel.none(), sse(0.0))
    if kind is InflationKind.TYPE_ONE:
        # p = 0 is outside the model; the lower end stands in for "no inflation"
        lo, hi = 1e-12, 0.5
    else:
        lo, hi = 0.0, min(5.0, (1.0 - p0) / p0 * (1.0 - 1e-12))
    best = golden_section(sse, lo, hi, tol=1e-10)
    return InflationFit(InflationModel(kind, best), sse(best))


@dataclass(frozen=True)
class TimelinePoint:
    """Calibration of one in-play snapshot."""

    state: GameState
    result: CalibrationResult
    vig: float | None = None

    @property
    def t(self) -> float:
        return self.state.t

    @property
    def rates_per_remaining(self) -> tuple[float, float] | None:
        """Rates rescaled to a full game, ``lambda / (1 - t)``; undefined at t = 1."""
        if self.state.t >= 1.0:
            return None
        rem = 1.0 - self.state.t
        return self.result.rates.lambda_a / rem, self.result.rates.lambda_b / rem

    def outcome_probs(self) -> tuple[float, float, float]:
        """Final (win, draw, lose) for the home side."""
        return outcome_probs(self.result.rates, self.state.lead)


def _check_order(snapshots: Sequence[tuple[GameState, OddsMatrix | None]]) -> None:
    for idx in range(1, len(snapshots)):
        prev, cur = snapshots[idx - 1][0], snapshots[idx][0]
        if cur.t < prev.t:
            raise TimelineError(f"t={cur.t!r} is earlier than previous t={prev.t!r}", idx)
        if cur.score_a < prev.score_a or cur.score_b < prev.score_b:
            raise TimelineError(
                f"score {cur.score_a}-{cur.score_b} decreases from {prev.score_a}-{prev.score_b}", idx
            )


def calibrate_timeline(snapshots: Iterable[tuple[GameState, OddsMatrix | None]]) -> list[TimelinePoint]:
    """Calibrate each in-play snapshot on its remaining sub-game.

    Odds are re-keyed by the current score so the sub-game is fitted with lead 0.
    At ``t = 1`` nothing remains and the rates are (0, 0); odds may be ``None``.

    Raises
    ------
    TimelineError
        Snapshots out of time order or with a decreasing score.
    """
    snapshots = list(snapshots)
    _check_order(snapshots)
    points = []
    for idx, (state, matrix) in enumerate(snapshots):
        if state.t >= 1.0:
            zero = ScoringRates(0.0, 0.0)
            points.append(TimelinePoint(state, CalibrationResult(zero, 0.0, 0.0, 0.0, 0.0)))
            continue
        if matrix is None:
            raise TimelineError("odds are required before the final whistle", idx)
        try:
            market = market_score_diff(adjust_for_state(matrix, state))
        except DegenerateInputError as exc:
            raise DegenerateInputError(f"snapshot {idx}: {exc}") from None
        points.append(TimelinePoint(state, calibrate(market.dist, 0), market.vig))
    return points


def read_manifest(path: str | Path) -> list[tuple[GameState, OddsMatrix | None]]:
    """Load a ``t,score_a,score_b,odds_file`` manifest; odds paths resolve against its folder.

    ``odds_file`` may be blank only on a ``t = 1`` row.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputFormatError(f"cannot read manifest: {exc.strerror}", path) from None
    rows = [(n, ln) for n, ln in enumerate(text.splitlines(), start=1) if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows:
        raise InputFormatError("empty manifest", path)
    parsed = list(csv.reader([ln for _, ln in rows]))
    header = [h.strip() for h in parsed[0]]
    if sorted(header) != sorted(MANIFEST_COLUMNS):
        raise InputFormatError(f"header must be {','.join(MANIFEST_COLUMNS)}, got {','.join(header)}", path, rows[0][0])
    col = {name: header.index(name) for name in MANIFEST_COLUMNS}
    snapshots = []
    prev: GameState | None = None
    for (line, _), row in zip(rows[1:], parsed[1:]):
        if len(row) != len(header):
            raise InputFormatError(f"expected {len(header)} fields, got {len(row)}", path, line)
        try:
            state = GameState(float(row[col["t"]]), int(row[col["score_a"]]), int(row[col["score_b"]]))
        except (ValueError, DomainError) as exc:
            raise InputFormatError(str(exc), path, line) from None
        if prev is not None and (state.t < prev.t or state.score_a < prev.score_a or state.score_b < prev.score_b):
            raise InputFormatError("snapshot out of order (t and scores must not decrease)", path, line)
        prev = state
        name = row[col["odds_file"]].strip()
        if not name:
            if state.t < 1.0:
                raise InputFormatError("odds_file is required before t = 1", path, line)
            snapshots.append((state, None))
            continue
        snapshots.append((state, read_odds_csv(path.parent / name)))
    return snapshots
