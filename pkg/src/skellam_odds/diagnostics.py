"""Model-versus-market adequacy reports.

Every report is a list of plain rows plus a CSV writer with a fixed header,
so plotting happens elsewhere.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, InputFormatError
from .skellam import (
    DEFAULT_TAIL_EPS,
    InflationModel,
    ScoreDiffDist,
    ScoringRates,
    inflate,
    skellam_dist,
)

__all__ = [
    "ComparisonRow",
    "QQResult",
    "BucketReport",
    "compare",
    "qq_log_odds",
    "win_draw_curve",
    "win_draw_point",
    "bucket_calibration",
    "BUCKET_EDGES",
    "write_compare_csv",
    "write_qq_csv",
    "write_curve_csv",
    "write_buckets_csv",
    "read_pairs_csv",
    "read_compare_rows",
    "read_games_csv",
]

BUCKET_EDGES = tuple(round(0.05 * k, 2) for k in range(1, 18))
_MAX_LOG_RATIO = 16.0


class ComparisonRow(NamedTuple):
    score_diff: int
    market_prob: float
    model_prob: float


def compare(market: ScoreDiffDist, rates: ScoringRates, tail_eps: float = DEFAULT_TAIL_EPS) -> list[ComparisonRow]:
    """Market against model probability for each quoted score difference.

    The model pmf is restricted to the market's support and renormalized there,
    so both columns are distributions over the same outcomes.
    """
    model = skellam_dist(rates, tail_eps).restricted(market.k_min, market.k_max)
    return [ComparisonRow(int(k), market.pmf(int(k)), model.pmf(int(k))) for k in market.support]


def _log_odds(p: float) -> float:
    return math.log((1.0 - p) / p)


@dataclass(frozen=True)
class QQResult:
    points: list[tuple[float, float]]
    excluded: int


def qq_log_odds(pairs: Iterable[tuple[float, float]]) -> QQResult:
    """Quantile pairs of market and model log fractional odds, ``log((1 - p) / p)``.

    Each side is sorted on its own. Pairs with either probability at 0 or 1
    have no finite log odds and are dropped; ``excluded`` counts them.
    """
    market, model = [], []
    excluded = 0
    for pm, ps in pairs:
        if not (0.0 < pm < 1.0 and 0.0 < ps < 1.0):
            excluded += 1
            continue
        market.append(_log_odds(pm))
        model.append(_log_odds(ps))
    market.sort()
    model.sort()
    return QQResult(list(zip(market, model)), excluded)


def win_draw_point(rates: ScoringRates, inflation: InflationModel | None = None, tail_eps: float = DEFAULT_TAIL_EPS):
    """(win, draw) for the home side under an optionally inflated Skellam model."""
    dist = skellam_dist(rates, tail_eps)
    if inflation is not None:
        dist = inflate(dist, inflation)
    win = math.fsum(dist.probs[dist.support > 0])
    return win, dist.pmf(0)


def win_draw_curve(
    rate_product: float,
    inflation: InflationModel | None = None,
    n_points: int = 401,
    win_range: tuple[float, float] = (0.05, 0.85),
) -> list[tuple[float, float]]:
    """Trace (win, draw) as the rate ratio varies with ``lambda_a * lambda_b`` fixed.

    The ratio runs over a log grid whose ends give home win probabilities
    ``win_range``; points come back ordered by win probability.
    """
    if not rate_product > 0.0:
        raise DomainError(f"rate product must be > 0, got {rate_product!r}")
    if n_points < 2:
        raise DomainError("need at least 2 curve points")
    root = math.sqrt(rate_product)

    def at(log_r: float):
        half = math.exp(0.5 * log_r)
        return win_draw_point(ScoringRates(root * half, root / half), inflation)

    lo_w, hi_w = win_range

    def solve(target: float) -> float:
        # win probability increases with the ratio; widen the bracket until it crosses
        step = 1.0
        while step <= _MAX_LOG_RATIO:
            if at(-step)[0] < target < at(step)[0]:
                return brentq(lambda x: at(x)[0] - target, -step, step, xtol=1e-13)
            step *= 2.0
        raise DomainError(f"home win probability {target} is not reachable with this inflation")

    log_lo, log_hi = solve(lo_w), solve(hi_w)
    curve = [at(x) for x in np.linspace(log_lo, log_hi, n_points)]
    curve.sort()
    return curve


@dataclass(frozen=True)
class BucketReport:
    """Home-win frequency per forecast bucket ``(lo, hi]``; ``None`` where a bucket is empty."""

    bucket_edges: tuple[float, ...]
    counts: tuple[int, ...]
    wins: tuple[int, ...]
    win_frequency: tuple[float | None, ...]
    overflow_count: int
    overflow_wins: int

    def rows(self):
        for i, (n, freq) in enumerate(zip(self.counts, self.win_frequency)):
            yield self.bucket_edges[i], self.bucket_edges[i + 1], n, freq

    def midpoints(self) -> list[float]:
        e = self.bucket_edges
        return [0.5 * (e[i] + e[i + 1]) for i in range(len(e) - 1)]


def bucket_calibration(
    games: Sequence[tuple[float, bool]], edges: Sequence[float] = BUCKET_EDGES
) -> BucketReport:
    """Group games by the market's home-win probability and count home wins per group.

    Probabilities outside ``(edges[0], edges[-1]]`` land in the overflow tally.
    """
    if not games:
        raise DomainError("no games to bucket")
    edges = tuple(float(e) for e in edges)
    n_buckets = len(edges) - 1
    counts = [0] * n_buckets
    wins = [0] * n_buckets
    over_n = over_w = 0
    probs = np.array([g[0] for g in games], dtype=np.float64)
    idx = np.searchsorted(np.array(edges), probs, side="left") - 1
    for b, (_, won) in zip(idx.tolist(), games):
        if 0 <= b < n_buckets:
            counts[b] += 1
            wins[b] += bool(won)
        else:
            over_n += 1
            over_w += bool(won)
    freq = tuple(w / n if n else None for w, n in zip(wins, counts))
    return BucketReport(edges, tuple(counts), tuple(wins), freq, over_n, over_w)


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return int(v) if isinstance(v, np.integer) else v


def _write_rows(path, columns, rows, header_lines: Iterable[str] = ()) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(v) for v in row])


def write_compare_csv(rows: Iterable[ComparisonRow], path, header_lines: Iterable[str] = ()) -> None:
    _write_rows(path, ("diff", "market", "model"), rows, header_lines)


def write_qq_csv(result: QQResult, path, header_lines: Iterable[str] = ()) -> None:
    lines = list(header_lines) + [f"excluded={result.excluded}"]
    _write_rows(path, ("mq", "sq"), result.points, lines)


def write_curve_csv(curve: Iterable[tuple[float, float]], path, header_lines: Iterable[str] = ()) -> None:
    _write_rows(path, ("win", "draw"), curve, header_lines)


def write_buckets_csv(report: BucketReport, path, header_lines: Iterable[str] = ()) -> None:
    lines = list(header_lines) + [f"overflow_count={report.overflow_count} overflow_wins={report.overflow_wins}"]
    _write_rows(path, ("bucket_lo", "bucket_hi", "count", "freq"), report.rows(), lines)


def _read_table(path, required: Sequence[str]) -> list[tuple[int, dict[str, str]]]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputFormatError(f"cannot read file: {exc.strerror}", path) from None
    lines = [(n, ln) for n, ln in enumerate(text.splitlines(), start=1) if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise InputFormatError("empty file", path)
    reader = csv.reader(io.StringIO("\n".join(ln for _, ln in lines)))
    header = [h.strip() for h in next(reader)]
    missing = [c for c in required if c not in header]
    if missing:
        raise InputFormatError(f"missing column(s) {','.join(missing)}", path, lines[0][0])
    out = []
    for (line, _), row in zip(lines[1:], reader):
        if len(row) != len(header):
            raise InputFormatError(f"expected {len(header)} fields, got {len(row)}", path, line)
        out.append((line, {h: v.strip() for h, v in zip(header, row)}))
    return out


def _prob(text: str, path, line: int) -> float:
    try:
        p = float(text)
    except ValueError:
        raise InputFormatError(f"not a number: {text!r}", path, line) from None
    if not 0.0 <= p <= 1.0:
        raise InputFormatError(f"probability out of [0, 1]: {text!r}", path, line)
    return p


def read_pairs_csv(path) -> list[tuple[float, float]]:
    """``market,model`` probability pairs (other columns ignored)."""
    return [(_prob(r["market"], path, n), _prob(r["model"], path, n)) for n, r in _read_table(path, ("market", "model"))]


def read_compare_rows(path) -> list[ComparisonRow] | None:
    """``diff,market,model`` rows sorted by diff, or ``None`` when there is no ``diff`` column."""
    table = _read_table(path, ("market", "model"))
    if not table or "diff" not in table[0][1]:
        return None
    rows = []
    for n, r in table:
        try:
            diff = int(r["diff"])
        except ValueError:
            raise InputFormatError(f"diff is not an integer: {r['diff']!r}", path, n) from None
        rows.append(ComparisonRow(diff, _prob(r["market"], path, n), _prob(r["model"], path, n)))
    return sorted(rows)


_TRUE = {"1", "true", "yes", "y", "t"}
_FALSE = {"0", "false", "no", "n", "f"}


def read_games_csv(path) -> list[tuple[float, bool]]:
    """``implied_win_prob,home_won`` rows; ``home_won`` is 0/1 or true/false."""
    games = []
    for n, r in _read_table(path, ("implied_win_prob", "home_won")):
        flag = r["home_won"].lower()
        if flag not in _TRUE | _FALSE:
            raise InputFormatError(f"home_won must be 0/1 or true/false, got {r['home_won']!r}", path, n)
        games.append((_prob(r["implied_win_prob"], path, n), flag in _TRUE))
    return games
