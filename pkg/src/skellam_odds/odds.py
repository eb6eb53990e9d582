"""Fractional odds, correct-score odds matrices and market score-difference probabilities."""

from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping, NamedTuple

from .errors import DegenerateInputError, DomainError, InputFormatError
from .skellam import ScoreDiffDist

__all__ = [
    "FractionalOdds",
    "OddsMatrix",
    "GameState",
    "MarketDiff",
    "OddsDataWarning",
    "implied_prob",
    "adjust_for_state",
    "market_score_diff",
    "market_moments",
    "parse_odds_csv",
    "read_odds_csv",
    "write_odds_csv",
    "ODDS_COLUMNS",
]

ODDS_COLUMNS = ("home_goals", "away_goals", "numerator", "denominator")


class OddsDataWarning(UserWarning):
    """Odds data was repaired on ingestion."""


@dataclass(frozen=True, order=True)
class FractionalOdds:
    """Bookmaker quote ``numerator/denominator`` (profit per unit stake)."""

    numerator: int
    denominator: int = 1

    def __post_init__(self):
        if isinstance(self.numerator, bool) or isinstance(self.denominator, bool):
            raise DomainError("odds terms must be integers")
        if int(self.numerator) != self.numerator or int(self.denominator) != self.denominator:
            raise DomainError(f"odds terms must be integers, got {self.numerator}/{self.denominator}")
        if self.numerator < 0:
            raise DomainError(f"odds numerator must be >= 0, got {self.numerator}")
        if self.denominator < 1:
            raise DomainError(f"odds denominator must be >= 1, got {self.denominator}")
        object.__setattr__(self, "numerator", int(self.numerator))
        object.__setattr__(self, "denominator", int(self.denominator))

    @classmethod
    def parse(cls, text: str) -> "FractionalOdds":
        """Parse ``"a/b"`` (or a bare integer ``"a"`` meaning ``a/1``)."""
        num, sep, den = text.strip().partition("/")
        try:
            return cls(int(num), int(den) if sep else 1)
        except ValueError:
            raise DomainError(f"not fractional odds: {text!r}") from None

    @classmethod
    def from_probability(cls, p: float | Fraction) -> "FractionalOdds":
        """Exact odds whose implied probability is ``p`` (0 < p <= 1)."""
        q = Fraction(p)
        if not 0 < q <= 1:
            raise DomainError(f"probability must lie in (0, 1], got {p!r}")
        ratio = (1 - q) / q
        return cls(ratio.numerator, ratio.denominator)

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def __str__(self) -> str:
        return f"{self.numerator}/{self.denominator}"


def implied_prob(odds: FractionalOdds) -> float:
    """Probability that makes the bet fair: ``1 / (1 + a/b)``."""
    return odds.denominator / (odds.denominator + odds.numerator)


@dataclass(frozen=True)
class GameState:
    """Game clock ``t`` in [0, 1] and the current score."""

    t: float = 0.0
    score_a: int = 0
    score_b: int = 0

    def __post_init__(self):
        t = float(self.t)
        if not 0.0 <= t <= 1.0:
            raise DomainError(f"t must lie in [0, 1], got {self.t!r}")
        for name in ("score_a", "score_b"):
            v = getattr(self, name)
            if isinstance(v, bool) or int(v) != v or v < 0:
                raise DomainError(f"{name} must be a nonnegative integer, got {v!r}")
            object.__setattr__(self, name, int(v))
        object.__setattr__(self, "t", t)

    @property
    def lead(self) -> int:
        return self.score_a - self.score_b


@dataclass(frozen=True)
class OddsMatrix:
    """Correct-score quotes keyed by ``(home_goals, away_goals)``.

    Scores without a quote carry zero probability.
    """

    entries: Mapping[tuple[int, int], FractionalOdds] = field(default_factory=dict)

    def __post_init__(self):
        if not self.entries:
            raise DomainError("odds matrix needs at least one quote")
        clean = {}
        for (i, j), odds in sorted(self.entries.items()):
            if i < 0 or j < 0:
                raise DomainError(f"negative score ({i}, {j}) in odds matrix")
            if not isinstance(odds, FractionalOdds):
                odds = FractionalOdds.parse(str(odds))
            clean[(int(i), int(j))] = odds
        object.__setattr__(self, "entries", MappingProxyType(clean))

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[str | FractionalOdds | None]]) -> "OddsMatrix":
        """Build from a dense grid: ``rows[i][j]`` quotes home ``i`` away ``j``; blanks skipped."""
        entries = {}
        for i, row in enumerate(rows):
            for j, cell in enumerate(row):
                if cell is None or cell == "":
                    continue
                entries[(i, j)] = cell if isinstance(cell, FractionalOdds) else FractionalOdds.parse(cell)
        return cls(entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, key: tuple[int, int]) -> FractionalOdds:
        return self.entries[key]

    def __contains__(self, key) -> bool:
        return key in self.entries

    def implied_probabilities(self) -> dict[tuple[int, int], float]:
        return {key: implied_prob(o) for key, o in self.entries.items()}


def adjust_for_state(matrix: OddsMatrix, state: GameState) -> OddsMatrix:
    """Re-key final-score quotes by goals still to come: ``odds*(x, y) = odds(x + a, y + b)``.

    Raises
    ------
    DegenerateInputError
        If no quoted final score is reachable from the current score.
    """
    a, b = state.score_a, state.score_b
    shifted = {(i - a, j - b): o for (i, j), o in matrix.entries.items() if i >= a and j >= b}
    if not shifted:
        raise DegenerateInputError("no quotable sub-game outcomes")
    return OddsMatrix(shifted)


class MarketDiff(NamedTuple):
    dist: ScoreDiffDist
    vig: float


def market_score_diff(matrix: OddsMatrix) -> MarketDiff:
    """Normalized score-difference probabilities from a correct-score matrix, plus the vig.

    Implied probabilities are summed along each ``i - j = k`` diagonal and
    divided by their grand total ``c``; the vig is ``c - 1``.
    """
    by_diff: dict[int, list[float]] = {}
    for (i, j), odds in sorted(matrix.entries.items()):
        by_diff.setdefault(i - j, []).append(implied_prob(odds))
    lo, hi = min(by_diff), max(by_diff)
    sums = [math.fsum(by_diff.get(k, ())) for k in range(lo, hi + 1)]
    c = math.fsum(p for ps in by_diff.values() for p in ps)
    if not c > 0.0:
        raise DegenerateInputError("odds matrix carries no probability mass")
    return MarketDiff(ScoreDiffDist.from_weights(lo, sums), c - 1.0)


def market_moments(dist: ScoreDiffDist) -> tuple[float, float]:
    """Mean and variance of a market score-difference distribution."""
    return dist.moments()


def _parse_int(text: str, column: str, path, line: int) -> int:
    try:
        return int(text.strip())
    except ValueError:
        raise InputFormatError(f"column {column!r}: not an integer: {text!r}", path, line) from None


def parse_odds_csv(text: str, path: str | Path | None = None) -> OddsMatrix:
    """Parse odds-snapshot CSV text; lines starting with ``#`` are comments.

    A zero denominator is repaired to 1 with an :class:`OddsDataWarning`.
    """
    lines = [(n, ln) for n, ln in enumerate(text.splitlines(), start=1) if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise InputFormatError("empty odds file", path)
    line_numbers = [n for n, _ in lines]
    reader = csv.reader(io.StringIO("\n".join(ln for _, ln in lines)))
    header = [h.strip() for h in next(reader)]
    if sorted(header) != sorted(ODDS_COLUMNS):
        raise InputFormatError(f"header must be {','.join(ODDS_COLUMNS)}, got {','.join(header)}", path, line_numbers[0])
    col = {name: header.index(name) for name in ODDS_COLUMNS}
    entries: dict[tuple[int, int], FractionalOdds] = {}
    for row, line in zip(reader, line_numbers[1:]):
        if len(row) != len(header):
            raise InputFormatError(f"expected {len(header)} fields, got {len(row)}", path, line)
        i, j, num, den = (_parse_int(row[col[c]], c, path, line) for c in ODDS_COLUMNS)
        if i < 0 or j < 0:
            raise InputFormatError(f"negative goals ({i}, {j})", path, line)
        if num < 0 or den < 0:
            raise InputFormatError(f"negative odds {num}/{den}", path, line)
        if den == 0:
            warnings.warn(
                f"{path or '<odds>'}:{line}: odds {num}/0 for score {i}-{j} read as {num}/1",
                OddsDataWarning,
                stacklevel=2,
            )
            den = 1
        if (i, j) in entries:
            raise InputFormatError(f"duplicate quote for score {i}-{j}", path, line)
        entries[(i, j)] = FractionalOdds(num, den)
    if not entries:
        raise InputFormatError("no odds rows", path)
    return OddsMatrix(entries)


def read_odds_csv(path: str | Path) -> OddsMatrix:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputFormatError(f"cannot read odds file: {exc.strerror}", path) from None
    return parse_odds_csv(text, path)


def write_odds_csv(matrix: OddsMatrix, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(ODDS_COLUMNS)
        for (i, j), o in matrix.entries.items():
            writer.writerow([i, j, o.numerator, o.denominator])
