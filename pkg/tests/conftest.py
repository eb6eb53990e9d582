from pathlib import Path
import warnings

import pytest

from skellam_odds import OddsDataWarning, OddsMatrix, FractionalOdds, read_odds_csv

DATA = Path(__file__).parent / "data"
TABLE1_CSV = DATA / "table1_everton_westham.csv"

# published market and Skellam rows for score differences -4..5, in percent
TABLE2_DIFFS = list(range(-4, 6))
TABLE2_MARKET = [1.70, 2.03, 4.88, 12.33, 21.93, 22.06, 16.58, 9.82, 4.72, 2.23]
TABLE2_SKELLAM = [0.78, 2.50, 6.47, 13.02, 19.50, 21.08, 16.96, 10.61, 5.37, 2.27]
TABLE2_RATES = (2.33, 1.44)

# in-play timeline table: printed clock, match minute behind it, per-remaining rate sum, implied vol
TIMELINE_T = [0, 0.11, 0.22, 0.33, 0.44, 0.50, 0.61, 0.72, 0.83, 0.94, 1]
TIMELINE_MINUTES = [0, 10, 20, 30, 40, 45, 55, 65, 75, 85, 90]
TIMELINE_SUM_PER_REM = [3.78, 3.98, 4.12, 4.31, 4.06, 4.02, 4.68, 5.03, 6.28, 10.52, 0]
TIMELINE_IV = [1.94, 1.88, 1.79, 1.70, 1.50, 1.42, 1.35, 1.18, 1.02, 0.76, 0]

_ACCEPTANCE_LINES: list[str] = []


def record_acceptance(number: int, title: str, ok: bool, detail: str = "") -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}"
    if detail:
        line += f" -- {detail}"
    _ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def load_table1() -> OddsMatrix:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", OddsDataWarning)
        return read_odds_csv(TABLE1_CSV)


@pytest.fixture(scope="session")
def table1() -> OddsMatrix:
    """Table 1 as printed; the 5-0 quote 50/0 is read as 50/1."""
    return load_table1()


@pytest.fixture(scope="session")
def table1_reconciled(table1) -> OddsMatrix:
    """Table 1 with the 1-5 quote at 50/1 instead of the printed 350/1.

    This single change reproduces every published market probability and both
    published rates, so it is taken as the matrix behind the published numbers.
    """
    entries = dict(table1.entries)
    entries[(1, 5)] = FractionalOdds(50, 1)
    return OddsMatrix(entries)
