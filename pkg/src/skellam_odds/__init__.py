"""Skellam calibration of soccer correct-score odds."""

from ._backend import BACKEND, COMPILED
from .calibration import (
    CalibrationResult,
    InflationFit,
    TimelinePoint,
    calibrate,
    calibrate_moments,
    calibrate_timeline,
    fit_inflation,
    implied_volatility,
    read_manifest,
)
from .diagnostics import (
    BucketReport,
    ComparisonRow,
    QQResult,
    bucket_calibration,
    compare,
    qq_log_odds,
    win_draw_curve,
)
from .errors import DegenerateInputError, DomainError, InputFormatError, SkellamOddsError, TimelineError
from .odds import (
    FractionalOdds,
    GameState,
    MarketDiff,
    OddsDataWarning,
    OddsMatrix,
    adjust_for_state,
    implied_prob,
    market_moments,
    market_score_diff,
    parse_odds_csv,
    read_odds_csv,
    write_odds_csv,
)
from .simulation import ScorePath, derive_seed, simulate_final_dist, simulate_path, simulate_paths
from .skellam import (
    InflationKind,
    InflationModel,
    ScoreDiffDist,
    ScoringRates,
    bessel_i,
    draw_prob_even,
    inflate,
    outcome_probs,
    prob_draw,
    prob_lose,
    prob_win,
    skellam_dist,
    skellam_moments,
    skellam_pmf,
)

__version__ = "0.1.0"
