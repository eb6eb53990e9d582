"""Command-line interface: file in, file out.

Every output begins with the exact command that reproduces it (a ``#``
comment line in CSV files, a ``command`` field in JSON). Exit status is 0 on
success, 2 for invalid input and 3 for numerically degenerate input.
"""

from __future__ import annotations

import json
import shlex
import sys
import warnings
from pathlib import Path

import click

from .calibration import calibrate, calibrate_timeline, read_manifest
from .diagnostics import (
    bucket_calibration,
    compare,
    qq_log_odds,
    read_compare_rows,
    read_games_csv,
    read_pairs_csv,
    win_draw_curve,
    write_buckets_csv,
    write_compare_csv,
    write_curve_csv,
    write_qq_csv,
)
from .errors import DegenerateInputError, DomainError, InputFormatError, TimelineError
from .odds import GameState, adjust_for_state, market_score_diff, read_odds_csv
from .skellam import DEFAULT_TAIL_EPS, InflationModel, ScoringRates, outcome_probs
from .simulation import simulate_final_dist, simulate_paths, write_paths_csv

EXIT_INPUT = 2
EXIT_NUMERIC = 3
PROG = "skellam-odds"


def _command_line(*parts) -> str:
    return shlex.join([PROG, *(str(p) for p in parts)])


def _fail(message: str, code: int):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _run(fn):
    """Run ``fn`` mapping package errors to exit codes and echoing data warnings."""
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            fn()
        except (InputFormatError, TimelineError) as exc:
            _fail(str(exc), EXIT_INPUT)
        except (DegenerateInputError, DomainError, ArithmeticError) as exc:
            _fail(str(exc), EXIT_NUMERIC)
        finally:
            for w in caught:
                click.echo(f"warning: {w.message}", err=True)


def _out_dir(out: str) -> Path:
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _parse_score(value: str | None):
    if value is None:
        return 0, 0
    a, sep, b = value.partition(":")
    try:
        if not sep:
            raise ValueError
        return int(a), int(b)
    except ValueError:
        raise click.BadParameter(f"expected A:B, got {value!r}", param_hint="--score") from None


def _fmt(x: float) -> str:
    return repr(float(x))


@click.group(help="Calibrate a Skellam score-difference model to correct-score odds.")
@click.version_option(package_name="artifact")
def main():
    pass


@main.command("calibrate")
@click.option("--odds", "odds_file", required=True, type=click.Path(dir_okay=False), help="Odds snapshot CSV.")
@click.option("--score", default=None, help="Current score A:B (default 0:0).")
@click.option("--t", "t", default=0.0, type=float, show_default=True, help="Game clock in [0, 1].")
@click.option("--tail-eps", default=DEFAULT_TAIL_EPS, type=float, show_default=True)
@click.option("--out", required=True, type=click.Path(file_okay=False))
def calibrate_cmd(odds_file, score, t, tail_eps, out):
    """Fit scoring rates to one odds snapshot."""
    score_a, score_b = _parse_score(score)
    try:
        state = GameState(t, score_a, score_b)
    except DomainError as exc:
        raise click.BadParameter(str(exc)) from None
    command = _command_line(
        "calibrate", "--odds", odds_file, "--score", f"{score_a}:{score_b}", "--t", _fmt(t),
        "--tail-eps", _fmt(tail_eps), "--out", out,
    )

    def work():
        matrix = read_odds_csv(odds_file)
        market = market_score_diff(adjust_for_state(matrix, state))
        result = calibrate(market.dist, 0)
        win, draw, lose = outcome_probs(result.rates, state.lead)
        payload = {
            "command": command,
            "t": state.t,
            "score": [state.score_a, state.score_b],
            "lambda_a": result.rates.lambda_a,
            "lambda_b": result.rates.lambda_b,
            "residuals": {"mean": result.residual_mean, "var": result.residual_var},
            "objective": result.objective,
            "implied_vol": result.implied_vol,
            "vig": market.vig,
            "p_win": win,
            "p_draw": draw,
            "p_lose": lose,
        }
        dest = _out_dir(out)
        (dest / "calibration.json").write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
        rows = compare(market.dist, result.rates, tail_eps)
        write_compare_csv(rows, dest / "comparison.csv", [f"command: {command}"])
        click.echo(
            f"lambda_a={result.rates.lambda_a:.4f} lambda_b={result.rates.lambda_b:.4f} "
            f"iv={result.implied_vol:.4f} vig={market.vig:.4f}"
        )

    _run(work)


TIMELINE_COLUMNS = (
    "t", "lambda_a", "lambda_b", "iv", "lambda_a_per_rem", "lambda_b_per_rem", "p_win", "p_draw", "p_lose",
)


@main.command("timeline")
@click.option("--manifest", required=True, type=click.Path(dir_okay=False), help="Manifest CSV t,score_a,score_b,odds_file.")
@click.option("--out", required=True, type=click.Path(file_okay=False))
def timeline_cmd(manifest, out):
    """Calibrate every snapshot of a game."""
    command = _command_line("timeline", "--manifest", manifest, "--out", out)

    def work():
        points = calibrate_timeline(read_manifest(manifest))
        dest = _out_dir(out)
        with open(dest / "timeline.csv", "w", encoding="utf-8", newline="") as fh:
            fh.write(f"# command: {command}\n")
            fh.write(",".join(TIMELINE_COLUMNS) + "\n")
            for p in points:
                per_rem = p.rates_per_remaining
                win, draw, lose = p.outcome_probs()
                cells = [
                    _fmt(p.t), _fmt(p.result.rates.lambda_a), _fmt(p.result.rates.lambda_b), _fmt(p.result.implied_vol),
                    "" if per_rem is None else _fmt(per_rem[0]), "" if per_rem is None else _fmt(per_rem[1]),
                    _fmt(win), _fmt(draw), _fmt(lose),
                ]
                fh.write(",".join(cells) + "\n")
        click.echo(f"{len(points)} snapshots calibrated")

    _run(work)


@main.command("simulate")
@click.option("--lambda-a", required=True, type=float, help="Home expected goals for the rest of the game.")
@click.option("--lambda-b", required=True, type=float, help="Away expected goals for the rest of the game.")
@click.option("--lead", default=0, type=int, show_default=True)
@click.option("--t", "t", default=0.0, type=float, show_default=True)
@click.option("--n-paths", required=True, type=click.IntRange(min=1))
@click.option("--seed", required=True, type=click.IntRange(min=0, max=2**64 - 1))
@click.option("--out", required=True, type=click.Path(file_okay=False))
def simulate_cmd(lambda_a, lambda_b, lead, t, n_paths, seed, out):
    """Export Monte Carlo score-difference paths."""
    try:
        rates = ScoringRates(lambda_a, lambda_b)
        start = GameState(t, max(lead, 0), max(-lead, 0))
    except DomainError as exc:
        raise click.BadParameter(str(exc)) from None
    command = _command_line(
        "simulate", "--lambda-a", _fmt(lambda_a), "--lambda-b", _fmt(lambda_b), "--lead", lead, "--t", _fmt(t),
        "--n-paths", n_paths, "--seed", seed, "--out", out,
    )

    def work():
        dest = _out_dir(out)
        paths = simulate_paths(rates, start, n_paths, seed)
        write_paths_csv(paths, dest / "paths.csv", [f"command: {command}", "rng: splitmix64"])
        final = simulate_final_dist(rates, start, n_paths, seed)
        with open(dest / "final_dist.csv", "w", encoding="utf-8", newline="") as fh:
            fh.write(f"# command: {command}\n")
            fh.write("diff,prob\n")
            for k, p in final.as_dict().items():
                fh.write(f"{k},{_fmt(p)}\n")
        click.echo(f"{n_paths} paths written")

    _run(work)


@main.command("diagnose")
@click.option("--pairs", "pairs_file", type=click.Path(dir_okay=False), help="CSV with market,model columns (optional diff).")
@click.option("--games", "games_file", type=click.Path(dir_okay=False), help="CSV with implied_win_prob,home_won columns.")
@click.option("--out", required=True, type=click.Path(file_okay=False))
def diagnose_cmd(pairs_file, games_file, out):
    """Q-Q and bucket-calibration reports."""
    if not pairs_file and not games_file:
        raise click.UsageError("give --pairs FILE and/or --games FILE")
    parts = ["diagnose"]
    if pairs_file:
        parts += ["--pairs", pairs_file]
    if games_file:
        parts += ["--games", games_file]
    command = _command_line(*parts, "--out", out)

    def work():
        dest = _out_dir(out)
        header = [f"command: {command}"]
        if pairs_file:
            pairs = read_pairs_csv(pairs_file)
            write_qq_csv(qq_log_odds(pairs), dest / "qq.csv", header)
            rows = read_compare_rows(pairs_file)
            if rows is not None:
                mae = sum(abs(r.market_prob - r.model_prob) for r in rows) / len(rows)
                write_compare_csv(rows, dest / "compare.csv", header + [f"mean_abs_error={mae!r}"])
        if games_file:
            write_buckets_csv(bucket_calibration(read_games_csv(games_file)), dest / "buckets.csv", header)
        click.echo(f"reports written to {dest}")

    _run(work)


@main.command("curve")
@click.option("--product", required=True, type=float, help="Fixed lambda_a * lambda_b.")
@click.option("--inflation", default="none", show_default=True, help="none | type1:p | type2:theta")
@click.option("--n-points", default=401, type=click.IntRange(min=2), show_default=True)
@click.option("--out", required=True, type=click.Path(file_okay=False))
def curve_cmd(product, inflation, n_points, out):
    """Win/draw probability curve at a fixed rate product."""
    try:
        model = InflationModel.parse(inflation)
    except DomainError as exc:
        raise click.BadParameter(str(exc), param_hint="--inflation") from None
    if not product > 0:
        raise click.BadParameter("must be > 0", param_hint="--product")
    command = _command_line(
        "curve", "--product", _fmt(product), "--inflation", str(model), "--n-points", n_points, "--out", out
    )

    def work():
        curve = win_draw_curve(product, model, n_points)
        write_curve_csv(curve, _out_dir(out) / "curve.csv", [f"command: {command}"])
        click.echo(f"{len(curve)} curve points written")

    _run(work)


if __name__ == "__main__":
    main()
