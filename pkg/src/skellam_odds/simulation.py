"""Seeded Monte Carlo paths of the score-difference process.

Each path draws the number of home and away goals still to come from Poisson
laws with the remaining-game rates, then places them as sorted uniform times
on ``(t, 1]``. Randomness is SplitMix64; path ``i`` of a run seeded with ``s``
uses substream ``derive_seed(s, i)`` so any subset of paths can be regenerated
on its own and serial and parallel runs agree exactly.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from ._backend import kernels
from .odds import GameState
from .skellam import ScoreDiffDist, ScoringRates

__all__ = [
    "ScorePath",
    "derive_seed",
    "simulate_path",
    "simulate_paths",
    "simulate_final_dist",
    "write_paths_csv",
    "PATH_COLUMNS",
]

PATH_COLUMNS = ("path_id", "time", "diff")
_MASK64 = 0xFFFFFFFFFFFFFFFF


def derive_seed(seed: int, index: int) -> int:
    """Seed of the per-path substream ``index`` under master ``seed``."""
    return int(kernels.derive_seed(int(seed) & _MASK64, int(index)))


@dataclass(frozen=True, eq=False)
class ScorePath:
    """One realization of the score difference from ``start_time`` to 1."""

    jump_times: np.ndarray
    jump_signs: np.ndarray
    start_time: float = 0.0
    start_diff: int = 0

    def __post_init__(self):
        times = np.asarray(self.jump_times, dtype=np.float64)
        signs = np.asarray(self.jump_signs, dtype=np.int8)
        if times.shape != signs.shape or times.ndim != 1:
            raise ValueError("jump_times and jump_signs must be 1-d and the same length")
        times.setflags(write=False)
        signs.setflags(write=False)
        object.__setattr__(self, "jump_times", times)
        object.__setattr__(self, "jump_signs", signs)

    def __len__(self) -> int:
        return self.jump_times.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, ScorePath):
            return NotImplemented
        return (
            self.start_time == other.start_time
            and self.start_diff == other.start_diff
            and np.array_equal(self.jump_times, other.jump_times)
            and np.array_equal(self.jump_signs, other.jump_signs)
        )

    def value_at(self, u: float) -> int:
        """Score difference at time ``u`` (jumps at exactly ``u`` included)."""
        n = int(np.searchsorted(self.jump_times, u, side="right"))
        return self.start_diff + int(self.jump_signs[:n].sum())

    @property
    def terminal(self) -> int:
        return self.start_diff + int(self.jump_signs.sum())


def simulate_path(rates: ScoringRates, start: GameState, seed: int) -> ScorePath:
    """Simulate the rest of the game from ``start`` with constant remaining-game rates."""
    times, signs = kernels.sample_path(rates.lambda_a, rates.lambda_b, start.t, int(seed) & _MASK64)
    return ScorePath(times, signs, start.t, start.lead)


def simulate_paths(rates: ScoringRates, start: GameState, n_paths: int, seed: int) -> list[ScorePath]:
    """``n_paths`` paths; path ``i`` equals ``simulate_path(rates, start, derive_seed(seed, i))``."""
    if n_paths < 1:
        raise ValueError(f"n_paths must be >= 1, got {n_paths}")
    return [simulate_path(rates, start, derive_seed(seed, i)) for i in range(n_paths)]


def simulate_final_dist(rates: ScoringRates, start: GameState, n_paths: int, seed: int) -> ScoreDiffDist:
    """Empirical distribution of the final difference over ``n_paths`` simulated paths.

    Only the goal counts of each path are drawn; they are the same counts
    :func:`simulate_paths` would produce with this seed.
    """
    if n_paths < 1:
        raise ValueError(f"n_paths must be >= 1, got {n_paths}")
    diffs = kernels.terminal_diffs(rates.lambda_a, rates.lambda_b, int(seed) & _MASK64, int(n_paths))
    diffs = np.asarray(diffs) + start.lead
    lo = int(diffs.min())
    counts = np.bincount(diffs - lo)
    return ScoreDiffDist(lo, counts / n_paths)


def write_paths_csv(paths: Iterable[ScorePath], path: str | Path, header_lines: Iterable[str] = ()) -> None:
    """Write ``path_id,time,diff`` rows, each path starting with its initial point."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(PATH_COLUMNS)
        for pid, p in enumerate(paths):
            writer.writerow([pid, repr(p.start_time), p.start_diff])
            value = p.start_diff
            for t, s in zip(p.jump_times.tolist(), p.jump_signs.tolist()):
                value += s
                writer.writerow([pid, repr(t), value])
