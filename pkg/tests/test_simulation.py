"""Seeded score-difference paths and empirical final distributions."""

import csv
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skellam_odds import (
    GameState,
    ScorePath,
    ScoringRates,
    derive_seed,
    simulate_final_dist,
    simulate_path,
    simulate_paths,
    skellam_dist,
    skellam_pmf,
)
from skellam_odds.simulation import write_paths_csv

RATES = ScoringRates(2.33, 1.44)


class TestScorePath:
    def test_value_at(self):
        p = ScorePath([0.2, 0.5, 0.7], [1, -1, 1], 0.1, 2)
        assert [p.value_at(u) for u in (0.1, 0.2, 0.6, 1.0)] == [2, 3, 2, 3]
        assert p.terminal == 3
        assert len(p) == 3

    def test_read_only(self):
        p = ScorePath([0.5], [1])
        with pytest.raises(ValueError):
            p.jump_times[0] = 0.1

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            ScorePath([0.5, 0.6], [1])


class TestSimulatePath:
    def test_zero_rates_empty(self):
        p = simulate_path(ScoringRates(0, 0), GameState(0.3, 1, 0), 5)
        assert len(p) == 0
        assert p.terminal == 1

    @settings(max_examples=50)
    @given(
        a=st.floats(0, 12), b=st.floats(0, 12), t=st.floats(0, 0.95), seed=st.integers(0, 2**64 - 1)
    )
    def test_structure(self, a, b, t, seed):
        p = simulate_path(ScoringRates(a, b), GameState(t), seed)
        times = p.jump_times
        assert np.all((times > t) & (times <= 1.0))
        assert np.all(np.diff(times) >= 0)
        assert set(p.jump_signs.tolist()) <= {-1, 1}

    def test_reproducible(self):
        a = simulate_paths(RATES, GameState(), 200, 77)
        b = simulate_paths(RATES, GameState(), 200, 77)
        assert a == b
        assert a != simulate_paths(RATES, GameState(), 200, 78)

    def test_substreams(self):
        paths = simulate_paths(RATES, GameState(), 50, 9)
        assert paths[17] == simulate_path(RATES, GameState(), derive_seed(9, 17))

    def test_bad_count(self):
        with pytest.raises(ValueError):
            simulate_paths(RATES, GameState(), 0, 1)


class TestFinalDist:
    def test_degenerate(self):
        d = simulate_final_dist(ScoringRates(0, 0), GameState(0.5, 2, 0), 1, 0)
        assert d.as_dict() == {2: 1.0}

    def test_mean(self):
        mean, _ = simulate_final_dist(RATES, GameState(), 100_000, 2024).moments()
        assert mean == pytest.approx(0.89, abs=0.02)

    def test_agrees_with_paths(self):
        seed, n = 31, 3000
        paths = simulate_paths(RATES, GameState(0.4, 0, 1), n, seed)
        final = simulate_final_dist(RATES, GameState(0.4, 0, 1), n, seed)
        values, counts = np.unique([p.terminal for p in paths], return_counts=True)
        assert {int(v): c / n for v, c in zip(values, counts)} == final.as_dict()

    def test_lead_shift(self):
        start = simulate_final_dist(RATES, GameState(0.5, 0, 1), 20_000, 4)
        fresh = simulate_final_dist(RATES, GameState(0.0), 20_000, 4)
        assert start.k_min == fresh.k_min - 1
        assert np.array_equal(start.probs, fresh.probs)

    @pytest.mark.parametrize("rates", [(2.33, 1.44), (0.4, 3.1), (5.0, 5.0)])
    def test_pointwise_four_se(self, rates):
        n = 1_000_000
        emp = simulate_final_dist(ScoringRates(*rates), GameState(), n, 11)
        for k in range(emp.k_min, emp.k_max + 1):
            p = skellam_pmf(k, ScoringRates(*rates))
            if p < 1e-4:
                continue
            se = math.sqrt(p * (1 - p) / n)
            assert abs(emp.pmf(k) - p) <= 4 * se, k

    def test_total_variation(self):
        emp = simulate_final_dist(RATES, GameState(), 1_000_000, 1)
        assert emp.total_variation(skellam_dist(RATES, 1e-12)) <= 0.003


def test_independent_increments():
    n = 100_000
    paths = simulate_paths(RATES, GameState(), n, 606)
    first = np.empty(n)
    second = np.empty(n)
    for i, p in enumerate(paths):
        cut = np.searchsorted(p.jump_times, 0.5, side="right")
        first[i] = cut
        second[i] = len(p) - cut
    r = np.corrcoef(first, second)[0, 1]
    assert abs(r) <= 0.01


def test_paths_csv(tmp_path):
    paths = simulate_paths(RATES, GameState(0.5, 1, 0), 5, 3)
    out = tmp_path / "paths.csv"
    write_paths_csv(paths, out, ["command: demo"])
    text = out.read_text()
    assert text.startswith("# command: demo\npath_id,time,diff\n")
    rows = list(csv.reader(line for line in text.splitlines() if not line.startswith("#")))[1:]
    assert len(rows) == sum(len(p) + 1 for p in paths)
    keys = [(int(r[0]), float(r[1])) for r in rows]
    assert keys == sorted(keys)
    starts = [r for r in rows if float(r[1]) == 0.5]
    assert len(starts) == 5 and all(r[2] == "1" for r in starts)
    last = {}
    for r in rows:
        last[int(r[0])] = int(r[2])
    assert [last[i] for i in range(5)] == [p.terminal for p in paths]
