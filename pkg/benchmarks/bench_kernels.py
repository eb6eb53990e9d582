"""Time the compiled kernels against the pure-Python fallback.

Run ``python benchmarks/bench_kernels.py`` after building the package. Both
backends are imported directly, so the ``SKELLAM_ODDS_PURE_PYTHON`` switch
does not matter here. Each row reports the best of ``--repeat`` runs.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from skellam_odds import _fallback

try:
    from skellam_odds import _kernels
except ImportError:
    _kernels = None


def _cases(n_paths: int, n_path_objects: int):
    def pmf_grid(mod):
        grid = (0.1, 0.5, 1.0, 2.0, 5.0, 10.0)
        return lambda: [mod.skellam_pmf_pos(x, a, b) for a in grid for b in grid for x in range(-20, 21)]

    def bessel(mod):
        return lambda: [mod.bessel_i(n, x) for n in range(30) for x in (0.5, 2.0, 8.0, 20.0)]

    def sample_paths(mod):
        def run():
            for i in range(n_path_objects):
                mod.sample_path(2.33, 1.44, 0.0, mod.derive_seed(7, i))

        return run

    def terminal(mod):
        return lambda: mod.terminal_diffs(2.33, 1.44, 7, n_paths)

    return [
        ("skellam_pmf_pos, 1476 points", pmf_grid),
        ("bessel_i, 120 points", bessel),
        (f"sample_path x {n_path_objects}", sample_paths),
        (f"terminal_diffs, {n_paths} paths", terminal),
    ]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--n-paths", type=int, default=1_000_000)
    parser.add_argument("--n-path-objects", type=int, default=20_000)
    args = parser.parse_args()

    if _kernels is None:
        print("compiled extension not built; timing the fallback only")
    assert _kernels is None or np.array_equal(
        _kernels.terminal_diffs(2.33, 1.44, 7, 1000), _fallback.terminal_diffs(2.33, 1.44, 7, 1000)
    ), "backends disagree"

    print(f"{'kernel':36s} {'python (s)':>12s} {'cython (s)':>12s} {'speed-up':>9s}")
    for name, make in _cases(args.n_paths, args.n_path_objects):
        t_py = min(timeit.repeat(make(_fallback), number=1, repeat=args.repeat))
        if _kernels is None:
            print(f"{name:36s} {t_py:12.4f} {'-':>12s} {'-':>9s}")
            continue
        t_cy = min(timeit.repeat(make(_kernels), number=1, repeat=args.repeat))
        print(f"{name:36s} {t_py:12.4f} {t_cy:12.4f} {t_py / t_cy:8.1f}x")


if __name__ == "__main__":
    main()
