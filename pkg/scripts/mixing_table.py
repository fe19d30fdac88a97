#!/usr/bin/env python3
"""Tabulate mixing-time bounds for the chip-adding walk across levels.

For each level the table shows the vertex count, the spectral gap bound,
and the analytic lower/upper bounds on the mixing time.  For levels whose
group fits under the enumeration cap the exact total-variation mixing time
is computed by evolving the full distribution; optionally a Monte Carlo
estimate of the distinguishing-statistic decay is appended.

Example:
    python scripts/mixing_table.py --max-level 8 --exact-levels 1 --trials 2000
"""

import argparse

from gasketpile import markov
from gasketpile.gasket import build_gasket


def exact_mixing_time(level: int) -> int | None:
    """First t with TV distance <= 1/4, or None when the group is too big."""
    graph = build_gasket(level)
    horizon = markov.upper_bound_t(level)
    curve = markov.exact_tv_curve(graph, horizon)
    if curve is None:
        return None
    for t, value in enumerate(curve):
        if value <= 0.25:
            return t
    return None


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-level", type=int, default=8)
    parser.add_argument("--exact-levels", type=int, default=1,
                        help="compute the exact mixing time up to this level")
    parser.add_argument("--trials", type=int, default=0,
                        help="Monte Carlo trials for the decay estimates (0 = skip)")
    parser.add_argument("--seed", type=int, default=None)
    args = parser.parse_args()

    header = f"{'level':>5} {'vertices':>9} {'gap<=':>10} {'t_lower':>8} {'t_upper':>8} {'t_exact':>8}"
    print(header)
    print("-" * len(header))
    for level in range(1, args.max_level + 1):
        report = markov.mixing_report(level)
        exact = exact_mixing_time(level) if level <= args.exact_levels else None
        print(
            f"{level:>5} {report.n_vertices:>9} {report.spectral_gap_upper:>10.6f} "
            f"{report.lower_bound_t:>8} {report.upper_bound_t:>8} "
            f"{exact if exact is not None else '-':>8}"
        )

    if args.trials:
        print()
        print(f"decay of the distinguishing statistic, {args.trials} trials per point")
        print(f"{'level':>5} {'t':>4} {'mean':>10} {'stderr':>10} {'predicted':>10}")
        for level in (2, 3):
            for t in (1, 5, 10, 25):
                est = markov.estimate_chi_decay(level, t, args.trials, seed=args.seed)
                print(
                    f"{level:>5} {t:>4} {est.mean:>10.5f} {est.stderr:>10.5f} "
                    f"{est.expected:>10.5f}"
                )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
