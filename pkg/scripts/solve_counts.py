"""Subproblem solves used by the solver against the (3 + g)^k ceiling.

    python3 scripts/solve_counts.py --seed 3
"""

import argparse
from fractions import Fraction

from ciqp import SolveConfig, solve
from ciqp.gen import SplitMix64, gen_general_delta, gen_interval
from ciqp.solver import solve_count_bound


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=3)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()
    rng = SplitMix64(args.seed)

    print(f"{'family':<10}{'n':>3}{'k':>3}{'delta':>6}{'eps':>7}{'mode':>9}"
          f"{'used':>8}{'bound':>10}{'boxes':>7}{'splits':>7}")
    for family in ("interval", "general"):
        for k in (1, 2, 3):
            for eps in (Fraction(1), Fraction(1, 10)):
                for _ in range(args.repeats):
                    seed = rng.next_u64()
                    if family == "interval":
                        inst = gen_interval(2, 3, k, 6, seed, bound=20)
                    else:
                        inst = gen_general_delta(3, 3, k, 2, 6, seed, bound=20)
                    modes = ("general", "tu") if family == "interval" else ("general",)
                    for mode in modes:
                        rep = solve(inst, SolveConfig(epsilon=eps, mode=mode))
                        s = rep.stats
                        used = s.ilp_solves if mode == "general" else s.lp_solves
                        bound = solve_count_bound(k, inst.num_vars, rep.delta, eps, mode)
                        print(f"{family:<10}{inst.num_vars:>3}{k:>3}{rep.delta:>6}{str(eps):>7}"
                              f"{mode:>9}{used:>8}{bound:>10}{s.boxes_solved:>7}"
                              f"{s.subproblems_created:>7}")


if __name__ == "__main__":
    main()
