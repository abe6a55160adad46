"""Solution quality against epsilon on seeded instances.

For each instance and epsilon, prints the achieved ratio
(f(x) - f*) / (f_max - f*) from exhaustive enumeration next to the target.

    python3 scripts/eps_sweep.py --count 20 --seed 1
"""

import argparse
from fractions import Fraction

from ciqp import SolveConfig, solve
from ciqp.gen import SplitMix64, gen_general_delta, gen_interval, gen_network
from ciqp.oracle import enumerate_box, verify_eps

EPSILONS = [Fraction(1), Fraction(1, 2), Fraction(1, 4), Fraction(1, 10), Fraction(1, 100)]


def instances(count, seed):
    rng = SplitMix64(seed)
    makers = [
        lambda s: gen_network(3, 4, 2, 8, s, capacity=4),
        lambda s: gen_interval(3, 3, 2, 8, s, bound=12),
        lambda s: gen_general_delta(2, 3, 2, 2, 8, s, bound=15),
    ]
    for i in range(count):
        yield makers[i % len(makers)](rng.next_u64())


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=12)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--mode", choices=("general", "tu", "auto"), default="general")
    args = ap.parse_args()

    print(f"{'instance':<44}" + "".join(f"{'eps=' + str(e):>12}" for e in EPSILONS))
    worst = {e: Fraction(0) for e in EPSILONS}
    for inst in instances(args.count, args.seed):
        oracle = enumerate_box(inst)
        cells = []
        for eps in EPSILONS:
            rep = solve(inst, SolveConfig(epsilon=eps, mode=args.mode))
            v = verify_eps(inst, rep.solution, eps, result=oracle)
            ratio = v.ratio or Fraction(0)  # None when every feasible point ties
            worst[eps] = max(worst[eps], ratio)
            cells.append(f"{float(ratio):.3f}" + ("" if v.passed else "!"))
        print(f"{inst.name:<44}" + "".join(f"{c:>12}" for c in cells))
    print(f"{'worst ratio':<44}" + "".join(f"{float(worst[e]):>12.3f}" for e in EPSILONS))


if __name__ == "__main__":
    main()
