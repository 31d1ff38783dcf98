"""Print predicted vs measured costs for the discrete and normal samplers.

    python3 scripts/cost_table.py --n 200000 --seed 7
"""

import argparse

from exactgauss import oracle
from exactgauss.discrete import SIGMA_ONE
from exactgauss.harness.measure import measure_dplus, measure_normal


def rows(n: int, seed: int):
    for variant, name in (("karney", "dplus_karney_per_sample"), ("improved", "dplus_improved_per_sample")):
        run = measure_dplus(variant, SIGMA_ONE, n, seed)
        yield f"D+ {variant} coins/sample", oracle.lookup(name).value, run.draws / run.n

    karney = measure_normal("karney", seed, n=n)
    improved = measure_normal("improved", seed, n=n)
    yield "x test deviates, selector coin", oracle.step4_cost_karney(), karney.step4_per_run
    yield "x test deviates, split coin", oracle.step34_cost_improved(), improved.step4_per_run
    yield "k proposals/sample", oracle.rejection_rate(), improved.mean_attempts


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=100_000)
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args()

    print(f"{'quantity':34s} {'predicted':>10s} {'measured':>10s} {'rel.err':>8s}")
    for label, predicted, measured in rows(args.n, args.seed):
        print(f"{label:34s} {predicted:10.5f} {measured:10.5f} {measured / predicted - 1:+8.2%}")


if __name__ == "__main__":
    main()
