"""Distribution of ||a||_op / w(a) over random matrices.

The ratio lies in [1, 2] for every matrix; the script reports how close
random samples get to the nilpotent extreme.
"""

import argparse
from dataclasses import dataclass

import numpy as np

from amgeo.algebra import MatrixModel
from amgeo.seminorms import ScaledOperatorNorm
from amgeo.states import E, bohnenblust_karlin_check


@dataclass(frozen=True)
class SurveyConfig:
    sizes: tuple[int, ...] = (2, 4, 8)
    samples: int = 1000
    seed: int = 0


def survey(cfg: SurveyConfig) -> dict[int, np.ndarray]:
    out = {}
    for n in cfg.sizes:
        rng = np.random.default_rng([cfg.seed, n])
        p = ScaledOperatorNorm(n)
        ratios = [bohnenblust_karlin_check(MatrixModel(n).random_element(rng), p).ratio for _ in range(cfg.samples)]
        out[n] = np.array(ratios)
    return out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    cfg = SurveyConfig(samples=args.samples, seed=args.seed)
    print(f"{'n':>3} {'min':>8} {'median':>8} {'max':>8}   bound e = {E:.6f}")
    for n, r in survey(cfg).items():
        print(f"{n:>3} {r.min():8.4f} {np.median(r):8.4f} {r.max():8.4f}")


if __name__ == "__main__":
    main()
