"""Ratio between the dual cones of p, q and of their chart meet, per monomial direction.

For weights (1, 2) and (2, 1) the intersection of the dual cones admits mass
min(p(z^a), q(z^a)) on z^a while the meet admits only (p∧q)(z^a); the ratio
grows geometrically along the diagonal direction.
"""

import argparse

from amgeo.functor import verify_salg_condition
from amgeo.seminorms import WeightedL1


def parse_weights(text: str) -> tuple[float, ...]:
    return tuple(float(x) for x in text.split(","))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=parse_weights, default=(1.0, 2.0))
    ap.add_argument("--q", type=parse_weights, default=(2.0, 1.0))
    ap.add_argument("--degree", type=int, default=16)
    args = ap.parse_args()
    v = verify_salg_condition(WeightedL1(args.p), WeightedL1(args.q), degree=args.degree)
    print(f"cones agree up to degree {args.degree}: {v.passed}")
    if v.worst_direction is not None:
        print(f"first discrepancy along {v.worst_direction}; largest ratio {v.worst_ratio:.6g}")
        for k, g in enumerate(v.growth, 1):
            print(f"  k={k}: ratio {g:.6g}")


if __name__ == "__main__":
    main()
