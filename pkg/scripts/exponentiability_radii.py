"""Empirical convergence radii of exp(t·δ) applied to z, for three flows on C[z].

d/dz and z·d/dz generate entire flows; z²·d/dz has the flow z/(1 - t z),
whose Taylor series at z = 1 has radius 1.
"""

import argparse

from amgeo.algebra import Poly
from amgeo.reconstruction import DerivationRep, exponentiability_probe

Z = Poly.variable(1, 0)
FLOWS = {
    "d/dz (a = z^2, at 0)": (DerivationRep.partial(1, 0), (0,), Z * Z),
    "z d/dz (a = z, at 1)": (DerivationRep((Z,)), (1,), Z),
    "z^2 d/dz (a = z, at 1)": (DerivationRep((Z * Z,)), (1,), Z),
}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--terms", type=int, nargs="+", default=[8, 16, 32, 64, 128])
    args = ap.parse_args()
    print(f"{'flow':<26}" + "".join(f"{'K=' + str(k):>12}" for k in args.terms))
    for name, (delta, at, a) in FLOWS.items():
        radii = [exponentiability_probe(delta, at, a, K=k).radius for k in args.terms]
        print(f"{name:<26}" + "".join(f"{r:>12.6g}" for r in radii))


if __name__ == "__main__":
    main()
