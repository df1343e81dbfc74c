"""Does mu([y^n, z]) depend on the choices made in building rho_ell?

Varies the north-south multiplier, the conjugator anchors, and replaces the
conjugator f by f g^k (which still satisfies [f g^k, g] = T_c).
"""

import argparse
from fractions import Fraction

from sclforge.circle import commutator, translation
from sclforge.ehn import NorthSouthMap, Representation, north_south_pair, pl_conjugator
from sclforge.qm import expand_source_power, mu_eval, onerelator_expression
from sclforge.words import A, B


def rep_for(ell, lam, anchor_frac, k):
    c = Fraction(ell - 1, ell)
    g = north_south_pair(c, lam)
    h = NorthSouthMap.from_map(g.map.shifted(c))
    q = g.attractor
    anchors = (q * anchor_frac, q + (1 - q) * anchor_frac)
    f = pl_conjugator(g, h, anchors) * g.map ** k
    assert commutator(f, g.map) == translation(c)
    return Representation({A: f, B: g.map})


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--ells", default="2,3,4")
    p.add_argument("--ns", default="1,2,3,4,6")
    args = p.parse_args()
    ns = [int(n) for n in args.ns.split(",")]
    print("ell,lambda,anchor,k," + ",".join(f"mu_n{n}" for n in ns))
    for ell in map(int, args.ells.split(",")):
        base = onerelator_expression(ell)
        lam0 = 2
        while Fraction(lam0 - 1, lam0 + 1) <= Fraction(ell - 1, ell):
            lam0 *= 2
        for lam in (lam0, 2 * lam0):
            for anchor in (Fraction(1, 2), Fraction(1, 5)):
                for k in (-2, 0, 3):
                    rep = rep_for(ell, lam, anchor, k)
                    vals = [mu_eval(rep, expand_source_power(base, "left", n), record_lifts=False).interval
                            for n in ns]
                    print(f"{ell},{lam},{anchor},{k}," + ",".join(str(v.center) if v.exact() else str(v) for v in vals))


if __name__ == "__main__":
    main()
