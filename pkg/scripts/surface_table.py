"""ell * mu([y^n, z]) for x_n in the genus-ell surface group, cross-checked
against the explicit mixed-commutator expansion of x_n."""

import argparse

from sclforge.ehn import build_rep_onerelator
from sclforge.qm import surface_pullback_report


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--ells", default="2,3")
    p.add_argument("--n-max", type=int, default=20)
    args = p.parse_args()
    print("ell,n,value,direct,paper_bound,bavard_lower,cl_upper,exceeds")
    for ell in map(int, args.ells.split(",")):
        rep = build_rep_onerelator(ell)
        for r in surface_pullback_report(rep, ell, range(1, args.n_max + 1)):
            print(f"{ell},{r.n},{r.value.center},{r.direct.center},{r.paper_bound},{r.bavard_lower},"
                  f"{r.cl_upper},{r.bavard_lower > r.cl_upper}")


if __name__ == "__main__":
    main()
