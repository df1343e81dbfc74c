"""mu([y^n, z]) for the one-relator groups, both evaluation routes, as CSV."""

import argparse
import csv
import sys
import time

from sclforge.ehn import build_rep_onerelator
from sclforge.qm import sequence_report


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--ells", default="2,3,4,5")
    p.add_argument("--n-max", type=int, default=50)
    p.add_argument("--iters", type=int, default=1024)
    args = p.parse_args()
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["ell", "n", "mu_A", "radius_A", "mu_B", "radius_B", "bavard_lower", "seconds"])
    for ell in map(int, args.ells.split(",")):
        rep = build_rep_onerelator(ell)
        for n in range(1, args.n_max + 1):
            t0 = time.perf_counter()
            r, = sequence_report(rep, ell, [n], args.iters)
            w.writerow([ell, n, float(r.mu.center), float(r.mu.radius), float(r.mu_closed.center),
                        float(r.mu_closed.radius), float(r.bavard_lower), f"{time.perf_counter() - t0:.4f}"])


if __name__ == "__main__":
    main()
