"""Numeric mu(x_n) under the regular-polygon Fuchsian representation, with an affine fit."""

import argparse
import json

from sclforge.fuchsian import mu_numeric_report


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--ell", type=int, default=2)
    p.add_argument("--n-max", type=int, default=20)
    p.add_argument("--iters", type=int, default=256)
    args = p.parse_args()
    rows, fit = mu_numeric_report(args.ell, range(1, args.n_max + 1), args.iters)
    for r in rows:
        print(f"{r.n},{r.mu:.12g},{r.uncertainty:.3g}")
    print(json.dumps(fit.to_dict()))


if __name__ == "__main__":
    main()
