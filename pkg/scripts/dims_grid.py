"""Three-way dimension check over the admissible grid, under either e rule."""

import argparse
import time

from divcontract.lattice_dim import admissible_grid, check_lemma_dim


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--r2max", type=int, default=41)
    ap.add_argument("--imax", type=int, default=60)
    ap.add_argument("--e-rule", choices=("unit", "derive"), default="unit")
    args = ap.parse_args()
    t0 = time.perf_counter()
    grid = admissible_grid(args.r2max)
    bad = 0
    for p in grid:
        res = check_lemma_dim(p, args.imax, e_rule=args.e_rule)
        if not res.ok:
            bad += 1
            print(f"FAIL a={p.a} r1={p.r1} r2={p.r2}: {res.counterexample or res.note}")
    print(f"{len(grid) - bad}/{len(grid)} tuples pass ({args.e_rule} rule), {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
