"""Mutation catch rates over several seeds, with the uncaught mutants listed."""

import argparse

from divcontract.verifier import mutation_study


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, default=8)
    ap.add_argument("--per-record", type=int, default=20)
    ap.add_argument("--show", action="store_true", help="list uncaught mutants")
    args = ap.parse_args()
    for seed in range(args.seeds):
        rows = mutation_study(args.per_record, seed)
        missed = [r for r in rows if not r["caught"]]
        equiv = sum(r["equivalent"] for r in missed)
        print(f"seed {seed}: caught {len(rows) - len(missed)}/{len(rows)}, "
              f"uncaught {len(missed)} ({equiv} weight-equivalent)")
        if args.show:
            for r in missed:
                tag = "equivalent" if r["equivalent"] else "leading form changed"
                print(f"    {r['id']}: {r['site']} {r['delta']:+d}  [{tag}]")


if __name__ == "__main__":
    main()
