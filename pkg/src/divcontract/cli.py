"""Command-line front end.

Exit codes: 0 success, 1 a verification or consistency failure, 2 bad usage
or unparsable input. With --json exactly one JSON document goes to stdout.
"""

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import classification, covering, lattice_dim, riemann_roch, toric_blowup, verifier
from .exact_arith import DomainError, json_rational
from .germ import parse_germ, parse_weights


class UsageError(Exception):
    pass


_fr = json_rational


def _J(J):
    return [list(p) for p in J]


def load_schema(name):
    from importlib.resources import files

    return json.loads(files("divcontract").joinpath("schemas", f"{name}.schema.json").read_text())


def load_golden(name):
    from importlib.resources import files

    return json.loads(files("divcontract").joinpath("golden", f"{name}.json").read_text())


GOLDEN_RMAX = 64


def golden_documents():
    """Fresh versions of the shipped golden files, keyed by file stem."""
    return {
        "table3": baskets_report(GOLDEN_RMAX)[0],
        "table4": covers_report(GOLDEN_RMAX)[0],
        "table5": table5_document(),
    }


# report builders; each returns (document, exit code)

def baskets_report(rmax):
    grouped = classification.table3_listing(rmax)
    types = []
    for pat in classification.table3():
        types.append({
            "no": pat.type_no,
            "pattern": pat.text(),
            "value": pat.value_text,
            "baskets": [{"J": _J(J), "value": _fr(v)} for J, v in grouped[pat.type_no]],
        })
    return {"rmax": rmax, "count": sum(len(t["baskets"]) for t in types), "types": types}, 0


def _rejections():
    # No 1 over p = 2: the index divides, yet every ramification choice is off the list
    out = []
    J = classification.row(1).instantiate()
    attempts = covering.cover_attempts(J, 2)
    out.append({
        "source_no": 1,
        "J": _J(J),
        "p": 2,
        "attempts": [{"J_prime": _J(Jp), "reason": why} for Jp, (_, why) in sorted(attempts.items())],
        "accepted": any(t is not None for t, _ in attempts.values()),
    })
    return out


def _tuple_list(items):
    return [{"r": r, "J_prime": _J(Jp), "d": list(dv)} for r, Jp, dv in sorted(items)]


def table5_document(r_max=12, an_max=24):
    rep = covering.table5_report(r_max, an_max)
    rows = []
    for (no, p), info in sorted(rep.items()):
        rows.append({
            "source_no": no,
            "p": p,
            "printed": _tuple_list(info["printed"]),
            "realized": _tuple_list(info["realized"]),
            "realized_min_discrepancy": _tuple_list(info["realized_min_discrepancy"]),
            "mismatches": len(info["mismatches"]),
            "hits": info["hits"],
        })
    omitted = covering.omitted_rows_excluded(r_max)
    return {
        "r_max": r_max,
        "an_max": an_max,
        "rows": rows,
        "omitted_rows": [{"source_no": no, "p": p, "excluded": ok} for (no, p), ok in sorted(omitted.items())],
    }


def covers_report(rmax, table5=False):
    rows = covering.enumerate_prime_covers(rmax)
    doc = {
        "rmax": rmax,
        "rows": [r.as_dict() for r in rows],
        "rejections": _rejections(),
    }
    code = 0
    if table5:
        doc["table5"] = table5_document()
        if any(r["mismatches"] for r in doc["table5"]["rows"]):
            code = 1
    return doc, code


def _load_profile(path):
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}") from None
    return riemann_roch.ContractionProfile.from_json(data)


def rr_command(profile_path, radius):
    rep = riemann_roch.rr_report(_load_profile(profile_path), radius)
    return rep, 0 if rep["integral"] else 1


def blowup_report(germ, weights):
    rep = toric_blowup.blowup(germ, weights)
    return {
        "weights": [_fr(w) for w in rep.weights],
        "primitive": rep.primitive,
        "orders": [_fr(o) for o in rep.orders],
        "discrepancy": _fr(rep.discrepancy),
        "E3": _fr(rep.e_cubed),
        "leading_forms": toric_blowup.leading_forms(germ, weights),
        "charts": [c.as_dict() for c in rep.charts],
    }, 0


def blowup_command(germ_path, weights_text):
    try:
        text = Path(germ_path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {germ_path}: {exc.strerror}") from None
    germ = parse_germ(text)
    weights = parse_weights(weights_text)
    return blowup_report(germ, weights)


def verify_report(example=None, mutations=0, seed=0):
    if example is None:
        records = verifier.corpus()
    else:
        try:
            records = [verifier.find_record(example)]
        except KeyError:
            ids = ", ".join(r.id for r in verifier.corpus())
            raise UsageError(f"unknown example {example!r}; known: {ids}") from None
    reports = [verifier.verify_example(r) for r in records]
    doc = {
        "records": reports,
        "verdict": "pass" if all(r["verdict"] == "pass" for r in reports) else "fail",
    }
    if mutations:
        rows = verifier.mutation_study(mutations, seed)
        doc["mutations"] = {
            "seed": seed,
            "per_record": mutations,
            "sampled": len(rows),
            "caught": sum(r["caught"] for r in rows),
            "uncaught_equivalent": sum(r["equivalent"] for r in rows),
            "rows": rows,
        }
    return doc, 0 if doc["verdict"] == "pass" else 1


def dims_report(a, r1, r2, imax, override=False):
    p = lattice_dim.DimParams(a, r1, r2)
    res = lattice_dim.check_lemma_dim(p, imax, override=override)
    doc = res.as_dict()
    doc["imax"] = _fr(imax)
    doc["admissible"] = lattice_dim.admissible(p)
    return doc, 0 if res.ok else 1


# text rendering

def _text_baskets(doc):
    lines = [f"admissible baskets with r <= {doc['rmax']}: {doc['count']}"]
    for t in doc["types"]:
        lines.append(f"No {t['no']:2d}  {t['pattern']:<28} (a/n)E^3 = {t['value']}  [{len(t['baskets'])} instances]")
        for b in t["baskets"][:6]:
            J = ", ".join(f"({r},{v})" for r, v in b["J"]) or "{}"
            lines.append(f"        {J} -> {b['value']}")
        if len(t["baskets"]) > 6:
            lines.append(f"        ... {len(t['baskets']) - 6} more")
    return "\n".join(lines)


def _text_covers(doc):
    lines = [f"prime covers with r <= {doc['rmax']}: {len(doc['rows'])} rows"]
    seen = set()
    for row in doc["rows"]:
        key = (row["source_no"], row["p"], row["target_no"])
        if key in seen:
            continue
        seen.add(key)
        J = ", ".join(f"({r},{v})" for r, v in row["J"])
        Jp = ", ".join(f"({r},{v})" for r, v in row["J_prime"]) or "{}"
        lines.append(f"No {row['source_no']:2d} p={row['p']}: {J} -> {Jp} (No {row['target_no']})")
    for rej in doc["rejections"]:
        lines.append(f"No {rej['source_no']} p={rej['p']}: rejected")
        for at in rej["attempts"]:
            Jp = ", ".join(f"({r},{v})" for r, v in at["J_prime"]) or "{}"
            lines.append(f"    {Jp}: {at['reason']}")
    if "table5" in doc:
        for row in doc["table5"]["rows"]:
            lines.append(
                f"Table 5 No {row['source_no']} p={row['p']}: {row['hits']} realizations, "
                f"{row['mismatches']} mismatches"
            )
    return "\n".join(lines)


def _text_rr(doc):
    lines = [f"E.c2 = {doc['e_c2']}", f"d(i,j) for |i|,|j| <= {doc['radius']}:"]
    for v in doc["values"]:
        lines.append(f"  d({v['i']},{v['j']}) = {v['d']}")
    lines.append("all integral" if doc["integral"] else f"NON-INTEGRAL at {doc['non_integral']}")
    return "\n".join(lines)


def _text_blowup(doc):
    lines = [
        f"weights {', '.join(str(w) for w in doc['weights'])} "
        f"({'primitive' if doc['primitive'] else 'not primitive'})",
        f"weighted orders {doc['orders']}",
        f"discrepancy {doc['discrepancy']}",
        f"E^3 {doc['E3']}",
    ]
    for c in doc["charts"]:
        q = c["quotient"]
        qt = f"1/{q['order']}({','.join(map(str, q['weights']))})" if q["cyclic"] else f"non-cyclic order {q['order']}"
        if not c["origin_on_strict_transform"]:
            state = "origin not on Z"
        elif c["smooth_at_origin"]:
            pt = c["point_type"]
            state = f"point 1/{pt['order']}({','.join(map(str, pt['weights']))}), terminal={c['terminal_quotient']}"
        else:
            state = f"hyperquotient point, multiplicity test {'ok' if c['multiplicity_ok'] else 'FAILED'}"
        lines.append(f"U{c['chart']}: {qt}; {state}")
    return "\n".join(lines)


def _text_verify(doc):
    lines = []
    for rec in doc["records"]:
        lines.append(f"{rec['id']}: {rec['verdict'].upper()}")
        for inst in rec["instances"]:
            lines.append(f"  {inst['id']}: {inst['verdict']}")
            for c in inst["checks"]:
                mark = "ok  " if c["pass"] else "FAIL"
                lines.append(f"    [{mark}] {c['name']}: {c['detail']}")
    if "mutations" in doc:
        m = doc["mutations"]
        lines.append(
            f"mutations (seed {m['seed']}): {m['caught']}/{m['sampled']} caught, "
            f"{m['uncaught_equivalent']} uncaught but weight-equivalent"
        )
    lines.append(f"overall: {doc['verdict'].upper()}")
    return "\n".join(lines)


def _text_dims(doc):
    head = f"(a, r1, r2) = ({doc['a']}, {doc['r1']}, {doc['r2']}), i <= {doc['imax']}"
    if not doc["admissible"]:
        head += " [inadmissible, override]"
    if doc["ok"]:
        return f"{head}: count_N = recursion = RR at {doc['points']} points"
    if doc["note"]:
        return f"{head}: not checked, {doc['note']}"
    ce = doc["counterexample"]
    return (
        f"{head}: MISMATCH at i={ce['i']}, j={ce['j']}: "
        f"count_N={ce['count_N']}, recursion={ce['recursion']}, RR={ce['rr']}"
    )


_TEXT = {
    "baskets": _text_baskets,
    "covers": _text_covers,
    "rr": _text_rr,
    "blowup": _text_blowup,
    "verify": _text_verify,
    "dims": _text_dims,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(2)


def _positive(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _half_integer(text):
    try:
        v = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if (2 * v).denominator != 1:
        raise argparse.ArgumentTypeError("must be a half-integer")
    return v


def build_parser():
    p = _Parser(prog="divcontract", description="Exact checks for three-fold divisorial contractions.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("baskets", help="enumerate baskets solving the classification equation")
    s.add_argument("--rmax", type=_positive, required=True)

    s = sub.add_parser("covers", help="prime covers between classification rows")
    s.add_argument("--rmax", type=_positive, required=True)
    s.add_argument("--table5", action="store_true", help="also run the local-class search")

    s = sub.add_parser("rr", help="Riemann-Roch values d(i,j) for a profile")
    s.add_argument("--profile", required=True, help="profile JSON file")
    s.add_argument("--radius", type=_positive, default=3)

    s = sub.add_parser("blowup", help="weighted blow-up of a quotient germ")
    s.add_argument("--germ", required=True, help="germ file")
    s.add_argument("--weights", required=True, help="e.g. 4,2,1,3 or 7/2,5/2,3/2,1")

    s = sub.add_parser("verify", help="verify the worked-example corpus")
    s.add_argument("--example", help="record id, e.g. 5.4 or 7.1(2)")
    s.add_argument("--mutations", type=int, default=0, metavar="K",
                   help="also sample K single-site mutations per record")
    s.add_argument("--seed", type=int, default=0, help="seed for the mutation sampler")

    s = sub.add_parser("dims", help="dimension lemma three-way check")
    s.add_argument("--a", type=_positive, required=True)
    s.add_argument("--r1", type=_positive, required=True)
    s.add_argument("--r2", type=_positive, required=True)
    s.add_argument("--imax", type=_half_integer, required=True)
    s.add_argument("--override", action="store_true", help="allow inadmissible parameters")

    for s in sub.choices.values():
        s.add_argument("--json", action="store_true", help="emit one JSON document")
    return p


def dispatch(args):
    cmd = args.command
    if cmd == "baskets":
        return baskets_report(args.rmax)
    if cmd == "covers":
        return covers_report(args.rmax, args.table5)
    if cmd == "rr":
        return rr_command(args.profile, args.radius)
    if cmd == "blowup":
        return blowup_command(args.germ, args.weights)
    if cmd == "verify":
        if args.mutations < 0:
            raise UsageError("--mutations must be non-negative")
        return verify_report(args.example, args.mutations, args.seed)
    if cmd == "dims":
        p = lattice_dim.DimParams(args.a, args.r1, args.r2)
        if not args.override and not lattice_dim.admissible(p):
            raise UsageError(
                f"inadmissible parameters: {lattice_dim.admissible(p, reason=True)} (use --override)"
            )
        return dims_report(args.a, args.r1, args.r2, args.imax, args.override)
    raise UsageError(f"unknown command {cmd}")


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        doc, code = dispatch(args)
    except (UsageError, DomainError) as exc:
        print(f"divcontract {args.command}: {exc}", file=sys.stderr)
        return 2
    if args.json:
        json.dump(doc, sys.stdout, indent=1)
        sys.stdout.write("\n")
    else:
        print(_TEXT[args.command](doc))
    return code


if __name__ == "__main__":
    sys.exit(main())
