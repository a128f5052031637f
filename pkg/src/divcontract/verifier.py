"""Condition checkers and the executable corpus of worked examples.

Each record is instantiated at a few admissible parameter values. Claimed
data (discrepancy, basket J, Table 3 row, local (b, e) data) is transcribed,
never inferred; the checks tie it to the weighted blow-up through the
(a/n)E^3 value of the claimed row and the chart quotients.
"""

import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import gcd

from .classification import NotClassified, basket_value, canon, match_type, row
from .exact_arith import DomainError, json_rational, mod_inverse, residue
from .germ import Poly, format_poly, QuotientGerm, SemiInvarianceError, parse_germ
from .riemann_roch import make_entry, solve_Ec2
from .toric_blowup import (
    UndefinedOrder,
    canonical_type,
    cdv_multiplicity_ok,
    chart,
    discrepancy,
    e_cubed,
    in_lattice,
    is_primitive,
    leading_form,
    leading_form_reducible,
    weighted_order,
)


@dataclass(frozen=True)
class ExampleInstance:
    id: str
    germ: QuotientGerm
    weights: tuple
    claimed_discrepancy: Fraction
    claimed_type: int
    claimed_J: tuple
    a: int
    n: int
    basket: tuple  # BasketEntry data used by the Riemann-Roch checks
    subtype: str = ""
    cAn: tuple = None  # (n, b, a, r1, r2) for cA/n records

    def profile(self):
        e3 = Fraction(self.n, self.a) * basket_value(self.claimed_J)
        return solve_Ec2(self.a, self.n, self.basket, e3)


@dataclass(frozen=True)
class ExampleRecord:
    id: str
    params: tuple
    build: object = field(repr=False, compare=False)
    note: str = ""

    def instances(self):
        return [self.build(*p) if isinstance(p, tuple) else self.build(p) for p in self.params]


def _F(*xs):
    return tuple(Fraction(x) for x in xs)


def _unit_entry(r, b):
    # v = 1 with the given b
    return make_entry(r, b % r, mod_inverse(b, r))


def _solve_e(r, b, v, a, n):
    es = [e for e in range(1, r + 1) if (n - a * e) % r == 0 and (e * b) % r == v]
    if len(es) != 1:
        raise DomainError(f"no unique e for r={r}, b={b}, v={v}, a={a}, n={n}: {es}")
    return make_entry(r, b, es[0])


def _ex54():
    g = parse_germ("quotient 1/2(1,1,1,0);\neq x1^2 + x4^3 + x2*x3^3*x4 + x2^4 + x3^8;")
    return ExampleInstance(
        "5.4", g, _F(4, 2, 1, 3), Fraction(1), 8, canon([(6, 2), (2, 1)]), 2, 2,
        (make_entry(6, 5, 4), make_entry(2, 1, 1)),
    )


def _ex55(rp):
    g = parse_germ(
        f"quotient 1/2(1,1,1,0,0);\neq x1^2 + x4*x5 + x3^{rp + 1};\n"
        f"eq x2^2 + x3^{rp - 1} + x4^{rp - 1} + x5;"
    )
    return ExampleInstance(
        f"5.5[r'={rp}]", g, _F(Fraction(rp + 1, 2), Fraction(rp - 1, 2), 1, 1, rp),
        Fraction(1), 14, ((2 * rp, 2),), 2, 2, (_solve_e(2 * rp, rp + 2, 2, 2, 2),),
    )


def _ex561():
    g = parse_germ("quotient 1/2(1,1,1,0);\neq x1^2 + x2*x3*x4 + x2^4 + x3^4 + x4^4;")
    q = _solve_e(4, 3, 1, 2, 2)
    return ExampleInstance(
        "5.6(1)", g, _F(2, 2, 1, 1), Fraction(1), 15, ((4, 1), (4, 1)), 2, 2, (q, q), "15'a"
    )


def _ex562(rp):
    g = parse_germ(
        f"quotient 1/2(1,1,1,0);\neq x1^2 + x2^2*x4 + x3^{2 * rp} + x4^{2 * rp};"
    )
    q = _solve_e(2 * rp, rp + 1, 1, 2, 2)
    return ExampleInstance(
        f"5.6(2)[r'={rp}]", g, _F(rp, rp, 1, 1), Fraction(1), 15,
        ((2 * rp, 1), (2 * rp, 1)), 2, 2, (q, q), "15'a",
    )


def _ex571(rp):
    g = parse_germ(
        f"quotient 1/2(1,1,1,0,0);\neq x1^2 + x4*x5 + x2*x3^{(rp + 3) // 4};\n"
        f"eq x2^2 + x3^{(rp - 1) // 2} + x4^{rp - 1} + x5;"
    )
    return ExampleInstance(
        f"5.7(1)[r'={rp}]", g, _F(Fraction(rp + 1, 2), Fraction(rp - 1, 2), 2, 1, rp),
        Fraction(2), 14, ((2 * rp, 2),), 4, 2, (_solve_e(2 * rp, rp + 4, 2, 4, 2),),
    )


def _ex572(rp):
    g = parse_germ(
        f"quotient 1/2(1,1,1,0,0);\neq x1^2 + x4*x5 + x3^{(rp + 1) // 2};\n"
        f"eq x2^2 + x1*x3^{(rp - 3) // 4} + x4^{rp - 1} + x5;"
    )
    return ExampleInstance(
        f"5.7(2)[r'={rp}]", g, _F(Fraction(rp + 1, 2), Fraction(rp - 1, 2), 2, 1, rp),
        Fraction(2), 14, ((2 * rp, 2),), 4, 2, (_solve_e(2 * rp, rp + 4, 2, 4, 2),),
    )


def _ex711(a, r):
    g = parse_germ(
        f"quotient 1/2(1,1,1,0);\neq x1^2 + x2^2*x4 + x3^{2 * (r + 1) // a} + x4^{r + 1};"
    )
    basket = tuple(_unit_entry(rk, (a + rk) // 2) for rk in (r, r + 2))
    return ExampleInstance(
        f"7.1(1)[a={a},r={r}]", g, _F(Fraction(r + 2, 2), Fraction(r, 2), Fraction(a, 2), 1),
        Fraction(a, 2), 15, canon([(r, 1), (r + 2, 1)]), a, 2, basket, "15''",
    )


def _ex712(a, r):
    g = parse_germ(
        f"quotient 1/2(1,1,1,0,1);\neq x1^2 + x2*x5 + x4^{r + 2};\n"
        f"eq x2*x4 + x3^{(r + 2) // a} + x5;"
    )
    basket = tuple(_unit_entry(rk, (a + rk) // 2) for rk in (r, r + 4))
    return ExampleInstance(
        f"7.1(2)[a={a},r={r}]", g,
        _F(Fraction(r + 2, 2), Fraction(r, 2), Fraction(a, 2), 1, Fraction(r + 4, 2)),
        Fraction(a, 2), 15, canon([(r, 1), (r + 4, 1)]), a, 2, basket, "15''",
    )


def _err1(a, r):
    g = parse_germ(
        f"quotient 1/1(0,0,0,0);\neq x1^2 + x2^2*x4 + x3^{(2 * r + 1) // a} + x4^{2 * r + 1};"
    )
    basket = tuple(_unit_entry(rk, a) for rk in (r, r + 1))
    return ExampleInstance(
        f"E(1)[a={a},r={r}]", g, _F(r + 1, r, a, 1), Fraction(a), 15,
        canon([(r, 1), (r + 1, 1)]), a, 1, basket,
    )


def _err2(a, r):
    g = parse_germ(
        f"quotient 1/1(0,0,0,0,0);\neq x1^2 + x2*x5 + x4^{2 * r + 2};\n"
        f"eq x2*x4 + x3^{(r + 1) // a} + x5;"
    )
    basket = tuple(_unit_entry(rk, a) for rk in (r, r + 2))
    return ExampleInstance(
        f"E(2)[a={a},r={r}]", g, _F(r + 1, r, a, 1, r + 2), Fraction(a), 15,
        canon([(r, 1), (r + 2, 1)]), a, 1, basket,
    )


_CORPUS = (
    ExampleRecord("5.4", ((),), _ex54, "cE/2, No 8"),
    ExampleRecord("5.5", (3, 5, 7), _ex55, "cD/2, No 14, r' odd"),
    ExampleRecord("5.6(1)", ((),), _ex561, "cD/2, No 15'a"),
    ExampleRecord("5.6(2)", (2, 4, 6), _ex562, "cD/2, No 15'a, r' even"),
    ExampleRecord("5.7(1)", (9, 17, 25), _ex571, "cD/2, No 14, r' = 1 mod 8"),
    ExampleRecord("5.7(2)", (7, 15, 23), _ex572, "cD/2, No 14, r' = 7 mod 8"),
    ExampleRecord("7.1(1)", ((3, 5), (3, 11), (5, 9)), _ex711, "cD/2, No 15'', a | r+1"),
    ExampleRecord("7.1(2)", ((3, 7), (2, 4), (5, 13)), _ex712, "cD/2, No 15'', a | r+2"),
    ExampleRecord("E(1)", ((3, 4), (3, 7), (5, 7)), _err1, "cD, a | 2r+1"),
    ExampleRecord("E(2)", ((2, 3), (3, 5), (2, 7)), _err2, "cD, a | r+1"),
)


def corpus():
    return list(_CORPUS)


def corpus_instances():
    return [inst for rec in _CORPUS for inst in rec.instances()]


def find_record(example_id):
    for rec in _CORPUS:
        if rec.id == example_id:
            return rec
    raise KeyError(example_id)


def check_cAn(n, b, a, r1, r2, g_poly):
    """Conditions (a)-(d) on a cA/n germ x1*x2 + g(x3^n, x4) in 1/n(1,-1,b,0).

    g_poly is a Poly in two variables (x3, x4) or in four with only x3, x4.
    """
    if gcd(b, n) != 1:
        raise DomainError(f"b={b} must be coprime to n={n}")
    if isinstance(g_poly, str):
        germ = parse_germ(f"quotient 1/{n}(1,-1,{b},0);\neq x1*x2 + {g_poly};")
        g4 = germ.equations[0] + Poly(4, {(1, 1, 0, 0): -1})
    elif g_poly.nvars == 2:
        g4 = Poly(4, {(0, 0) + e: c for e, c in g_poly.terms.items()})
    else:
        g4 = g_poly
    if any(e[0] or e[1] for e in g4.terms):
        raise DomainError("g must only involve x3 and x4")
    if any(e[2] % n for e in g4.terms):
        raise DomainError("g must be a polynomial in x3^n and x4")
    checks = []
    ok_a = (a - b * r1) % n == 0 and (r1 + r2) % (a * n) == 0
    checks.append(("a", ok_a, f"a - b*r1 = {a - b * r1}, r1 + r2 = {r1 + r2}, a*n = {a * n}"))
    if (a - b * r1) % n == 0:
        c = (a - b * r1) // n
        checks.append(("b", gcd(c, r1) == 1, f"gcd({c}, {r1}) = {gcd(c, r1)}"))
    else:
        checks.append(("b", False, "(a - b*r1)/n is not an integer"))
    target = Fraction(r1 + r2, n)
    wts = (0, 0, Fraction(a, n), 1)
    try:
        order = weighted_order(g4, wts)
    except UndefinedOrder:
        order = None
    checks.append(("c", order == target, f"weighted order {order}, want {target}"))
    if (r1 + r2) % a == 0:
        k = (r1 + r2) // a
        checks.append(("d", (0, 0, k, 0) in g4.terms, f"x3^{k} coefficient {g4.terms.get((0, 0, k, 0), 0)}"))
    else:
        checks.append(("d", False, "(r1 + r2)/a is not an integer"))
    return {
        "checks": [{"name": nm, "pass": ok, "detail": det} for nm, ok, det in checks],
        "pass": all(ok for _, ok, _ in checks),
    }


def coprime_consequences(n, b, bprime, a, r1, r2):
    """Given b*b' = 1 mod n and conditions (a), (b) of the cA/n criterion, the
    three coprimality facts behind the chart computation."""
    hyp = (
        (b * bprime - 1) % n == 0
        and (a - b * r1) % n == 0
        and (r1 + r2) % (a * n) == 0
        and gcd((a - b * r1) // n, r1) == 1
    )
    if not hyp:
        return {"status": "hypotheses not met", "holds": None}
    concl = {
        "(a+b*r2)/n coprime to r2": gcd((a + b * r2) // n, r2) == 1
        if (a + b * r2) % n == 0 else False,
        "(r1-b'a)/n coprime to a": gcd((r1 - bprime * a) // n, a) == 1
        if (r1 - bprime * a) % n == 0 else False,
        "(r2+b'a)/n coprime to a": gcd((r2 + bprime * a) // n, a) == 1
        if (r2 + bprime * a) % n == 0 else False,
    }
    return {"status": "ok", "holds": all(concl.values()), "conclusions": concl}


def cAn_germ(n, b, a, r1, r2, extra=""):
    k = (r1 + r2) // a
    m = (r1 + r2) // n
    text = f"quotient 1/{n}(1,-1,{b},0);\neq x1*x2 + x3^{k} + x4^{m}{extra};"
    return parse_germ(text)


def cAn_weights(n, a, r1, r2):
    return (Fraction(r1, n), Fraction(r2, n), Fraction(a, n), Fraction(1))


def cAn_printed_charts(n, b, a, r1, r2):
    """The four closed-form chart types, as printed."""
    bp = mod_inverse(b, n) if n > 1 else 0
    m1, m2 = r1, r2
    return {
        1: (m1, (-1, (m1 + m2) // n, (-b * m1 + a) // n, 1)),
        2: (m2, ((m1 + m2) // n, -1, (b * m2 + a) // n, 1)),
        3: (a, ((-bp * a + m1) // n, (bp * a + m2) // n, -1, 1)),
        4: (n, (1, -1, a, 0)),
    }


def cAn_instance(n, b, a, r1, r2):
    """An ExampleInstance for the cA/n germ with the theorem's weights.

    The basket is read off the printed charts U1, U2: after removing the
    eliminated coordinate they are 1/r_k(1, -1, b_k) with
    b_1 = (a - b r1)/n and b_2 = (a + b r2)/n.
    """
    g = cAn_germ(n, b, a, r1, r2)
    basket = []
    for r, bk in ((r1, (a - b * r1) // n), (r2, (a + b * r2) // n)):
        es = [e for e in range(1, r + 1) if (n - a * e) % r == 0 and (e * bk) % r in (1, r - 1)]
        if len(es) != 1:
            raise DomainError(f"no unique e at index {r}")
        basket.append(make_entry(r, bk % r, es[0]))
    J = canon([(r1, 1), (r2, 1)])
    return ExampleInstance(
        f"cA/{n}[b={b},a={a},r1={r1},r2={r2}]", g, cAn_weights(n, a, r1, r2),
        Fraction(a, n), match_type(J), J, a, n, tuple(basket), cAn=(n, b, a, r1, r2),
    )


def random_cAn(rng, rmax=60, nmax=6):
    """A random tuple (n, b, a, r1, r2) satisfying conditions (a) and (b)."""
    while True:
        n = rng.randint(1, nmax)
        b = rng.choice([x for x in range(1, n + 1) if gcd(x, n) == 1]) % n if n > 1 else 0
        a = rng.randint(1, 8)
        r1 = rng.randint(1, rmax)
        if (a - b * r1) % n or gcd((a - b * r1) // n, r1) != 1:
            continue
        r2s = [r2 for r2 in range(1, rmax + 1) if (r1 + r2) % (a * n) == 0]
        if not r2s:
            continue
        if n > 1 and gcd(b, n) != 1:
            continue
        return n, b, a, r1, rng.choice(r2s)


def _entry_type(q):
    return (q.r, (1, -1, q.b))


def _check(name, ok, detail):
    return {"name": name, "pass": bool(ok), "detail": detail}


def germ_check(germ):
    """Semi-invariance holds by construction; test the origin of X itself."""
    ok = cdv_multiplicity_ok(germ.equations)
    return _check(
        "germ terminal at origin (necessary)", ok,
        "smooth or multiplicity 2 with embedding dimension 4" if ok
        else "origin has multiplicity > 2 or embedding dimension > 4",
    )


def verify_instance(inst):
    g, w = inst.germ, inst.weights
    checks = [germ_check(g)]
    lattice = in_lattice(w, g)
    prim = lattice and is_primitive(w, g)
    checks.append(_check(
        "weights primitive", prim,
        "weights lie in N and are primitive" if prim else
        ("weights are not in N" if not lattice else "weights are divisible in N"),
    ))
    if not lattice:
        return _report(inst.id, checks)
    disc = discrepancy(g, w)
    checks.append(_check(
        "discrepancy", disc == inst.claimed_discrepancy,
        f"computed {json_rational(disc)}, claimed {json_rational(inst.claimed_discrepancy)}",
    ))
    slope_e3 = disc * e_cubed(g, w)
    want = basket_value(inst.claimed_J)
    checks.append(_check(
        "(a/n)E^3 vs Table 3", slope_e3 == want,
        f"computed {json_rational(slope_e3)}, row value of J {json_rational(want)}",
    ))
    try:
        t = match_type(inst.claimed_J)
        ok = t == inst.claimed_type
        det = f"J matches row {t}, claimed {inst.claimed_type}"
    except NotClassified as exc:
        ok, det = False, str(exc)
    checks.append(_check("J matches claimed row", ok, det))
    if inst.cAn is not None:
        n, b, a, r1, r2 = inst.cAn
        rep = check_cAn(n, b, a, r1, r2, g.equations[0] + Poly(4, {(1, 1, 0, 0): -1}))
        checks.append(_check("cA/n conditions", rep["pass"], str(rep["checks"])))
    checks.append(exceptional_check(g, w))
    checks.append(_chart_check(inst))
    return _report(inst.id, checks)


def exceptional_check(germ, weights):
    bad = [
        format_poly(lf) for lf in (leading_form(eq, weights) for eq in germ.equations)
        if leading_form_reducible(lf)
    ]
    return _check(
        "exceptional divisor irreducible (necessary)", not bad,
        "no leading form factors" if not bad else "leading form factors over C: " + "; ".join(bad),
    )


def _chart_check(inst):
    known = {canonical_type(*_entry_type(q), permute=True) for q in inst.basket}
    notes, ok = [], True
    for i in range(1, inst.germ.dim + 1):
        rep = chart(inst.germ, inst.weights, i)
        if not rep.origin_on_strict_transform:
            continue
        if not rep.smooth_at_origin:
            if rep.terminal_quotient is False:
                ok = False
                notes.append(f"U{i}: hyperquotient point of multiplicity > 2 or embedding dimension > 4")
            else:
                notes.append(f"U{i}: hyperquotient point, not decided")
            continue
        s = rep.surface_type
        if not s.cyclic:
            ok = False
            notes.append(f"U{i}: non-cyclic group of order {s.order}")
            continue
        if s.order == 1:
            notes.append(f"U{i}: smooth")
            continue
        good = rep.terminal_quotient and canonical_type(s.order, s.weights, permute=True) in known
        ok = ok and good
        notes.append(f"U{i}: {s.text()} {'terminal, in basket' if good else 'NOT a basket point of terminal type'}")
    return _check("chart quotients terminal", ok, "; ".join(notes) or "no chart origin on Z")


# hypotheses of the blow-up criterion that are not decided here
ASSUMPTIONS = (
    "the exceptional locus F of Z is an irreducible reduced 2-cycle (only factoring leading forms are detected)",
    "dim(Sing of the ambient chart quotient meeting Z) <= 1",
    "hyperquotient points of Y are terminal (only the multiplicity test is applied)",
)


def _report(id_, checks):
    return {
        "id": id_,
        "checks": checks,
        "verdict": "pass" if all(c["pass"] for c in checks) else "fail",
        "assumptions": list(ASSUMPTIONS),
    }


def verify_example(record):
    if isinstance(record, ExampleInstance):
        return verify_instance(record)
    reports = [verify_instance(inst) for inst in record.instances()]
    return {
        "id": record.id,
        "instances": reports,
        "verdict": "pass" if all(r["verdict"] == "pass" for r in reports) else "fail",
    }


# mutation testing

def mutation_sites(inst):
    sites = [("weight", k) for k in range(len(inst.weights))]
    for q, eq in enumerate(inst.germ.equations):
        for exp in eq.monomials():
            for k in range(len(exp)):
                sites.append(("exponent", q, exp, k))
    return sites


def apply_mutation(inst, site, delta):
    """Mutated instance, or None when the mutation leaves the domain."""
    if site[0] == "weight":
        w = list(inst.weights)
        w[site[1]] += delta
        if w[site[1]] <= 0:
            return None
        return replace(inst, weights=tuple(w))
    _, q, exp, k = site
    if exp[k] + delta < 0:
        return None
    eqs = list(inst.germ.equations)
    terms = dict(eqs[q].terms)
    c = terms.pop(exp)
    new = list(exp)
    new[k] += delta
    new = tuple(new)
    terms[new] = terms.get(new, 0) + c
    eqs[q] = Poly(eqs[q].nvars, terms)
    try:
        germ = QuotientGerm(inst.germ.n, inst.germ.action, tuple(eqs))
    except SemiInvarianceError:
        return "not semi-invariant"
    except DomainError:
        return None
    return replace(inst, germ=germ)


def weight_equivalent(orig, mutant):
    """Same weights and same leading forms, so every weight-based check agrees."""
    if mutant.weights != orig.weights:
        return False
    return all(
        leading_form(e1, orig.weights) == leading_form(e2, orig.weights)
        for e1, e2 in zip(orig.germ.equations, mutant.germ.equations)
    )


def mutation_study(per_record=20, seed=0):
    rng = random.Random(seed)
    rows = []
    for rec in _CORPUS:
        insts = rec.instances()
        done = 0
        while done < per_record:
            inst = rng.choice(insts)
            site = rng.choice(mutation_sites(inst))
            delta = rng.choice((-1, 1))
            mut = apply_mutation(inst, site, delta)
            if mut is None:
                continue
            done += 1
            if mut == "not semi-invariant":
                rows.append({"id": inst.id, "site": _site_text(site), "delta": delta,
                             "caught": True, "by": "germ not semi-invariant", "equivalent": False})
                continue
            rep = verify_instance(mut)
            failed = [c["name"] for c in rep["checks"] if not c["pass"]]
            rows.append({
                "id": inst.id, "site": _site_text(site), "delta": delta,
                "caught": bool(failed), "by": ", ".join(failed),
                "equivalent": (not failed) and weight_equivalent(inst, mut),
            })
    return rows


def _site_text(site):
    if site[0] == "weight":
        return f"weight x{site[1] + 1}"
    _, q, exp, k = site
    from .germ import format_monomial
    return f"eq{q + 1} monomial {format_monomial(exp) or '1'} exponent of x{k + 1}"
