"""Cyclic covers of baskets when a and n share a factor.

For a divisor m of gcd(a, n) the local class of a point Q is
d = (n/m - e a/m) mod r. The cover is etale over Q when d = 0 and
ramified otherwise; the preimage of Q consists of m/o points of index r/o,
where o is the order of d in Z/r.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import partial
from itertools import product
from math import gcd

from ._parallel import pmap
from .classification import (
    NotClassified,
    basket_value,
    canon,
    match_type,
    min_discrepancy_feasible,
    table3,
)
from .exact_arith import DomainError, a_term, b_term, residue
from .riemann_roch import BasketEntry, ContractionProfile, consistent_assignments, make_entry


def primes_upto(k):
    sieve = [True] * (k + 1)
    out = []
    for p in range(2, k + 1):
        if sieve[p]:
            out.append(p)
            for q in range(p * p, k + 1, p):
                sieve[q] = False
    return out


def _check_divides(a, n, p):
    if p < 1 or a % p or n % p:
        raise DomainError(f"{p} does not divide gcd({a}, {n})")


def d_cover(entry, a, n, p):
    _check_divides(a, n, p)
    return residue(n // p - entry.e * (a // p), entry.r)


def cover_consistent(entry, a, n, p):
    return residue(p * d_cover(entry, a, n, p), entry.r) == 0


def variation(rv, p, ramified):
    r, v = rv
    if not ramified:
        return [(r, v)] * p
    if r % p:
        raise DomainError(f"cannot ramify ({r},{v}) over p={p}")
    rp = r // p
    w = residue(v, rp)
    return [(rp, min(w, rp - w))]


def cover_entries(entries, a, n, m):
    """Full (r, b, v, e) data above each entry for the degree-m cover."""
    out = []
    for q in entries:
        d = d_cover(q, a, n, m)
        o = q.r // gcd(d, q.r)
        if m % o:
            raise DomainError(f"local class of {q} has order {o} not dividing {m}")
        rp = q.r // o
        if rp == 1:
            continue
        e = residue(q.e, rp) or rp
        out.extend([make_entry(rp, residue(q.b, rp), e)] * (m // o))
    return sorted(out)


def cover_profile(profile, p):
    _check_divides(profile.a, profile.n, p)
    return CoverStep(
        p=p,
        source=profile,
        ramified=tuple(d_cover(q, profile.a, profile.n, p) != 0 for q in profile.basket),
        target=ContractionProfile(
            profile.a // p,
            profile.n // p,
            tuple(cover_entries(profile.basket, profile.a, profile.n, p)),
            p * profile.e_cubed,
        ),
    )


@dataclass(frozen=True)
class CoverStep:
    p: int
    source: ContractionProfile
    ramified: tuple
    target: ContractionProfile


@dataclass(frozen=True, order=True)
class CoverRow:
    source_no: int
    source: tuple
    p: int
    target: tuple
    target_no: int

    def as_dict(self):
        return {
            "source_no": self.source_no,
            "J": [list(x) for x in self.source],
            "p": self.p,
            "J_prime": [list(x) for x in self.target],
            "target_no": self.target_no,
        }


def _image(J, p, ramify):
    out = []
    for rv, ram in zip(J, ramify):
        out.extend(x for x in variation(rv, p, ram) if x[0] > 1 and x[1] > 0)
    return canon(out)


def cover_attempts(J, p):
    """Every ramification choice for J over p, with the verdict on each."""
    J = canon(J)
    target_value = p * basket_value(J)
    seen = {}
    options = [(False, True) if r % p == 0 else (False,) for r, _ in J]
    for ramify in product(*options):
        Jp = _image(J, p, ramify)
        if Jp in seen:
            continue
        if len(Jp) > 3:
            seen[Jp] = (None, "more than three points")
            continue
        try:
            t = match_type(Jp)
        except NotClassified:
            seen[Jp] = (None, "not a classification basket")
            continue
        if basket_value(Jp) != target_value:
            seen[Jp] = (None, f"row value {basket_value(Jp)} of J' differs from p*(a/n)E^3 = {target_value}")
            continue
        seen[Jp] = (t, "ok")
    return seen


def _instances(pattern, r_max):
    params = pattern.params
    if not params:
        yield {}
        return
    if params == ("r",):
        for r in range(2, r_max + 1):
            if pattern.admissible({"r": r}):
                yield {"r": r}
        return
    for r1 in range(2, r_max + 1):
        for r2 in range(r1, r_max + 1):
            yield {"r1": r1, "r2": r2}


def _covers_of_row(pattern, r_max):
    rows = []
    primes = primes_upto(r_max)
    for binding in _instances(pattern, r_max):
        J = pattern.instantiate(**binding)
        for p in primes:
            if p * len(J) > 3 and not any(r % p == 0 for r, _ in J):
                continue
            for Jp, (t, _) in cover_attempts(J, p).items():
                if t is not None:
                    rows.append(CoverRow(pattern.type_no, J, p, Jp, t))
    return rows


def enumerate_prime_covers(r_max):
    if r_max < 2:
        raise DomainError("r_max must be at least 2")
    chunks = pmap(partial(_covers_of_row, r_max=r_max), table3())
    return sorted(set(x for chunk in chunks for x in chunk))


# transcription of the printed table; r/p entries are reduced as points,
# so (r/p, 2) with r/p = 3 reads (3, 1) and with r/p = 2 disappears
TABLE4 = (
    {"no": 1, "p": 3, "J_prime": "(2,1)"},
    {"no": 2, "p": 7, "J_prime": "{}"},
    {"no": 4, "p": 2, "J_prime": "(r,1), (r,1)"},
    {"no": 8, "p": 2, "J_prime": "(3,1), (2,1), (2,1)"},
    {"no": 8, "p": 3, "J_prime": "(2,1), (2,1), (2,1)"},
    {"no": 10, "p": 2, "J_prime": "(2,1), (2,1), (r/2,1)"},
    {"no": 10, "p": 2, "J_prime": "(r,1), (r,1)"},
    {"no": 11, "p": 3, "J_prime": "(2,1), (2,1), (2,1)"},
    {"no": 12, "p": 2, "J_prime": "(3,1), (3,1), (2,1)"},
    {"no": 14, "p": "p", "J_prime": "(r/p,2), r/p >= 2"},
    {"no": 15, "p": "p", "J_prime": "(r1/p,1), (r2/p,1)", "subtypes": "15'a, 15''"},
)


def _points(pairs):
    out = []
    for r, v in pairs:
        w = residue(v, r)
        w = min(w, r - w)
        if r > 1 and w > 0:
            out.append((r, w))
    return canon(out)


def table4_instances(r_max):
    """The printed table instantiated for indices <= r_max."""
    rows = set()
    pats = {p.type_no: p for p in table3()}

    def add(no, J, p, Jp):
        Jp = _points(Jp)
        rows.add(CoverRow(no, canon(J), p, Jp, match_type(Jp)))

    add(1, [(6, 3)], 3, [(2, 1)])
    add(2, [(7, 3)], 7, [])
    add(8, [(6, 2), (2, 1)], 2, [(3, 1), (2, 1), (2, 1)])
    add(8, [(6, 2), (2, 1)], 3, [(2, 1)] * 3)
    add(11, [(2, 1), (3, 1), (3, 1)], 3, [(2, 1)] * 3)
    add(12, [(2, 1), (3, 1), (4, 1)], 2, [(3, 1), (3, 1), (2, 1)])
    primes = primes_upto(r_max)
    for r in range(2, r_max + 1):
        add(4, pats[4].instantiate(r=r), 2, [(r, 1), (r, 1)])
        J10 = pats[10].instantiate(r=r)
        add(10, J10, 2, [(r, 1), (r, 1)])
        if r % 2 == 0:
            add(10, J10, 2, [(2, 1), (2, 1), (r // 2, 1)])
        if r >= 4:
            for p in primes:
                if r % p == 0 and r // p >= 2:
                    add(14, [(r, 2)], p, [(r // p, 2)])
    for r1 in range(2, r_max + 1):
        for r2 in range(r1, r_max + 1):
            for p in primes:
                if r1 % p == 0 and r2 % p == 0:
                    add(15, [(r1, 1), (r2, 1)], p, [(r1 // p, 1), (r2 // p, 1)])
    return sorted(rows)


# Table 5: each printed local-class tuple belongs to one Table 4 image,
# listed in the entry order of the Table 3 row
TABLE5 = {
    (4, 2): [(lambda r: [(r, 1), (r, 1)], lambda r: (2, 0))],
    (8, 2): [(lambda r: [(3, 1), (2, 1), (2, 1)], lambda r: (3, 0))],
    (10, 2): [
        # the (r/2, 1) image only exists for even r
        (lambda r: [(2, 1), (2, 1), (r // 2, 1)] if r % 2 == 0 else None, lambda r: (0, 1, r // 2)),
        (lambda r: [(r, 1), (r, 1)], lambda r: (1, 1, 0)),
    ],
    (12, 2): [(lambda r: [(3, 1), (3, 1), (2, 1)], lambda r: (1, 0, 2))],
}

# Table 4 rows missing from Table 5, removed by the minimal-discrepancy lemma
TABLE5_OMITTED = ((1, 3), (2, 7), (8, 3), (11, 3))


def _ordered(pattern, binding):
    return [(binding[r] if isinstance(r, str) else r, v) for r, v in pattern.entries]


def _symmetrize(J, ds):
    # points with equal (r, v) are interchangeable
    return tuple(x[2] for x in sorted(zip(J, range(len(J)), ds), key=lambda t: (t[0], t[2])))


@dataclass(frozen=True)
class LocalClassHit:
    source_no: int
    r: int  # the parameter of the row, 0 when the row is rigid
    a: int
    n: int
    basket: tuple
    d: tuple
    image: tuple
    min_discrepancy_ok: bool


def local_class_search(type_no, p, r_max, an_max=None):
    """Every (a, n) with p | gcd(a, n) and every consistent (b, e) choice for
    each point of a Table 3 row, whose degree-p cover lands in Table 3 with
    value scaled by p. The search over b is exhaustive."""
    pattern = table3()[type_no - 1]
    hits = []
    for binding in _instances(pattern, r_max):
        J = _ordered(pattern, binding)
        value = basket_value(J)
        bound = an_max or max((r for r, _ in J), default=1)
        for a in range(p, bound + 1, p):
            for n in range(p, bound + 1, p):
                per_point = [consistent_assignments(r, v, a, n) for r, v in J]
                if any(not c for c in per_point):
                    continue
                for basket in product(*per_point):
                    Jp = canon(q.rv for q in cover_entries(basket, a, n, p) if q.v > 0)
                    try:
                        match_type(Jp)
                    except NotClassified:
                        continue
                    if basket_value(Jp) != p * value:
                        continue
                    ds = tuple(d_cover(q, a, n, p) for q in basket)
                    md = any(min_discrepancy_feasible(a, n, q.r, q.e) for q in basket)
                    hits.append(
                        LocalClassHit(type_no, binding.get("r", 0), a, n, tuple(basket),
                                      _symmetrize(J, ds), Jp, md)
                    )
    return hits


def table5_report(r_max=12, an_max=24):
    """Compare every realized local-class tuple with the printed one.

    mismatches lists hits whose d differs from the tuple printed for the same
    image; realized/vacuous say which printed tuples occur at all, with and
    without the minimal-discrepancy constraint.
    """
    out = {}
    for (no, p), rows in TABLE5.items():
        pattern = table3()[no - 1]
        hits = local_class_search(no, p, r_max, an_max)
        mismatches, realized, realized_md, printed = [], set(), set(), set()
        for binding in _instances(pattern, r_max):
            r = binding.get("r", 0)
            J = _ordered(pattern, binding)
            for image, dfun in rows:
                if image(r) is None:
                    continue
                if all(x >= 0 for x in dfun(r)) and all(x[0] >= 1 for x in image(r)):
                    printed.add((r, _points(image(r)), _symmetrize(J, dfun(r))))
        for h in hits:
            J = _ordered(pattern, {"r": h.r} if h.r else {})
            want = {
                _symmetrize(J, dfun(h.r))
                for image, dfun in rows
                if image(h.r) is not None and _points(image(h.r)) == h.image
            }
            if h.d not in want:
                mismatches.append(h)
            realized.add((h.r, h.image, h.d))
            if h.min_discrepancy_ok:
                realized_md.add((h.r, h.image, h.d))
        out[(no, p)] = {
            "printed": printed,
            "realized": realized,
            "realized_min_discrepancy": realized_md,
            "mismatches": mismatches,
            "hits": len(hits),
        }
    return out


def omitted_rows_excluded(r_max=12):
    """Table 4 rows absent from Table 5 admit no point meeting the
    minimal-discrepancy constraint."""
    return {
        (no, p): not any(h.min_discrepancy_ok for h in local_class_search(no, p, r_max))
        for no, p in TABLE5_OMITTED
    }


def c_term(entry, a, n, p):
    d = d_cover(entry, a, n, p)
    r, b, e = entry.r, entry.b, entry.e
    return -a_term(r, b, -e) - a_term(r, b, d) + a_term(r, b, d - e)


def eq16_lhs(profile, g):
    if g < 2 or profile.a % g or profile.n % g:
        raise DomainError(f"g={g} must be >= 2 and divide gcd(a, n)")
    total = Fraction(0)
    for q in profile.basket:
        db = d_cover(q, profile.a, profile.n, g) * q.b
        total += b_term(q.r, db) - b_term(q.r, db - q.v) + b_term(q.r, -q.v)
    return total
