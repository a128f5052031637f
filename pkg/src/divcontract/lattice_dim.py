"""Dimension counts for the graded pieces of a No 15'' contraction with n = 2.

Three independent computations of dim V^[j](i) are compared: the lattice
count #N_k^[j](i), the floor-sum recursion, and Riemann-Roch via d(j, -i-ja/2).
Half-integers are Fractions with denominator 1 or 2.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import floor, gcd

from ._parallel import pmap
from .exact_arith import DomainError, json_rational, mod_inverse
from .riemann_roch import d, derive_e, make_entry, solve_Ec2

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class DimParams:
    a: int
    r1: int
    r2: int
    n: int = 2

    @property
    def k(self):
        return self.r2 - self.r1

    @property
    def b(self):
        return tuple(((self.a + r) // 2) % r for r in (self.r1, self.r2))

    def case(self):
        if self.k == 2:
            return "a"
        if self.k == 4:
            return "b"
        return None


def admissible(p, reason=False):
    """Whether (a, r1, r2) is one of the two shapes allowed for n = 2.

    Also requires gcd(b_i, r_i) = 1 so each basket point is a terminal quotient.
    """
    why = None
    if p.n != 2:
        why = "only n = 2 is modelled"
    elif not 0 < p.a < p.r1 < p.r2:
        why = "need 0 < a < r1 < r2"
    elif (p.a + p.r1) % 2 or (p.a + p.r2) % 2:
        why = "need a + r_i even"
    elif p.k == 2 and not (p.a % 2 == 1 and (2 * p.r1 + 2) % p.a == 0):
        why = "case r2 = r1+2 needs a odd and a | 2r1+2"
    elif p.k == 4 and (p.r1 + 2) % p.a:
        why = "case r2 = r1+4 needs a | r1+2"
    elif p.k not in (2, 4):
        why = "need r2 - r1 in {2, 4}"
    elif any(gcd(b, r) != 1 for b, r in zip(p.b, (p.r1, p.r2))):
        why = "b_i not coprime to r_i"
    return why if reason else why is None


def admissible_grid(r2_max):
    out = []
    for r2 in range(3, r2_max + 1):
        for k in (2, 4):
            r1 = r2 - k
            for a in range(1, r1):
                p = DimParams(a, r1, r2)
                if admissible(p):
                    out.append(p)
    return out


def _half(i):
    i = Fraction(i)
    if (2 * i).denominator != 1:
        raise DomainError(f"{i} is not a half-integer")
    return i


def _in_grade(p, i, j):
    return (i + j * Fraction(p.a, 2)).denominator == 1


def count_N(p, k, i, j):
    """#{l >= 0 : (r1+k)/2 l1 + r1/2 l2 + a/2 l3 + l4 = i, l1 l2 = 0, l1+l2+l3 = j mod 2}."""
    i = _half(i)
    if i < 0:
        return 0
    return _count(p.r1, p.a, k, int(2 * i), j)


@lru_cache(maxsize=None)
def _count(r1, a, k, twice_i, j):
    # doubled weights keep everything integral
    w1, w2, w3 = r1 + k, r1, a
    total = 0
    for l1 in range(twice_i // w1 + 1):
        for l2 in ([0] if l1 else range(twice_i // w2 + 1)):
            rest = twice_i - w1 * l1 - w2 * l2
            if rest < 0:
                break
            for l3 in range(rest // w3 + 1):
                left = rest - w3 * l3
                if left % 2 == 0 and (l1 + l2 + l3) % 2 == j:
                    total += 1
    return total


def count_N_tilde(p, i):
    """#{l >= 0 : (r1/2+1) l1 + r1/2 l2 + a/2 l3 + l4 = i}, no parity split."""
    i = _half(i)
    if i < 0:
        return 0
    twice = int(2 * i)
    total = 0
    for l1 in range(twice // (p.r1 + 2) + 1):
        for l2 in range((twice - (p.r1 + 2) * l1) // p.r1 + 1):
            rest = twice - (p.r1 + 2) * l1 - p.r1 * l2
            total += sum(1 for l3 in range(rest // p.a + 1) if (rest - p.a * l3) % 2 == 0)
    return total


def floor_sum(p, i, j):
    return 1 - j + sum(floor(Fraction(i) / r + Fraction(j, 2)) for r in (p.r1, p.r2))


def dim_recursion(p, i, j):
    i = _half(i)
    if i < 0 or not _in_grade(p, i, j):
        return 0
    return _rec(p.a, p.r1, p.r2, i, j)


@lru_cache(maxsize=None)
def _rec(a, r1, r2, i, j):
    p = DimParams(a, r1, r2)
    if i < 0:
        return 0
    return _rec(a, r1, r2, i - Fraction(a, 2), 1 - j) + floor_sum(p, i, j)


def basket_entry(p, idx, e_rule="unit"):
    """(r, b, v=1, e) for Q_idx.

    e_rule "unit" takes e = b^-1 mod r, so e*b = 1 exactly; "derive" takes the
    smallest e with a*e = 2 mod r. The two agree when gcd(a, r) = 1.
    """
    r, b = (p.r1, p.r2)[idx], p.b[idx]
    if e_rule == "derive":
        e = derive_e(r, b, p.a, 2)
    elif e_rule == "unit":
        e = mod_inverse(b, r)
    else:
        raise DomainError(f"unknown e_rule {e_rule!r}")
    return make_entry(r, b, e)


def profile(p, e_rule="unit"):
    basket = (basket_entry(p, 0, e_rule), basket_entry(p, 1, e_rule))
    e3 = Fraction(2, p.a) * (Fraction(1, p.r1) + Fraction(1, p.r2))
    return solve_Ec2(p.a, 2, basket, e3)


def dim_rr(p, i, j, prof=None):
    i = _half(i)
    if not _in_grade(p, i, j):
        return Fraction(0)
    prof = prof or profile(p)
    return d(prof, j, int(-i - j * Fraction(p.a, 2)))


def half_steps(start, stop):
    i = Fraction(start)
    while i <= stop:
        yield i
        i += HALF


@dataclass(frozen=True)
class LemmaResult:
    params: DimParams
    ok: bool
    points: int
    counterexample: object = None  # (i, j, count, recursion, rr)
    note: str = ""

    def as_dict(self):
        ce = self.counterexample
        return {
            "a": self.params.a,
            "r1": self.params.r1,
            "r2": self.params.r2,
            "ok": self.ok,
            "points": self.points,
            "note": self.note,
            "counterexample": None if ce is None else {
                "i": json_rational(ce[0]), "j": ce[1], "count_N": ce[2], "recursion": ce[3], "rr": json_rational(ce[4]),
            },
        }


def check_lemma_dim(p, i_max, override=False, e_rule="unit", b_override=None):
    """count_N = dim_recursion = dim_rr for half-integers -a/2 <= i <= i_max.

    Pairs (i, j) outside the grade i + ja/2 in Z are checked too: there the
    lattice count must vanish along with the other two sides.
    """
    if not override and not admissible(p):
        raise DomainError(f"inadmissible parameters {p}: {admissible(p, reason=True)}")
    if b_override is not None:
        # negative control: replace b, keep e, so v moves off 1
        basket = []
        for idx, b in enumerate(b_override):
            r, e = (p.r1, p.r2)[idx], basket_entry(p, idx, e_rule).e
            if gcd(b, r) != 1:
                raise DomainError(f"overridden b={b} must be coprime to r={r}")
            basket.append(make_entry(r, b % r, e))
        e3 = Fraction(2, p.a) * (Fraction(1, p.r1) + Fraction(1, p.r2))
        prof = solve_Ec2(p.a, 2, tuple(basket), e3)
    else:
        try:
            prof = profile(p, e_rule)
        except DomainError as exc:
            # only reachable with override: report, do not assert
            return LemmaResult(p, False, 0, None, f"no Riemann-Roch profile: {exc}")
    points = 0
    for i in half_steps(-Fraction(p.a, 2), i_max):
        for j in (0, 1):
            points += 1
            c = count_N(p, p.k, i, j)
            rec = dim_recursion(p, i, j)
            rr = dim_rr(p, i, j, prof)
            if not c == rec == rr:
                return LemmaResult(p, False, points, (i, j, c, rec, rr))
    return LemmaResult(p, True, points)


def _check_one(p, i_max):
    return check_lemma_dim(p, i_max)


def check_grid(r2_max=41, i_max=60):
    from functools import partial

    return pmap(partial(_check_one, i_max=i_max), admissible_grid(r2_max))
