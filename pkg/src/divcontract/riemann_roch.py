"""Basket data and the singular Riemann-Roch evaluator d(i, j).

d(i, j) is the Euler characteristic attached to iK_Y + jE. The unknown
E.c2 term is never supplied by the caller; it is fixed by d(0, 0) = 1.
"""

from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import gcd

from .exact_arith import (
    DomainError,
    a_term,
    b_term,
    is_integer,
    json_rational,
    parse_frac,
    residue,
)


class InconsistentData(DomainError):
    pass


@dataclass(frozen=True, order=True)
class BasketEntry:
    r: int
    b: int
    v: int
    e: int

    def __post_init__(self):
        if self.r < 1:
            raise DomainError(f"index must be positive, got r={self.r}")
        if gcd(self.b, self.r) != 1:
            raise DomainError(f"b={self.b} not coprime to r={self.r}")
        if not 1 <= self.e <= self.r:
            raise DomainError(f"e={self.e} outside [1, {self.r}]")
        eb = residue(self.e * self.b, self.r)
        if self.v != min(eb, self.r - eb):
            raise DomainError(f"v={self.v} disagrees with e*b mod r for {self}")

    @property
    def rv(self):
        return (self.r, self.v)

    def as_dict(self):
        return {"r": self.r, "b": self.b, "v": self.v, "e": self.e}


def make_entry(r, b, e):
    """Entry with v computed from (r, b, e) and b flipped so that e*b mod r <= r/2."""
    eb = residue(e * b, r)
    if 2 * eb > r:
        b = r - b
        eb = r - eb
    return BasketEntry(r, residue(b, r) if r > 1 else b, eb, e)


def normalize_entry(entry):
    return make_entry(entry.r, entry.b, entry.e)


def derive_e(r, b, a, n):
    if gcd(b, r) != 1:
        raise DomainError(f"b={b} not coprime to r={r}")
    for e in range(1, r + 1):
        if residue(n - a * e, r) == 0:
            return e
    raise InconsistentData(f"inconsistent local data: no e with {n} = {a}e mod {r}")


def consistent_assignments(r, v, a, n):
    """All normalized (b, e) with gcd(b,r)=1, n = ae mod r and e*b = +-v mod r."""
    out = []
    for b in range(1, max(r, 2)):
        if gcd(b, r) != 1:
            continue
        for e in range(1, r + 1):
            if residue(n - a * e, r) != 0:
                continue
            if residue(e * b, r) == v:
                out.append(BasketEntry(r, b, v, e))
    return out


@dataclass(frozen=True)
class ContractionProfile:
    a: int
    n: int
    basket: tuple
    e_cubed: Fraction
    e_c2: Fraction = field(default=Fraction(0), compare=False)

    def __post_init__(self):
        if self.a < 1 or self.n < 1:
            raise DomainError("a and n must be positive")
        object.__setattr__(self, "basket", tuple(sorted(self.basket)))
        object.__setattr__(self, "e_cubed", Fraction(self.e_cubed))
        object.__setattr__(self, "e_c2", Fraction(self.e_c2))
        if self.e_cubed <= 0:
            raise DomainError("E^3 must be positive")
        for q in self.basket:
            if residue(self.n - self.a * q.e, q.r) != 0:
                raise InconsistentData(
                    f"n={self.n} != a*e mod r for entry {q} (a={self.a})"
                )

    @property
    def slope(self):
        return Fraction(self.a, self.n)

    def rv_multiset(self):
        return tuple(sorted(q.rv for q in self.basket if q.v != 0))

    def to_json(self):
        return {
            "a": self.a,
            "n": self.n,
            "E3": json_rational(self.e_cubed),
            "basket": [q.as_dict() for q in self.basket],
        }

    @classmethod
    def from_json(cls, data):
        try:
            basket = [
                BasketEntry(int(q["r"]), int(q["b"]), int(q["v"]), int(q["e"]))
                for q in data["basket"]
            ]
            return solve_Ec2(int(data["a"]), int(data["n"]), basket, parse_frac(data["E3"]))
        except (KeyError, TypeError) as exc:
            raise DomainError(f"malformed profile: {exc}") from exc


def contribution_A(profile, i, j):
    return sum(
        (a_term(q.r, q.b, i + j * q.e) for q in profile.basket), Fraction(0)
    )


def contribution_B(profile, i, j):
    return sum(
        (b_term(q.r, i * q.b + j * q.v) for q in profile.basket), Fraction(0)
    )


def _poly_part(profile, i, j):
    t = profile.slope
    x = t * i + j
    return Fraction(1, 12) * (6 * x * x - 6 * (t + 1) * x + (t + 1) * (t + 2)) * profile.e_cubed


def _raw_d(profile, i, j):
    return _poly_part(profile, i, j) + contribution_A(profile, i, j) - contribution_A(profile, i, j - 1)


def solve_Ec2(a, n, basket, e_cubed):
    draft = ContractionProfile(a, n, tuple(basket), e_cubed)
    return replace(draft, e_c2=1 - _raw_d(draft, 0, 0))


def d(profile, i, j):
    return _raw_d(profile, i, j) + profile.e_c2


def d_difference(profile, i, j):
    t = profile.slope
    return (
        (t * i + j - Fraction(1, 2)) * t * profile.e_cubed
        + contribution_B(profile, i, j)
        - contribution_B(profile, i, j - 1)
    )


def d_grid(profile, radius):
    return {
        (i, j): d(profile, i, j)
        for i in range(-radius, radius + 1)
        for j in range(-radius, radius + 1)
    }


def rr_report(profile, radius=3):
    grid = d_grid(profile, radius)
    bad = sorted(k for k, val in grid.items() if not is_integer(val))
    return {
        "profile": profile.to_json(),
        "e_c2": json_rational(profile.e_c2),
        "radius": radius,
        "values": [
            {"i": i, "j": j, "d": json_rational(val)} for (i, j), val in sorted(grid.items())
        ],
        "integral": not bad,
        "non_integral": [list(k) for k in bad],
    }
