"""Exact rational helpers and the two Dedekind-type sums used everywhere.

All quantities are ``fractions.Fraction``; nothing here touches floats.
"""

from fractions import Fraction
from functools import lru_cache
from math import gcd


class DomainError(ValueError):
    pass


def residue(k: int, r: int) -> int:
    if r < 1:
        raise DomainError(f"modulus must be positive, got {r}")
    return k % r


def mod_inverse(a: int, r: int) -> int:
    if r < 1:
        raise DomainError(f"modulus must be positive, got {r}")
    if gcd(a, r) != 1:
        raise DomainError(f"{a} is not invertible modulo {r}")
    return pow(a, -1, r) if r > 1 else 0


def b_term(r: int, k: int) -> Fraction:
    """res(k) * res(-k) / (2r)."""
    k = residue(k, r)
    return Fraction(k * residue(-k, r), 2 * r)


def a_term(r: int, b: int, k: int) -> Fraction:
    """-k(r^2-1)/(12r) + sum_{l<k} res(lb)(r-res(lb))/(2r), with k reduced mod r first."""
    if gcd(b, r) != 1:
        raise DomainError(f"b={b} is not coprime to r={r}")
    return _a_term(r, residue(b, r), residue(k, r))


@lru_cache(maxsize=None)
def _a_term(r, b, k):
    total = Fraction(-k * (r * r - 1), 12 * r)
    for l in range(1, k):
        total += b_term(r, l * b)
    return total


def frac_str(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def json_rational(q):
    """Bare int when integral, "p/q" otherwise."""
    q = Fraction(q)
    return q.numerator if q.denominator == 1 else frac_str(q)


def parse_frac(text) -> Fraction:
    if isinstance(text, int):
        return Fraction(text)
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"not a rational number: {text!r}") from exc


def is_integer(q) -> bool:
    return Fraction(q).denominator == 1


def lcm_all(values) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out
