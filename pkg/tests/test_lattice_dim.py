from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from divcontract.exact_arith import DomainError
from divcontract.lattice_dim import (
    DimParams,
    admissible,
    admissible_grid,
    check_lemma_dim,
    count_N,
    count_N_tilde,
    dim_recursion,
    dim_rr,
    floor_sum,
    half_steps,
)

P357 = DimParams(3, 5, 7)
GRID = admissible_grid(25)


def naive_count(p, k, i, j):
    """Direct scan over a box, weights kept as Fractions."""
    ws = (Fraction(p.r1 + k, 2), Fraction(p.r1, 2), Fraction(p.a, 2), Fraction(1))
    bound = [int(i / w) + 1 for w in ws]
    total = 0
    for l in product(*(range(b + 1) for b in bound)):
        if l[0] * l[1] == 0 and sum(x * w for x, w in zip(l, ws)) == i and (l[0] + l[1] + l[2]) % 2 == j:
            total += 1
    return total


def test_params():
    assert P357.k == 2 and P357.case() == "a" and P357.b == (4, 5)
    assert DimParams(3, 7, 11).case() == "b"
    assert admissible(P357) and admissible(DimParams(3, 7, 11))
    assert not admissible(DimParams(3, 5, 9))
    assert "a | r1+2" in admissible(DimParams(3, 5, 9), reason=True)
    assert "r2 - r1" in admissible(DimParams(3, 5, 11), reason=True)
    assert not admissible(DimParams(2, 5, 7))


def test_count_examples():
    assert count_N(P357, 2, 1, 0) == 1
    for p in GRID[:10]:
        assert count_N(p, p.k, 0, 0) == 1
        assert count_N(p, p.k, Fraction(-1, 2), 1) == 0
    with pytest.raises(DomainError):
        count_N(P357, 2, Fraction(1, 3), 0)


@pytest.mark.parametrize("p", GRID[:8], ids=str)
def test_count_against_naive(p):
    for i in half_steps(0, 14):
        for j in (0, 1):
            assert count_N(p, p.k, i, j) == naive_count(p, p.k, i, j)


def test_recursion_examples():
    assert dim_recursion(P357, 1, 0) == 1
    for p in GRID:
        assert dim_recursion(p, Fraction(p.a, 2), 1) == 1
        # with a = 1 both x4 and x3^2 sit in V^[0](1)
        assert dim_recursion(p, 1, 0) == (2 if p.a == 1 else 1)
        assert dim_recursion(p, -1, 0) == 0


def test_rr_examples():
    assert dim_rr(P357, 0, 0) == 1
    assert dim_rr(P357, 1, 0) == 1


def test_lemma_examples():
    assert check_lemma_dim(P357, 40).ok
    assert check_lemma_dim(DimParams(3, 7, 11), 40).ok
    bad = check_lemma_dim(P357, 40, b_override=(4, 6))
    assert not bad.ok and bad.counterexample is not None


def test_inadmissible_needs_override():
    p = DimParams(3, 5, 9)
    with pytest.raises(DomainError):
        check_lemma_dim(p, 10)
    res = check_lemma_dim(p, 10, override=True)
    assert not res.ok and res.note
    assert res.as_dict()["ok"] is False


def test_derive_rule_differs_for_even_a():
    # smallest e with ae = 2 mod r need not invert b when a is even
    p = DimParams(2, 4, 8)
    assert admissible(p)
    assert check_lemma_dim(p, 30).ok
    assert not check_lemma_dim(p, 30, e_rule="derive").ok
    for q in GRID:
        if q.a % 2:
            assert check_lemma_dim(q, 20, e_rule="derive").ok


@pytest.mark.parametrize("p", GRID, ids=str)
def test_floor_identity(p):
    for i in half_steps(0, 40):
        for j in (0, 1):
            if (i + j * Fraction(p.a, 2)).denominator != 1:
                continue
            diff = count_N(p, p.k, i, j) - count_N(p, p.k, i - Fraction(p.a, 2), 1 - j)
            assert diff == floor_sum(p, i, j)


@pytest.mark.parametrize("p", [q for q in admissible_grid(41) if q.k == 4], ids=str)
def test_tilde_identity(p):
    for i in half_steps(0, Fraction(p.r1 + p.r2, 2) - Fraction(1, 2)):
        total = count_N(p, 4, i, 0) + count_N(p, 4, i, 1)
        r = Fraction(p.r2, 2)
        assert total == count_N_tilde(p, i) + count_N_tilde(p, i - r) - count_N_tilde(p, i + 1 - r)


@given(st.sampled_from(GRID), st.integers(-4, 120), st.integers(0, 1))
def test_rr_is_a_nonnegative_integer(p, twice_i, j):
    v = dim_rr(p, Fraction(twice_i, 2), j)
    assert v.denominator == 1 and v >= 0
