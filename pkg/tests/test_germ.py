from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from divcontract.exact_arith import DomainError
from divcontract.germ import (
    GermSyntaxError,
    Poly,
    QuotientGerm,
    SemiInvarianceError,
    format_germ,
    format_poly,
    parse_germ,
    parse_weights,
)
from divcontract.verifier import corpus_instances

EX54 = """# cE/2 point
quotient 1/2(1,1,1,0);
eq x1^2 + x4^3 + x2*x3^3*x4 + x2^4 + x3^8;
"""


def test_parse_ex54():
    g = parse_germ(EX54)
    assert g.n == 2 and g.action == (1, 1, 1, 0) and g.dim == 4
    assert len(g.equations[0].terms) == 5
    assert g.equations[0].terms[(0, 1, 3, 1)] == 1


def test_parse_five_variables():
    text = "quotient 1/2(1,1,1,0,1);\neq x1^2 + x2*x5 + x4^9;\neq x2*x4 + x3^3 + x5;"
    g = parse_germ(text)
    assert g.dim == 5 and len(g.equations) == 2


def test_coefficients_and_signs():
    g = parse_germ("quotient 1/1(0,0,0,0);\neq -x1^2 + 3/4*x2*x3 - 2*x4;")
    eq = g.equations[0]
    assert eq.terms[(2, 0, 0, 0)] == -1
    assert eq.terms[(0, 1, 1, 0)] == Fraction(3, 4)
    assert eq.terms[(0, 0, 0, 1)] == -2


def test_semi_invariance_error_names_monomial():
    with pytest.raises(SemiInvarianceError, match="monomial x3 has weight 1"):
        parse_germ("quotient 1/2(1,1,1,0);\neq x1*x2 + x3;")


@pytest.mark.parametrize(
    "text,line,col",
    [
        ("quotient 1/2(1,1,1,0);\neq x1^2 + x4 @;", 2, 14),
        ("eq x1;", 1, 1),
        ("quotient 1/2(1,1,1,0);\neq x1^2 + x5;", 2, 11),
        ("quotient 1/2(1,1,1,0)\neq x1^2;", 2, 1),
    ],
)
def test_syntax_errors_carry_position(text, line, col):
    with pytest.raises(GermSyntaxError) as info:
        parse_germ(text)
    assert (info.value.line, info.value.col) == (line, col)
    assert f"line {line}, column {col}" in str(info.value)


def test_wrong_equation_count():
    with pytest.raises(DomainError, match="dim - #equations"):
        parse_germ("quotient 1/2(1,1,1,0);")


def test_weights():
    assert parse_weights("4,2,1,3") == (4, 2, 1, 3)
    assert parse_weights("7/2, 5/2, 3/2, 1") == (Fraction(7, 2), Fraction(5, 2), Fraction(3, 2), 1)
    for bad in ("", "1,,2", "1,-2", "a,b"):
        with pytest.raises(DomainError):
            parse_weights(bad)


def test_poly_arithmetic():
    p = Poly(2, {(1, 0): 1, (0, 1): 1})
    q = Poly(2, {(1, 0): 1, (0, 1): -1})
    assert p * q == Poly(2, {(2, 0): 1, (0, 2): -1})
    assert not (p + Poly(2, {(1, 0): -1, (0, 1): -1}))
    assert format_poly(Poly(2)) == "0"


def test_corpus_round_trip():
    for inst in corpus_instances():
        text = format_germ(inst.germ)
        assert parse_germ(text) == inst.germ


@st.composite
def germs(draw):
    n = draw(st.integers(1, 7))
    dim = draw(st.sampled_from([4, 5]))
    action = tuple(draw(st.integers(0, n - 1)) for _ in range(dim))
    eqs = []
    for _ in range(dim - 3):
        exps = draw(st.lists(st.tuples(*[st.integers(0, 4)] * dim), min_size=1, max_size=5, unique=True))
        chi = sum(l * w for l, w in zip(exps[0], action)) % n
        terms = {}
        for e in exps:
            if sum(l * w for l, w in zip(e, action)) % n == chi:
                num = draw(st.integers(-9, 9).filter(bool))
                den = draw(st.integers(1, 5))
                terms[e] = Fraction(num, den)
        eqs.append(Poly(dim, terms))
    return QuotientGerm(n, action, tuple(eqs))


@given(germs())
def test_round_trip_property(g):
    assert parse_germ(format_germ(g)) == g
