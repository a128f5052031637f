"""Sparse polynomials with rational coefficients, cyclic-quotient germs, and
the small text format used to describe them.

Format::

    quotient 1/2(1,1,1,0);
    eq x1^2 + x4^3 + x2*x3^3*x4 + x2^4 + x3^8;

A second ``eq`` line gives a codimension-two germ. ``#`` starts a comment.
"""

import re
from dataclasses import dataclass
from fractions import Fraction

from .exact_arith import DomainError, frac_str, parse_frac


class GermSyntaxError(DomainError):
    def __init__(self, msg, line, col):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.line = line
        self.col = col


class SemiInvarianceError(DomainError):
    pass


class Poly:
    """Immutable map from exponent tuples to nonzero Fractions."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        clean = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(x) for x in exp)
            if len(exp) != nvars or min(exp, default=0) < 0:
                raise DomainError(f"bad exponent {exp} for {nvars} variables")
            c = Fraction(c) + clean.get(exp, 0)
            if c:
                clean[exp] = c
            else:
                clean.pop(exp, None)
        self.terms = clean

    @classmethod
    def monomial(cls, exp, coeff=1):
        return cls(len(exp), {tuple(exp): coeff})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, Poly) and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __add__(self, other):
        out = dict(self.terms)
        for exp, c in other.terms.items():
            out[exp] = out.get(exp, 0) + c
        return Poly(self.nvars, out)

    def __mul__(self, other):
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = tuple(x + y for x, y in zip(e1, e2))
                out[exp] = out.get(exp, 0) + c1 * c2
        return Poly(self.nvars, out)

    def monomials(self):
        return sorted(self.terms, reverse=True)

    def __repr__(self):
        return f"Poly({format_poly(self)!r})"


def format_monomial(exp):
    parts = []
    for i, k in enumerate(exp, start=1):
        if k == 1:
            parts.append(f"x{i}")
        elif k > 1:
            parts.append(f"x{i}^{k}")
    return "*".join(parts)


def format_poly(poly):
    if not poly:
        return "0"
    out = []
    for exp in poly.monomials():
        c = poly.terms[exp]
        mono = format_monomial(exp)
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if not mono:
            body = str(mag.numerator) if mag.denominator == 1 else frac_str(mag)
        elif mag == 1:
            body = mono
        else:
            body = (str(mag.numerator) if mag.denominator == 1 else frac_str(mag)) + "*" + mono
        out.append((sign, body))
    text = ("-" if out[0][0] == "-" else "") + out[0][1]
    for sign, body in out[1:]:
        text += f" {sign} {body}"
    return text


@dataclass(frozen=True)
class QuotientGerm:
    n: int
    action: tuple
    equations: tuple

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("group order must be positive")
        action = tuple(int(x) % self.n for x in self.action)
        object.__setattr__(self, "action", action)
        object.__setattr__(self, "equations", tuple(self.equations))
        if self.dim - len(self.equations) != 3:
            raise DomainError(
                f"need dim - #equations = 3, got {self.dim} variables and {len(self.equations)} equations"
            )
        for k, eq in enumerate(self.equations, start=1):
            if eq.nvars != self.dim:
                raise DomainError(f"equation {k} uses {eq.nvars} variables, expected {self.dim}")
            if not eq:
                raise DomainError(f"equation {k} is zero")
            self.character(eq)

    @property
    def dim(self):
        return len(self.action)

    def weight_of(self, exp):
        return sum(l * w for l, w in zip(exp, self.action)) % self.n

    def character(self, eq):
        return character(self.n, self.action, eq)


def character(n, action, eq):
    """The common weight of all monomials of eq, or SemiInvarianceError."""
    chars = {}
    for exp in eq.monomials():
        chars.setdefault(sum(l * w for l, w in zip(exp, action)) % n, exp)
    if len(chars) > 1:
        (w0, m0), (w1, m1) = sorted(chars.items(), key=lambda kv: eq.monomials().index(kv[1]))[:2]
        raise SemiInvarianceError(
            f"not semi-invariant: monomial {format_monomial(m1) or '1'} has weight {w1} "
            f"but {format_monomial(m0) or '1'} has weight {w0} (mod {n})"
        )
    return next(iter(chars))


def format_germ(germ):
    lines = [f"quotient 1/{germ.n}({','.join(str(a) for a in germ.action)});"]
    lines += [f"eq {format_poly(eq)};" for eq in germ.equations]
    return "\n".join(lines) + "\n"


_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>#[^\n]*)|(?P<var>x\d+)|(?P<word>[A-Za-z_]\w*)"
    r"|(?P<int>\d+)|(?P<sym>[-+*/^();,])"
)


def _tokens(text):
    line, col, pos = 1, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise GermSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        val = m.group()
        if kind == "nl":
            line, col = line + 1, 1
        elif kind not in ("ws", "comment"):
            yield kind, val, line, col
        if kind != "nl":
            col += len(val)
        pos = m.end()
    yield "eof", "", line, col


class _Parser:
    def __init__(self, text):
        self.toks = list(_tokens(text))
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None, val=None):
        tok = self.toks[self.i]
        if (kind and tok[0] != kind) or (val is not None and tok[1] != val):
            want = repr(val) if val is not None else kind
            got = repr(tok[1]) if tok[0] != "eof" else "end of input"
            raise GermSyntaxError(f"expected {want}, found {got}", tok[2], tok[3])
        self.i += 1
        return tok

    def integer(self):
        return int(self.take("int")[1])

    def signed_int(self):
        sign = 1
        if self.peek()[1] in "+-" and self.peek()[0] == "sym":
            sign = -1 if self.take()[1] == "-" else 1
        return sign * self.integer()

    def germ(self):
        n = action = None
        eqs = []
        while self.peek()[0] != "eof":
            kind, word, line, col = self.take("word")
            if word == "quotient":
                if n is not None:
                    raise GermSyntaxError("duplicate quotient statement", line, col)
                if self.integer() != 1:
                    raise GermSyntaxError("quotient must read 1/n(...)", line, col)
                self.take("sym", "/")
                n = self.integer()
                self.take("sym", "(")
                action = [self.signed_int()]
                while self.peek()[1] == ",":
                    self.take()
                    action.append(self.signed_int())
                self.take("sym", ")")
            elif word == "eq":
                if action is None:
                    raise GermSyntaxError("eq before quotient", line, col)
                eq = self.poly(len(action))
                try:
                    character(max(n, 1), action, eq)
                except SemiInvarianceError as exc:
                    raise SemiInvarianceError(f"line {line}: {exc}") from None
                eqs.append((eq, line, col))
            else:
                raise GermSyntaxError(f"unknown statement {word!r}", line, col)
            self.take("sym", ";")
        if n is None:
            raise GermSyntaxError("missing quotient statement", *self.peek()[2:])
        if n < 1:
            raise GermSyntaxError("group order must be positive", *self.peek()[2:])
        try:
            return QuotientGerm(n, tuple(action), tuple(e for e, _, _ in eqs))
        except SemiInvarianceError:
            raise
        except DomainError as exc:
            raise GermSyntaxError(str(exc), *(eqs[-1][1:] if eqs else self.peek()[2:])) from exc

    def poly(self, nvars):
        total = Poly(nvars)
        sign = 1
        if self.peek()[1] in "+-" and self.peek()[0] == "sym":
            sign = -1 if self.take()[1] == "-" else 1
        total = total + self.term(nvars, sign)
        while self.peek()[0] == "sym" and self.peek()[1] in "+-":
            sign = -1 if self.take()[1] == "-" else 1
            total = total + self.term(nvars, sign)
        return total

    def term(self, nvars, sign):
        coeff = Fraction(sign)
        exp = [0] * nvars
        while True:
            kind, val, line, col = self.peek()
            if kind == "int":
                self.take()
                num = int(val)
                if self.peek()[1] == "/":
                    self.take()
                    den = self.integer()
                    if den == 0:
                        raise GermSyntaxError("zero denominator", line, col)
                    coeff *= Fraction(num, den)
                else:
                    coeff *= num
            elif kind == "var":
                self.take()
                idx = int(val[1:])
                if not 1 <= idx <= nvars:
                    raise GermSyntaxError(f"variable {val} out of range x1..x{nvars}", line, col)
                k = 1
                if self.peek()[1] == "^":
                    self.take()
                    k = self.integer()
                exp[idx - 1] += k
            else:
                got = repr(val) if kind != "eof" else "end of input"
                raise GermSyntaxError(f"expected a number or variable, found {got}", line, col)
            if self.peek()[1] != "*":
                break
            self.take()
        return Poly(nvars, {tuple(exp): coeff})


def parse_germ(text):
    return _Parser(text).germ()


def parse_weights(text):
    parts = [p for p in str(text).replace(" ", "").split(",")]
    if not parts or any(not p for p in parts):
        raise DomainError(f"malformed weight list {text!r}")
    out = tuple(parse_frac(p) for p in parts)
    if any(w <= 0 for w in out):
        raise DomainError("weights must be positive")
    return out


def format_weights(weights):
    return ",".join(str(w.numerator) if w.denominator == 1 else frac_str(w) for w in weights)
