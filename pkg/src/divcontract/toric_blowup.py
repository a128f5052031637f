"""Weighted blow-ups of cyclic-quotient germs.

The ambient lattice is N = Z^dim + Z*(action/n) and the blow-up adds the ray
through the weight vector w. Chart i uses the cone spanned by w and the unit
vectors e_j (j != i); its coordinates y_1..y_dim are dual to that basis, so
x^l pulls back to y_i^<l,w> * prod_{j != i} y_j^l_j and the chart is
C^dim / (N / L) with L the span of the cone basis.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, prod

from .exact_arith import DomainError, lcm_all
from .germ import Poly, format_poly


class UndefinedOrder(DomainError):
    pass


def weighted_order(poly, weights):
    if not poly:
        raise UndefinedOrder("weighted order of the zero polynomial is undefined")
    return min(sum(l * w for l, w in zip(exp, weights)) for exp in poly.terms)


def leading_form(poly, weights):
    d = weighted_order(poly, weights)
    return Poly(
        poly.nvars,
        {e: c for e, c in poly.terms.items() if sum(l * w for l, w in zip(e, weights)) == d},
    )


def _to_sympy(poly):
    import sympy

    xs = sympy.symbols(f"x1:{poly.nvars + 1}")
    expr = sum(
        sympy.Rational(c.numerator, c.denominator) * sympy.Mul(*[x**k for x, k in zip(xs, e)])
        for e, c in poly.terms.items()
    )
    return sympy.Poly(expr, *xs)


def _binomial_splits(poly):
    (e1, _), (e2, _) = poly.terms.items()
    g = 0
    for x, y in zip(e1, e2):
        g = gcd(g, abs(x - y))
    return g > 1


def _square_plus_splits(poly, sp):
    # x_k^2 + h with h free of x_k splits over C iff h is a constant times a square
    import sympy

    for k in range(poly.nvars):
        sq = tuple(2 * int(j == k) for j in range(poly.nvars))
        if sq not in poly.terms or any(e[k] for e in poly.terms if e != sq):
            continue
        h = sp - sp.coeff_monomial(sq) * sp.gens[k] ** 2
        if h.is_zero:
            return True
        _, factors = sympy.sqf_list(h.as_expr(), *sp.gens)
        if all(m % 2 == 0 for _, m in factors):
            return True
    return False


def leading_form_reducible(poly):
    """Sound but incomplete test that a weighted-homogeneous form factors over C."""
    import sympy

    if len(poly.terms) == 1:
        return sum(next(iter(poly.terms))) > 1
    sp = _to_sympy(poly)
    _, factors = sympy.factor_list(sp.as_expr(), *sp.gens)
    if sum(m for f, m in factors if sympy.Poly(f, *sp.gens).total_degree() > 0) > 1:
        return True
    if len(poly.terms) == 2 and _binomial_splits(poly):
        return True
    return _square_plus_splits(poly, sp)


def lattice_class(weights, germ):
    """k with w - k*action/n integral, or None when w is not in N."""
    w = [Fraction(x) for x in weights]
    if len(w) != germ.dim:
        raise DomainError(f"{len(w)} weights for {germ.dim} variables")
    for k in range(germ.n):
        if all((x - Fraction(k * a, germ.n)).denominator == 1 for x, a in zip(w, germ.action)):
            return k
    return None


def in_lattice(weights, germ):
    return lattice_class(weights, germ) is not None


def is_primitive(weights, germ):
    if not in_lattice(weights, germ):
        raise DomainError(f"weights {tuple(str(x) for x in weights)} are not in the lattice N")
    nw = [int(Fraction(x) * germ.n) for x in weights]
    g = 0
    for x in nw:
        g = gcd(g, x)
    for m in range(2, g + 1):
        if g % m == 0 and in_lattice([Fraction(x) / m for x in weights], germ):
            return False
    return True


def orders(germ, weights):
    return [weighted_order(eq, weights) for eq in germ.equations]


def discrepancy(germ, weights):
    return sum(Fraction(w) for w in weights) - 1 - sum(orders(germ, weights))


def e_cubed(germ, weights):
    """(prod of weighted orders) / (prod of weights) / n."""
    return Fraction(prod(orders(germ, weights))) / prod(Fraction(w) for w in weights) / germ.n


def _frac_part(q):
    return q - (q.numerator // q.denominator)


def _chart_generators(germ, weights, i):
    """Coordinates of the generators of N in the cone basis of chart i, mod Z."""
    w = [Fraction(x) for x in weights]
    gens = []
    for vec in [
        [Fraction(int(j == k)) for j in range(germ.dim)] for k in range(germ.dim)
    ] + [[Fraction(a, germ.n) for a in germ.action]]:
        ci = vec[i] / w[i]
        coords = [vec[j] - ci * w[j] if j != i else ci for j in range(germ.dim)]
        gens.append(tuple(_frac_part(c) for c in coords))
    return gens


def _closure(gens):
    zero = tuple(Fraction(0) for _ in gens[0])
    seen = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple(_frac_part(a + b) for a, b in zip(x, g))
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def _order_of(x):
    return lcm_all(c.denominator for c in x)


@dataclass(frozen=True)
class QuotientType:
    order: int
    weights: tuple
    cyclic: bool = True

    def canonical(self, permute=False):
        return canonical_type(self.order, self.weights, permute)

    def text(self):
        if not self.cyclic:
            return f"non-cyclic abelian group of order {self.order}"
        return f"1/{self.order}({','.join(str(x) for x in self.weights)})"


def canonical_type(r, weights, permute=False):
    """Smallest k*w mod r over units k; optionally up to reordering too."""
    if r == 1:
        ws = tuple(0 for _ in weights)
        return (1, ws)
    best = None
    for k in range(1, r):
        if gcd(k, r) != 1:
            continue
        cand = tuple((k * x) % r for x in weights)
        if permute:
            cand = tuple(sorted(cand))
        if best is None or cand < best:
            best = cand
    return (r, best)


def same_type(t1, t2, permute=False):
    return canonical_type(*t1, permute=permute) == canonical_type(*t2, permute=permute)


def group_type(gens):
    elems = _closure(gens)
    size = len(elems)
    for x in sorted(elems, key=lambda v: (-_order_of(v), v)):
        if _order_of(x) == size:
            return QuotientType(size, tuple(int(c * size) % size for c in x), True), x
        break
    return QuotientType(size, (), False), None


def terminal_quotient_check(r, action):
    if r == 1:
        return True
    a = [x % r for x in action]
    if any(gcd(x, r) != 1 for x in a):
        return False
    return any((a[i] + a[j]) % r == 0 for i in range(len(a)) for j in range(i + 1, len(a)))


def strict_transform(eq, weights, i):
    d = weighted_order(eq, weights)
    out = {}
    for exp, c in eq.terms.items():
        top = sum(l * w for l, w in zip(exp, weights)) - d
        if top.denominator != 1:
            raise DomainError("equation is not semi-invariant with respect to the weights")
        new = list(exp)
        new[i] = int(top)
        out[tuple(new)] = c
    return Poly(eq.nvars, out)


def _rank(rows):
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((k for k in range(rank, len(rows)) if rows[k][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for k in range(len(rows)):
            if k != rank and rows[k][col] != 0:
                f = rows[k][col] / rows[rank][col]
                rows[k] = [x - f * y for x, y in zip(rows[k], rows[rank])]
        rank += 1
    return rank


def _nullspace(rows, ncols):
    """Basis of {x : rows . x = 0} over Q."""
    m = [list(map(Fraction, r)) for r in rows]
    pivots = []
    rank = 0
    for col in range(ncols):
        piv = next((k for k in range(rank, len(m)) if m[k][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        m[rank] = [x / m[rank][col] for x in m[rank]]
        for k in range(len(m)):
            if k != rank and m[k][col] != 0:
                f = m[k][col]
                m[k] = [x - f * y for x, y in zip(m[k], m[rank])]
        pivots.append(col)
        rank += 1
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for k, pc in enumerate(pivots):
            v[pc] = -m[k][free]
        basis.append(v)
    return basis


def _linear_rows(polys, dim):
    return [
        [p.terms.get(tuple(int(j == c) for j in range(dim)), Fraction(0)) for c in range(dim)]
        for p in polys
    ]


def cdv_multiplicity_ok(polys):
    """Necessary condition for a Gorenstein terminal point at the origin.

    True when the complete intersection is smooth there, or has embedding
    dimension 4 and multiplicity 2 (the quadratic part of the equation
    without linear term is nonzero on the tangent space).
    """
    polys = list(polys)
    if not polys:
        return True
    dim = polys[0].nvars
    if any(tuple([0] * dim) in p.terms for p in polys):
        return True  # origin not on the locus
    lin = _linear_rows(polys, dim)
    rho = _rank(lin)
    if rho == len(polys):
        return True
    if rho < len(polys) - 1:
        return False
    # the unique combination with zero linear part
    lam = _nullspace([list(col) for col in zip(*lin)], len(polys))[0]
    S = [[Fraction(0)] * dim for _ in range(dim)]
    for p, c in zip(polys, lam):
        if not c:
            continue
        for exp, coef in p.terms.items():
            if sum(exp) != 2:
                continue
            idx = [k for k, e in enumerate(exp) for _ in range(e)]
            if idx[0] == idx[1]:
                S[idx[0]][idx[0]] += c * coef
            else:
                S[idx[0]][idx[1]] += c * coef / 2
                S[idx[1]][idx[0]] += c * coef / 2
    T = _nullspace(lin, dim)
    for u in T:
        Su = [sum(S[r][c] * u[c] for c in range(dim)) for r in range(dim)]
        for v in T:
            if sum(v[r] * Su[r] for r in range(dim)) != 0:
                return True
    return False


def has_quasi_reflection(gens):
    """Whether some group element fixes a coordinate hyperplane pointwise."""
    return any(sum(1 for c in x if c) == 1 for x in _closure(gens))


@dataclass(frozen=True)
class ChartReport:
    chart_index: int
    quotient_type: QuotientType
    origin_on_strict_transform: bool
    smooth_at_origin: bool
    surface_type: object  # QuotientType of the 3-fold at the origin, when smooth there
    terminal_quotient: object  # True/False, or None when not decided
    multiplicity_ok: bool = True  # cDV multiplicity test at a singular origin

    def as_dict(self):
        q = self.quotient_type
        s = self.surface_type
        return {
            "chart": self.chart_index,
            "quotient": {"order": q.order, "weights": list(q.weights), "cyclic": q.cyclic},
            "origin_on_strict_transform": self.origin_on_strict_transform,
            "smooth_at_origin": self.smooth_at_origin,
            "point_type": None if s is None else {"order": s.order, "weights": list(s.weights), "cyclic": s.cyclic},
            "terminal_quotient": self.terminal_quotient,
            "multiplicity_ok": self.multiplicity_ok,
        }


def chart(germ, weights, i):
    """Report for chart i (1-based)."""
    if not 1 <= i <= germ.dim:
        raise DomainError(f"chart index {i} outside 1..{germ.dim}")
    k = i - 1
    w = [Fraction(x) for x in weights]
    if not in_lattice(w, germ):
        raise DomainError("weights are not in the lattice N")
    gens = _chart_generators(germ, w, k)
    qtype, gen = group_type(gens)
    stricts = [strict_transform(eq, w, k) for eq in germ.equations]
    zero = tuple(0 for _ in range(germ.dim))
    on_z = all(zero not in s.terms for s in stricts)
    smooth = False
    surface = None
    terminal = None
    if not on_z:
        terminal = True
    else:
        jac = [
            [s.terms.get(tuple(int(j == c) for j in range(germ.dim)), Fraction(0)) for c in range(germ.dim)]
            for s in stricts
        ]
        smooth = _rank(jac) == len(stricts)
        if smooth and qtype.cyclic:
            ws = list(qtype.weights)
            for s in stricts:
                chi = _poly_weight(s, gen, qtype.order)
                ws.remove(chi)
            surface = QuotientType(qtype.order, tuple(ws), True)
            terminal = terminal_quotient_check(surface.order, surface.weights)
        elif smooth:
            surface = QuotientType(qtype.order, (), False)
            terminal = False
        else:
            # hyperquotient origin: only a necessary condition is decidable,
            # and only when the group has no quasi-reflections
            mult_ok = cdv_multiplicity_ok(stricts)
            if not mult_ok and not has_quasi_reflection(gens):
                terminal = False
            return ChartReport(i, qtype, on_z, smooth, surface, terminal, mult_ok)
    return ChartReport(i, qtype, on_z, smooth, surface, terminal)


def _poly_weight(poly, gen, order):
    exp = next(iter(poly.terms))
    if gen is None:
        return 0
    return int(sum(l * c for l, c in zip(exp, gen)) * order) % order


@dataclass(frozen=True)
class BlowupReport:
    weights: tuple
    primitive: bool
    orders: tuple
    discrepancy: Fraction
    e_cubed: Fraction
    charts: tuple


def blowup(germ, weights):
    w = tuple(Fraction(x) for x in weights)
    prim = is_primitive(w, germ)
    return BlowupReport(
        weights=w,
        primitive=prim,
        orders=tuple(orders(germ, w)),
        discrepancy=discrepancy(germ, w),
        e_cubed=e_cubed(germ, w),
        charts=tuple(chart(germ, w, i) for i in range(1, germ.dim + 1)),
    )


def leading_forms(germ, weights):
    return [format_poly(leading_form(eq, weights)) for eq in germ.equations]
