"""Baskets solving the numerical equation of the classification, and the
arithmetic filters used to prune the possible discrepancies a/n.

A basket J is a multiset of pairs (r, v). It is admissible when
sum v(r-v)/(2r) < 1, and then (a/n)E^3 = 2(1 - sum).
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import partial
from itertools import permutations
from math import gcd

from ._parallel import pmap
from .exact_arith import DomainError, is_integer, lcm_all
from .riemann_roch import consistent_assignments, d_difference, solve_Ec2


class NotClassified(DomainError):
    pass


def term(r, v):
    return Fraction(v * (r - v), 2 * r)


def basket_value(J):
    return 2 * (1 - sum((term(r, v) for r, v in J), Fraction(0)))


def canon(J):
    return tuple(sorted((int(r), int(v)) for r, v in J))


@dataclass(frozen=True)
class BasketPattern:
    type_no: int
    entries: tuple  # (r or parameter name, v)
    value_text: str
    min_r: int = 2
    label: str = ""

    @property
    def params(self):
        out = []
        for r, _ in self.entries:
            if isinstance(r, str) and r not in out:
                out.append(r)
        return tuple(out)

    @property
    def parametric(self):
        return bool(self.params)

    def admissible(self, binding):
        if any(binding[p] < self.min_r for p in self.params):
            return False
        if "r1" in binding and binding["r1"] > binding["r2"]:
            return False
        return all(
            2 * v <= (binding[r] if isinstance(r, str) else r) for r, v in self.entries
        )

    def instantiate(self, **binding):
        if set(binding) != set(self.params) or not self.admissible(binding):
            raise DomainError(f"bad parameters {binding} for row {self.type_no}")
        return canon((binding[r] if isinstance(r, str) else r, v) for r, v in self.entries)

    def value(self, **binding):
        return basket_value(self.instantiate(**binding))

    def bind(self, J):
        """Parameter binding making the pattern equal to J, or None."""
        J = canon(J)
        if len(J) != len(self.entries):
            return None
        for perm in set(permutations(J)):
            binding = {}
            ok = True
            for (pr, pv), (r, v) in zip(self.entries, perm):
                if pv != v:
                    ok = False
                    break
                if isinstance(pr, str):
                    if binding.setdefault(pr, r) != r:
                        ok = False
                        break
                elif pr != r:
                    ok = False
                    break
            if ok and self.admissible(binding):
                return binding
        return None

    def text(self):
        if not self.entries:
            return "{}"
        return ", ".join(f"({r},{v})" for r, v in self.entries)


_TABLE3 = (
    BasketPattern(1, ((6, 3),), "1/2"),
    BasketPattern(2, ((7, 3),), "2/7"),
    BasketPattern(3, ((8, 3),), "1/8"),
    BasketPattern(4, ((4, 2), ("r", 1)), "1/r"),
    BasketPattern(5, ((5, 2), (2, 1)), "3/10"),
    BasketPattern(6, ((5, 2), (3, 1)), "2/15"),
    BasketPattern(7, ((5, 2), (4, 1)), "1/20"),
    BasketPattern(8, ((6, 2), (2, 1)), "1/6"),
    BasketPattern(9, ((7, 2), (2, 1)), "1/14"),
    BasketPattern(10, ((2, 1), (2, 1), ("r", 1)), "1/r"),
    BasketPattern(11, ((2, 1), (3, 1), (3, 1)), "1/6"),
    BasketPattern(12, ((2, 1), (3, 1), (4, 1)), "1/12"),
    BasketPattern(13, ((2, 1), (3, 1), (5, 1)), "1/30"),
    BasketPattern(14, (("r", 2),), "4/r", min_r=4),
    BasketPattern(15, (("r1", 1), ("r2", 1)), "1/r1+1/r2", label="r1 <= r2"),
    BasketPattern(16, (("r", 1),), "1+1/r"),
    BasketPattern(17, (), "2"),
)

# geometric refinements of No 15; annotation only, never inferred
SUBTYPES_15 = ("15'a", "15'b", "15''")


def table3():
    return list(_TABLE3)


def row(type_no):
    return _TABLE3[type_no - 1]


def symbolic_value(pattern, **binding):
    """Evaluate the printed value text, independently of the basket sum."""
    env = {k: Fraction(v) for k, v in binding.items()}
    total = Fraction(0)
    for part in pattern.value_text.split("+"):
        num, _, den = part.partition("/")
        num = env[num] if num in env else Fraction(num or 1)
        den = env[den] if den in env else Fraction(den or 1)
        total += num / den
    return total


def match_type(J):
    J = canon(J)
    hits = [p.type_no for p in _TABLE3 if p.bind(J) is not None]
    if len(hits) != 1:
        raise NotClassified(f"not a classification basket: {list(J)} (rows {hits})")
    return hits[0]


def _pairs(r_max):
    out = [(r, v) for r in range(2, r_max + 1) for v in range(1, r // 2 + 1)]
    out.sort(key=lambda rv: (term(*rv), rv))
    return out


def _from_first(i, pairs):
    found = []
    t1 = term(*pairs[i])
    if t1 >= 1:
        return found
    found.append((pairs[i],))
    for j in range(i, len(pairs)):
        t2 = t1 + term(*pairs[j])
        if t2 >= 1:
            break
        found.append((pairs[i], pairs[j]))
        for k in range(j, len(pairs)):
            if t2 + term(*pairs[k]) >= 1:
                break
            found.append((pairs[i], pairs[j], pairs[k]))
    return found


def enumerate_baskets(r_max):
    """Every admissible basket with indices <= r_max, with its value (a/n)E^3.

    Each term is >= 1/4 so at most three entries occur; scanning pairs in
    increasing term order lets every loop stop at the first overflow.
    """
    if r_max < 2:
        raise DomainError("r_max must be at least 2")
    pairs = _pairs(r_max)
    chunks = pmap(partial(_from_first, pairs=pairs), range(len(pairs)))
    out = {(): Fraction(2)}
    for chunk in chunks:
        for J in chunk:
            J = canon(J)
            out[J] = basket_value(J)
    return sorted(out.items())


def table3_listing(r_max):
    grouped = {p.type_no: [] for p in _TABLE3}
    for J, val in enumerate_baskets(r_max):
        grouped[match_type(J)].append((J, val))
    return grouped


def rR(J):
    R = lcm_all(r for r, _ in J)
    R_star = lcm_all(r // gcd(r, v) for r, v in J)
    return R, R_star


def integrality_filter(J, a, n):
    J = canon(J)
    e3 = Fraction(n, a) * basket_value(J)
    R, R_star = rR(J)
    return is_integer(R_star * e3) and is_integer(Fraction(a, n) ** 2 * R * e3)


def min_discrepancy_feasible(a, n, r, e):
    for n_m in range(1, r // a + 1):
        rest = r - a * n_m
        if rest <= 0 or rest % n:
            continue
        n_a = rest // n
        if (n_m + e * n_a) % r == 0:
            return True
    return False


# representative instances; the two lattice conditions do not depend on r
_CANDIDATE_PATTERNS = {
    14: lambda rp: ((2 * rp, 2),),
    15: lambda rp: ((2 * rp, 1), (2 * rp, 1)),
}


def _pre_candidates(type_no, bound=32):
    shape = _CANDIDATE_PATTERNS[type_no]
    out = []
    for ap in range(1, bound + 1):
        for np_ in range(1, bound + 1):
            if gcd(ap, np_) != 1:
                continue
            a, n = 2 * ap, 2 * np_
            if all(integrality_filter(shape(rp), a, n) for rp in range(2, 9)):
                out.append((a, n))
    return out


def _integral_step(type_no, a, n, rp_max):
    """A consistent instance with d(2,0)-d(1,0) integral, or None."""
    from .covering import d_cover

    for rp in range(2, rp_max + 1):
        r = 2 * rp
        J = _CANDIDATE_PATTERNS[type_no](rp)
        choices = consistent_assignments(r, J[0][1], a, n)
        # the index-2 cover must ramify with d = r/2 at every point
        choices = [q for q in choices if d_cover(q, a, n, 2) == r // 2]
        e3 = Fraction(n, a) * basket_value(J)
        combos = [(q,) for q in choices]
        if len(J) == 2:
            combos = [(q1, q2) for i, q1 in enumerate(choices) for q2 in choices[i:]]
        for basket in combos:
            prof = solve_Ec2(a, n, basket, e3)
            if is_integer(d_difference(prof, 1, 0)):
                return prof
    return None


@dataclass(frozen=True)
class CandidateReport:
    type_no: int
    pre: tuple
    post: tuple
    excluded: tuple  # ((a, n), reason)


def candidate_report(type_no, rp_max=24):
    if type_no not in _CANDIDATE_PATTERNS:
        raise DomainError("candidates are defined for types 14 and 15 only")
    pre = tuple(_pre_candidates(type_no))
    post, excluded = [], []
    for a, n in pre:
        if _integral_step(type_no, a, n, rp_max) is not None:
            post.append((a, n))
        else:
            excluded.append(
                ((a, n), f"d(2,0)-d(1,0) not integral for any consistent basket with r <= {2 * rp_max}")
            )
    return CandidateReport(type_no, pre, tuple(post), tuple(excluded))


def coprime_candidates(type_no, stage="post"):
    rep = candidate_report(type_no)
    return list(rep.pre if stage == "pre" else rep.post)
