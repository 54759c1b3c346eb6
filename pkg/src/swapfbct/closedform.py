"""Closed-form FBCT entries and spectra for Inv and the swapped inverse families.

Every evaluator returns a ``ClosedFormCase`` naming the clause that fired.
Clauses are tried in a fixed order: trivial, then 8, then 4, then 0.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .fbct import Spectrum, expected_spectrum_total
from .field import Field, FieldError


@dataclass(frozen=True)
class ClosedFormCase:
    value: int
    label: str
    exact: bool = True


def _need_char2(field: Field):
    if not field.char2:
        raise FieldError("this closed form is for characteristic 2")


def _need_odd(field: Field):
    if field.char2:
        raise FieldError("this closed form is for odd characteristic")


def _in_f4_star(field: Field, x: int) -> bool:
    return x != 0 and field.pow(x, 3) == 1


def _ratio_primitive_cube_root(field: Field, a: int, b: int) -> bool:
    # b/a in F4 \ F2  <=>  a^2 + ab + b^2 = 0 (a, b nonzero)
    m = field.mul
    return field.add(field.add(m(a, a), m(a, b)), m(b, b)) == 0


# -- Inv ------------------------------------------------------------------------

def nabla_inv_even(field: Field, a: int, b: int) -> ClosedFormCase:
    _need_char2(field)
    if a == 0 or b == 0 or a == b:
        return ClosedFormCase(field.q, "trivial")
    if _ratio_primitive_cube_root(field, a, b):
        return ClosedFormCase(4, "ratio-in-F4")
    return ClosedFormCase(0, "otherwise")


def nabla_inv_odd(field: Field, a: int, b: int) -> ClosedFormCase:
    _need_odd(field)
    if a == 0 or b == 0:
        return ClosedFormCase(field.q, "trivial")
    m, add = field.mul, field.add
    a2, b2 = m(a, a), m(b, b)
    if field.p == 3:
        return ClosedFormCase(3, "p3-equal-squares") if a2 == b2 else ClosedFormCase(1, "p3-otherwise")
    if (field.q - 1) % 3 == 0:
        quartic = add(add(m(a2, a2), m(a2, b2)), m(b2, b2))
        if quartic == 0:
            return ClosedFormCase(3, "quartic-zero")
        return ClosedFormCase(1, "quartic-nonzero")
    return ClosedFormCase(1, "no-cube-roots")


# -- Inv o (0,1) ----------------------------------------------------------------

def _root_x3_x_1(field: Field, x: int) -> bool:
    return field.add(field.add(field.pow(x, 3), x), 1) == 0


def nabla_inv01_even(field: Field, a: int, b: int) -> ClosedFormCase:
    _need_char2(field)
    if a == 0 or b == 0 or a == b:
        return ClosedFormCase(field.q, "trivial")
    both_roots = _root_x3_x_1(field, a) and _root_x3_x_1(field, b)
    if both_roots:
        return ClosedFormCase(8, "both-roots-of-x3+x+1")
    if _in_f4_star(field, a) and _in_f4_star(field, b):
        return ClosedFormCase(4, "both-in-F4*")
    m, add = field.mul, field.add
    ab = m(a, b)
    s = add(add(m(a, a), ab), m(b, b))
    if s == 1 or s == m(ab, add(a, b)):
        return ClosedFormCase(4, "set-S")
    return ClosedFormCase(0, "otherwise")


def spectrum_inv01_even(field: Field) -> Spectrum:
    _need_char2(field)
    n = field.n
    if n < 3:
        raise FieldError("the spectrum formulas need n >= 3")
    even, div3 = n % 2 == 0, n % 3 == 0
    w8 = 6 if div3 else 0
    w4 = (1 << (n + 1)) - {(True, True): 14, (True, False): 2,
                           (False, True): 16, (False, False): 4}[(even, div3)]
    w0 = expected_spectrum_total(field) - w4 - w8
    return Spectrum({0: w0, 4: w4, 8: w8})


def uniformity_inv01_even(n: int) -> int:
    return 8 if n % 3 == 0 else 4


# exceptional (a, b) with entry 4; sign closure is applied below
_INV01_ODD_FOURS = {29: (2, 12), 37: (2, 6)}


@functools.lru_cache(maxsize=None)
def _inv01_odd_fours(p: int) -> frozenset:
    if p not in _INV01_ODD_FOURS:
        return frozenset()
    u, v = _INV01_ODD_FOURS[p]
    pairs = set()
    for su in (u, p - u):
        for sv in (v, p - v):
            pairs.add((su, sv))
            pairs.add((sv, su))
    return frozenset(pairs)


def nabla_inv01_odd(field: Field, a: int, b: int) -> ClosedFormCase:
    """Exact on the trivial lines, the sixteen value-4 pairs and the a, b in {+-1}
    and a = +-b sub-cases; a bound-typed "<= 3" elsewhere."""
    _need_odd(field)
    p = field.p
    if a == 0 or b == 0:
        return ClosedFormCase(field.q, "trivial")
    if (a, b) in _inv01_odd_fours(p):
        return ClosedFormCase(4, f"exceptional-p{p}")
    one, minus_one = 1, field.neg(1)
    if a in (one, minus_one) and b in (one, minus_one):
        return ClosedFormCase({3: 3, 5: 1}.get(p, 0), "a,b=+-1")
    if b == a or b == field.neg(a):
        if a in (one, minus_one):
            return ClosedFormCase({3: 3, 5: 1}.get(p, 0), "a,b=+-1")
        if (p, a) in {(7, 2), (7, 5), (11, 4), (11, 7)}:
            return ClosedFormCase(2, "a=+-b-special")
        if p != 3:
            third = field.inv(3)
            three_halves = field.mul(3, field.inv(2))
            if a in {third, field.neg(third), three_halves, field.neg(three_halves)}:
                return ClosedFormCase(1, "a=+-b-thirds")
        return ClosedFormCase(0, "a=+-b-otherwise")
    return ClosedFormCase(3, "bound<=3", exact=False)


# -- Inv o (1, gamma), p = 2 -------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GammaClassification:
    """Everything about gamma that the Inv o (1, gamma) case split reads."""

    field: Field
    gamma: int
    s1: frozenset
    s2: frozenset
    s3: frozenset
    s4: frozenset
    s5: frozenset
    s6: frozenset
    tr_gamma: int
    tr_inv_gamma: int
    in_f4: bool
    in_f8: bool
    cube_targets: tuple  # (gamma + 1, gamma^3 + gamma^2)

    def g_value(self, a: int, b: int) -> int:
        f, g = self.field, self.gamma
        m, add = f.mul, f.add
        ab = m(a, b)
        return add(m(ab, add(a, b)), m(add(add(m(a, a), ab), m(b, b)), add(g, 1)))

    def in_s7(self, a: int, b: int) -> bool:
        return a != 0 and b != 0 and self.g_value(a, b) == self.cube_targets[0]

    def in_s8(self, a: int, b: int) -> bool:
        return a != 0 and b != 0 and self.g_value(a, b) == self.cube_targets[1]

    def s9_mask(self) -> np.ndarray:
        return _remark_masks(self.field, self.gamma)[0]

    def s10_mask(self) -> np.ndarray:
        return _remark_masks(self.field, self.gamma)[1]

    def summary(self) -> dict:
        return {"gamma": self.gamma, "tr_gamma": self.tr_gamma, "tr_inv_gamma": self.tr_inv_gamma,
                "in_F4": self.in_f4, "in_F8": self.in_f8,
                **{f"S{i}": sorted(getattr(self, f"s{i}")) for i in range(1, 7)}}


F8_RULES = ("stated", "companion")


@functools.lru_cache(maxsize=4096)
def classify_gamma(field: Field, gamma: int, f8_rule: str = "stated") -> GammaClassification:
    """Materialise S1..S6 for gamma.

    f8_rule="stated" splits the roots at F8: roots in F8 feed S1/S2, all
    others feed S3..S6.  With "companion", S1/S2 hold the common roots of
    each equation pair (the 8-entries) and S3..S6 keep every remaining root,
    in F8 or not.
    """
    _need_char2(field)
    if f8_rule not in F8_RULES:
        raise ValueError(f"f8_rule must be one of {F8_RULES}")
    g = field.check(gamma)
    if g in (0, 1):
        raise FieldError("gamma must not lie in F2")
    m, add = field.mul, field.add
    g2 = m(g, g)
    g3 = m(g2, g)
    k = add(add(add(g3, g2), g), 1)  # gamma^3 + gamma^2 + gamma + 1

    r1 = field.quadratic_roots_gf2n(1, 1, g)   # gamma = c(c+1)
    r2 = field.quadratic_roots_gf2n(1, g, g)   # gamma = c^2/(c+1)
    r4 = field.quadratic_roots_gf2n(g, g, k)   # g^3+g^2+(c^2+c+1)g = 1
    r6 = field.quadratic_roots_gf2n(1, g, k)   # g^3+g^2+(c+1)g+c^2 = 1
    if f8_rule == "stated":
        def in_f8(c):
            return field.in_subfield(c, 3)
        s1 = frozenset(c for c in r1 if in_f8(c) and c not in (0, 1))
        s2 = frozenset(c for c in r2 if in_f8(c) and c not in (0, 1))
        s3, s4, s5, s6 = (frozenset(c for c in r if not in_f8(c)) for r in (r1, r4, r2, r6))
    else:
        s1 = frozenset(set(r1) & set(r4))
        s2 = frozenset(set(r2) & set(r6))
        s3, s4 = frozenset(r1) - s1, frozenset(r4) - s1
        s5, s6 = frozenset(r2) - s2, frozenset(r6) - s2
    return GammaClassification(
        field=field, gamma=g, s1=s1, s2=s2, s3=s3, s4=s4, s5=s5, s6=s6,
        tr_gamma=field.trace(g), tr_inv_gamma=field.trace(field.inv(g)),
        in_f4=field.in_subfield(g, 2), in_f8=field.in_subfield(g, 3),
        cube_targets=(add(g, 1), add(g3, g2)),
    )


def _others(a: int, b: int, pivot: int) -> set:
    return {a, b} - {pivot}


def nabla_inv1g_even(field: Field, gamma: int, a: int, b: int, f8_rule: str = "stated") -> ClosedFormCase:
    _need_char2(field)
    cls = classify_gamma(field, gamma, f8_rule)
    g = cls.gamma
    if a == 0 or b == 0 or a == b:
        return ClosedFormCase(field.q, "trivial")
    trio = {a, b, a ^ b}
    has_one, has_gamma = 1 in trio, g in trio
    ratio_f4 = _ratio_primitive_cube_root(field, a, b)
    disjoint = not has_one and not has_gamma
    cube = field.pow(a, 3)

    if has_one and _others(a, b, 1) <= cls.s1:
        return ClosedFormCase(8, "one-in-trio,S1")
    if has_gamma and _others(a, b, g) <= cls.s2:
        return ClosedFormCase(8, "gamma-in-trio,S2")
    if disjoint and ratio_f4 and cube in cls.cube_targets:
        return ClosedFormCase(8, "disjoint,ratio-in-F4,cube")

    if cls.in_f4 and _in_f4_star(field, a) and _in_f4_star(field, b):
        return ClosedFormCase(4, "gamma-in-F4,a,b-in-F4*")
    if has_one and _others(a, b, 1) <= (cls.s3 | cls.s4):
        return ClosedFormCase(4, "one-in-trio,S3/S4")
    if has_gamma and _others(a, b, g) <= (cls.s5 | cls.s6):
        return ClosedFormCase(4, "gamma-in-trio,S5/S6")
    if disjoint:
        in78 = cls.in_s7(a, b) or cls.in_s8(a, b)
        if not ratio_f4 and in78:
            return ClosedFormCase(4, "disjoint,ratio-not-in-F4,S7/S8")
        if ratio_f4 and not in78:
            return ClosedFormCase(4, "disjoint,ratio-in-F4,not-S7/S8")
    return ClosedFormCase(0, "otherwise")


def _cubes_excluding_one(field: Field, x: int) -> bool:
    """Membership in C_n: nonzero cubes other than 1."""
    return x not in (0, 1) and field.is_cube(x)


def omega8_inv1g_even(field: Field, gamma: int) -> int:
    cls = classify_gamma(field, gamma)
    n = field.n
    f8 = cls.in_f8
    if n % 6 == 0 and f8:
        return 12
    if n % 3 == 0 and n % 2 == 1 and f8:
        return 6
    if n % 2 == 0 and not f8:
        return 6 * sum(_cubes_excluding_one(field, t) for t in set(cls.cube_targets))
    return 0


def uniformity_inv1g_even(field: Field, gamma: int) -> int:
    cls = classify_gamma(field, gamma)
    n = field.n
    if n % 2 == 0 and any(_cubes_excluding_one(field, t) for t in cls.cube_targets):
        return 8
    if n % 3 == 0 and cls.in_f8:
        return 8
    return 4


@functools.lru_cache(maxsize=256)
def _remark_masks(field: Field, gamma: int) -> tuple[np.ndarray, np.ndarray]:
    """Boolean masks over codes a for the two trace conditions (a != 0, gamma + 1)."""
    g = gamma
    xs = np.arange(field.q, dtype=np.int64)
    shift = xs ^ (g ^ 1)                                 # a + gamma + 1
    valid = (xs != 0) & (shift != 0)
    inv_shift = field.inv_vec(shift)
    rhs = field.trace_vec(field.mul_vec(g, field.inv_vec(field.mul_vec(xs, shift))))
    lhs9 = field.trace_vec(field.mul_vec(g, inv_shift))
    lhs10 = field.trace_vec(inv_shift)
    s9 = valid & (lhs9 == rhs)
    s10 = valid & (lhs10 == rhs)
    s9.setflags(write=False)
    s10.setflags(write=False)
    return s9, s10


def remark_intersection_size(field: Field, gamma: int) -> int:
    s9, s10 = _remark_masks(field, gamma)
    return int(np.count_nonzero(s9 & s10))


def remark_predicted_size(n: int) -> int:
    return (1 << (n - 2)) - 1


def _trace_class_overlap(cls: GammaClassification) -> int:
    # pairs with 1 or gamma in {a, b, a+b} that still satisfy one of the two equations
    t, ti = cls.tr_gamma, cls.tr_inv_gamma
    if t == 0 and ti == 0:
        return 4
    if t == 1 and ti == 1:
        return 16
    return 10


def spectrum_inv1g_even(field: Field, gamma: int, assume_remark_conjecture: bool = True) -> Spectrum:
    """Closed-form spectrum of Inv o (1, gamma) over nontrivial pairs.

    Odd n: complete.  With ``assume_remark_conjecture`` the intersection size
    is taken as 2^(n-2) - 1 and the result records that assumption; without
    it the size is counted directly from the two trace conditions.
    Even n: only omega_8 is known in closed form; ``complete`` is False.
    """
    _need_char2(field)
    cls = classify_gamma(field, gamma)
    n, total = field.n, expected_spectrum_total(field)
    w8 = omega8_inv1g_even(field, gamma)
    if n % 2 == 0:
        return Spectrum({8: w8}, complete=False)
    if assume_remark_conjecture:
        inter = remark_predicted_size(n)
        assumptions = ("remark-conjecture",)
    else:
        inter = remark_intersection_size(field, gamma)
        assumptions = ()
    outside = 4 * inter + 2 * ((1 << (n - 1)) - 1) - _trace_class_overlap(cls)
    w4 = outside + (0 if cls.in_f8 else 12)
    return Spectrum({0: total - w4 - w8, 4: w4, 8: w8}, assumptions=assumptions)


def gamma_trace_classes(field: Field) -> dict[str, list[int]]:
    """Group every gamma outside F2 by (tr(gamma), tr(1/gamma)) and F8 membership."""
    _need_char2(field)
    out: dict[str, list[int]] = {}
    for g in range(2, field.q):
        cls = classify_gamma(field, g)
        key = f"tr={cls.tr_gamma},tr_inv={cls.tr_inv_gamma}" + (",in_F8" if cls.in_f8 else "")
        out.setdefault(key, []).append(g)
    return dict(sorted(out.items()))


# -- Inv o (1, gamma), p = 3 -------------------------------------------------------

def _need_p3(field: Field):
    if field.p != 3:
        raise FieldError("this closed form is for characteristic 3")


def in_q_n(field: Field, x: int) -> bool:
    """Squares of F_{3^n} outside the prime field (codes below 3 are exactly F3)."""
    return x >= 3 and field.is_square(x)


def nabla_inv1g_p3_diagonal(field: Field, gamma: int, a: int) -> ClosedFormCase:
    """Entry (a, a) of Inv o (1, gamma) over F_{3^n}.

    For a = +-1 and a = +-gamma the entry is 3 when gamma^2 -+ gamma = 1 or
    gamma = -1, and 0 otherwise; for every other nonzero a it is 3 plus 3 for each of
    a^2 = 1 - gamma and a^2 = gamma(gamma - 1) that holds.
    """
    _need_p3(field)
    g = field.check(gamma)
    if g in (0, 1):
        raise FieldError("gamma must not lie in {0, 1}")
    if a == 0:
        return ClosedFormCase(field.q, "trivial")
    m, add, sub = field.mul, field.add, field.sub
    g2 = m(g, g)
    if g == field.neg(1) and a in (1, g):
        # gamma = -1 puts gamma and gamma +- 1 back inside F3
        return ClosedFormCase(3, "gamma=-1,a=+-1")
    if a in (1, field.neg(1)):
        return ClosedFormCase(3, "a=+-1,g^2-g=1") if sub(g2, g) == 1 else ClosedFormCase(0, "a=+-1")
    if a in (g, field.neg(g)):
        return ClosedFormCase(3, "a=+-g,g^2+g=1") if add(g2, g) == 1 else ClosedFormCase(0, "a=+-g")
    a2 = m(a, a)
    hits = (a2 == sub(1, g)) + (a2 == m(g, sub(g, 1)))
    label = {0: "base", 1: "one-extra-coset", 2: "two-extra-cosets"}[hits]
    return ClosedFormCase(3 + 3 * hits, label)


def conjectured_uniformity_p3(field: Field, gamma: int) -> int:
    """The {3, 6, 9} prediction for Inv o (1, gamma) over F_{3^n}."""
    _need_p3(field)
    g = field.check(gamma)
    m, add, sub = field.mul, field.add, field.sub
    if field.n % 2 == 0 and g == field.neg(1):
        return 9
    g2 = m(g, g)
    cands = {sub(1, g), m(g, sub(g, 1))}
    if any(in_q_n(field, c) for c in cands) and add(g2, g) != 1 and sub(g2, g) != 1:
        return 6
    return 3
