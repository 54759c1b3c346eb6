from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from swapfbct.field import (
    Field,
    FieldError,
    default_modulus,
    field_from_string,
    get_field,
    is_irreducible,
    parse_field_string,
)

SMALL = [(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (5, 1), (5, 2), (7, 1)]


def ref_mul(field: Field, x: int, y: int) -> int:
    # schoolbook product of coefficient vectors, reduced by the modulus
    p, n, mod = field.p, field.n, field.spec.modulus
    a, b = field.to_coeffs(x), field.to_coeffs(y)
    prod = [0] * (2 * n - 1)
    for i, j in itertools.product(range(n), range(n)):
        prod[i + j] = (prod[i + j] + a[i] * b[j]) % p
    for k in range(len(prod) - 1, n - 1, -1):
        c = prod[k]
        if c:
            for i in range(n + 1):
                prod[k - n + i] = (prod[k - n + i] - c * mod[i]) % p
    return field.from_coeffs(prod[:n])


def ref_add(field: Field, x: int, y: int) -> int:
    return field.from_coeffs((a + b) % field.p for a, b in zip(field.to_coeffs(x), field.to_coeffs(y)))


@pytest.mark.parametrize("p,n", SMALL)
def test_axioms_exhaustive(p, n):
    F = get_field(p, n)
    q = F.q
    for x in range(q):
        assert F.add(x, 0) == x and F.mul(x, 1) == x
        assert F.add(x, F.neg(x)) == 0
        if x:
            assert F.mul(x, F.inv(x)) == 1
        for y in range(q):
            assert F.add(x, y) == ref_add(F, x, y)
            assert F.mul(x, y) == ref_mul(F, x, y)
            assert F.mul(x, y) == F.mul(y, x)
    rng = np.random.default_rng(0)
    for x, y, z in rng.integers(0, q, size=(50, 3)).tolist():
        assert F.mul(x, F.add(y, z)) == F.add(F.mul(x, y), F.mul(x, z))
        assert F.mul(F.mul(x, y), z) == F.mul(x, F.mul(y, z))


@pytest.mark.parametrize("p,n", SMALL + [(2, 8), (3, 5)])
def test_vector_ops_match_scalar(p, n):
    F = get_field(p, n)
    xs = np.arange(F.q)
    ys = (xs * 7 + 3) % F.q
    assert F.add_vec(xs, ys).tolist() == [F.add(x, y) for x, y in zip(xs.tolist(), ys.tolist())]
    assert F.sub_vec(xs, ys).tolist() == [F.sub(x, y) for x, y in zip(xs.tolist(), ys.tolist())]
    assert F.mul_vec(xs, ys).tolist() == [F.mul(x, y) for x, y in zip(xs.tolist(), ys.tolist())]
    assert F.inv_vec(xs).tolist() == [F.inv(x) if x else 0 for x in xs.tolist()]
    assert F.trace_vec(xs).tolist() == [F.trace(x) for x in xs.tolist()]
    assert F.neg_table().tolist() == [F.neg(x) for x in xs.tolist()]


@pytest.mark.parametrize("p,n", [(2, 3), (2, 4), (2, 7), (3, 3), (5, 2), (7, 2)])
def test_trace_is_balanced_and_frobenius_sum(p, n):
    F = get_field(p, n)
    counts = np.bincount(F.trace_vec(np.arange(F.q)), minlength=p)
    assert counts.tolist() == [F.q // p] * p
    for x in range(0, F.q, max(1, F.q // 17)):
        s, y = 0, x
        for _ in range(n):
            s = F.add(s, y)
            y = F.pow(y, p)
        assert s == F.trace(x)


def test_generator_has_full_order():
    for p, n in [(2, 5), (3, 4), (7, 2), (13, 1)]:
        F = get_field(p, n)
        g = F.generator
        seen = {F.pow(g, k) for k in range(F.q - 1)}
        assert len(seen) == F.q - 1


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_quadratic_roots_match_enumeration(n):
    F = get_field(2, n)
    rng = np.random.default_rng(n)
    for a, b, c in rng.integers(0, F.q, size=(120, 3)).tolist():
        if a == 0:
            continue
        roots = tuple(x for x in range(F.q) if F.add(F.add(F.mul(a, F.mul(x, x)), F.mul(b, x)), c) == 0)
        assert F.quadratic_roots_gf2n(a, b, c) == roots
        assert F.solve_quadratic_count_gf2n(a, b, c) == len(roots)


@pytest.mark.parametrize("n", [3, 4, 6])
def test_artin_schreier(n):
    F = get_field(2, n)
    for theta in range(F.q):
        y = F.solve_artin_schreier(theta)
        if F.trace(theta):
            assert y is None
        else:
            assert F.add(F.mul(y, y), y) == theta


@pytest.mark.parametrize("p,n", [(3, 2), (3, 3), (5, 2), (7, 1), (13, 1)])
def test_squares_and_cubes(p, n):
    F = get_field(p, n)
    squares = {F.mul(x, x) for x in range(F.q)}
    cubes = {F.pow(x, 3) for x in range(F.q)}
    for x in range(F.q):
        assert F.is_square(x) == (x in squares)
        assert F.is_cube(x) == (x in cubes)


def test_is_square_rejects_char2():
    with pytest.raises(FieldError):
        get_field(2, 3).is_square(3)


def test_subfields():
    F = get_field(2, 6)
    assert sum(F.in_subfield(x, 2) for x in range(F.q)) == 4
    assert sum(F.in_subfield(x, 3) for x in range(F.q)) == 8
    assert sum(F.in_subfield(x, 1) for x in range(F.q)) == 2


def test_default_modulus_irreducible_and_pinned():
    for p, n in [(2, 3), (2, 8), (3, 4), (5, 3), (7, 2)]:
        m = default_modulus(p, n)
        assert len(m) == n + 1 and m[-1] == 1 and is_irreducible(m, p)
        assert default_modulus(p, n) == m
    assert default_modulus(2, 3) == (1, 1, 0, 1)


def test_parse_field_strings():
    assert str(parse_field_string("2^3:1,1,0,1")) == "2^3:1,1,0,1"
    assert parse_field_string("29").n == 1
    F = field_from_string("2^8")
    assert F.q == 256
    assert field_from_string("2^3:1,0,1,1").spec.modulus == (1, 0, 1, 1)
    for bad in ["x", "4^2", "2^3:1,1,1,1", "2^3:1,1", "2^0", "2^40"]:
        with pytest.raises(FieldError):
            field_from_string(bad)


def test_check_rejects_out_of_range():
    F = get_field(2, 3)
    with pytest.raises(FieldError):
        F.check(8)
    with pytest.raises(FieldError):
        F.check(-1)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([(2, 5), (2, 8), (3, 4), (11, 2), (101, 1)]), st.data())
def test_field_identities_property(pn, data):
    F = get_field(*pn)
    x = data.draw(st.integers(0, F.q - 1))
    y = data.draw(st.integers(1, F.q - 1))
    assert F.mul(F.div(x, y), y) == x
    assert F.sub(F.add(x, y), y) == x
    assert F.pow(x, F.q) == x
    assert F.trace(F.pow(x, F.p)) == F.trace(x)
