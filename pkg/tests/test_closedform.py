from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from swapfbct import closedform as cf
from swapfbct.fbct import fbct_table, nabla, nontrivial_mask, second_order_uniformity, spectrum
from swapfbct.field import FieldError, get_field
from swapfbct.functions import inverse_function, swapped_inverse


def mismatches(m, evaluate, pairs=None):
    q = m.field.q
    if pairs is None:
        pairs = ((a, b) for a in range(q) for b in range(q))
    bad = []
    for a, b in pairs:
        c = evaluate(a, b)
        v = m[a, b]
        if (c.exact and c.value != v) or (not c.exact and v > c.value):
            bad.append((a, b, c.value, v, c.label))
    return bad


@pytest.mark.parametrize("n", range(2, 9))
def test_inv_even(n):
    F = get_field(2, n)
    m = fbct_table(inverse_function(F))
    assert mismatches(m, lambda a, b: cf.nabla_inv_even(F, a, b)) == []


@pytest.mark.parametrize("p,n", [(3, 1), (5, 1), (7, 1), (11, 1), (13, 1), (29, 1), (37, 1),
                                 (3, 2), (3, 3), (3, 4), (5, 2), (7, 2)])
def test_inv_odd(p, n):
    F = get_field(p, n)
    m = fbct_table(inverse_function(F), method="pairs")
    assert mismatches(m, lambda a, b: cf.nabla_inv_odd(F, a, b)) == []


@pytest.mark.parametrize("n", range(3, 9))
def test_inv01_even_entries_spectrum_uniformity(n):
    F = get_field(2, n)
    m = fbct_table(swapped_inverse(F, (0, 1)))
    assert mismatches(m, lambda a, b: cf.nabla_inv01_even(F, a, b)) == []
    assert spectrum(m).counts == cf.spectrum_inv01_even(F).counts
    assert second_order_uniformity(m) == cf.uniformity_inv01_even(n)


def test_inv01_even_reference_spectra():
    assert cf.spectrum_inv01_even(get_field(2, 6)).counts == {0: 3786, 4: 114, 8: 6}
    assert cf.spectrum_inv01_even(get_field(2, 5)).counts == {0: 870, 4: 60}


@pytest.mark.parametrize("p,n", [(3, 1), (5, 1), (7, 1), (11, 1), (29, 1), (37, 1), (41, 1),
                                 (3, 3), (5, 2), (7, 2)])
def test_inv01_odd(p, n):
    F = get_field(p, n)
    m = fbct_table(swapped_inverse(F, (0, 1)), method="pairs")
    assert mismatches(m, lambda a, b: cf.nabla_inv01_odd(F, a, b)) == []
    fours = {(a, b) for a, b in zip(*np.nonzero((m.values == 4) & nontrivial_mask(F)))}
    assert fours == set(cf._inv01_odd_fours(p))


def test_inv01_odd_exceptional_pairs():
    pairs = cf._inv01_odd_fours(29)
    assert len(pairs) == 8 and (2, 12) in pairs and (27, 17) in pairs and (12, 2) in pairs
    assert len(cf._inv01_odd_fours(37)) == 8
    assert cf._inv01_odd_fours(31) == frozenset()


@pytest.mark.parametrize("n", [3, 4, 5])
def test_inv1g_even_all_gamma(n):
    F = get_field(2, n)
    pairs = list(zip(*np.nonzero(nontrivial_mask(F))))
    for g in range(2, F.q):
        m = fbct_table(swapped_inverse(F, (1, g)), method="pairs")
        assert mismatches(m, lambda a, b: cf.nabla_inv1g_even(F, g, a, b), pairs) == [], g
        assert spectrum(m).omega(8) == cf.omega8_inv1g_even(F, g)
        assert second_order_uniformity(m) == cf.uniformity_inv1g_even(F, g)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_inv1g_even_companion_rule(n):
    F = get_field(2, n)
    pairs = list(zip(*np.nonzero(nontrivial_mask(F))))
    for g in range(2, F.q):
        m = fbct_table(swapped_inverse(F, (1, g)), method="pairs")
        assert mismatches(m, lambda a, b: cf.nabla_inv1g_even(F, g, a, b, "companion"), pairs) == []


def test_inv1g_stated_rule_misses_f8_roots_at_n6():
    # gamma outside F8 with an S4/S6 root in F8 \ F2: the stated sets give 0, brute force 4
    F = get_field(2, 6)
    g = 6
    m = fbct_table(swapped_inverse(F, (1, g)))
    bad = mismatches(m, lambda a, b: cf.nabla_inv1g_even(F, g, a, b))
    assert bad and all(v == 4 and c == 0 for _, _, c, v, _ in bad)
    cls = cf.classify_gamma(F, g, "companion")
    roots = cls.s4 | cls.s6
    assert any(F.in_subfield(r, 3) and r not in (0, 1) for r in roots)


@pytest.mark.parametrize("n", [3, 5, 7])
def test_inv1g_odd_n_spectra(n):
    F = get_field(2, n)
    for g in range(2, F.q):
        sp = spectrum(fbct_table(swapped_inverse(F, (1, g)), method="pairs"))
        assumed = cf.spectrum_inv1g_even(F, g)
        counted = cf.spectrum_inv1g_even(F, g, assume_remark_conjecture=False)
        assert sp.counts == assumed.counts == counted.counts, g
        assert assumed.assumptions == ("remark-conjecture",) and counted.assumptions == ()


def test_inv1g_spectrum_examples():
    F3 = get_field(2, 3)
    for g in range(2, 8):
        assert cf.spectrum_inv1g_even(F3, g).counts == {8: 6, 0: 36}
    F5 = get_field(2, 5)
    g = next(g for g in range(2, 32) if F5.trace(g) == 0 and F5.trace(F5.inv(g)) == 0)
    assert cf.spectrum_inv1g_even(F5, g).omega(4) == 2 ** 6 + 2
    sp = cf.spectrum_inv1g_even(get_field(2, 4), 2)
    assert not sp.complete and set(sp.counts) <= {8}


@pytest.mark.parametrize("n", [3, 5, 7, 9])
def test_remark_intersection(n):
    F = get_field(2, n)
    want = cf.remark_predicted_size(n)
    assert all(cf.remark_intersection_size(F, g) == want for g in range(2, F.q))


def test_f8_trace_identity():
    for n in (3, 9):
        F = get_field(2, n)
        for g in range(2, F.q):
            if F.in_subfield(g, 3):
                assert F.trace(F.add(g, F.pow(g, 3))) == 1


def test_gamma_classes_partition():
    F = get_field(2, 5)
    classes = cf.gamma_trace_classes(F)
    flat = sorted(g for gs in classes.values() for g in gs)
    assert flat == list(range(2, 32))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_p3_diagonal(n):
    F = get_field(3, n)
    for g in range(2, F.q):
        m = fbct_table(swapped_inverse(F, (1, g)), method="pairs")
        for a in range(1, F.q):
            assert cf.nabla_inv1g_p3_diagonal(F, g, a).value == m[a, a], (g, a)


def test_p3_conjecture_examples():
    F = get_field(3, 2)
    assert cf.conjectured_uniformity_p3(F, F.neg(1)) == 9
    for g in range(2, F.q):
        if F.add(F.mul(g, g), g) == 1:
            assert cf.conjectured_uniformity_p3(F, g) == 3
            assert second_order_uniformity(fbct_table(swapped_inverse(F, (1, g)))) == 3


def test_domain_errors():
    with pytest.raises(FieldError):
        cf.nabla_inv_even(get_field(3), 1, 2)
    with pytest.raises(FieldError):
        cf.nabla_inv_odd(get_field(2, 3), 1, 2)
    with pytest.raises(FieldError):
        cf.classify_gamma(get_field(2, 3), 1)
    with pytest.raises(FieldError):
        cf.nabla_inv1g_p3_diagonal(get_field(5), 2, 1)
    with pytest.raises(ValueError):
        cf.classify_gamma(get_field(2, 3), 2, "other")


_F7 = get_field(2, 7)


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 127), st.integers(1, 127), st.integers(1, 127))
def test_inv1g_matches_oracle_property(g, a, b):
    if a == b:
        return
    f = swapped_inverse(_F7, (1, g))
    assert cf.nabla_inv1g_even(_F7, g, a, b).value == nabla(f, a, b)
