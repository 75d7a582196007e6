import numpy as np
import pytest
from hypothesis import given, strategies as st

from fivegonal import scroll as sc
from fivegonal.linalg import rank
from fivegonal.scroll import ScrollSection, ScrollType, multiply

P = 10007
S3222 = ScrollType((3, 2, 2, 2))
S11 = ScrollType((1, 1))

scroll_types = (st.lists(st.integers(1, 5), min_size=1, max_size=5)
                .filter(lambda e: sum(e) >= 2)
                .map(lambda e: ScrollType(tuple(sorted(e, reverse=True)))))


def mono(scroll, alpha, s, t, c=1):
    return ScrollSection.monomial(scroll, alpha, s, t, c, P)


def random(scroll, a, b, seed):
    return sc.random_section(scroll, a, b, np.random.default_rng(seed), P)


# --- worked examples


def test_h0_examples():
    assert sc.h0(S3222, 1, 0) == 13
    assert sc.h0(S3222, 0, 3) == 4
    assert sc.h0(ScrollType((7, 1)), 0, 3) == 4
    assert sc.h0(S3222, 2, 0) == 55 == 9 * 5 + 10


def test_basis_examples():
    assert sc.basis(S3222, 0, 1) == [((0, 0, 0, 0), 1), ((0, 0, 0, 0), 0)]  # s, t
    assert sc.basis(S3222, 1, -3) == [((1, 0, 0, 0), 0)]
    b = sc.basis(S3222, 1, -2)
    assert b == [((1, 0, 0, 0), 1), ((1, 0, 0, 0), 0), ((0, 1, 0, 0), 0), ((0, 0, 1, 0), 0),
                 ((0, 0, 0, 1), 0)]


def test_multiply_examples():
    x = random(S3222, 1, -1, 0)
    one = ScrollSection.binary_form(S3222, [1], P)
    assert multiply(x, one) == x
    prod = multiply(mono(S3222, (1, 0, 0, 0), 1, 0), mono(S3222, (0, 1, 0, 0), 0, 1))
    assert prod.deg == (2, -2 - 1)
    assert list(prod.terms) == [(1, 1, 0, 0)]
    assert list(prod.terms[(1, 1, 0, 0)]) == [0, 1, 0]  # st
    a = ScrollSection.binary_form(S3222, [1, 1], P)
    b = ScrollSection.binary_form(S3222, [1, -1], P)
    assert multiply(a, b) == ScrollSection.binary_form(S3222, [1, 0, -1], P)


def test_phi_matrix_quadric_surface():
    m = sc.phi_matrix(S11, P)
    idx = sc.coordinate_index(S11)
    want = [[(0, 1), (1, 1)], [(0, 0), (1, 0)]]
    for r in range(2):
        for c in range(2):
            assert m[r][c] == sc.coordinate_section(S11, idx[want[r][c]], P)
    (q,) = sc.minors(S11)
    # x_{1,1} x_{2,0} - x_{2,1} x_{1,0}
    x11, x20, x21, x10 = (idx[k] for k in [(0, 1), (1, 0), (1, 1), (0, 0)])
    assert q == {tuple(sorted((x11, x20))): 1, tuple(sorted((x21, x10))): -1}


def test_phi_matrix_shape():
    ind = sc.phi_indices(S3222)
    assert ind.shape == (2, 9)
    dirs = [i for i, _ in sc.f_basis(S3222)]
    assert dirs == [0, 0, 0, 1, 1, 2, 2, 3, 3]


def test_section_to_quadric_examples():
    idx = sc.coordinate_index(S3222)
    # st^4 phi_1 phi_2 = (s t^2 phi_1)(t^2 phi_2)
    x = mono(S3222, (1, 1, 0, 0), 1, 4)
    assert sc.section_to_quadric(x) == {tuple(sorted((idx[(0, 1)], idx[(1, 0)]))): 1}
    # s^2 t^4 phi_1^2 has two lifts, x_{1,1}^2 and x_{1,2} x_{1,0}; the split rule picks the second
    y = mono(S3222, (2, 0, 0, 0), 2, 4)
    q = sc.section_to_quadric(y)
    assert q == {tuple(sorted((idx[(0, 2)], idx[(0, 0)]))): 1}
    assert sc.pullback(S3222, {(idx[(0, 1)], idx[(0, 1)]): 1}, P) == sc.pullback(S3222, q, P) == y
    with pytest.raises(ValueError):
        sc.section_to_quadric(random(S3222, 1, 0, 1))


def test_scroll_validation():
    with pytest.raises(ValueError):
        ScrollType((2, 0))
    with pytest.raises(ValueError):
        ScrollType((1, 2))
    assert ScrollType.balanced(9, 4).e == (3, 2, 2, 2)
    assert ScrollType.balanced(11, 4).e == (3, 3, 3, 2)
    assert (S3222.f, S3222.d, S3222.r) == (9, 4, 12)


def test_section_validation():
    with pytest.raises(ValueError):
        ScrollSection(S3222, 1, -3, {(0, 1, 0, 0): [1]}, P)  # not admissible
    with pytest.raises(ValueError):
        ScrollSection(S3222, 1, 0, {(1, 0, 0, 0): [1, 2]}, P)  # wrong form length
    with pytest.raises(ValueError):
        random(S3222, 1, 0, 0) + random(S3222, 1, 1, 0)


def test_globally_generated():
    assert sc.globally_generated(S3222, 1, -2)
    assert not sc.globally_generated(S3222, 1, -3)
    assert sc.globally_generated(S3222, 0, 0)
    assert not sc.globally_generated(S3222, 0, -1)


# --- invariants


@given(scroll_types, st.integers(0, 4), st.integers(-6, 6))
def test_h0_equals_basis_length(scroll, a, b):
    assert sc.h0(scroll, a, b) == len(sc.basis(scroll, a, b))
    if a * min(scroll.e) + b >= -1:
        assert sc.h0(scroll, a, b) == sc.h0_formula(scroll, a, b)


@given(scroll_types, st.integers(0, 2), st.integers(-2, 3), st.integers(0, 2), st.integers(-2, 3),
       st.integers(0, 2**16))
def test_multiply_commutative_associative(scroll, a1, b1, a2, b2, seed):
    x, y, z = random(scroll, a1, b1, seed), random(scroll, a2, b2, seed + 1), random(scroll, 1, 0, seed + 2)
    assert multiply(x, y) == multiply(y, x)
    assert multiply(multiply(x, y), z) == multiply(x, multiply(y, z))


@given(scroll_types, st.integers(0, 2), st.integers(-2, 3), st.integers(0, 2**16), st.integers(0, P - 1))
def test_multiply_bilinear(scroll, a, b, seed, c):
    x, x2 = random(scroll, a, b, seed), random(scroll, a, b, seed + 1)
    y = random(scroll, 1, -1, seed + 2)
    assert multiply(x + x2, y) == multiply(x, y) + multiply(x2, y)
    assert multiply(x.scale(c), y) == multiply(x, y).scale(c)


@given(scroll_types.filter(lambda s: s.f >= 2))
def test_minors_vanish_on_scroll(scroll):
    for q in sc.minors(scroll):
        assert sc.pullback(scroll, q, P).is_zero()


@given(scroll_types, st.integers(0, 2**16))
def test_section_to_quadric_roundtrip(scroll, seed):
    x = random(scroll, 2, 0, seed)
    assert sc.pullback(scroll, sc.section_to_quadric(x), P) == x


@given(scroll_types, st.integers(0, 3), st.integers(-3, 4), st.integers(0, 2**16))
def test_vector_roundtrip(scroll, a, b, seed):
    x = random(scroll, a, b, seed)
    v = x.to_vector()
    assert len(v) == sc.h0(scroll, a, b)
    assert ScrollSection.from_vector(scroll, a, b, v, P) == x


def test_descending_lex_order():
    assert sc.exponents(3, 2) == [(2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2)]
    assert sc.g_monomials(3) == [3, 2, 1, 0]


def test_quadrics_to_matrix():
    m = sc.quadrics_to_matrix([{(0, 0): 1, (0, 2): -1}], 3, P)
    assert m.tolist() == [[1, 0, P - 1, 0, 0, 0]]
    assert len(list(sc.iter_monomials(4, 3))) == 20


@given(st.integers(0, 2**16))
def test_alternative_splits_differ_by_minors(seed):
    rng = np.random.default_rng(seed)
    # a coordinate product and the split-rule lift of its image
    u, v = (int(x) for x in rng.integers(0, S3222.nvars, 2))
    target = sc.pullback(S3222, {tuple(sorted((u, v))): 1}, P)
    alt = sc.section_to_quadric(target)
    diff = sc.quadrics_to_matrix([{tuple(sorted((u, v))): 1}], S3222.nvars, P) - \
        sc.quadrics_to_matrix([alt], S3222.nvars, P)
    span = sc.quadrics_to_matrix(sc.minors(S3222), S3222.nvars, P)
    assert rank(np.vstack([span, diff % P]), P) == rank(span, P)
