from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fivegonal import koszul as kz
from fivegonal.comparison import mapping_cone_betti
from fivegonal.gonal5 import DegenerateInstance, make_bundle
from fivegonal.linalg import BudgetExceeded
from fivegonal.scroll import quadrics_to_matrix, sym2_pairs

P = 10007


@pytest.fixture(scope="module")
def b13():
    return make_bundle(13, P, 0)


@pytest.fixture(scope="module")
def q13(b13):
    return kz.curve_quotient(b13.quadrics, 13, P)


@pytest.fixture(scope="module")
def table13(b13):
    return mapping_cone_betti(b13.psi)


def random_quadrics(n, k, seed):
    rng = np.random.default_rng(seed)
    pairs = sym2_pairs(n)
    return [{pr: int(c) for pr, c in zip(pairs, rng.integers(0, P, len(pairs))) if c} for _ in range(k)]


def test_quotient_examples(b13):
    assert kz.build_quotient(b13.quadrics, 13, P).dim == 36
    assert kz.build_quotient([], 5, P).dim == comb(6, 2)
    b11 = make_bundle(11, P, 0)
    assert kz.curve_quotient(b11.quadrics, 11, P).dim == 30


def test_quotient_kernel_is_quadric_span(q13, b13):
    m = quadrics_to_matrix(b13.quadrics, 13, P)
    # each quadric reduces to zero, and the free monomials map to unit vectors
    assert not (m @ q13.reduction % P).any()
    assert np.array_equal(q13.reduction[list(q13.free)], np.eye(36, dtype=np.int64))
    # lexicographically first monomials become pivots
    assert min(q13.free) > 0


def test_dependent_quadrics_rejected():
    q = random_quadrics(4, 2, 0)
    with pytest.raises(DegenerateInstance):
        kz.build_quotient(q + [q[0]], 4, P)
    with pytest.raises(DegenerateInstance):
        kz.build_quotient(q, 4, P, expected_dim=3)


def test_koszul_low_positions(q13, table13):
    assert kz.koszul_betti(q13, 1) == 55
    assert kz.koszul_betti(q13, 2) == table13.linear[2] == 320


def test_reversed_pivot_order(b13, q13):
    rev = kz.curve_quotient(b13.quadrics, 13, P, order="reverse")
    assert rev.free != q13.free
    for p in (1, 2):
        assert kz.koszul_betti(rev, p) == kz.koszul_betti(q13, p)


def test_column_sparsity(q13):
    m = kz.koszul_matrix(q13, 2)
    counts = np.diff(m.to_scipy("csc").indptr)
    assert counts.max() <= 2 * 36


def test_range(q13):
    with pytest.raises(ValueError):
        kz.koszul_matrix(q13, 0)
    with pytest.raises(ValueError):
        kz.koszul_matrix(q13, 11)


def test_budget_exceeded(q13):
    with pytest.raises(BudgetExceeded):
        kz.koszul_betti(q13, 2, memory_budget=1000)


@settings(max_examples=15)
@given(st.integers(4, 7).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, comb(n + 1, 2) - 1))),
       st.integers(0, 2**16))
def test_first_position_counts_quadrics(nk, seed):
    n, k = nk
    q = kz.build_quotient(random_quadrics(n, k, seed), n, P)
    assert kz.koszul_betti(q, 1) == k


@settings(max_examples=10)
@given(st.integers(4, 6), st.integers(0, 2**16), st.data())
def test_reduced_matches_unreduced(n, seed, data):
    k = data.draw(st.integers(0, comb(n + 1, 2) - 1))
    p = data.draw(st.integers(1, n - 3))
    q = kz.build_quotient(random_quadrics(n, k, seed), n, P)
    assert kz.koszul_betti(q, p) == kz.koszul_betti_full(q, p)


def test_rational_normal_curve():
    # twisted cubic: the 2x2 minors of ((x0, x1, x2), (x1, x2, x3))
    q = [{(0, 2): 1, (1, 1): -1}, {(0, 3): 1, (1, 2): -1}, {(1, 3): 1, (2, 2): -1}]
    quot = kz.build_quotient(q, 4, P)
    assert kz.koszul_betti(quot, 1) == 3


def test_artinian_row(b13, table13):
    art = kz.artinian_quotient(b13.quadrics, 13, P, seed=5)
    assert art.g == 11 and art.dim == 11
    got = [kz.koszul_betti(art, p) for p in (1, 2, 3)]
    assert got == table13.linear[1:4]


def test_estimated_bytes():
    assert kz.estimated_bytes(13, 6, 36) == 4 * 20592 * 20592


def test_artinian_full_row(b13, table13):
    art = kz.artinian_quotient(b13.quadrics, 13, P, seed=5)
    assert [kz.koszul_betti(art, p) for p in range(1, 9)] == table13.linear[1:9]


@pytest.mark.slow
def test_position_three(q13, table13):
    assert kz.koszul_betti(q13, 3) == table13.linear[3] == 891
