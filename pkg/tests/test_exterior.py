from itertools import combinations
from math import comb

import numpy as np
import sympy
from hypothesis import given, strategies as st

from fivegonal import exterior

P = 10007


@given(st.integers(1, 14).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, n))))
def test_rank_unrank_roundtrip(nk):
    n, k = nk
    subs = exterior.subsets(n, k)
    assert len(subs) == comb(n, k)
    for r, s in enumerate(subs):
        assert exterior.rank_subset(s) == r
        assert exterior.unrank_subset(r, k) == s


def test_colex_order():
    assert exterior.subsets(4, 2) == ((0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3))
    # a prefix of the colex list of range(n) is the full list of range(n - 1)
    assert exterior.subsets(6, 3)[:comb(5, 3)] == exterior.subsets(5, 3)


def test_wedge_sign():
    assert exterior.wedge_sign((0, 2), 1) == -1
    assert exterior.wedge_sign((0, 1), 2) == 1
    assert exterior.wedge_sign((1, 2, 3), 0) == -1
    assert exterior.wedge_sign((1, 2), 2) == 0


def test_contraction_signs():
    tgt, var, sgn = exterior.contraction_table(5, 3)
    r = exterior.rank_subset((0, 2, 4))
    assert list(var[r]) == [0, 2, 4]
    assert list(sgn[r]) == [1, -1, 1]
    assert [exterior.subsets(5, 2)[t] for t in tgt[r]] == [(2, 4), (0, 4), (0, 2)]


@given(st.integers(2, 7).flatmap(
    lambda n: st.tuples(st.just(n), st.integers(1, n), st.randoms(use_true_random=False))))
def test_wedge_is_maximal_minors(args):
    n, j, rnd = args
    vecs = np.array([[rnd.randrange(P) for _ in range(n)] for _ in range(j)])
    w = exterior.wedge_vectors(vecs, P)
    for r, s in enumerate(exterior.subsets(n, j)):
        det = int(sympy.Matrix(vecs[:, list(s)].tolist()).det())
        assert w[r] == det % P


def test_wedge_alternating():
    rng = np.random.default_rng(0)
    v = rng.integers(0, P, (4, 9))
    w = exterior.wedge_vectors(v, P)
    assert np.array_equal(exterior.wedge_vectors(v[[1, 0, 2, 3]], P), (-w) % P)
    v[3] = (2 * v[0] + 5 * v[2]) % P
    assert not exterior.wedge_vectors(v, P).any()


def test_contraction_then_wedge():
    # sum_t e_{I - i_t} ^ e_{i_t} with the contraction sign recovers k e_I
    n, k = 6, 3
    tgt, var, sgn = exterior.contraction_table(n, k)
    wt, ws = exterior.wedge_table(n, k - 1)
    for r in range(comb(n, k)):
        total = sum(sgn[r, t] * ws[tgt[r, t], var[r, t]] for t in range(k))
        assert all(wt[tgt[r, t], var[r, t]] == r for t in range(k))
        assert total == k * (-1) ** (k - 1)


def test_subset_array_matches_combinations():
    a = exterior.subset_array(7, 3)
    assert sorted(map(tuple, a.tolist())) == sorted(combinations(range(7), 3))
