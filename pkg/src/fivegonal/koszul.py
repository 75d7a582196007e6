"""Linear-strand Betti numbers straight from quadric generators.

beta_{p,p+1} is the homology of

    Lambda^{p+1} V  ->  Lambda^p V (x) V  ->  Lambda^{p-1} V (x) S_2

in the middle, S_2 = Sym^2 V / (I)_2.  The left map is injective, and each of
its image vectors has exactly one coordinate e_I (x) x_k with k > max(I) (the
term for the largest index).  Dropping those columns from the right map
therefore leaves a matrix whose nullity is beta_{p,p+1} directly.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from math import comb

import numpy as np

from . import exterior
from .gonal5 import DegenerateInstance
from .linalg import DEFAULT_BUDGET, DEFAULT_PRIME, SparseMatrix, echelon, rank, sparse_rank_streaming
from .scroll import quadrics_to_matrix, sym2_index, sym2_pairs

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuotientDegree2:
    """Sym^2 V / span(quadrics) for V of dimension g.

    ``reduction[m]`` is the quotient coordinate vector of the m-th monomial
    (sym2_pairs order).
    """

    g: int
    reduction: np.ndarray  # C(g+1,2) x dim
    free: tuple  # monomials kept as the quotient basis
    p: int

    @property
    def dim(self) -> int:
        return self.reduction.shape[1]


def build_quotient(quadrics, g: int, p: int = DEFAULT_PRIME, order: str = "lex",
                   expected_dim: int | None = None) -> QuotientDegree2:
    """Row-reduce the quadrics; pivots go to the first monomials in ``order``."""
    nmon = comb(g + 1, 2)
    perm = np.arange(nmon) if order == "lex" else np.arange(nmon)[::-1]
    if order not in ("lex", "reverse"):
        raise ValueError("order must be 'lex' or 'reverse'")
    if len(quadrics):
        mat = quadrics_to_matrix(quadrics, g, p)[:, perm]
        rows, piv = echelon(mat, p, reduced=True)
    else:
        rows, piv = np.zeros((0, nmon), dtype=np.int64), []
    if len(piv) != len(quadrics):
        raise DegenerateInstance(f"{len(quadrics)} quadrics span only {len(piv)} dimensions")
    free = [c for c in range(nmon) if c not in set(piv)]
    red = np.zeros((nmon, len(free)), dtype=np.int64)
    for t, c in enumerate(free):
        red[perm[c], t] = 1
    for r, c in enumerate(piv):
        red[perm[c]] = (-rows[r, free]) % p
    if expected_dim is not None and len(free) != expected_dim:
        raise DegenerateInstance(f"quotient has dimension {len(free)}, expected {expected_dim}")
    return QuotientDegree2(g, red, tuple(int(perm[c]) for c in free), p)


def koszul_matrix(q: QuotientDegree2, p_index: int, reduced: bool = True) -> SparseMatrix:
    """Lambda^p V (x) V -> Lambda^{p-1} V (x) S_2 (columns e_I (x) x_k)."""
    g, P = q.g, q.p
    if not 1 <= p_index <= g - 3:
        raise ValueError(f"p must lie in 1..{g - 3}")
    subs = exterior.subset_array(g, p_index)
    tgt, var, sgn = exterior.contraction_table(g, p_index)
    nI = subs.shape[0]
    I_idx = np.repeat(np.arange(nI), g)
    k_idx = np.tile(np.arange(g), nI)
    if reduced:
        keep = k_idx <= subs[I_idx, -1]
        I_idx, k_idx = I_idx[keep], k_idx[keep]
    ncols = len(I_idx)
    mono = sym2_index(g)
    mono_of = np.zeros((g, g), dtype=np.int64)
    for (u, v), t in mono.items():
        mono_of[u, v] = mono_of[v, u] = t
    dim = q.dim
    rows_all, cols_all, vals_all = [], [], []
    col_ids = np.arange(ncols)
    nz_cache = [np.nonzero(q.reduction[m])[0] for m in range(q.reduction.shape[0])]
    for pos in range(p_index):
        J = tgt[I_idx, pos]
        x = var[I_idx, pos]
        s = sgn[I_idx, pos]
        m = mono_of[x, k_idx]
        # group by monomial so each reduction row is expanded once
        order = np.argsort(m, kind="stable")
        m_sorted = m[order]
        bounds = np.flatnonzero(np.diff(m_sorted)) + 1
        for chunk in np.split(order, bounds):
            mm = int(m[chunk[0]])
            nz = nz_cache[mm]
            if not len(nz):
                continue
            coef = q.reduction[mm, nz]
            rows_all.append((J[chunk, None] * dim + nz[None, :]).ravel())
            cols_all.append(np.repeat(col_ids[chunk], len(nz)))
            vals_all.append((s[chunk, None] * coef[None, :]).ravel())
    nrows = comb(g, p_index - 1) * dim
    cat = (lambda xs: np.concatenate(xs) if xs else np.zeros(0, np.int64))
    return SparseMatrix.from_triplets(nrows, ncols, cat(rows_all), cat(cols_all),
                                      cat(vals_all), P)


def koszul_betti(q: QuotientDegree2, p_index: int, memory_budget: int | None = None) -> int:
    """beta_{p,p+1} of the graded ring with degree-2 part ``q``."""
    m = koszul_matrix(q, p_index, reduced=True)
    log.info("Koszul matrix p=%d: %d x %d, %d nonzeros", p_index, m.rows, m.cols, m.nnz)
    if memory_budget is not None:
        return m.cols - sparse_rank_streaming(m, memory_budget)
    return m.cols - rank(m)


def koszul_betti_full(q: QuotientDegree2, p_index: int) -> int:
    """Same number via the unreduced matrix (nullity minus C(g, p+1)); small g only."""
    m = koszul_matrix(q, p_index, reduced=False)
    return m.cols - rank(m) - comb(q.g, p_index + 1)


def restrict_quadrics(quadrics, g: int, codim: int, p: int = DEFAULT_PRIME,
                      seed: int = 0) -> list[dict]:
    """Pull the quadrics back along a random linear map k^{g-codim} -> k^g."""
    rng = np.random.default_rng(seed)
    n = g - codim
    M = rng.integers(0, p, size=(g, n))
    pairs = sym2_pairs(n)
    ua = np.array([a for a, _ in pairs])
    ub = np.array([b for _, b in pairs])
    out = []
    for qd in quadrics:
        coef = np.zeros(len(pairs), dtype=np.int64)
        for (u, v), c in qd.items():
            mu, mv = M[u], M[v]
            t = mu[ua] * mv[ub] % p
            t2 = mu[ub] * mv[ua] % p
            coef = (coef + c * np.where(ua == ub, t, t + t2)) % p
        out.append({pr: int(c) for pr, c in zip(pairs, coef) if c})
    return out


def artinian_quotient(quadrics, g: int, p: int = DEFAULT_PRIME, seed: int = 0) -> QuotientDegree2:
    """Degree-2 part of S_C / (l_1, l_2) for random linear forms l_1, l_2.

    For an arithmetically Cohen-Macaulay curve the graded Betti numbers are
    unchanged, and the quotient must have dimension g - 2.
    """
    small = restrict_quadrics(quadrics, g, 2, p, seed)
    return build_quotient(small, g - 2, p, expected_dim=g - 2)


def curve_quotient(quadrics, g: int, p: int = DEFAULT_PRIME, order: str = "lex") -> QuotientDegree2:
    return build_quotient(quadrics, g, p, order, expected_dim=3 * g - 3)


def estimated_bytes(g: int, p_index: int, dim: int) -> int:
    cols = comb(g, p_index) * g - comb(g, p_index + 1)
    rows = comb(g, p_index - 1) * dim
    return 4 * min(rows, cols) * cols


__all__ = ["QuotientDegree2", "build_quotient", "koszul_matrix", "koszul_betti",
           "koszul_betti_full", "artinian_quotient", "curve_quotient", "restrict_quadrics",
           "estimated_bytes", "DEFAULT_BUDGET"]
