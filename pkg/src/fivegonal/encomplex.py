"""Eagon-Northcott type complexes C^b resolving O_X(bR) over the ambient space.

Terms (generator degree in brackets):

    C^b_j = Lambda^j F (x) S_{b-j} G        [j]       for j <= b
    C^b_j = Lambda^{j+1} F (x) D_{j-b-1} G*  [j + 1]   for j >= b + 1

Basis of a term: (subset rank, g index) with the g index running fastest.
S_m G uses the monomials s^m, ..., t^m; D_m G* the dual basis, so that
s -| (s^u t^v)* = (s^{u-1} t^v)*.

Differentials contract with Phi~(e_k) = t (x) x_{s,k} - s (x) x_{t,k}, and with
the 2x2 minors of Phi at j = b + 1.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from math import comb

import numpy as np

from . import exterior
from .linalg import DEFAULT_PRIME, rank
from .scroll import ScrollType, h0, iter_monomials, phi_indices


def term_rank(f: int, b: int, j: int) -> int:
    if j < 0:
        return 0
    if j <= b:
        return comb(f, j) * (b - j + 1)
    return comb(f, j + 1) * (j - b)


def gen_degree(b: int, j: int) -> int:
    return j if j <= b else j + 1


def length(f: int, b: int) -> int:
    """Largest j with a nonzero term."""
    return max(j for j in range(f + max(b, 0) + 2) if term_rank(f, b, j) > 0)


def betti_scroll(f: int, p: int) -> int:
    """beta_{p,p+1} of a scroll of degree f."""
    return p * comb(f, p + 1)


def term_shape(f: int, b: int, j: int) -> tuple:
    """(exterior degree, number of G-basis elements) of C^b_j."""
    if j <= b:
        return j, b - j + 1
    return j + 1, j - b


@dataclass
class PolyMatrix:
    """Sparse matrix with polynomial entries: {(row, col): {monomial: coeff}}.

    Monomials are sorted tuples of ambient variable indices.
    """

    rows: int
    cols: int
    entries: dict
    p: int = DEFAULT_PRIME

    @classmethod
    def build(cls, rows, cols, triples, p=DEFAULT_PRIME):
        acc: dict = defaultdict(lambda: defaultdict(int))
        for r, c, mono, v in triples:
            acc[(r, c)][tuple(sorted(mono))] += v
        entries = {}
        for key, poly in acc.items():
            poly = {m: v % p for m, v in poly.items() if v % p}
            if poly:
                entries[key] = poly
        return cls(rows, cols, entries, p)

    def is_zero(self) -> bool:
        return not self.entries

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        by_row = defaultdict(list)
        for (r, c), poly in other.entries.items():
            by_row[r].append((c, poly))
        triples = []
        for (r, k), left in self.entries.items():
            for c, right in by_row.get(k, ()):
                for m1, v1 in left.items():
                    for m2, v2 in right.items():
                        triples.append((r, c, m1 + m2, v1 * v2))
        return PolyMatrix.build(self.rows, other.cols, triples, self.p)

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        triples = [(r, c, m, v) for (r, c), poly in self.entries.items() for m, v in poly.items()]
        triples += [(r, c, m, -v) for (r, c), poly in other.entries.items() for m, v in poly.items()]
        return PolyMatrix.build(self.rows, self.cols, triples, self.p)

    def degree_piece(self, nvars: int, src_deg: int, tgt_deg: int) -> np.ndarray:
        """Dense matrix of the map on the degree-``src_deg`` parts.

        Source basis: (col, monomial of degree src_deg) with monomials in
        iter_monomials order; likewise for the target.
        """
        if any(len(m) != tgt_deg - src_deg for poly in self.entries.values() for m in poly):
            raise ValueError("entries do not have degree tgt_deg - src_deg")
        src_m = list(iter_monomials(nvars, src_deg)) if src_deg >= 0 else []
        tgt_m = {m: k for k, m in enumerate(iter_monomials(nvars, tgt_deg))} if tgt_deg >= 0 else {}
        ns, nt = len(src_m), len(tgt_m)
        out = np.zeros((self.rows * nt, self.cols * ns), dtype=np.int64)
        if not ns or not nt:
            return out
        for (r, c), poly in self.entries.items():
            for su, u in enumerate(src_m):
                for m, v in poly.items():
                    w = tgt_m[tuple(sorted(u + m))]
                    out[r * nt + w, c * ns + su] = (out[r * nt + w, c * ns + su] + v) % self.p
        return out


def _s_index(m: int, w: int) -> int:
    """Position of s^w t^{m-w} in the s-descending basis of S_m (or D_m)."""
    return m - w


def differential(scroll: ScrollType, b: int, j: int, p: int = DEFAULT_PRIME) -> PolyMatrix:
    """delta_j : C^b_j -> C^b_{j-1} as a matrix of linear (or quadratic) forms."""
    if j < 1:
        raise ValueError("differentials start at j = 1")
    f = scroll.f
    ind = phi_indices(scroll)
    xs, xt = ind[0], ind[1]
    src_k, src_g = term_shape(f, b, j)
    tgt_k, tgt_g = term_shape(f, b, j - 1)
    rows = comb(f, tgt_k) * tgt_g
    cols = comb(f, src_k) * src_g
    triples = []
    if j <= b:
        # omega (x) g -> sum_k iota_k omega (x) (t g x_{s,k} - s g x_{t,k})
        tgt, var, sgn = exterior.contraction_table(f, j)
        m = b - j
        for w_idx in range(comb(f, j)):
            for u in range(m + 1):
                col = w_idx * src_g + _s_index(m, u)
                for t in range(j):
                    k, base, sg = var[w_idx, t], tgt[w_idx, t] * tgt_g, sgn[w_idx, t]
                    triples.append((base + _s_index(m + 1, u), col, (xs[k],), sg))
                    triples.append((base + _s_index(m + 1, u + 1), col, (xt[k],), -sg))
    elif j >= b + 2:
        # omega (x) mu -> sum_k iota_k omega (x) (x_{s,k} t-|mu - x_{t,k} s-|mu)
        tgt, var, sgn = exterior.contraction_table(f, j + 1)
        c = j - b - 1
        for w_idx in range(comb(f, j + 1)):
            for u in range(c + 1):
                col = w_idx * src_g + _s_index(c, u)
                for t in range(j + 1):
                    k, base, sg = var[w_idx, t], tgt[w_idx, t] * tgt_g, sgn[w_idx, t]
                    if c - u >= 1:
                        triples.append((base + _s_index(c - 1, u), col, (xs[k],), sg))
                    if u >= 1:
                        triples.append((base + _s_index(c - 1, u - 1), col, (xt[k],), -sg))
    else:
        # j = b + 1: omega -> sum_{k,l} iota_l iota_k omega (x) x_{s,k} x_{t,l}
        t1, v1, s1 = exterior.contraction_table(f, b + 2)
        t2, v2, s2 = exterior.contraction_table(f, b + 1)
        for w_idx in range(comb(f, b + 2)):
            for a in range(b + 2):
                mid, k, sa = t1[w_idx, a], v1[w_idx, a], s1[w_idx, a]
                for bb in range(b + 1):
                    out, l, sb = t2[mid, bb], v2[mid, bb], s2[mid, bb]
                    triples.append((out, w_idx, (xs[k], xt[l]), sa * sb))
    return PolyMatrix.build(rows, cols, triples, p)


def euler_characteristic(scroll: ScrollType, b: int, m: int) -> int:
    """sum_j (-1)^j dim (C^b_j)_m over a polynomial ring in f + d variables."""
    n = scroll.nvars
    total = 0
    for j in range(length(scroll.f, b) + 1):
        k = m - gen_degree(b, j)
        if k < 0:
            continue
        total += (-1) ** j * term_rank(scroll.f, b, j) * comb(n - 1 + k, n - 1)
    return total


def degreewise_homology(scroll: ScrollType, b: int, m: int, p: int = DEFAULT_PRIME) -> list[int]:
    """Homology dimensions of the degree-m strand of C^b, positions 0..length."""
    n, f = scroll.nvars, scroll.f
    top = length(f, b)
    dims = [term_rank(f, b, j) * (comb(n - 1 + m - gen_degree(b, j), n - 1)
                                  if m >= gen_degree(b, j) else 0) for j in range(top + 1)]
    ranks = [0] * (top + 2)
    for j in range(1, top + 1):
        sd = m - gen_degree(b, j)
        if sd < 0 or dims[j] == 0:
            continue
        piece = differential(scroll, b, j, p).degree_piece(n, sd, m - gen_degree(b, j - 1))
        ranks[j] = rank(piece, p)
    return [dims[j] - ranks[j] - ranks[j + 1] for j in range(top + 1)]


def hilbert_function(scroll: ScrollType, b: int, m: int) -> int:
    return h0(scroll, m, b)
