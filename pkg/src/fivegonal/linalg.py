"""Exact linear algebra over prime fields GF(p).

Dense matrices are plain numpy integer arrays with entries in ``[0, p)``.
Elimination runs in float64 so the trailing updates go through BLAS; with
``p < 2**16`` every partial sum stays far below ``2**53`` and the arithmetic
is exact.  Reduction mod p is applied lazily (panel columns and pivot rows
only), which keeps the hot loop a plain GEMM.
"""

from __future__ import annotations

import logging
import math
import os
from dataclasses import dataclass, field

import numba
import numpy as np
import scipy.sparse as sp

log = logging.getLogger(__name__)

DEFAULT_PRIME = 10007

# largest modulus for which the float64 elimination is exact with our panel sizes
_MAX_FLOAT_PRIME = 1 << 16
_PANEL = 256
_CHUNK_ROWS = 1024


class BudgetExceeded(MemoryError):
    """Raised when an elimination would not fit in the given memory budget."""

    def __init__(self, needed: int, budget: int):
        super().__init__(f"needs about {needed / 2**30:.2f} GiB, budget is {budget / 2**30:.2f} GiB")
        self.needed = needed
        self.budget = budget


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, math.isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


@dataclass(frozen=True)
class PrimeField:
    p: int = DEFAULT_PRIME

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.p >= _MAX_FLOAT_PRIME:
            raise ValueError(f"prime {self.p} too large for exact float64 elimination (< {_MAX_FLOAT_PRIME})")

    def __call__(self, x):
        return np.asarray(x, dtype=np.int64) % self.p

    def inv(self, x: int) -> int:
        x = int(x) % self.p
        if x == 0:
            raise ZeroDivisionError("inverse of 0 in GF(p)")
        return pow(x, -1, self.p)

    def random(self, rng: np.random.Generator, shape) -> np.ndarray:
        return rng.integers(0, self.p, size=shape, dtype=np.int64)


@dataclass(frozen=True)
class SparseMatrix:
    """Column-compressed matrix over GF(p).

    Row indices inside each column are strictly increasing and no zeros are
    stored.
    """

    rows: int
    cols: int
    indptr: np.ndarray
    indices: np.ndarray
    data: np.ndarray
    p: int = DEFAULT_PRIME

    @classmethod
    def from_triplets(cls, rows, cols, r, c, v, p=DEFAULT_PRIME) -> "SparseMatrix":
        r = np.asarray(r, dtype=np.int64)
        c = np.asarray(c, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64) % p
        # duplicates are summed; keep the sums small before scipy adds them
        m = sp.coo_matrix((v, (r, c)), shape=(rows, cols)).tocsc()
        m.sum_duplicates()
        m.data %= p
        m.eliminate_zeros()
        m.sort_indices()
        return cls(rows, cols, m.indptr.astype(np.int64), m.indices.astype(np.int64),
                   m.data.astype(np.int64), p)

    @classmethod
    def from_dense(cls, a, p=DEFAULT_PRIME) -> "SparseMatrix":
        a = np.asarray(a, dtype=np.int64) % p
        r, c = np.nonzero(a)
        return cls.from_triplets(a.shape[0], a.shape[1], r, c, a[r, c], p)

    @classmethod
    def identity(cls, n, p=DEFAULT_PRIME) -> "SparseMatrix":
        idx = np.arange(n)
        return cls.from_triplets(n, n, idx, idx, np.ones(n, dtype=np.int64), p)

    @property
    def shape(self):
        return (self.rows, self.cols)

    @property
    def nnz(self) -> int:
        return int(self.data.size)

    def column(self, j):
        lo, hi = self.indptr[j], self.indptr[j + 1]
        return list(zip(self.indices[lo:hi].tolist(), self.data[lo:hi].tolist()))

    def to_scipy(self, fmt="csc"):
        m = sp.csc_matrix((self.data, self.indices, self.indptr), shape=self.shape)
        return m.asformat(fmt)

    def toarray(self) -> np.ndarray:
        return self.to_scipy().toarray().astype(np.int64)

    def transpose(self) -> "SparseMatrix":
        t = self.to_scipy("csr")  # csr of A is csc of A^T
        t.sort_indices()
        return SparseMatrix(self.cols, self.rows, t.indptr.astype(np.int64),
                            t.indices.astype(np.int64), t.data.astype(np.int64), self.p)

    def matvec(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=np.int64) % self.p
        if v.ndim == 1:
            out = np.zeros(self.rows, dtype=np.int64)
            for j in np.nonzero(v)[0]:
                lo, hi = self.indptr[j], self.indptr[j + 1]
                out[self.indices[lo:hi]] = (out[self.indices[lo:hi]] + self.data[lo:hi] * v[j]) % self.p
            return out
        return np.stack([self.matvec(col) for col in v.T], axis=1)


# --------------------------------------------------------------------------
# modular helpers


def _fmod(x: np.ndarray, p: int) -> np.ndarray:
    """In-place reduction of a float64 array holding integers into [0, p)."""
    if x.ndim == 2 and x.size > (1 << 22):
        # bound the temporaries on big matrices
        step = max(1, (1 << 22) // max(1, x.shape[1]))
        for lo in range(0, x.shape[0], step):
            _fmod(x[lo:lo + step], p)
        return x
    q = x * (1.0 / p)
    np.floor(q, out=q)
    q *= p
    x -= q
    x[x < 0] += p
    x[x >= p] -= p
    return x


def _as_float(a, p) -> np.ndarray:
    if isinstance(a, SparseMatrix):
        # stored entries are already reduced; go straight to float64
        return a.to_scipy().astype(np.float64).toarray()
    a = np.asarray(a)
    return (a.astype(np.int64) % p).astype(np.float64)


@numba.njit(cache=True, inline="always")
def _red(v, p, rp):
    """v mod p for an integral float; the floor estimate can be off by one."""
    v = v - np.floor(v * rp) * p
    if v >= p:
        v -= p
    elif v < 0:
        v += p
    return v


@numba.njit(cache=True)
def _panel_pivots(panel, order, p):
    """Forward elimination of a narrow panel; returns pivot rows and columns.

    Rows are chosen by first nonzero, ties broken by the smallest ``order``
    value (the original row index).  The panel is modified in place and is
    only reduced mod p lazily, so keep it to a few dozen columns.
    """
    m, w = panel.shape
    rp = 1.0 / p
    used = np.zeros(m, dtype=np.bool_)
    prow = np.empty(w, dtype=np.int64)
    pcol = np.empty(w, dtype=np.int64)
    pivrow = np.empty(w)
    k = 0
    for c in range(w):
        best = -1
        best_order = 0
        for r in range(m):
            if used[r]:
                continue
            x = _red(panel[r, c], p, rp)
            panel[r, c] = x
            if x != 0.0 and (best < 0 or order[r] < best_order):
                best = r
                best_order = order[r]
        if best < 0:
            continue
        used[best] = True
        prow[k] = best
        pcol[k] = c
        k += 1
        x = int(panel[best, c])
        e = p - 2
        acc = 1
        while e > 0:
            if e & 1:
                acc = (acc * x) % p
            x = (x * x) % p
            e >>= 1
        inv = float(acc)
        for cc in range(c, w):
            pivrow[cc] = _red(_red(panel[best, cc], p, rp) * inv, p, rp)
        for r in range(m):
            if used[r]:
                continue
            f = panel[r, c]
            if f == 0.0:
                continue
            for cc in range(c, w):
                panel[r, cc] -= f * pivrow[cc]
    return prow[:k], pcol[:k]


@numba.njit(cache=True)
def _small_inverse(m, p):
    """Inverse of an invertible k x k float64 matrix mod p (Gauss-Jordan)."""
    k = m.shape[0]
    rp = 1.0 / p
    aug = np.zeros((k, 2 * k))
    for i in range(k):
        for j in range(k):
            aug[i, j] = m[i, j] % p
        aug[i, k + i] = 1.0
    for c in range(k):
        r = c
        while r < k and _red(aug[r, c], p, rp) == 0:
            r += 1
        if r == k:
            raise ZeroDivisionError("singular pivot block")
        if r != c:
            for j in range(2 * k):
                tmp = aug[c, j]
                aug[c, j] = aug[r, j]
                aug[r, j] = tmp
        x = int(_red(aug[c, c], p, rp))
        e = p - 2
        acc = 1
        while e > 0:
            if e & 1:
                acc = (acc * x) % p
            x = (x * x) % p
            e >>= 1
        inv = float(acc)
        for j in range(2 * k):
            aug[c, j] = _red(_red(aug[c, j], p, rp) * inv, p, rp)
        # row updates stay unreduced: entries remain below k * p^2 << 2^53
        for i in range(k):
            if i == c:
                continue
            f = _red(aug[i, c], p, rp)
            if f == 0:
                continue
            for j in range(2 * k):
                aug[i, j] -= f * aug[c, j]
    out = np.empty((k, k))
    for i in range(k):
        for j in range(k):
            out[i, j] = _red(aug[i, k + j], p, rp)
    return out


_BASE_WIDTH = 32


def _find_pivots(panel: np.ndarray, order: np.ndarray, p: int):
    """Pivot rows/columns of a reduced tall panel, recursing on column halves.

    Gives the same pivots as the plain column sweep of ``_panel_pivots``; the
    Schur complement updates between halves go through BLAS.
    """
    m, w = panel.shape
    if w <= _BASE_WIDTH:
        return _panel_pivots(np.ascontiguousarray(panel), order, p)
    h = w // 2
    prow1, pcol1 = _find_pivots(panel[:, :h], order, p)
    k1 = len(prow1)
    if k1 == 0:
        prow2, pcol2 = _find_pivots(panel[:, h:], order, p)
        return prow2, pcol2 + h
    rest = np.ones(m, dtype=np.bool_)
    rest[prow1] = False
    idx = np.flatnonzero(rest)
    if len(idx) == 0:
        return prow1, pcol1
    tinv = _small_inverse(panel[prow1][:, pcol1], p)
    top = _fmod(tinv @ panel[prow1, h:], p)
    right = panel[idx, h:] - panel[idx][:, pcol1] @ top
    _fmod(right, p)
    prow2, pcol2 = _find_pivots(right, order[idx], p)
    return np.concatenate([prow1, idx[prow2]]), np.concatenate([pcol1, pcol2 + h])


def _gemm_sub(dst: np.ndarray, x: np.ndarray, y: np.ndarray):
    """dst -= x @ y, in row chunks to bound the temporary."""
    for lo in range(0, dst.shape[0], _CHUNK_ROWS):
        hi = min(lo + _CHUNK_ROWS, dst.shape[0])
        dst[lo:hi] -= x[lo:hi] @ y


def _eliminate(a: np.ndarray, p: int, reduced: bool):
    """Blocked elimination of ``a`` in place.

    Pivot rows end up at the top of ``a`` (in pivot order); below them every
    entry is zero mod p.  Returns the pivot columns.  With ``reduced`` the
    pivot rows form the reduced row echelon form.
    """
    m, n = a.shape
    order = np.arange(m)
    r0 = 0
    pivots: list[int] = []
    for c in range(0, n, _PANEL):
        if r0 >= m:
            break
        w = min(_PANEL, n - c)
        panel = _fmod(a[r0:, c:c + w].copy(), p)
        work = panel.copy()
        prow, pcol = _find_pivots(work, order[r0:], p)
        k = len(prow)
        if k == 0:
            a[r0:, c:c + w] = 0.0
            continue
        # bring pivot rows to r0..r0+k-1
        where = np.arange(m - r0)
        pos = np.arange(m - r0)
        for t, pr in enumerate(prow):
            cur = pos[pr]
            if cur != t:
                a[[r0 + t, r0 + cur]] = a[[r0 + cur, r0 + t]]
                order[[r0 + t, r0 + cur]] = order[[r0 + cur, r0 + t]]
                wt, wc = where[t], where[cur]
                where[t], where[cur] = wc, wt
                pos[wc], pos[wt] = t, cur
        panel = panel[where]
        t_inv = _small_inverse(panel[:k][:, pcol], p)
        top = _fmod(a[r0:r0 + k, c:], p)
        top = _fmod(t_inv @ top, p)
        a[r0:r0 + k, c:] = top
        x = panel[k:][:, pcol]
        _gemm_sub(a[r0 + k:, c + w:], x, top[:, w:])
        a[r0 + k:, c:c + w] = 0.0
        if reduced and r0 > 0:
            y = _fmod(a[:r0, c + pcol].copy(), p)
            _gemm_sub(a[:r0, c:], y, top)
            _fmod(a[:r0, c:], p)
        pivots.extend((c + pcol).tolist())
        r0 += k
    if r0:
        _fmod(a[:r0], p)
    return pivots


def echelon(m, p: int = DEFAULT_PRIME, reduced: bool = True):
    """Row echelon form of ``m`` over GF(p).

    Returns ``(rows, pivots)`` where ``rows`` is an int64 array of the
    nonzero echelon rows and ``pivots`` their pivot columns.
    """
    a = _as_float(m, p)
    if a.size == 0:
        return np.zeros((0, a.shape[1] if a.ndim == 2 else 0), dtype=np.int64), []
    piv = _eliminate(a, p, reduced)
    return a[:len(piv)].astype(np.int64), piv


def rank(m, p: int = DEFAULT_PRIME) -> int:
    """Rank over GF(p) of a dense array or a :class:`SparseMatrix`."""
    if isinstance(m, SparseMatrix):
        p = m.p
        if max(m.rows, m.cols) > DENSE_LIMIT or 8 * m.rows * m.cols > DEFAULT_BUDGET:
            return sparse_rank_streaming(m)
    a = _as_float(m, p)
    if a.size == 0:
        return 0
    if a.shape[0] > a.shape[1]:
        a = a.T.copy()
    return len(_eliminate(a, p, reduced=False))


def kernel_basis(m, p: int = DEFAULT_PRIME) -> list[np.ndarray]:
    """Basis of the right kernel ``{v : m v = 0}`` over GF(p)."""
    if isinstance(m, SparseMatrix):
        p = m.p
    a = _as_float(m, p)
    n = a.shape[1]
    if a.shape[0] == 0:
        return [np.eye(n, dtype=np.int64)[i] for i in range(n)]
    rows, piv = echelon(a, p, reduced=True)
    return _kernel_from_rref(rows, piv, n, p)


def _kernel_from_rref(rows, piv, n, p):
    free = sorted(set(range(n)) - set(piv))
    out = []
    for f in free:
        v = np.zeros(n, dtype=np.int64)
        v[f] = 1
        if len(piv):
            v[piv] = (-rows[:, f]) % p
        out.append(v)
    return out


def nullity(m, p: int = DEFAULT_PRIME) -> int:
    cols = m.cols if isinstance(m, SparseMatrix) else np.asarray(m).shape[1]
    return cols - rank(m, p)


# --------------------------------------------------------------------------
# streaming elimination for large sparse matrices

DENSE_LIMIT = 20000


def _physical_memory() -> int:
    try:
        return os.sysconf("SC_PAGE_SIZE") * os.sysconf("SC_PHYS_PAGES")
    except (ValueError, OSError, AttributeError):
        return 8 * 2**30


# never plan for more than ~70% of the machine
DEFAULT_BUDGET = min(8 * 2**30, int(0.7 * _physical_memory()))


@dataclass
class _StreamBasis:
    """Reduced echelon basis of a growing row space, stored as float32.

    The buffer is allocated once at full capacity so that growing the basis
    never copies it.
    """

    n: int
    p: int
    capacity: int
    buf: np.ndarray = field(init=False)
    piv: list = field(default_factory=list)

    def __post_init__(self):
        self.buf = np.empty((self.capacity, self.n), dtype=np.float32)

    @property
    def rows(self) -> np.ndarray:
        return self.buf[:len(self.piv)]

    def reduce(self, y: np.ndarray) -> np.ndarray:
        if not self.piv:
            return _fmod(y, self.p)
        coeff = _fmod(y[:, self.piv].copy(), self.p)
        for lo in range(0, len(self.piv), _CHUNK_ROWS):
            hi = min(lo + _CHUNK_ROWS, len(self.piv))
            y -= coeff[:, lo:hi] @ self.buf[lo:hi].astype(np.float64)
        return _fmod(y, self.p)

    def absorb(self, new_rows: np.ndarray, new_piv: list):
        r = len(self.piv)
        if r:
            coeff = _fmod(self.buf[:r, new_piv].astype(np.float64), self.p)
            for lo in range(0, r, _CHUNK_ROWS):
                hi = min(lo + _CHUNK_ROWS, r)
                blk = self.buf[lo:hi].astype(np.float64)
                blk -= coeff[lo:hi] @ new_rows
                self.buf[lo:hi] = _fmod(blk, self.p)
        self.buf[r:r + len(new_piv)] = new_rows
        self.piv.extend(new_piv)


def sparse_rank_streaming(m: SparseMatrix, memory_budget: int = DEFAULT_BUDGET,
                          block: int = 1024, want_kernel: bool = False):
    """Rank of a sparse matrix by streaming row blocks into a dense RREF basis.

    Memory is dominated by the basis, at most ``min(rows, cols)`` rows of
    length ``cols`` in float32.  Raises :class:`BudgetExceeded` before doing
    any work if that cannot fit.  With ``want_kernel`` returns
    ``(rank, kernel_vectors)``.
    """
    p = m.p
    rows, cols = m.rows, m.cols
    # float32 basis plus about six float64 block-sized temporaries per step
    need = 4 * min(rows, cols) * cols + 6 * 8 * block * cols
    if need > memory_budget:
        raise BudgetExceeded(need, memory_budget)
    csr = m.to_scipy("csr")
    basis = _StreamBasis(cols, p, min(rows, cols))
    for lo in range(0, rows, block):
        if len(basis.piv) == cols:
            break
        hi = min(lo + block, rows)
        y = basis.reduce(csr[lo:hi].toarray().astype(np.float64))
        new, piv = echelon(y, p, reduced=True)
        if piv:
            basis.absorb(new.astype(np.float64), piv)
        log.debug("streamed rows %d/%d, rank %d", hi, rows, len(basis.piv))
    r = len(basis.piv)
    if want_kernel:
        return r, _kernel_from_rref(basis.rows.astype(np.int64), basis.piv, cols, p)
    return r


def matmul(a, b, p: int = DEFAULT_PRIME) -> np.ndarray:
    """Exact product mod p of two dense integer arrays."""
    a = np.asarray(a, dtype=np.int64) % p
    b = np.asarray(b, dtype=np.int64) % p
    if a.shape[-1] * (p - 1) ** 2 < 2**53:
        return (a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64) % p
    return (a.astype(object) @ b.astype(object) % p).astype(np.int64)
