"""Scalar comparison maps between Eagon-Northcott complexes.

For an entry Psi_qi of bidegree (1, a_q - b_i) the lift C^{b_i}(-1) -> C^{a_q}
is scalar in homological degree j whenever b_i >= j >= a_q + 1.  There it is

    omega (x) g  |->  sum_m (omega ^ Psi_qi(g g'_m)) (x) g'*_m

with g'_m the monomial basis of S_{j - a_q - 1} G and Psi_qi(.) the F-vector
of the section Psi_qi * (binary form).  Assembling these blocks over all
(q, i) gives psi_j; dim ker psi_{n-2} counts the extra syzygies.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field
from math import comb

import numpy as np

from . import exterior
from .encomplex import betti_scroll, term_rank
from .gonal5 import (DegenerateInstance, GonalConfig, SkewPsi, config_for_genus, random_psi,
                     scalar_window, window_violation)
from .linalg import SparseMatrix, kernel_basis, rank
from .scroll import ScrollSection, f_basis, g_monomials

log = logging.getLogger(__name__)

SECOND_PRIME = 10009
MAX_FULL_GENUS = 19


class WindowError(ValueError):
    """The requested comparison map is not scalar."""


class ThresholdError(ValueError):
    """The decomposable kernel construction needs more factors than slots."""


class BadPrimeWarning(UserWarning):
    pass


def action_matrix(entry: ScrollSection) -> np.ndarray:
    """f x (D+1) matrix sending s^w t^{D-w} (index D - w) to entry * s^w t^{D-w} in F."""
    a, b = entry.deg
    if a != 1:
        raise ValueError("entry must have H-degree 1")
    D = -1 - b
    if D < 0:
        raise ValueError(f"entry of degree {entry.deg} does not act on any S_m G")
    sc = entry.scroll
    cols = []
    for w in g_monomials(D):
        m = ScrollSection.monomial(sc, (0,) * sc.d, w, D - w, 1, entry.p)
        y = entry * m
        assert y.deg == (1, -1)
        cols.append(y.to_vector())
    return np.array(cols, dtype=np.int64).T % entry.p


def entry_action(entry: ScrollSection, m) -> np.ndarray:
    """F-coordinates of entry * m; ``m`` is a binary form (s-power descending)."""
    m = np.asarray(m, dtype=np.int64)
    A = action_matrix(entry)
    if A.shape[1] != len(m):
        raise ValueError(f"bidegree mismatch: entry needs forms of degree {A.shape[1] - 1}")
    return (A @ m) % entry.p


def block_triplets(entry: ScrollSection, a: int, b: int, j: int, row_off=0, col_off=0):
    """Nonzero (rows, cols, vals) of the scalar lift in degree j."""
    if not (b >= j >= a + 1):
        raise WindowError(f"need b >= j >= a + 1, got a={a}, b={b}, j={j}")
    if entry.deg != (1, a - b):
        raise ValueError(f"entry degree {entry.deg} != (1, {a - b})")
    f = entry.scroll.f
    empty = (np.zeros(0, np.int64),) * 3
    if entry.is_zero():
        return empty
    A = action_matrix(entry)
    D = b - a - 1
    src_g, c = b - j + 1, j - a - 1
    tgt_g = c + 1
    target, sign = exterior.wedge_table(f, j)
    nw = target.shape[0]
    ks = np.nonzero(A.any(axis=1))[0]
    rows, cols, vals = [], [], []
    w_idx = np.arange(nw)
    for u in range(src_g):  # g = s^u t^{b-j-u}
        for w in range(c + 1):  # g'_m = s^w t^{c-w}
            coef = A[:, D - (u + w)]
            for k in ks:
                if not coef[k]:
                    continue
                ok = target[:, k] >= 0
                rows.append(row_off + target[ok, k] * tgt_g + (c - w))
                cols.append(col_off + w_idx[ok] * src_g + (b - j - u))
                vals.append(sign[ok, k] * coef[k])
    if not rows:
        return empty
    return np.concatenate(rows), np.concatenate(cols), np.concatenate(vals) % entry.p


def block_matrix(entry: ScrollSection, a: int, b: int, j: int) -> SparseMatrix:
    f = entry.scroll.f
    r, c, v = block_triplets(entry, a, b, j)
    return SparseMatrix.from_triplets(comb(f, j + 1) * (j - a), comb(f, j) * (b - j + 1),
                                      r, c, v, entry.p)


@dataclass(frozen=True)
class PsiLayout:
    """Row and column block offsets of psi_j."""

    j: int
    row_blocks: tuple  # q indices in the target
    col_blocks: tuple  # i indices in the source
    row_off: dict
    col_off: dict
    rows: int
    cols: int


def layout(cfg: GonalConfig, j: int) -> PsiLayout:
    f = cfg.f
    qs = tuple(q for q in range(5) if j >= cfg.a[q] + 1)
    is_ = tuple(i for i in range(5) if j <= cfg.b[i])
    row_off, col_off, r, c = {}, {}, 0, 0
    for q in qs:
        row_off[q] = r
        r += term_rank(f, cfg.a[q], j)
    for i in is_:
        col_off[i] = c
        c += term_rank(f, cfg.b[i], j)
    return PsiLayout(j, qs, is_, row_off, col_off, r, c)


def assemble_block(psi: SkewPsi, i: int, q: int, j: int) -> SparseMatrix:
    cfg = psi.config
    return block_matrix(psi.entry(q, i), cfg.a[q], cfg.b[i], j)


def assemble_psi(psi: SkewPsi, j: int | None = None, partial: bool = False) -> SparseMatrix:
    """psi_j over all windowed blocks.

    Without ``partial`` the full scalar window (min b >= j >= max a + 1) is
    required; with it, only the blocks that are scalar are assembled.
    """
    cfg = psi.config
    j = cfg.j if j is None else j
    if not partial:
        why = window_violation(cfg, j)
        if why:
            raise WindowError(f"psi_{j} is not scalar: {why}")
    lay = layout(cfg, j)
    rs, cs, vs = [], [], []
    for q in lay.row_blocks:
        for i in lay.col_blocks:
            if q == i:
                continue
            r, c, v = block_triplets(psi.entry(q, i), cfg.a[q], cfg.b[i], j,
                                     lay.row_off[q], lay.col_off[i])
            rs.append(r)
            cs.append(c)
            vs.append(v)
    cat = (lambda xs: np.concatenate(xs) if xs else np.zeros(0, np.int64))
    return SparseMatrix.from_triplets(lay.rows, lay.cols, cat(rs), cat(cs), cat(vs), psi.p)


# ---------------------------------------------------------------------------
# extra syzygies


@dataclass
class BettiDelta:
    genus: int
    prime: int
    seed: int
    dim_ker: int
    betti_C: int
    betti_X: int
    type_tag: str
    second: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"genus": self.genus, "prime": self.prime, "seed": self.seed,
                "dim_ker": self.dim_ker, "betti_X": self.betti_X, "betti_C": self.betti_C,
                "type": self.type_tag, "second_prime": self.second}


def psi_nullity(psi: SkewPsi, j: int | None = None) -> int:
    m = assemble_psi(psi, j)
    return m.cols - rank(m)


def betti_delta(psi: SkewPsi, second_prime: int | None = SECOND_PRIME) -> BettiDelta:
    cfg = psi.config
    if cfg.g > MAX_FULL_GENUS:
        log.warning("genus %d exceeds the dense cap %d; this may not fit in memory",
                    cfg.g, MAX_FULL_GENUS)
    k = psi_nullity(psi)
    bx = betti_scroll(cfg.f, cfg.n)
    out = BettiDelta(cfg.g, psi.p, psi.seed, k, bx + k, bx, cfg.type_tag)
    if second_prime and second_prime != psi.p:
        other = random_psi(cfg, second_prime, psi.seed)
        k2 = psi_nullity(other)
        out.second = {"prime": second_prime, "dim_ker": k2, "agree": k2 == k}
        if k2 != k:
            warnings.warn(f"bad prime? dim ker psi is {k} mod {psi.p} but {k2} mod {second_prime} "
                          f"(genus {cfg.g}, seed {psi.seed})", BadPrimeWarning)
    return out


# ---------------------------------------------------------------------------
# decomposable kernel elements


@dataclass
class KernelElement:
    column: int  # distinguished column i0
    j: int
    factors: np.ndarray  # j x f, rows are F-vectors
    cofactor: np.ndarray  # coordinates in S_{b_i0 - j} G
    n_forced: int  # factors coming from the Psi entries
    certificate: list  # (q, m, in_span) for each forced vector
    p: int

    @property
    def verified(self) -> bool:
        return bool(self.certificate) and all(ok for _, _, ok in self.certificate) \
            and rank(self.factors, self.p) == self.j

    def wedge(self) -> np.ndarray:
        return exterior.wedge_vectors(self.factors, self.p)

    def vector(self, cfg: GonalConfig) -> np.ndarray:
        """Coordinates as a column vector of psi_j."""
        lay = layout(cfg, self.j)
        v = np.zeros(lay.cols, dtype=np.int64)
        w = self.wedge()
        blk = np.outer(w, self.cofactor).ravel() % self.p
        off = lay.col_off[self.column]
        v[off:off + blk.size] = blk
        return v


def forced_factors(psi: SkewPsi, j: int, i0: int, cofactor) -> tuple[list, list]:
    """F-vectors Psi_{q,i0}(g g'_m) that must lie in the span of the factors."""
    cfg = psi.config
    cofactor = np.asarray(cofactor, dtype=np.int64)
    vecs, keys = [], []
    for q in range(5):
        if q == i0 or j < cfg.a[q] + 1:
            continue
        c = j - cfg.a[q] - 1
        A = action_matrix(psi.entry(q, i0))
        D = A.shape[1] - 1
        for w in g_monomials(c):
            gm = np.zeros(c + 1, dtype=np.int64)
            gm[c - w] = 1
            prod = np.convolve(cofactor, gm) % psi.p
            assert len(prod) == D + 1
            vecs.append(A @ prod % psi.p)
            keys.append((q, c - w))
    return vecs, keys


def kernel_element(psi: SkewPsi, shift: int = 0, cofactor=None, seed: int = 0,
                   retries: int = 10) -> KernelElement:
    cfg = psi.config
    j = cfg.n - 2 + shift
    why = window_violation(cfg, j)
    if why:
        raise WindowError(f"psi_{j} is not scalar: {why}")
    i0 = int(np.argmax(cfg.b))
    deg = cfg.b[i0] - j
    if cofactor is None:
        cofactor = np.zeros(deg + 1, dtype=np.int64)
        cofactor[0] = 1  # s^deg
    cofactor = np.asarray(cofactor, dtype=np.int64) % psi.p
    if len(cofactor) != deg + 1 or not cofactor.any():
        raise ValueError(f"cofactor must be a nonzero form of degree {deg}")
    vecs, keys = forced_factors(psi, j, i0, cofactor)
    nf = len(vecs)
    if nf > j:
        raise ThresholdError(f"genus {cfg.g}, shift {shift}: {nf} forced factors exceed j = {j}")
    base = np.array(vecs, dtype=np.int64).reshape(nf, cfg.f)
    if rank(base, psi.p) < nf:
        raise DegenerateInstance(f"forced factors are dependent at genus {cfg.g}", psi.seed)
    rng = np.random.default_rng(seed)
    for _ in range(retries):
        extra = rng.integers(0, psi.p, size=(j - nf, cfg.f))
        factors = np.vstack([base, extra]).astype(np.int64)
        if rank(factors, psi.p) == j:
            break
    else:
        raise DegenerateInstance("could not complete the factors to an independent set", psi.seed)
    cert = []
    for v, (q, m) in zip(vecs, keys):
        ok = rank(np.vstack([factors, v]), psi.p) == j
        cert.append((q, m, ok))
    return KernelElement(i0, j, factors, cofactor, nf, cert, psi.p)


def construction_threshold(cfg: GonalConfig, shift: int = 0) -> tuple[int, int] | None:
    """(forced factors, slots) for the construction, or None outside the window."""
    j = cfg.n - 2 + shift
    if not scalar_window(cfg, j):
        return None
    i0 = int(np.argmax(cfg.b))
    nf = sum(j - cfg.a[q] for q in range(5) if q != i0 and j >= cfg.a[q] + 1)
    return nf, j


def apply_psi(psi: SkewPsi, v, j: int | None = None) -> np.ndarray:
    m = assemble_psi(psi, j)
    return m.to_scipy("csr").dot(np.asarray(v, dtype=np.int64)) % psi.p


def kernel_family_g13(psi: SkewPsi, lam: int, mu: int) -> KernelElement:
    """(l Psi_21) ^ ... ^ (l Psi_51) (x) l for l = lam s + mu t."""
    cfg = psi.config
    if cfg.g != 13:
        raise ValueError("the family is specific to genus 13")
    if lam % psi.p == 0 and mu % psi.p == 0:
        raise ValueError("(lambda, mu) = (0, 0) is not a point of P^1")
    return kernel_element(psi, 0, cofactor=[lam, mu])


def family_basis_g13(psi: SkewPsi, points=None) -> np.ndarray:
    """Kernel vectors at 6 distinct points (lambda : mu), as rows."""
    points = points or [(1, 0), (0, 1), (1, 1), (1, 2), (1, 3), (2, 1)]
    return np.array([kernel_family_g13(psi, l, m).vector(psi.config) for l, m in points])


# ---------------------------------------------------------------------------
# mapping cone accounting


def nonminimal_inventory(cfg: GonalConfig) -> list[dict]:
    """Scalar comparison blocks, grouped by j.

    psi_j maps C^{b_i}_j(-3), at mapping-cone position j + 2, to
    C^{a_q}_j(-2) at position j + 1, with both generated in degree j + 3.
    """
    out = []
    for j in range(0, cfg.f + 1):
        blocks = [(q, i) for q in range(5) for i in range(5)
                  if q != i and cfg.b[i] >= j >= cfg.a[q] + 1]
        if blocks:
            out.append({"j": j, "blocks": blocks, "source_position": j + 2,
                        "target_position": j + 1})
    return out


@dataclass
class BettiTable:
    genus: int
    linear: list  # beta_{p,p+1}, p = 0..g-2
    quadratic: list  # beta_{p,p+2}
    ranks: dict  # j -> rank psi_j

    def rows(self) -> list[list[int]]:
        g = self.genus
        top = [1] + [0] * (g - 2)
        bottom = [0] * (g - 2) + [1]
        return [top, list(self.linear), list(self.quadratic), bottom]

    def dual(self) -> bool:
        g = self.genus
        return all(self.linear[p] == self.quadratic[g - 2 - p] for p in range(g - 1))

    def render(self) -> str:
        rows = self.rows()
        width = max(len(str(x)) for r in rows for x in r) + 1
        lines = ["   " + "".join(f"{p:>{width}}" for p in range(self.genus - 1))]
        for k, r in enumerate(rows):
            lines.append(f"{k}: " + "".join(f"{(x if x else '.'):>{width}}" for x in r))
        return "\n".join(lines)


def cone_term_ranks(cfg: GonalConfig, p: int) -> tuple[int, int]:
    """Ranks of the linear (degree p+1) and quadratic (degree p+2) parts at position p."""
    f = cfg.f
    lin = betti_scroll(f, p) if p >= 1 else 0
    quad = 0
    for i in range(5):
        j = p - 1
        if 0 <= j <= cfg.a[i]:
            lin += term_rank(f, cfg.a[i], j)
        elif j > cfg.a[i]:
            quad += term_rank(f, cfg.a[i], j)
        j = p - 2
        if 0 <= j <= cfg.b[i]:
            lin += term_rank(f, cfg.b[i], j)
        elif j > cfg.b[i]:
            quad += term_rank(f, cfg.b[i], j)
    j = p - 3
    if 0 <= j <= f - 2:
        quad += term_rank(f, f - 2, j)
    return lin, quad


def mapping_cone_betti(psi: SkewPsi, ranks: dict | None = None) -> BettiTable:
    cfg = psi.config
    if ranks is None:
        ranks = {}
        for item in nonminimal_inventory(cfg):
            m = assemble_psi(psi, item["j"], partial=True)
            ranks[item["j"]] = rank(m)
    g = cfg.g
    lin, quad = [], []
    for p in range(g - 1):
        t, q = cone_term_ranks(cfg, p)
        lin.append(t - ranks.get(p - 2, 0))
        quad.append(q - ranks.get(p - 1, 0))
    return BettiTable(g, lin, quad, ranks)


def scalar_map_ranks(cfg_or_psi, j_list=None) -> dict:
    psi = cfg_or_psi
    out = {}
    for item in nonminimal_inventory(psi.config):
        if j_list is None or item["j"] in j_list:
            out[item["j"]] = rank(assemble_psi(psi, item["j"], partial=True))
    return out


def same_twist_part(psi: SkewPsi, j: int) -> SparseMatrix:
    """The scalar blocks of psi_j, without block rows/columns that only meet the diagonal."""
    cfg = psi.config
    lay = layout(cfg, j)
    m = assemble_psi(psi, j, partial=True).to_scipy("csr")

    def ranges(blocks, others, off, size):
        keep = [b for b in blocks if any(o != b for o in others)]
        return np.concatenate([np.arange(off[b], off[b] + size(b)) for b in keep]) if keep \
            else np.zeros(0, np.int64)

    rows = ranges(lay.row_blocks, lay.col_blocks, lay.row_off, lambda q: term_rank(cfg.f, cfg.a[q], j))
    cols = ranges(lay.col_blocks, lay.row_blocks, lay.col_off, lambda i: term_rank(cfg.f, cfg.b[i], j))
    sub = m[rows][:, cols].tocoo()
    return SparseMatrix.from_triplets(len(rows), len(cols), sub.row, sub.col, sub.data, psi.p)


def genus_summary(g: int) -> dict:
    cfg = config_for_genus(g)
    thr = construction_threshold(cfg)
    return {"genus": g, "type": cfg.type_tag, "r": cfg.r, "a": cfg.a, "b": cfg.b,
            "scroll": cfg.scroll.e, "window": scalar_window(cfg, cfg.j), "threshold": thr}
