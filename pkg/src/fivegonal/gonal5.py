"""5-gonal canonical curves on 4-dimensional scrolls via Pfaffians.

A curve of genus g with a g^1_5 lies on a balanced scroll X = S(e_1..e_4) of
degree f = g - 4 and is resolved there by

    0 -> O(-5H + (f-2)R) -> sum O(-3H + b_i R) -> sum O(-2H + a_i R) -> O_X

with the middle map a skew 5x5 matrix Psi and the right map its Pfaffians.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .linalg import DEFAULT_PRIME, PrimeField, rank
from .scroll import (ScrollSection, ScrollType, basis, g_monomials, h0, iter_monomials, minors,
                     multiply, quadrics_to_matrix, random_section, section_to_quadric, unit_vector)

TYPES = ("I", "II", "III", "IV", "V")


class DegenerateInstance(RuntimeError):
    """The random instance failed a genericity check; try another seed."""

    def __init__(self, msg: str, seed=None):
        hint = f" (seed {seed}; rerun with a different --seed)" if seed is not None else ""
        super().__init__(msg + hint)
        self.seed = seed


def balanced_partition(total: int, parts: int) -> tuple:
    """Balanced partition in ascending order, e.g. (44, 5) -> (8, 9, 9, 9, 9)."""
    q, r = divmod(total, parts)
    return tuple([q] * (parts - r) + [q + 1] * r)


@dataclass(frozen=True)
class GonalConfig:
    g: int
    n: int
    f: int
    d: int
    a: tuple
    b: tuple
    type_tag: str
    r: int
    scroll: ScrollType

    @property
    def j(self) -> int:
        """Homological index of the comparison map ψ in the Betti formula."""
        return self.n - 2


def config_for_genus(g: int) -> GonalConfig:
    if g < 9:
        raise ValueError(f"genus {g} < 9: the scroll S(e_1..e_4) needs degree g - 4 >= 5")
    n = -(-(g - 1) // 2)
    f = g - 4
    a = balanced_partition(2 * g - 12, 5)
    b = tuple(f - 2 - x for x in a)
    if g % 2:
        k = n % 5
        tag = TYPES[k]
        r = n // 5 - 1 if k == 0 else (n - k) // 5
    else:
        tag, r = "EVEN", -1
    scroll = ScrollType.balanced(f, 4)
    return GonalConfig(g, n, f, 4, a, b, tag, r, scroll)


def scalar_window(cfg: GonalConfig, j: int) -> bool:
    return min(cfg.b) >= j >= max(cfg.a) + 1


def window_violation(cfg: GonalConfig, j: int) -> str | None:
    if min(cfg.b) < j:
        return f"min b_i = {min(cfg.b)} < j = {j}"
    if j < max(cfg.a) + 1:
        return f"j = {j} < max a_i + 1 = {max(cfg.a) + 1}"
    return None


def entry_degree(cfg: GonalConfig, q: int, i: int) -> tuple:
    return (1, cfg.a[q] - cfg.b[i])


@dataclass(frozen=True, eq=False)
class SkewPsi:
    config: GonalConfig
    upper: dict  # (q, i) with q < i -> ScrollSection
    p: int = DEFAULT_PRIME
    seed: int | None = None

    def __post_init__(self):
        for (q, i), x in self.upper.items():
            if not q < i:
                raise ValueError("only upper-triangular entries are stored")
            if x.deg != entry_degree(self.config, q, i):
                raise ValueError(f"entry ({q},{i}) has degree {x.deg}, expected "
                                 f"{entry_degree(self.config, q, i)}")

    def entry(self, q: int, i: int) -> ScrollSection:
        sc = self.config.scroll
        if q == i:
            return ScrollSection.zero(sc, *entry_degree(self.config, q, q), self.p)
        if q < i:
            return self.upper.get((q, i)) or ScrollSection.zero(sc, *entry_degree(self.config, q, i), self.p)
        return -self.entry(i, q)

    def matrix(self) -> list[list[ScrollSection]]:
        return [[self.entry(q, i) for i in range(5)] for q in range(5)]


def random_psi(cfg: GonalConfig, p: int = DEFAULT_PRIME, seed: int = 0) -> SkewPsi:
    PrimeField(p)
    rng = np.random.default_rng(seed)
    upper = {}
    for q in range(5):
        for i in range(q + 1, 5):
            a, b = entry_degree(cfg, q, i)
            upper[(q, i)] = random_section(cfg.scroll, a, b, rng, p)
    return SkewPsi(cfg, upper, p, seed)


def normalized_psi_g13(p: int = DEFAULT_PRIME, seed: int = 0) -> SkewPsi:
    """Random genus-13 Psi whose first column is (s phi_1, phi_2, phi_3, phi_4)."""
    cfg = config_for_genus(13)
    base = random_psi(cfg, p, seed)
    sc = cfg.scroll
    upper = dict(base.upper)
    for q in range(1, 5):
        i = q - 1
        s_pow = 1 if i == 0 else 0
        col = ScrollSection.monomial(sc, unit_vector(i, 4), s_pow, sc.e[i] - 2 - s_pow, 1, p)
        assert col.deg == entry_degree(cfg, q, 0)
        upper[(0, q)] = -col
    return SkewPsi(cfg, upper, p, seed)


def _pf4(m, idx) -> ScrollSection:
    i, j, k, l = idx
    return m[i][j] * m[k][l] - m[i][k] * m[j][l] + m[i][l] * m[j][k]


def matrix_pfaffians(m) -> list:
    """Signed deletion Pfaffians Pf_i = (-1)^i pf(m without row/col i), i from 0."""
    out = []
    for i in range(5):
        pf = _pf4(m, [k for k in range(5) if k != i])
        out.append(pf if i % 2 == 0 else -pf)
    return out


def pfaffians(psi: SkewPsi) -> list[ScrollSection]:
    out = matrix_pfaffians(psi.matrix())
    for i, pf in enumerate(out):
        if pf.deg != (2, -psi.config.a[i]):
            raise DegenerateInstance(f"Pfaffian {i} has degree {pf.deg}", psi.seed)
    return out


def laplace_residuals(psi: SkewPsi, pfs) -> list[ScrollSection]:
    """sum_j Psi_ij Pf_j for each i; all zero for a skew matrix."""
    m = psi.matrix()
    out = []
    for i in range(5):
        acc = None
        for j in range(5):
            t = m[i][j] * pfs[j]
            acc = t if acc is None else acc + t
        out.append(acc)
    return out


def curve_quadrics(cfg: GonalConfig, pfs, p: int = DEFAULT_PRIME, seed=None,
                   check: bool = True) -> list[dict]:
    sc = cfg.scroll
    out = [{k: v % p for k, v in q.items()} for q in minors(sc)]
    for i, pf in enumerate(pfs):
        for w in g_monomials(cfg.a[i]):
            m = ScrollSection.monomial(sc, (0,) * 4, w, cfg.a[i] - w, 1, p)
            out.append(section_to_quadric(multiply(pf, m)))
    expected = (cfg.g - 2) * (cfg.g - 3) // 2
    if len(out) != expected:
        raise AssertionError(f"{len(out)} quadrics, expected {expected}")
    if check:
        r = rank(quadrics_to_matrix(out, cfg.g, p), p)
        if r != expected:
            raise DegenerateInstance(f"quadrics span only {r} of {expected} dimensions", seed)
    return out


def hilbert_check(quadrics, g: int, m: int, p: int = DEFAULT_PRIME) -> int:
    """dim Sym_m(V) / (I_C)_m with (I_C)_3 = V (I_C)_2."""
    if m == 2:
        return comb(g + 1, 2) - rank(quadrics_to_matrix(quadrics, g, p), p)
    if m != 3:
        raise ValueError("m must be 2 or 3")
    idx = {mono: k for k, mono in enumerate(iter_monomials(g, 3))}
    rows = []
    for v in range(g):
        for q in quadrics:
            row = np.zeros(len(idx), dtype=np.int64)
            for (u, w), c in q.items():
                row[idx[tuple(sorted((u, w, v)))]] += c
            rows.append(row % p)
    return len(idx) - rank(np.array(rows), p)


def bertini_predicate(cfg: GonalConfig) -> bool:
    """Global generation of wedge^2 F* (x) L: every twist c_{ik} <= min e."""
    c = max(cfg.b[i] + cfg.b[k] - (cfg.f - 2) for i in range(5) for k in range(i + 1, 5))
    return min(cfg.scroll.e) >= c


# ---------------------------------------------------------------------------
# bundles


@dataclass(frozen=True, eq=False)
class CurveBundle:
    config: GonalConfig
    psi: SkewPsi
    pfaffians: list
    quadrics: list
    p: int
    seed: int

    @property
    def genus(self) -> int:
        return self.config.g


def make_bundle(g: int, p: int = DEFAULT_PRIME, seed: int = 0, check_hilbert: bool = True,
                psi: SkewPsi | None = None) -> CurveBundle:
    cfg = config_for_genus(g)
    psi = psi if psi is not None else random_psi(cfg, p, seed)
    pfs = pfaffians(psi)
    quads = curve_quadrics(cfg, pfs, p, seed)
    if check_hilbert:
        for m in (2, 3):
            h = hilbert_check(quads, g, m, p)
            if h != (2 * m - 1) * (g - 1):
                raise DegenerateInstance(f"Hilbert function {h} in degree {m}, expected "
                                         f"{(2 * m - 1) * (g - 1)}", seed)
    return CurveBundle(cfg, psi, pfs, quads, p, seed)


def _terms_json(x: ScrollSection) -> list:
    return [{"alpha": list(al), "coeffs": [int(c) for c in v]} for al, v in x.terms.items()]


def _terms_from_json(sc, a, b, terms, p) -> ScrollSection:
    return ScrollSection(sc, a, b, {tuple(t["alpha"]): t["coeffs"] for t in terms}, p)


def bundle_to_json(bd: CurveBundle) -> str:
    cfg = bd.config
    doc = {
        "version": 1,
        "prime": bd.p,
        "genus": cfg.g,
        "seed": int(bd.seed),
        "scroll": list(cfg.scroll.e),
        "a": list(cfg.a),
        "b": list(cfg.b),
        "psi": [{"row": q, "col": i, "terms": _terms_json(x)}
                for (q, i), x in sorted(bd.psi.upper.items())],
        "pfaffians": [{"terms": _terms_json(x)} for x in bd.pfaffians],
        "quadrics": [[{"monomial": [int(u), int(v)], "coeff": int(c)} for (u, v), c in q.items()]
                     for q in bd.quadrics],
    }
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def bundle_from_json(text: str) -> CurveBundle:
    doc = json.loads(text)
    if doc.get("version") != 1:
        raise ValueError(f"unsupported bundle version {doc.get('version')}")
    p = int(doc["prime"])
    PrimeField(p)
    cfg = config_for_genus(int(doc["genus"]))
    if list(cfg.scroll.e) != doc["scroll"] or list(cfg.a) != doc["a"] or list(cfg.b) != doc["b"]:
        raise ValueError("bundle configuration does not match its genus")
    upper = {}
    for ent in doc["psi"]:
        q, i = int(ent["row"]), int(ent["col"])
        a, b = entry_degree(cfg, q, i)
        upper[(q, i)] = _terms_from_json(cfg.scroll, a, b, ent["terms"], p)
    psi = SkewPsi(cfg, upper, p, doc["seed"])
    pfs = [_terms_from_json(cfg.scroll, 2, -cfg.a[i], x["terms"], p)
           for i, x in enumerate(doc["pfaffians"])]
    quads = [{(t["monomial"][0], t["monomial"][1]): t["coeff"] for t in q} for q in doc["quadrics"]]
    return CurveBundle(cfg, psi, pfs, quads, p, doc["seed"])


def section_basis_size(cfg: GonalConfig, q: int, i: int) -> int:
    return h0(cfg.scroll, *entry_degree(cfg, q, i))


def section_basis(cfg: GonalConfig, q: int, i: int) -> list:
    return basis(cfg.scroll, *entry_degree(cfg, q, i))
