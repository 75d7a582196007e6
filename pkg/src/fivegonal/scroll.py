"""Rational normal scrolls S(e_1, ..., e_d) and sections of O(aH + bR).

A section of O(aH + bR) is a sum ``sum_alpha P_alpha(s, t) phi^alpha`` over
exponent tuples with ``|alpha| = a``; ``P_alpha`` is a binary form of degree
``alpha.e + b``, stored densely with the s-power descending.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Iterator

import numpy as np

from .linalg import DEFAULT_PRIME


@dataclass(frozen=True)
class ScrollType:
    e: tuple

    def __post_init__(self):
        e = tuple(int(x) for x in self.e)
        object.__setattr__(self, "e", e)
        if list(e) != sorted(e, reverse=True):
            raise ValueError(f"scroll type must be sorted descending, got {e}")
        if any(x < 1 for x in e):
            raise ValueError("directions with e_i = 0 are not supported")
        if sum(e) < 2:
            raise ValueError("scroll degree must be at least 2")

    @property
    def f(self) -> int:
        return sum(self.e)

    @property
    def d(self) -> int:
        return len(self.e)

    @property
    def r(self) -> int:
        """Dimension of the ambient projective space."""
        return self.f + self.d - 1

    @property
    def nvars(self) -> int:
        return self.f + self.d

    @classmethod
    def balanced(cls, f: int, d: int) -> "ScrollType":
        q, r = divmod(f, d)
        return cls(tuple([q + 1] * r + [q] * (d - r)))


def exponents(d: int, a: int) -> list[tuple]:
    """Exponent tuples of length d summing to a, in descending lex order."""
    if d == 0:
        return [()] if a == 0 else []
    out = []
    for first in range(a, -1, -1):
        for rest in exponents(d - 1, a - first):
            out.append((first,) + rest)
    return out


def form_degree(scroll: ScrollType, alpha, b: int) -> int:
    return sum(x * y for x, y in zip(alpha, scroll.e)) + b


def h0(scroll: ScrollType, a: int, b: int) -> int:
    """dim H^0(O(aH + bR)), by enumeration of admissible exponents."""
    if a < 0:
        return 0
    return sum(max(0, form_degree(scroll, al, b) + 1) for al in exponents(scroll.d, a))


def h0_formula(scroll: ScrollType, a: int, b: int) -> int:
    """Closed form, valid when a * min(e) + b >= -1."""
    d = scroll.d
    return scroll.f * comb(a + d - 1, d) + (b + 1) * comb(a + d - 1, d - 1)


def globally_generated(scroll: ScrollType, a: int, b: int) -> bool:
    return a >= 0 and a * min(scroll.e) + b >= 0


def basis(scroll: ScrollType, a: int, b: int) -> list[tuple]:
    """Monomial basis as (alpha, s-power) pairs; alpha descending, s-power descending."""
    out = []
    for al in exponents(scroll.d, a):
        deg = form_degree(scroll, al, b)
        out.extend((al, l) for l in range(deg, -1, -1))
    return out


def basis_index(scroll: ScrollType, a: int, b: int) -> dict:
    return {key: i for i, key in enumerate(basis(scroll, a, b))}


def unit_vector(i: int, d: int) -> tuple:
    return tuple(1 if k == i else 0 for k in range(d))


@dataclass(frozen=True, eq=False)
class ScrollSection:
    scroll: ScrollType
    a: int
    b: int
    terms: dict = field(default_factory=dict)
    p: int = DEFAULT_PRIME

    def __post_init__(self):
        if self.a < 0:
            raise ValueError("sections need a >= 0")
        clean = {}
        for al, c in self.terms.items():
            al = tuple(int(x) for x in al)
            c = np.asarray(c, dtype=np.int64) % self.p
            if len(al) != self.scroll.d or sum(al) != self.a:
                raise ValueError(f"exponent {al} does not match degree {self.a}")
            deg = form_degree(self.scroll, al, self.b)
            if deg < 0:
                if c.any():
                    raise ValueError(f"exponent {al} is not admissible in degree ({self.a},{self.b})")
                continue
            if c.shape != (deg + 1,):
                raise ValueError(f"form for {al} needs {deg + 1} coefficients, got {c.shape}")
            if c.any():
                c.setflags(write=False)
                clean[al] = c
        object.__setattr__(self, "terms", dict(sorted(clean.items(), reverse=True)))

    @property
    def deg(self) -> tuple:
        return (self.a, self.b)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, ScrollSection):
            return NotImplemented
        return (self.scroll == other.scroll and self.deg == other.deg and self.p == other.p
                and self.terms.keys() == other.terms.keys()
                and all(np.array_equal(v, other.terms[k]) for k, v in self.terms.items()))

    def __add__(self, other: "ScrollSection") -> "ScrollSection":
        self._check(other)
        if self.deg != other.deg:
            raise ValueError(f"cannot add sections of degree {self.deg} and {other.deg}")
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = (terms[k] + v) % self.p if k in terms else v
        return ScrollSection(self.scroll, self.a, self.b, terms, self.p)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: int) -> "ScrollSection":
        return ScrollSection(self.scroll, self.a, self.b,
                             {k: (v * c) % self.p for k, v in self.terms.items()}, self.p)

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return self.scale(int(other))
        return multiply(self, other)

    __rmul__ = __mul__

    def _check(self, other):
        if self.scroll != other.scroll or self.p != other.p:
            raise ValueError("sections live on different scrolls or fields")

    def to_vector(self) -> np.ndarray:
        idx = basis_index(self.scroll, self.a, self.b)
        v = np.zeros(len(idx), dtype=np.int64)
        for al, c in self.terms.items():
            deg = len(c) - 1
            for pos, x in enumerate(c):
                v[idx[(al, deg - pos)]] = x
        return v

    @classmethod
    def from_vector(cls, scroll, a, b, v, p=DEFAULT_PRIME) -> "ScrollSection":
        v = np.asarray(v, dtype=np.int64) % p
        terms, pos = {}, 0
        for al in exponents(scroll.d, a):
            deg = form_degree(scroll, al, b)
            if deg < 0:
                continue
            terms[al] = v[pos:pos + deg + 1]
            pos += deg + 1
        if pos != len(v):
            raise ValueError(f"vector length {len(v)} != h0 = {pos}")
        return cls(scroll, a, b, terms, p)

    @classmethod
    def zero(cls, scroll, a, b, p=DEFAULT_PRIME):
        return cls(scroll, a, b, {}, p)

    @classmethod
    def binary_form(cls, scroll, coeffs, p=DEFAULT_PRIME):
        """Section of O(bR) given by a binary form (s-power descending)."""
        coeffs = list(coeffs)
        return cls(scroll, 0, len(coeffs) - 1, {(0,) * scroll.d: coeffs}, p)

    @classmethod
    def monomial(cls, scroll, alpha, s_pow, t_pow, coeff=1, p=DEFAULT_PRIME):
        """coeff * s^s_pow t^t_pow phi^alpha."""
        alpha = tuple(alpha)
        deg = s_pow + t_pow
        b = deg - sum(x * y for x, y in zip(alpha, scroll.e))
        c = np.zeros(deg + 1, dtype=np.int64)
        c[deg - s_pow] = coeff
        return cls(scroll, sum(alpha), b, {alpha: c}, p)

    def __repr__(self):
        parts = []
        for al, c in self.terms.items():
            deg = len(c) - 1
            for pos, x in enumerate(c):
                if x:
                    parts.append(f"{x}*s^{deg - pos}t^{pos}*phi^{list(al)}")
        body = " + ".join(parts) if parts else "0"
        return f"ScrollSection(({self.a},{self.b}): {body})"


def multiply(x: ScrollSection, y: ScrollSection) -> ScrollSection:
    x._check(y)
    p = x.p
    terms: dict = {}
    for ax, cx in x.terms.items():
        for ay, cy in y.terms.items():
            al = tuple(u + v for u, v in zip(ax, ay))
            prod = np.convolve(cx, cy) % p
            terms[al] = (terms[al] + prod) % p if al in terms else prod
    return ScrollSection(x.scroll, x.a + y.a, x.b + y.b, terms, p)


def random_section(scroll, a, b, rng: np.random.Generator, p=DEFAULT_PRIME) -> ScrollSection:
    v = rng.integers(0, p, size=h0(scroll, a, b), dtype=np.int64)
    return ScrollSection.from_vector(scroll, a, b, v, p)


# ---------------------------------------------------------------------------
# ambient coordinates and the scroll matrix


def coordinates(scroll: ScrollType) -> list[tuple]:
    """Ambient coordinates (i, l) <-> s^l t^{e_i - l} phi_i, in basis(1, 0) order."""
    return [(al.index(1), l) for al, l in basis(scroll, 1, 0)]


def coordinate_index(scroll: ScrollType) -> dict:
    return {c: k for k, c in enumerate(coordinates(scroll))}


def f_basis(scroll: ScrollType) -> list[tuple]:
    """Basis (i, l) of F = H^0(O(H - R)), elements s^l t^{e_i - 1 - l} phi_i."""
    return [(al.index(1), l) for al, l in basis(scroll, 1, -1)]


def g_monomials(m: int) -> list[int]:
    """Monomial basis of S_m G as s-powers, descending (s^m, s^{m-1} t, ..., t^m)."""
    return list(range(m, -1, -1)) if m >= 0 else []


def phi_indices(scroll: ScrollType) -> np.ndarray:
    """2 x f array of ambient variable indices: row 0 is s*F, row 1 is t*F."""
    idx = coordinate_index(scroll)
    cols = f_basis(scroll)
    out = np.empty((2, len(cols)), dtype=np.int64)
    for k, (i, l) in enumerate(cols):
        out[0, k] = idx[(i, l + 1)]
        out[1, k] = idx[(i, l)]
    return out


def coordinate_section(scroll, k: int, p=DEFAULT_PRIME) -> ScrollSection:
    i, l = coordinates(scroll)[k]
    return ScrollSection.monomial(scroll, unit_vector(i, scroll.d), l, scroll.e[i] - l, 1, p)


def phi_matrix(scroll: ScrollType, p=DEFAULT_PRIME) -> list[list[ScrollSection]]:
    """The 2 x f matrix of sections of O(H)."""
    ind = phi_indices(scroll)
    return [[coordinate_section(scroll, int(k), p) for k in row] for row in ind]


def minors(scroll: ScrollType) -> list[dict]:
    """The C(f,2) quadrics x_{s,k} x_{t,l} - x_{s,l} x_{t,k}, as {(v1, v2): coeff}."""
    ind = phi_indices(scroll)
    f = ind.shape[1]
    out = []
    for k in range(f):
        for l in range(k + 1, f):
            q: dict = {}
            for (u, v), c in (((ind[0, k], ind[1, l]), 1), ((ind[0, l], ind[1, k]), -1)):
                key = (min(u, v), max(u, v))
                q[key] = q.get(key, 0) + c
            out.append({key: c for key, c in q.items() if c})
    return out


def pullback(scroll: ScrollType, quadric: dict, p=DEFAULT_PRIME) -> ScrollSection:
    """Substitute x_{i,l} -> s^l t^{e_i - l} phi_i in a quadric."""
    out = ScrollSection.zero(scroll, 2, 0, p)
    for (u, v), c in quadric.items():
        out = out + coordinate_section(scroll, u, p) * coordinate_section(scroll, v, p) * int(c)
    return out


def section_to_quadric(x: ScrollSection) -> dict:
    """A quadric restricting to ``x`` on the scroll; splits take l = min(e_i, m)."""
    if x.deg != (2, 0):
        raise ValueError(f"need a section of O(2H), got degree {x.deg}")
    sc = x.scroll
    idx = coordinate_index(sc)
    q: dict = {}
    for al, c in x.terms.items():
        dirs = [i for i, k in enumerate(al) for _ in range(k)]
        i, j = dirs
        deg = len(c) - 1
        for pos, coeff in enumerate(c):
            if not coeff:
                continue
            m = deg - pos
            l = min(sc.e[i], m)
            assert 0 <= m - l <= sc.e[j], "unsatisfiable split"
            u, v = idx[(i, l)], idx[(j, m - l)]
            key = (min(u, v), max(u, v))
            q[key] = (q.get(key, 0) + int(coeff)) % x.p
    return {k: v for k, v in sorted(q.items()) if v}


def sym2_pairs(n: int) -> list[tuple]:
    return [(u, v) for u in range(n) for v in range(u, n)]


def sym2_index(n: int) -> dict:
    return {pr: k for k, pr in enumerate(sym2_pairs(n))}


def quadrics_to_matrix(quadrics, n: int, p=DEFAULT_PRIME) -> np.ndarray:
    """Rows are quadrics in the Sym^2 monomial basis (u <= v, lex order)."""
    idx = sym2_index(n)
    out = np.zeros((len(quadrics), len(idx)), dtype=np.int64)
    for r, q in enumerate(quadrics):
        for key, c in q.items():
            out[r, idx[key]] = (out[r, idx[key]] + c) % p
    return out


def iter_monomials(n: int, deg: int) -> Iterator[tuple]:
    """Sorted variable tuples of length deg (monomials of degree deg in n variables)."""
    from itertools import combinations_with_replacement
    return combinations_with_replacement(range(n), deg)
