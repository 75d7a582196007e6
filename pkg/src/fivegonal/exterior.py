"""Bases of exterior powers, indexed by colexicographic rank.

A subset ``I = (i_0 < i_1 < ... < i_{k-1})`` of ``range(n)`` has colex rank
``sum(comb(i_t, t + 1))``.  Signs follow the convention

    e_I ^ e_k = (-1)^{#{i in I : i > k}} e_{I + k}

and contraction ``iota_k e_I = (-1)^t e_{I - i_t}`` when ``k = i_t``.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np


def rank_subset(s) -> int:
    return sum(comb(x, t + 1) for t, x in enumerate(sorted(s)))


def unrank_subset(r: int, k: int) -> tuple:
    out = []
    for t in range(k, 0, -1):
        x = t - 1
        while comb(x + 1, t) <= r:
            x += 1
        out.append(x)
        r -= comb(x, t)
    return tuple(reversed(out))


@lru_cache(maxsize=None)
def subsets(n: int, k: int) -> tuple:
    """All k-subsets of range(n) in colex order."""
    if k < 0 or k > n:
        return ()
    return tuple(sorted(combinations(range(n), k), key=lambda s: s[::-1]))


@lru_cache(maxsize=None)
def subset_array(n: int, k: int) -> np.ndarray:
    s = subsets(n, k)
    a = np.array(s, dtype=np.int64).reshape(len(s), k)
    a.setflags(write=False)
    return a


def wedge_sign(s, k: int) -> int:
    """Sign of e_s ^ e_k relative to the sorted basis vector (0 if k in s)."""
    if k in s:
        return 0
    return -1 if sum(1 for x in s if x > k) % 2 else 1


@lru_cache(maxsize=None)
def wedge_table(n: int, k: int):
    """Arrays ``(target, sign)`` of shape (C(n,k), n) for right wedge with e_x.

    ``target[r, x]`` is the rank of ``I + x`` in the (k+1)-subsets, or -1 when
    ``x`` is already in ``I``.
    """
    subs = subset_array(n, k)
    m = subs.shape[0]
    target = np.full((m, n), -1, dtype=np.int64)
    sign = np.zeros((m, n), dtype=np.int64)
    for r in range(m):
        s = subs[r]
        base = rank_subset(s)
        assert base == r
        for x in range(n):
            if x in s:
                continue
            above = int(np.sum(s > x))
            # colex rank of the enlarged set, computed incrementally
            t = int(np.sum(s < x))
            rr = sum(comb(int(y), u + 1) for u, y in enumerate(s[:t]))
            rr += comb(x, t + 1)
            rr += sum(comb(int(y), u + 2) for u, y in enumerate(s[t:], start=t))
            target[r, x] = rr
            sign[r, x] = -1 if above % 2 else 1
    target.setflags(write=False)
    sign.setflags(write=False)
    return target, sign


@lru_cache(maxsize=None)
def contraction_table(n: int, k: int):
    """Arrays ``(target, var, sign)`` of shape (C(n,k), k).

    Row r lists the k terms of ``sum_x iota_x e_I (x) e_x``: ``iota_{var}``
    sends ``e_I`` to ``sign * e_{target}``.
    """
    subs = subset_array(n, k)
    m = subs.shape[0]
    target = np.zeros((m, k), dtype=np.int64)
    var = np.zeros((m, k), dtype=np.int64)
    sign = np.zeros((m, k), dtype=np.int64)
    for r in range(m):
        s = tuple(int(x) for x in subs[r])
        for t, x in enumerate(s):
            target[r, t] = rank_subset(s[:t] + s[t + 1:])
            var[r, t] = x
            sign[r, t] = -1 if t % 2 else 1
    for a in (target, var, sign):
        a.setflags(write=False)
    return target, var, sign


def wedge_vectors(vectors, p: int) -> np.ndarray:
    """Coordinates of v_1 ^ ... ^ v_j in the colex basis of Lambda^j, mod p."""
    vectors = np.asarray(vectors, dtype=np.int64) % p
    j, n = vectors.shape
    cur = np.ones(1, dtype=np.int64)
    for k in range(j):
        target, sign = wedge_table(n, k)
        nxt = np.zeros(comb(n, k + 1), dtype=np.int64)
        ok = target >= 0
        contrib = (cur[:, None] * sign * vectors[k][None, :]) % p
        np.add.at(nxt, target[ok], contrib[ok])
        cur = nxt % p
    return cur
