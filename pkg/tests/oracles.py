"""Independent reference implementations used only by the tests.

Nothing here calls the package's linear algebra, Bruhat order or KL code;
group elements are multiplied through their matrices and nothing else.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product


# ---- Gaussian elimination over Fraction or Z/p ------------------------------


def _inv(a, p):
    return Fraction(1) / a if p == 0 else pow(int(a), p - 2, p)


def _norm(a, p):
    return Fraction(a) if p == 0 else int(a) % p


def echelon(rows, ncols, p=0):
    """Reduced row echelon form by textbook elimination; returns (rows, pivots)."""
    A = [[_norm(x, p) for x in r] for r in rows]
    piv = []
    r = 0
    for c in range(ncols):
        k = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if k is None:
            continue
        A[r], A[k] = A[k], A[r]
        inv = _inv(A[r][c], p)
        A[r] = [_norm(x * inv, p) for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [_norm(x - f * y, p) for x, y in zip(A[i], A[r])]
        piv.append(c)
        r += 1
    return A[:r], piv


def rank(rows, ncols, p=0):
    return len(echelon(rows, ncols, p)[1])


def nullity(rows, ncols, p=0):
    return ncols - rank(rows, ncols, p)


def in_row_space(v, rows, ncols, p=0):
    return rank(list(rows) + [v], ncols, p) == rank(rows, ncols, p)


# ---- Coxeter-group side -----------------------------------------------------


def _mul(a, b):
    n = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)) for i in range(n))


def _ident(n):
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


class SubwordInterval:
    """``[e, w]`` from one reduced word of ``w`` via the subword property.

    Elements are keyed by matrix. ``length[x]`` is the shortest subword
    giving ``x``, ``leq(x, y)`` tests whether a reduced word of ``x`` is a
    subword of some reduced word of ``y`` (using ``y``'s own subwords).
    """

    def __init__(self, gens, word):
        self.gens = [g.matrix for g in gens]
        self.word = list(word)
        n = len(self.gens[0])
        self.one = _ident(n)
        self.length = {}
        self.best = {}
        for mask in product((0, 1), repeat=len(self.word)):
            m = self.one
            used = []
            for bit, i in zip(mask, self.word):
                if bit:
                    m = _mul(m, self.gens[i])
                    used.append(i)
            if m not in self.length or len(used) < self.length[m]:
                self.length[m] = len(used)
                self.best[m] = tuple(used)
        self.elements = set(self.length)

    def below(self, y):
        """All subword products of a reduced word of ``y``."""
        word = self.best[y]
        out = set()
        for mask in product((0, 1), repeat=len(word)):
            m = self.one
            for bit, i in zip(mask, word):
                if bit:
                    m = _mul(m, self.gens[i])
            out.add(m)
        return out

    def leq(self, x, y):
        return x in self.below(y)


def is_reflection_matrix(m) -> bool:
    """Order two and fixing a hyperplane."""
    n = len(m)
    I = _ident(n)
    if m == I or _mul(m, m) != I:
        return False
    diff = [[m[i][j] - I[i][j] for j in range(n)] for i in range(n)]
    return rank(diff, n) == 1


def inverse_matrix(m):
    n = len(m)
    rows = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(m)]
    R, _ = echelon(rows, 2 * n)
    return tuple(tuple(int(x) for x in r[n:]) for r in R)


def deodhar_count_oracle(iv: SubwordInterval, x) -> int:
    """``#{t reflection : t x <= w}``."""
    xinv = inverse_matrix(x)
    return sum(1 for y in iv.elements if y != x and is_reflection_matrix(_mul(y, xinv)))


# ---- KL polynomials from R-polynomials --------------------------------------


def _padd(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


def _pmul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


class RPolynomialKL:
    """``P_{x,w}`` for ``x, w`` in one interval via ``q^L Pbar = sum R_{x,y} P_{y,w}``.

    Only left multiplication by generators and :class:`SubwordInterval` are used.
    """

    def __init__(self, iv: SubwordInterval):
        self.iv = iv
        self._R = {}
        self._P = {}
        self._below = {}

    def _le(self, x, y):
        if y not in self._below:
            self._below[y] = self.iv.below(y)
        return x in self._below[y]

    def _l(self, x):
        return self.iv.length[x]

    def R(self, x, w):
        key = (x, w)
        if key in self._R:
            return self._R[key]
        if not self._le(x, w):
            res = []
        elif x == w:
            res = [1]
        else:
            s = next(g for g in self.iv.gens if _mul(g, w) in self.iv.length and self._l(_mul(g, w)) < self._l(w))
            sw, sx = _mul(s, w), _mul(s, x)
            if sx in self.iv.length and self._l(sx) < self._l(x):
                res = self.R(sx, sw)
            else:
                res = _padd(_pmul([-1, 1], self.R(x, sw)), _pmul([0, 1], self.R(sx, sw)))
        res = list(_trim(res))
        self._R[key] = res
        return res

    def P(self, x, w):
        key = (x, w)
        if key in self._P:
            return self._P[key]
        if not self._le(x, w):
            res = ()
        elif x == w:
            res = (1,)
        else:
            L = self._l(w) - self._l(x)
            tot = []
            for y in self.iv.elements:
                if y != x and self._le(x, y) and self._le(y, w):
                    tot = _padd(tot, _pmul(self.R(x, y), list(self.P(y, w))))
            res = _trim([-c for i, c in enumerate(tot) if 2 * i < L])
        self._P[key] = res
        return res
