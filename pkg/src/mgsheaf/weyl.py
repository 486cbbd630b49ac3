"""Finite and affine Weyl groups as integral matrices on ``V (+) Q``.

An element is the matrix of its linear action in the basis
``(alpha_1, ..., alpha_r, unit)``; the affine reflection ``s_{alpha,n}``
acts by ``(lam, xi) -> (lam - (<lam, alpha^vee> - xi n) alpha, xi)``.
Equality of group elements is matrix equality.

Lengths come from a breadth-first search of the Cayley graph on the simple
reflections, cached per :class:`WeylGroup`. Asking for anything beyond the
search horizon raises :class:`HorizonError`.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .arith.field import QQ
from .arith.linalg import rank
from .rootsys import RootSystem

log = logging.getLogger(__name__)


class HorizonError(RuntimeError):
    """The BFS horizon of the group was reached before the answer was known."""


class WordError(ValueError):
    """A word could not be parsed, or is not reduced."""


Matrix = tuple[tuple[int, ...], ...]


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    bt = list(zip(*b))
    return tuple(tuple(sum(a[i][k] * bt[j][k] for k in range(n)) for j in range(n)) for i in range(n))


def _identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


@dataclass(frozen=True)
class AffineWeylElement:
    matrix: Matrix
    cartan_type: str

    def __mul__(self, other: "AffineWeylElement") -> "AffineWeylElement":
        if not isinstance(other, AffineWeylElement):
            return NotImplemented
        if other.cartan_type != self.cartan_type:
            raise TypeError(f"cannot multiply elements of {self.cartan_type} and {other.cartan_type}")
        return AffineWeylElement(_matmul(self.matrix, other.matrix), self.cartan_type)

    def inverse(self) -> "AffineWeylElement":
        # inverse of an integral unimodular matrix by exact Gauss-Jordan
        n = len(self.matrix)
        A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(self.matrix)]
        for c in range(n):
            p = next(r for r in range(c, n) if A[r][c] != 0)
            A[c], A[p] = A[p], A[c]
            piv = A[c][c]
            A[c] = [x / piv for x in A[c]]
            for r in range(n):
                if r != c and A[r][c] != 0:
                    f = A[r][c]
                    A[r] = [x - f * y for x, y in zip(A[r], A[c])]
        inv = tuple(tuple(int(x) for x in row[n:]) for row in A)
        return AffineWeylElement(inv, self.cartan_type)

    @property
    def is_identity(self) -> bool:
        return self.matrix == _identity(len(self.matrix))

    def act(self, vec):
        """Apply to a column vector ``(lam_1..lam_r, xi)``."""
        return tuple(sum(m * v for m, v in zip(row, vec)) for row in self.matrix)

    def act_affine(self, lam):
        """Affine action on ``V`` (the level-one slice ``xi = 1``)."""
        return self.act(tuple(lam) + (1,))[:-1]

    def is_level_preserving(self) -> bool:
        last = self.matrix[-1]
        return last == tuple([0] * (len(last) - 1) + [1])


def reflection_matrix(rs: RootSystem, alpha, n: int) -> Matrix:
    """Matrix of ``s_{alpha,n}``."""
    r = rs.rank
    c = rs.coroot_coweight(alpha)
    rows = []
    for i in range(r):
        row = [int(i == j) - alpha[i] * c[j] for j in range(r)]
        row.append(n * alpha[i])
        rows.append(tuple(row))
    rows.append(tuple([0] * r + [1]))
    return tuple(rows)


@dataclass
class BruhatInterval:
    """The lower interval ``{x <= top}``."""

    top: AffineWeylElement
    elements: list  # sorted by (length, word)
    lengths: dict
    covers: list  # pairs (x, y) with x < y and l(y) = l(x) + 1

    def __contains__(self, x):
        return x in self.lengths

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


@dataclass
class WeylGroup:
    """Finite (``affine=False``) or affine Weyl group of a root system.

    Generators are ``s1..sr`` and, in the affine case, ``s0 = s_{theta,1}``.
    ``horizon`` caps the BFS depth.
    """

    rs: RootSystem
    affine: bool = False
    horizon: int = 60
    _length: dict = field(default_factory=dict, repr=False)
    _word: dict = field(default_factory=dict, repr=False)
    _layers: list = field(default_factory=list, repr=False)
    _leq: dict = field(default_factory=dict, repr=False)
    _intervals: dict = field(default_factory=dict, repr=False)
    _complete: bool = field(default=False, repr=False)

    def __post_init__(self):
        r = self.rs.rank
        self.generators = [self.reflection(self.rs.simple_roots[i], 0) for i in range(r)]
        self.names = [f"s{i + 1}" for i in range(r)]
        if self.affine:
            self.generators.append(self.reflection(self.rs.highest_root, 1))
            self.names.append("s0")
        self.identity = AffineWeylElement(_identity(r + 1), self.rs.cartan_type)
        self._length[self.identity] = 0
        self._word[self.identity] = ()
        self._layers.append([self.identity])

    @property
    def label(self) -> str:
        return ("~" if self.affine else "") + self.rs.cartan_type

    # ---- group law ---------------------------------------------------------

    def reflection(self, alpha, n: int) -> AffineWeylElement:
        return AffineWeylElement(reflection_matrix(self.rs, tuple(alpha), n), self.rs.cartan_type)

    def multiply(self, a: AffineWeylElement, b: AffineWeylElement) -> AffineWeylElement:
        return a * b

    def invert(self, a: AffineWeylElement) -> AffineWeylElement:
        return a.inverse()

    def from_word(self, word) -> AffineWeylElement:
        g = self.identity
        for i in self._parse(word):
            g = g * self.generators[i]
        return g

    def _parse(self, word) -> list[int]:
        if isinstance(word, str):
            tokens = word.replace(",", " ").split()
        else:
            tokens = list(word)
        if tokens in (["e"], ["1"]):
            return []
        out = []
        for pos, t in enumerate(tokens):
            if isinstance(t, int):
                if not 0 <= t < len(self.generators):
                    raise WordError(f"generator index {t} out of range at position {pos}")
                out.append(t)
                continue
            if t not in self.names:
                raise WordError(f"unknown generator {t!r} at position {pos} (have {' '.join(self.names)})")
            out.append(self.names.index(t))
        return out

    def element(self, word, require_reduced: bool = True) -> AffineWeylElement:
        """Element from a word like ``"s1 s0 s1"``; rejects non-reduced words by default."""
        idx = self._parse(word)
        g = self.from_word(idx)
        if require_reduced and self.length(g) != len(idx):
            raise WordError(f"word {word!r} of length {len(idx)} is not reduced (element has length {self.length(g)})")
        return g

    # ---- lengths and words -------------------------------------------------

    def _grow(self):
        if self._complete:
            return False
        depth = len(self._layers)
        if depth > self.horizon:
            raise HorizonError(f"BFS horizon {self.horizon} reached in {self.label}")
        nxt = []
        for x in self._layers[-1]:
            for i, s in enumerate(self.generators):
                y = s * x
                if y not in self._length:
                    self._length[y] = depth
                    self._word[y] = (i,) + self._word[x]
                    nxt.append(y)
        nxt.sort(key=self._word_key)
        if not nxt:
            self._complete = True
            return False
        self._layers.append(nxt)
        return True

    def _word_key(self, x):
        # order generators as s1..sr, s0
        return self._word[x]

    def extend_to(self, L: int):
        """Make sure every element of length <= L is known."""
        while len(self._layers) <= L and self._grow():
            pass

    def elements_up_to(self, L: int) -> list[AffineWeylElement]:
        self.extend_to(L)
        return [x for layer in self._layers[: L + 1] for x in layer]

    def length(self, x: AffineWeylElement) -> int:
        while x not in self._length:
            if not self._grow():
                raise ValueError("element does not belong to this group")
        return self._length[x]

    def word(self, x: AffineWeylElement) -> str:
        self.length(x)
        w = self._word[x]
        return " ".join(self.names[i] for i in w) if w else "e"

    def reduced_word(self, x: AffineWeylElement) -> tuple[int, ...]:
        self.length(x)
        return self._word[x]

    def sort_key(self, x):
        return (self.length(x), self._word[x])

    def is_left_descent(self, i: int, x: AffineWeylElement) -> bool:
        return self.length(self.generators[i] * x) < self.length(x)

    def left_descents(self, x) -> list[int]:
        return [i for i in range(len(self.generators)) if self.is_left_descent(i, x)]

    @property
    def longest_element(self) -> AffineWeylElement:
        """Longest element of the finite Weyl group."""
        fin = self if not self.affine else WeylGroup(self.rs, affine=False)
        fin.extend_to(len(self.rs.positive_roots) + 1)
        w0 = fin._layers[-1][0]
        return AffineWeylElement(w0.matrix, self.rs.cartan_type)

    # ---- Bruhat order ------------------------------------------------------

    def bruhat_leq(self, x: AffineWeylElement, w: AffineWeylElement) -> bool:
        key = (x, w)
        if key in self._leq:
            return self._leq[key]
        lx, lw = self.length(x), self.length(w)
        if lx > lw:
            res = False
        elif lx == lw:
            res = x == w
        elif lx == 0:
            res = True
        else:
            i = self.left_descents(w)[0]
            s = self.generators[i]
            sw, sx = s * w, s * x
            if self.length(sx) < lx:
                res = self.bruhat_leq(sx, sw)
            else:
                res = self.bruhat_leq(x, sw)
        self._leq[key] = res
        return res

    def lower_interval(self, w: AffineWeylElement) -> BruhatInterval:
        if w in self._intervals:
            return self._intervals[w]
        lw = self.length(w)
        self.extend_to(lw + 1)
        members = self._lower_set(w)
        elems = sorted(members, key=self.sort_key)
        lengths = {x: self.length(x) for x in elems}
        by_len: dict[int, list] = {}
        for x in elems:
            by_len.setdefault(lengths[x], []).append(x)
        covers = []
        for x in elems:
            xinv = x.inverse()
            for y in by_len.get(lengths[x] + 1, []):
                if self.is_reflection(y * xinv) is not None:
                    covers.append((x, y))
        iv = BruhatInterval(w, elems, lengths, covers)
        self._intervals[w] = iv
        return iv

    def _lower_set(self, w) -> frozenset:
        if self.length(w) == 0:
            return frozenset([self.identity])
        i = self.left_descents(w)[0]
        s = self.generators[i]
        below = self._lower_set(s * w)
        return below | frozenset(s * x for x in below)

    # ---- reflections -------------------------------------------------------

    def is_reflection(self, g: AffineWeylElement):
        """``(alpha, n)`` with ``alpha`` positive if ``g = s_{alpha,n}``, else None."""
        M = g.matrix
        N = len(M)
        if g.is_identity or not (g * g).is_identity:
            return None
        diff = [[M[i][j] - int(i == j) for j in range(N)] for i in range(N)]
        if rank(diff, N, QQ) != 1:
            return None
        r = N - 1
        col = next(([diff[i][j] for i in range(r)] for j in range(N) if any(diff[i][j] for i in range(r))), None)
        if col is None:
            return None
        g_ = 0
        for v in col:
            g_ = gcd(g_, abs(v))
        alpha = tuple(v // g_ for v in col)
        if not self.rs.is_root(alpha):
            return None
        if not self.rs.is_positive_root(alpha):
            alpha = tuple(-a for a in alpha)
        i = next(i for i in range(r) if alpha[i])
        last = diff[i][r]
        if last % alpha[i]:
            return None
        n = last // alpha[i]
        if reflection_matrix(self.rs, alpha, n) != M:
            return None
        if not self.affine and n != 0:
            return None
        return alpha, n

    def deodhar_count(self, x: AffineWeylElement, w: AffineWeylElement) -> int:
        """``n_w(x)``: reflections ``t`` with ``t x <= w``."""
        iv = self.lower_interval(w)
        if x not in iv:
            raise ValueError(f"{self.word(x)} is not below {self.word(w)}")
        xinv = x.inverse()
        return sum(1 for y in iv if y != x and self.is_reflection(y * xinv) is not None)

    # ---- restricted antidominant region ------------------------------------

    def dot_zero(self, u: AffineWeylElement):
        """``u . 0 = u(rho) - rho`` for the affine action."""
        rho = self.rs.rho
        image = u.act_affine(rho)
        return tuple(a - b for a, b in zip(image, rho))

    def is_restricted_antidominant(self, g: AffineWeylElement, p: int) -> bool:
        """Whether ``g = w0 u`` with ``0 <= <u.0, alpha^vee> < p`` for every simple root."""
        if p <= 0:
            raise ValueError("the restricted region needs a positive characteristic")
        u = self.longest_element * g
        lam = self.dot_zero(u)
        for i in range(self.rs.rank):
            c = self.rs.pairing(lam, self.rs.simple_coweight_of_coroot(i))
            if not 0 <= c < p:
                return False
        return True
