"""Kazhdan-Lusztig polynomials by the standard left-descent recursion."""

from __future__ import annotations

from dataclasses import dataclass

from .weyl import AffineWeylElement, WeylGroup


@dataclass(frozen=True)
class QPolynomial:
    """Integer polynomial in one variable; ``coeffs[i]`` multiplies ``var^i``."""

    coeffs: tuple[int, ...] = ()
    var: str = "q"

    def __post_init__(self):
        c = list(self.coeffs)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(int(x) for x in c))

    @classmethod
    def one(cls, var="q"):
        return cls((1,), var)

    @classmethod
    def monomial(cls, k: int, c: int = 1, var="q"):
        return cls((0,) * k + (c,), var)

    @classmethod
    def from_multiset(cls, degrees, var="q"):
        c = [0] * (max(degrees, default=-1) + 1)
        for d in degrees:
            c[d] += 1
        return cls(tuple(c), var)

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_one(self) -> bool:
        return self.coeffs == (1,)

    def coefficient(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __call__(self, t):
        return sum(c * t**i for i, c in enumerate(self.coeffs))

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return QPolynomial(tuple(self.coefficient(i) + other.coefficient(i) for i in range(n)), self.var)

    def __neg__(self):
        return QPolynomial(tuple(-c for c in self.coeffs), self.var)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return QPolynomial(tuple(c * other for c in self.coeffs), self.var)
        out = [0] * max(len(self.coeffs) + len(other.coeffs) - 1, 0)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return QPolynomial(tuple(out), self.var)

    __rmul__ = __mul__

    def shift(self, k: int) -> "QPolynomial":
        return QPolynomial((0,) * k + self.coeffs, self.var)

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else (self.var if i == 1 else f"{self.var}^{i}")
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}{mono}")
        return " + ".join(parts)


ZERO = QPolynomial(())
ONE = QPolynomial.one()


class KazhdanLusztig:
    """Memoized ``P_{x,w}`` for one Weyl group.

    ``P_{x,w}`` for ``s w < w``, ``v = s w`` and ``c = [s x < x]``::

        q^(1-c) P_{sx,v} + q^c P_{x,v}
          - sum_{x <= z < v, sz < z} mu(z,v) q^((l(w)-l(z))/2) P_{x,z}
    """

    def __init__(self, W: WeylGroup):
        self.W = W
        self._memo: dict = {}

    def mu(self, z, v) -> int:
        d = self.W.length(v) - self.W.length(z)
        if d <= 0 or d % 2 == 0:
            return 0
        return self.P(z, v).coefficient((d - 1) // 2)

    def P(self, x: AffineWeylElement, w: AffineWeylElement, descent: int | None = None) -> QPolynomial:
        if descent is None and (x, w) in self._memo:
            return self._memo[x, w]
        W = self.W
        if not W.bruhat_leq(x, w):
            res = ZERO
        elif x == w:
            res = ONE
        else:
            if descent is None:
                descent = W.left_descents(w)[0]
            elif not W.is_left_descent(descent, w):
                raise ValueError(f"{W.names[descent]} is not a left descent of {W.word(w)}")
            s = W.generators[descent]
            v, sx = s * w, s * x
            c = 1 if W.length(sx) < W.length(x) else 0
            res = self.P(sx, v).shift(1 - c) + self.P(x, v).shift(c)
            lw = W.length(w)
            for z in W.lower_interval(v):
                if z == v or W.length(s * z) > W.length(z) or not W.bruhat_leq(x, z):
                    continue
                m = self.mu(z, v)
                if m:
                    res = res - (self.P(x, z) * m).shift((lw - W.length(z)) // 2)
        self._memo.setdefault((x, w), res)
        return res

    def h(self, x, w) -> QPolynomial:
        """``h_{x,w}(v) = v^(l(w)-l(x)) P_{x,w}(v^-2)`` as a polynomial in ``v``."""
        if not self.W.bruhat_leq(x, w):
            raise ValueError(f"{self.W.word(x)} is not below {self.W.word(w)}")
        L = self.W.length(w) - self.W.length(x)
        c = [0] * (L + 1)
        for i, a in enumerate(self.P(x, w).coeffs):
            c[L - 2 * i] += a
        return QPolynomial(tuple(c), "v")

    def deodhar_smooth(self, x, w) -> bool:
        """``n_w(x) == l(w)``; by Deodhar's criterion equivalent to ``P_{x,w} == 1``."""
        if not self.W.bruhat_leq(x, w):
            raise ValueError(f"{self.W.word(x)} is not below {self.W.word(w)}")
        return self.W.deodhar_count(x, w) == self.W.length(w)

    def table(self, w) -> "KLTable":
        iv = self.W.lower_interval(w)
        return KLTable(self.W, w, {x: self.P(x, w) for x in iv})


@dataclass
class KLTable:
    W: WeylGroup
    w: AffineWeylElement
    polys: dict

    def __getitem__(self, x) -> QPolynomial:
        return self.polys[x]

    def rows(self):
        return [(x, self.polys[x]) for x in self.W.lower_interval(self.w)]

    def to_tsv(self) -> str:
        lines = ["x\tw\tcoeffs\tP"]
        ww = self.W.word(self.w)
        for x, p in self.rows():
            lines.append(f"{self.W.word(x)}\t{ww}\t{','.join(map(str, p.coeffs))}\t{p}")
        return "\n".join(lines) + "\n"


def kl_polynomial(W: WeylGroup, x, w, engine: KazhdanLusztig | None = None) -> QPolynomial:
    return (engine or KazhdanLusztig(W)).P(x, w)
