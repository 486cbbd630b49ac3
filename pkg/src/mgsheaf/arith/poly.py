"""Sparse multivariate polynomials with every variable in degree 1."""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb

from .field import Field, QQ, to_python


def dim_S(m: int, d: int) -> int:
    """Dimension of the degree-``d`` part of a polynomial ring in ``m`` variables."""
    if d < 0:
        return 0
    if m == 0:
        return 1 if d == 0 else 0
    return comb(d + m - 1, m - 1)


@lru_cache(maxsize=None)
def monomials(m: int, d: int) -> tuple[tuple[int, ...], ...]:
    """Exponent vectors of degree ``d`` in ``m`` variables, lex-descending."""
    if d < 0:
        return ()
    out = []
    for combo in combinations_with_replacement(range(m), d):
        e = [0] * m
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index(m: int, d: int) -> dict[tuple[int, ...], int]:
    return {e: i for i, e in enumerate(monomials(m, d))}


def _add_exp(a, b):
    return tuple(x + y for x, y in zip(a, b))


class GradedPoly:
    """Polynomial as a sparse map exponent-tuple -> nonzero coefficient.

    Instances are treated as immutable.
    """

    __slots__ = ("m", "field", "terms")

    def __init__(self, terms=None, m: int = 1, field: Field = QQ):
        self.m = m
        self.field = field
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != m:
                raise ValueError(f"exponent {e} has wrong length for {m} variables")
            c = field(c)
            if c != 0:
                clean[e] = clean.get(e, field.zero) + c
                if clean[e] == 0:
                    del clean[e]
        self.terms = clean

    @classmethod
    def variable(cls, i: int, m: int, field: Field = QQ) -> "GradedPoly":
        e = [0] * m
        e[i] = 1
        return cls({tuple(e): 1}, m, field)

    @classmethod
    def constant(cls, c, m: int, field: Field = QQ) -> "GradedPoly":
        return cls({(0,) * m: c}, m, field)

    @classmethod
    def linear_form(cls, coeffs, field: Field = QQ) -> "GradedPoly":
        m = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            e = [0] * m
            e[i] = 1
            terms[tuple(e)] = c
        return cls(terms, m, field)

    def _new(self, terms):
        p = GradedPoly.__new__(GradedPoly)
        p.m, p.field, p.terms = self.m, self.field, terms
        return p

    def _check(self, other):
        if not isinstance(other, GradedPoly):
            return self._new({(0,) * self.m: self.field(other)} if self.field(other) != 0 else {})
        if other.m != self.m or other.field != self.field:
            raise TypeError("polynomials over different rings")
        return other

    def is_zero(self) -> bool:
        return not self.terms

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def homog_component(self, d: int) -> "GradedPoly":
        return self._new({e: c for e, c in self.terms.items() if sum(e) == d})

    def homogeneous_parts(self) -> dict[int, "GradedPoly"]:
        return {d: self.homog_component(d) for d in sorted({sum(e) for e in self.terms})}

    def __add__(self, other):
        other = self._check(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            v = t.get(e, self.field.zero) + c
            if v == 0:
                t.pop(e, None)
            else:
                t[e] = v
        return self._new(t)

    __radd__ = __add__

    def __neg__(self):
        return self._new({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        if not isinstance(other, GradedPoly):
            c = self.field(other)
            if c == 0:
                return self._new({})
            return self._new({e: v * c for e, v in self.terms.items()})
        other = self._check(other)
        t: dict = {}
        zero = self.field.zero
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = _add_exp(e1, e2)
                v = t.get(e, zero) + c1 * c2
                if v == 0:
                    t.pop(e, None)
                else:
                    t[e] = v
        return self._new(t)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = GradedPoly.constant(1, self.m, self.field)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, GradedPoly):
            return self.m == other.m and self.field == other.field and self.terms == other.terms
        try:
            return self == self._check(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.m, self.field, frozenset((e, to_python(c)) for e, c in self.terms.items())))

    def coefficient_vector(self, d: int) -> list:
        """Coordinates of the degree-``d`` part in the ``monomials(m, d)`` basis."""
        idx = monomial_index(self.m, d)
        v = [self.field.zero] * len(idx)
        for e, c in self.terms.items():
            if sum(e) == d:
                v[idx[e]] = c
        return v

    @classmethod
    def from_vector(cls, vec, d: int, m: int, field: Field = QQ) -> "GradedPoly":
        return cls({e: c for e, c in zip(monomials(m, d), vec) if c != 0}, m, field)

    def substitute(self, images: list["GradedPoly"]) -> "GradedPoly":
        """Ring map sending variable ``i`` to ``images[i]``."""
        if len(images) != self.m:
            raise ValueError("need one image per variable")
        target = images[0] if images else None
        if target is None:
            return self
        out = target._new({})
        for e, c in self.terms.items():
            term = GradedPoly.constant(c, target.m, target.field)
            for i, k in enumerate(e):
                if k:
                    term = term * (images[i] ** k)
            out = out + term
        return out

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=lambda e: (-sum(e), [-x for x in e])):
            c = to_python(self.terms[e])
            mono = "*".join(f"x{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)
