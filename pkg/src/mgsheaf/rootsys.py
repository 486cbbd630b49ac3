"""Finite irreducible reduced root systems and affine coroots.

Coordinates
-----------
* roots and weights: simple-root coordinates (``V = X (x) Q``), rational
  entries allowed for weights such as rho;
* coroots: stored in simple-coroot coordinates, exposed in fundamental-coweight
  coordinates ``(<alpha_1, v>, ..., <alpha_r, v>)`` so that the pairing of a
  weight with a coweight is a plain dot product;
* affine coweights: fundamental-coweight coordinates followed by the
  ``delta^vee`` coordinate.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property


def _euclidean_simple_roots(kind: str, r: int):
    def e(i, n):
        v = [0] * n
        v[i] = 1
        return v

    def sub(a, b):
        return [x - y for x, y in zip(a, b)]

    def add(a, b):
        return [x + y for x, y in zip(a, b)]

    if kind == "A":
        n = r + 1
        return [sub(e(i, n), e(i + 1, n)) for i in range(r)]
    if kind in "BCD":
        n = r
        roots = [sub(e(i, n), e(i + 1, n)) for i in range(r - 1)]
        if kind == "B":
            roots.append(e(r - 1, n))
        elif kind == "C":
            roots.append([2 * x for x in e(r - 1, n)])
        else:
            roots.append(add(e(r - 2, n), e(r - 1, n)))
        return roots
    if kind == "G":
        return [[1, -1, 0], [-2, 1, 1]]
    raise ValueError(kind)


_MIN_RANK = {"A": 1, "B": 2, "C": 2, "D": 4, "G": 2}


def parse_type(label: str) -> tuple[str, int]:
    m = re.fullmatch(r"\s*([A-Za-z])_?(\d+)\s*", label)
    if not m:
        raise ValueError(f"unsupported Cartan type {label!r}")
    kind, r = m.group(1).upper(), int(m.group(2))
    if kind not in _MIN_RANK:
        raise ValueError(f"unsupported Cartan type {label!r}")
    if r < _MIN_RANK[kind] or (kind == "G" and r != 2):
        raise ValueError(f"unsupported Cartan type {label!r}")
    return kind, r


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


@dataclass(frozen=True)
class AffineCoweight:
    """Element of ``X^vee (+) Z``: fundamental-coweight coordinates, then delta^vee."""

    coords: tuple[int, ...]

    @property
    def finite_part(self) -> tuple[int, ...]:
        return self.coords[:-1]

    @property
    def delta_coefficient(self) -> int:
        return self.coords[-1]


@dataclass(frozen=True, eq=False)
class RootSystem:
    cartan_type: str
    rank: int
    # cartan[i][j] = <alpha_i, alpha_j^vee>
    cartan: tuple[tuple[int, ...], ...]
    positive_roots: tuple[tuple[int, ...], ...]
    # parallel to positive_roots, simple-coroot coordinates
    positive_coroots: tuple[tuple[int, ...], ...]

    def __eq__(self, other):
        return isinstance(other, RootSystem) and self.cartan == other.cartan

    def __hash__(self):
        return hash(self.cartan)

    @cached_property
    def _coroot_of(self):
        table = {}
        for a, c in zip(self.positive_roots, self.positive_coroots):
            table[a] = c
            table[tuple(-x for x in a)] = tuple(-x for x in c)
        return table

    @property
    def roots(self) -> tuple[tuple[int, ...], ...]:
        neg = tuple(tuple(-x for x in a) for a in self.positive_roots)
        return self.positive_roots + neg

    @property
    def simple_roots(self) -> tuple[tuple[int, ...], ...]:
        r = self.rank
        return tuple(tuple(int(i == j) for j in range(r)) for i in range(r))

    @property
    def coxeter_number(self) -> int:
        """Height of the highest root plus one."""
        return sum(self.highest_root) + 1

    @cached_property
    def highest_root(self) -> tuple[int, ...]:
        return max(self.positive_roots, key=sum)

    @cached_property
    def rho(self) -> tuple[Fraction, ...]:
        """Half the sum of the positive roots, in simple-root coordinates."""
        return tuple(Fraction(sum(a[i] for a in self.positive_roots), 2) for i in range(self.rank))

    def is_root(self, alpha) -> bool:
        return tuple(alpha) in self._coroot_of

    def is_positive_root(self, alpha) -> bool:
        return tuple(alpha) in set(self.positive_roots)

    def coroot(self, alpha) -> tuple[int, ...]:
        """``alpha^vee`` in simple-coroot coordinates."""
        try:
            return self._coroot_of[tuple(alpha)]
        except KeyError:
            raise ValueError(f"{tuple(alpha)} is not a root of {self.cartan_type}") from None

    def coroot_coweight(self, alpha) -> tuple[int, ...]:
        """``alpha^vee`` in fundamental-coweight coordinates."""
        b = self.coroot(alpha)
        C = self.cartan
        return tuple(sum(C[i][j] * b[j] for j in range(self.rank)) for i in range(self.rank))

    def pairing(self, weight, coweight):
        """``<weight, coweight>``; weight in simple-root, coweight in fundamental-coweight coordinates."""
        if len(weight) != self.rank or len(coweight) != self.rank:
            raise ValueError(f"expected vectors of length {self.rank}")
        return _dot(weight, coweight)

    def simple_coweight_of_coroot(self, i: int) -> tuple[int, ...]:
        return self.coroot_coweight(self.simple_roots[i])

    def reflect(self, i: int, weight):
        """Simple reflection ``s_i`` on a weight in simple-root coordinates."""
        c = self.pairing(weight, self.simple_coweight_of_coroot(i))
        w = list(weight)
        w[i] -= c
        return tuple(w)


def build_root_system(label: str) -> RootSystem:
    """Root system of type A_r, B_r, C_r, D_r or G_2."""
    kind, r = parse_type(label)
    simple = _euclidean_simple_roots(kind, r)
    C = tuple(
        tuple(int(Fraction(2 * _dot(simple[i], simple[j]), _dot(simple[j], simple[j]))) for j in range(r))
        for i in range(r)
    )

    def s_root(i, a):
        # <a, alpha_i^vee> with a in simple-root coordinates
        c = sum(a[k] * C[k][i] for k in range(r))
        a = list(a)
        a[i] -= c
        return tuple(a)

    def s_coroot(i, b):
        # <alpha_i, b> with b in simple-coroot coordinates
        c = sum(C[i][k] * b[k] for k in range(r))
        b = list(b)
        b[i] -= c
        return tuple(b)

    unit = [tuple(int(i == j) for j in range(r)) for i in range(r)]
    seen = {u: u for u in unit}
    frontier = list(unit)
    while frontier:
        nxt = []
        for a in frontier:
            b = seen[a]
            for i in range(r):
                a2 = s_root(i, a)
                if a2 not in seen:
                    seen[a2] = s_coroot(i, b)
                    nxt.append(a2)
        frontier = nxt
    pos = sorted((a for a in seen if all(x >= 0 for x in a)), key=lambda a: (sum(a), tuple(-x for x in a)))
    rs = RootSystem(
        cartan_type=f"{kind}{r}",
        rank=r,
        cartan=C,
        positive_roots=tuple(pos),
        positive_coroots=tuple(seen[a] for a in pos),
    )
    if len(seen) != 2 * len(pos) or len(rs.roots) != rs.coxeter_number * r:
        raise AssertionError(f"root closure for {label} is inconsistent")
    return rs


def affine_coroot(rs: RootSystem, alpha, n: int) -> AffineCoweight:
    """``alpha^vee_n = alpha^vee - n delta^vee``."""
    return AffineCoweight(rs.coroot_coweight(alpha) + (-n,))
