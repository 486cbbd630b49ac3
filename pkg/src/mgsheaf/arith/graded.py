"""Degree-truncated graded modules over a polynomial ring in ``nvars`` variables.

A :class:`TruncatedGradedModule` stores, for every degree ``d <= D``, the
dimension of ``M_d`` and the matrices of multiplication by each variable
``x_i: M_d -> M_{d+1}`` (row convention, see :mod:`.linalg`).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .field import Field
from .linalg import express_in_basis, matmul, rank
from .poly import dim_S, monomial_index, monomials


@dataclass(frozen=True)
class TruncatedGradedModule:
    field: Field
    nvars: int
    D: int
    dims: tuple[int, ...]
    # action[d][i] is the dims[d] x dims[d+1] matrix of x_i, for d < D
    action: tuple
    # M{shift}: degree d of the stored data is degree d - shift of the module
    shift: int = 0

    def __post_init__(self):
        if len(self.dims) != self.D + 1:
            raise ValueError("need one dimension per degree 0..D")
        if any(d < 0 for d in self.dims):
            raise ValueError("negative dimension")
        if len(self.action) != self.D:
            raise ValueError("need action maps for degrees 0..D-1")

    def dim(self, d: int) -> int:
        return self.dims[d] if 0 <= d <= self.D else 0

    def act(self, i: int, d: int, v):
        """Multiply the degree-``d`` vector ``v`` by ``x_i``."""
        M = self.action[d][i]
        n = self.dims[d + 1]
        out = [self.field.zero] * n
        for c, row in zip(v, M):
            if c != 0:
                for j in range(n):
                    if row[j] != 0:
                        out[j] += c * row[j]
        return out

    def commutes(self) -> bool:
        """Whether ``x_i x_j = x_j x_i`` on every ``M_d -> M_{d+2}``."""
        F = self.field
        for d in range(self.D - 1):
            a, b, c = self.dims[d], self.dims[d + 1], self.dims[d + 2]
            if a == 0 or c == 0:
                continue
            prods = {}
            for i in range(self.nvars):
                for j in range(self.nvars):
                    prods[i, j] = matmul(self.action[d][i], self.action[d + 1][j], a, b, c, F)
            for i in range(self.nvars):
                for j in range(i + 1, self.nvars):
                    if prods[i, j] != prods[j, i]:
                        return False
        return True

    def shifted(self, k: int) -> "TruncatedGradedModule":
        return TruncatedGradedModule(self.field, self.nvars, self.D, self.dims, self.action, self.shift + k)


def free_module(generator_degrees, D: int, nvars: int, field: Field) -> TruncatedGradedModule:
    """The free module with one generator per entry of ``generator_degrees``.

    Degree-``d`` basis: generator-major in the given order, then
    ``monomials(nvars, d - g)``. Keeping the order lets a direct sum of free
    modules share the basis of the concatenated generator list.
    """
    gens = list(generator_degrees)
    if any(g < 0 for g in gens):
        raise ValueError("generator degrees must be nonnegative")
    if any(g > D for g in gens):
        raise ValueError(f"generator degree {max(gens)} exceeds truncation bound {D}")
    dims = tuple(sum(dim_S(nvars, d - g) for g in gens) for d in range(D + 1))
    one, zero = field.one, field.zero
    action = []
    for d in range(D):
        offs_src, offs_dst = [], []
        s = t = 0
        for g in gens:
            offs_src.append(s)
            offs_dst.append(t)
            s += dim_S(nvars, d - g)
            t += dim_S(nvars, d + 1 - g)
        per_var = []
        for i in range(nvars):
            M = [[zero] * dims[d + 1] for _ in range(dims[d])]
            for k, g in enumerate(gens):
                if d - g < 0:
                    continue
                dst = monomial_index(nvars, d + 1 - g)
                for r, e in enumerate(monomials(nvars, d - g)):
                    e2 = list(e)
                    e2[i] += 1
                    M[offs_src[k] + r][offs_dst[k] + dst[tuple(e2)]] = one
            per_var.append(M)
        action.append(tuple(per_var))
    return TruncatedGradedModule(field, nvars, D, dims, tuple(action))


def submodule(ambient: TruncatedGradedModule, bases) -> TruncatedGradedModule:
    """The submodule with degree-``d`` basis ``bases[d]`` (independent vectors of ``ambient``).

    Raises ``ValueError`` if the spans are not closed under the action.
    """
    F = ambient.field
    if len(bases) != ambient.D + 1:
        raise ValueError("need one basis per degree")
    dims = tuple(len(b) for b in bases)
    action = []
    for d in range(ambient.D):
        per_var = []
        for i in range(ambient.nvars):
            images = [ambient.act(i, d, v) for v in bases[d]]
            per_var.append(express_in_basis(bases[d + 1], images, ambient.dims[d + 1], F))
        action.append(tuple(per_var))
    return TruncatedGradedModule(F, ambient.nvars, ambient.D, dims, tuple(action))


@dataclass(frozen=True)
class GeneratorDegrees:
    """Minimal generator degrees with multiplicity, plus a truncation flag."""

    multiplicities: dict
    saturated: bool

    def multiset(self) -> list[int]:
        return sorted(Counter(self.multiplicities).elements())


def decomposable_rank(M: TruncatedGradedModule, d: int) -> int:
    """``dim sum_i x_i M_{d-1}`` inside ``M_d``."""
    if d <= 0 or M.dims[d] == 0 or M.dims[d - 1] == 0:
        return 0
    rows = [row for i in range(M.nvars) for row in M.action[d - 1][i]]
    return rank(rows, M.dims[d], M.field)


def minimal_generator_degrees(M: TruncatedGradedModule) -> GeneratorDegrees:
    """Graded Nakayama: generators in degree d = dim of ``M_d / (x_1..x_m) M_{d-1}``.

    ``saturated`` is False when generators show up in the top degree ``D``,
    which means more may be hiding beyond the truncation.
    """
    mult = {}
    for d in range(M.D + 1):
        k = M.dims[d] - decomposable_rank(M, d)
        if k:
            mult[d - M.shift] = k
    top = M.dims[M.D] - decomposable_rank(M, M.D)
    return GeneratorDegrees(mult, saturated=(top == 0))


def direct_sum(modules) -> TruncatedGradedModule:
    """Block-diagonal direct sum; all summands share field, variables and ``D``."""
    mods = list(modules)
    if not mods:
        raise ValueError("empty direct sum")
    F, m, D = mods[0].field, mods[0].nvars, mods[0].D
    if any((M.field, M.nvars, M.D) != (F, m, D) for M in mods):
        raise ValueError("summands over different rings or truncations")
    dims = tuple(sum(M.dims[d] for M in mods) for d in range(D + 1))
    action = []
    for d in range(D):
        per_var = []
        for i in range(m):
            rows = []
            col = 0
            for M in mods:
                for r in M.action[d][i]:
                    rows.append([F.zero] * col + list(r) + [F.zero] * (dims[d + 1] - col - len(r)))
                col += M.dims[d + 1]
            per_var.append(rows)
        action.append(tuple(per_var))
    return TruncatedGradedModule(F, m, D, dims, tuple(action))
