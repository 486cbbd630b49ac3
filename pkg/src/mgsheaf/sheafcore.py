"""Sheaves on moment graphs, their sections, and flabbiness, degree by degree.

Every sheaf handled here has free stalks ``M^x = (+)_j S{-g_j}`` and edge
modules ``M^E = M^y / alpha M^y`` for ``E: x -> y``. The quotient
``S / alpha S`` is realized as the polynomial ring in the remaining
variables (eliminate one variable with nonzero coefficient in ``alpha``),
so ``M^E`` is a free ``S/alpha``-module on the generators of ``M^y`` and
``rho_{y,E}`` is the canonical projection. The lower map ``rho_{x,E}`` is
determined by the images ("lifts") of the generators of ``M^x``.

Polynomial variables are the coordinates of ``W_k`` on which some label is
nonzero; for finite Weyl groups this drops the ``delta^vee`` direction,
which only tensors everything with a polynomial ring and does not change
generator degrees.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property

from .arith.field import Field
from .arith.graded import TruncatedGradedModule, free_module, submodule
from .arith.linalg import left_kernel, nullspace, rank, row_basis
from .arith.poly import GradedPoly, dim_S, monomial_index, monomials
from .momentgraph import GKMError, MomentGraph, gkm_check


class EdgeRing:
    """``S / alpha S`` as polynomials in ``m - 1`` variables."""

    def __init__(self, alpha, F: Field):
        self.F = F
        self.m = len(alpha)
        self.alpha = list(alpha)
        self.pivot = next(i for i, a in enumerate(alpha) if a != 0)
        self.others = [j for j in range(self.m) if j != self.pivot]
        k = self.m - 1
        self.k = k
        imgs = []
        inv = -F.one / alpha[self.pivot]
        for j in range(self.m):
            if j == self.pivot:
                imgs.append(GradedPoly.linear_form([alpha[o] * inv for o in self.others], F) if k else GradedPoly({}, 0, F))
            else:
                imgs.append(GradedPoly.variable(self.others.index(j), k, F))
        self.var_images = imgs
        self._mono: dict = {(0,) * self.m: GradedPoly.constant(1, k, F)}
        self._proj: dict = {}
        self._mult: dict = {}

    def image(self, e) -> GradedPoly:
        """``pi(x^e)``."""
        if e in self._mono:
            return self._mono[e]
        j = next(i for i, a in enumerate(e) if a)
        rest = list(e)
        rest[j] -= 1
        p = self.image(tuple(rest)) * self.var_images[j]
        self._mono[e] = p
        return p

    def project_matrix(self, d: int):
        """Matrix of ``S_d -> (S/alpha)_d``."""
        if d not in self._proj:
            self._proj[d] = [self.image(e).coefficient_vector(d) for e in monomials(self.m, d)]
        return self._proj[d]

    def mult_matrix(self, i: int, d: int):
        """Multiplication by ``pi(x_i)`` from degree ``d`` to ``d + 1`` of ``S/alpha``."""
        key = (i, d)
        if key not in self._mult:
            L = self.var_images[i]
            idx = monomial_index(self.k, d + 1)
            rows = []
            for e in monomials(self.k, d):
                row = [self.F.zero] * len(idx)
                for le, c in L.terms.items():
                    row[idx[tuple(a + b for a, b in zip(e, le))]] += c
                rows.append(row)
            self._mult[key] = rows
        return self._mult[key]


def _offsets(gens, m, d):
    out, s = [], 0
    for g in gens:
        out.append(s)
        s += dim_S(m, d - g)
    return out, s


def free_mult_index(gens, m, d, i):
    """Index map of ``x_i`` on the free module with generators ``gens``, degree ``d -> d+1``."""
    src, _ = _offsets(gens, m, d)
    dst, _ = _offsets(gens, m, d + 1)
    out = []
    for k, g in enumerate(gens):
        if d - g < 0:
            continue
        idx = monomial_index(m, d + 1 - g)
        for e in monomials(m, d - g):
            e2 = list(e)
            e2[i] += 1
            out.append(dst[k] + idx[tuple(e2)])
    return out


class MGSheaf:
    """Sheaf with free stalks and edge modules ``M^y / alpha M^y``.

    ``gens[x]`` lists the generator degrees of ``M^x``; ``lifts[e.index][j]``
    is the image of the ``j``-th generator of ``M^{e.lower}`` in ``M^E``,
    a list (one entry per generator of ``M^{e.upper}``) of homogeneous
    polynomials over ``S / alpha``. Both are filled in by the constructor
    functions; edges whose lower vertex has no ``gens`` entry yet are treated
    as undefined.
    """

    def __init__(self, G: MomentGraph, D: int):
        self.G = G
        self.D = D
        self.F = G.field
        self.coords = G.active_coordinates() or [0]
        self.m = len(self.coords)
        self.gens: dict = {}
        self.lifts: dict = {}
        self._rho_lo: dict = {}
        self._rho_up: dict = {}

    @cached_property
    def edge_rings(self) -> dict:
        return {e.index: EdgeRing(self.label_form(e), self.F) for e in self.G.edges}

    def label_form(self, e) -> list:
        return [e.label[i] for i in self.coords]

    def label_poly(self, e) -> GradedPoly:
        return GradedPoly.linear_form(self.label_form(e), self.F)

    # ---- dimensions and maps -----------------------------------------------

    def stalk_dim(self, x, d: int) -> int:
        return sum(dim_S(self.m, d - g) for g in self.gens[x])

    def edge_dim(self, e, d: int) -> int:
        return sum(dim_S(self.m - 1, d - g) for g in self.gens[e.upper])

    def rho_upper(self, e, d: int):
        """Degree-``d`` matrix of the canonical ``M^y -> M^y / alpha M^y``."""
        key = (e.index, d)
        if key in self._rho_up:
            return self._rho_up[key]
        ring = self.edge_rings[e.index]
        gens = self.gens[e.upper]
        _, total = _offsets(gens, self.m - 1, d)
        out_offs, _ = _offsets(gens, self.m - 1, d)
        rows = []
        zero = self.F.zero
        for k, g in enumerate(gens):
            if d - g < 0:
                continue
            P = ring.project_matrix(d - g)
            for prow in P:
                row = [zero] * total
                row[out_offs[k]:out_offs[k] + len(prow)] = prow
                rows.append(row)
        self._rho_up[key] = rows
        return rows

    def rho_lower(self, e, d: int):
        """Degree-``d`` matrix of ``rho_{x,E}`` for the lower vertex ``x``."""
        key = (e.index, d)
        if key in self._rho_lo:
            return self._rho_lo[key]
        ring = self.edge_rings[e.index]
        src = self.gens[e.lower]
        dst = self.gens[e.upper]
        k = self.m - 1
        out_offs, total = _offsets(dst, k, d)
        lift = self.lifts[e.index]
        rows = []
        zero = self.F.zero
        for j, g in enumerate(src):
            if d - g < 0:
                continue
            c = lift[j]
            for mono in monomials(self.m, d - g):
                pm = ring.image(mono)
                row = [zero] * total
                for t, h in enumerate(dst):
                    if d - h < 0 or c[t].is_zero():
                        continue
                    prod = pm * c[t]
                    idx = monomial_index(k, d - h)
                    base = out_offs[t]
                    for ex, cf in prod.terms.items():
                        row[base + idx[ex]] += cf
                rows.append(row)
        self._rho_lo[key] = rows
        return rows

    def rho(self, x, e, d: int):
        return self.rho_lower(e, d) if x == e.lower else self.rho_upper(e, d)

    def stalk_act(self, x, i: int, d: int, vec):
        """Multiply a degree-``d`` element of ``M^x`` by ``x_i``."""
        out = [self.F.zero] * self.stalk_dim(x, d + 1)
        for c, j in zip(vec, free_mult_index(self.gens[x], self.m, d, i)):
            out[j] = c
        return out

    def edge_act(self, e, i: int, d: int, vec):
        """Multiply a degree-``d`` element of ``M^E`` by ``x_i`` (acting through ``S/alpha``)."""
        ring = self.edge_rings[e.index]
        gens = self.gens[e.upper]
        k = self.m - 1
        so, _ = _offsets(gens, k, d)
        to, total = _offsets(gens, k, d + 1)
        out = [self.F.zero] * total
        for t, g in enumerate(gens):
            if d - g < 0:
                continue
            M = ring.mult_matrix(i, d - g)
            seg = vec[so[t]:so[t] + len(M)]
            for c, row in zip(seg, M):
                if c != 0:
                    for j, v in enumerate(row):
                        if v != 0:
                            out[to[t] + j] += c * v
        return out

    # ---- graded-module views -----------------------------------------------

    def stalk_module(self, x) -> TruncatedGradedModule:
        return free_module(self.gens[x], self.D, self.m, self.F)

    def edge_module(self, e) -> TruncatedGradedModule:
        dims = tuple(self.edge_dim(e, d) for d in range(self.D + 1))
        action = []
        for d in range(self.D):
            per = []
            for i in range(self.m):
                basis = [[self.F.one if a == b else self.F.zero for b in range(dims[d])] for a in range(dims[d])]
                per.append([self.edge_act(e, i, d, v) for v in basis])
            action.append(tuple(per))
        return TruncatedGradedModule(self.F, self.m, self.D, dims, tuple(action))

    def multiply_by_form(self, e, d: int, vec, coeffs):
        """``(sum_i c_i x_i) * vec`` in ``M^E``; used to check ``alpha M^E = 0``."""
        out = None
        for i, c in enumerate(coeffs):
            if c == 0:
                continue
            v = [c * a for a in self.edge_act(e, i, d, vec)]
            out = v if out is None else [a + b for a, b in zip(out, v)]
        return out if out is not None else [self.F.zero] * self.edge_dim(e, d + 1)


def structure_sheaf(G: MomentGraph, D: int) -> MGSheaf:
    """``Z^x = S``, ``Z^E = S / alpha S``, canonical restriction maps."""
    report = gkm_check(G)
    if not report.ok:
        raise GKMError(report)
    M = MGSheaf(G, D)
    for x in G.vertices:
        M.gens[x] = [0]
    one = GradedPoly.constant(1, M.m - 1, M.F)
    for e in G.edges:
        M.lifts[e.index] = [[one]]
    return M


# ---- sections ---------------------------------------------------------------


@dataclass
class SectionSpace:
    """Degreewise bases of ``Gamma(subset, M)`` inside ``(+)_{x in subset} M^x``."""

    sheaf: MGSheaf
    subset: tuple
    D: int
    bases: list  # bases[d]: list of vectors
    offsets: list = field(repr=False)  # offsets[d][x] = (start, length)

    @property
    def dims(self) -> list[int]:
        return [len(b) for b in self.bases]

    def component(self, vec, x, d: int):
        s, n = self.offsets[d][x]
        return vec[s:s + n]

    def ambient_dim(self, d: int) -> int:
        return sum(n for _, n in self.offsets[d].values())

    def act(self, i: int, d: int, vec):
        parts = [self.sheaf.stalk_act(x, i, d, self.component(vec, x, d)) for x in self.subset]
        return [c for p in parts for c in p]

    def is_closed(self) -> bool:
        """Every ``x_i * (section)`` is again a section, degree by degree."""
        F = self.sheaf.F
        for d in range(self.D):
            n = self.ambient_dim(d + 1)
            base = self.bases[d + 1]
            imgs = [self.act(i, d, v) for v in self.bases[d] for i in range(self.sheaf.m)]
            if imgs and rank(base + imgs, n, F) != len(base):
                return False
        return True

    def satisfies_constraints(self, vec, d: int) -> bool:
        M = self.sheaf
        S = set(self.subset)
        for e in M.G.edges:
            if e.lower in S and e.upper in S:
                a = _apply(self.component(vec, e.lower, d), M.rho_lower(e, d), M.edge_dim(e, d), M.F)
                b = _apply(self.component(vec, e.upper, d), M.rho_upper(e, d), M.edge_dim(e, d), M.F)
                if a != b:
                    return False
        return True

    def module(self) -> TruncatedGradedModule:
        gens = [g for x in self.subset for g in self.sheaf.gens[x]]
        return submodule(free_module(gens, self.D, self.sheaf.m, self.sheaf.F), self.bases)

    def hilbert_json(self) -> str:
        G = self.sheaf.G
        return json.dumps({"subset": [G.word(x) for x in self.subset], "dims": self.dims})


def _apply(vec, M, ncols, F):
    out = [F.zero] * ncols
    for c, row in zip(vec, M):
        if c != 0:
            for j, v in enumerate(row):
                if v != 0:
                    out[j] += c * v
    return out


def constraint_matrix(M: MGSheaf, subset, d: int):
    """Equations (one row per edge-module coordinate) cutting out ``Gamma(subset)_d``."""
    order = [x for x in M.G.vertices if x in set(subset)]
    offs = {}
    s = 0
    for x in order:
        n = M.stalk_dim(x, d)
        offs[x] = (s, n)
        s += n
    inside = set(order)
    rows = []
    zero = M.F.zero
    for e in M.G.edges:
        if e.lower not in inside or e.upper not in inside:
            continue
        lo, up = M.rho_lower(e, d), M.rho_upper(e, d)
        (sl, _), (su, _) = offs[e.lower], offs[e.upper]
        for c in range(M.edge_dim(e, d)):
            row = [zero] * s
            for r, v in enumerate(lo):
                if v[c] != 0:
                    row[sl + r] = v[c]
            for r, v in enumerate(up):
                if v[c] != 0:
                    row[su + r] = row[su + r] - v[c]
            rows.append(row)
    return rows, s, order, offs


def sections(M: MGSheaf, subset, D: int | None = None) -> SectionSpace:
    """``Gamma(subset, M)`` in degrees ``0..D``."""
    D = M.D if D is None else D
    bases, offsets = [], []
    order = None
    for d in range(D + 1):
        rows, ncols, order, offs = constraint_matrix(M, subset, d)
        if rows:
            basis = nullspace(rows, ncols, M.F)
        else:
            basis = [[M.F.one if i == j else M.F.zero for i in range(ncols)] for j in range(ncols)]
        bases.append(basis)
        offsets.append(offs)
    return SectionSpace(M, tuple(order), D, bases, offsets)


def structure_algebra(G: MomentGraph, D: int) -> SectionSpace:
    Zs = structure_sheaf(G, D)
    return sections(Zs, G.vertices, D)


def restrict(Z: SectionSpace, subset, d: int):
    """Images of the degree-``d`` basis sections under restriction to ``subset``."""
    keep = [x for x in Z.subset if x in set(subset)]
    return [[c for x in keep for c in Z.component(v, x, d)] for v in Z.bases[d]]


def stalk_restriction(Z: SectionSpace, x) -> TruncatedGradedModule:
    """Image of ``Z`` in ``M^x`` (the stalk ``Z^x``)."""
    M = Z.sheaf
    if x not in Z.subset:
        raise ValueError("vertex outside the section domain")
    bases = [row_basis([Z.component(v, x, d) for v in Z.bases[d]], M.stalk_dim(x, d), M.F)
             for d in range(Z.D + 1)]
    return submodule(free_module(M.gens[x], Z.D, M.m, M.F), bases)


def costalk_bases(Z: SectionSpace, x) -> list:
    """Degreewise bases, inside ``M^x``, of the sections supported on ``{x}``.

    Such a section is an ``m_x`` killed by every ``rho_{x,E}`` with ``E``
    inside the domain.
    """
    M = Z.sheaf
    if x not in Z.subset:
        raise ValueError("vertex outside the section domain")
    inside = set(Z.subset)
    es = [e for e in M.G.edges_at[x] if e.other(x) in inside]
    bases = []
    for d in range(Z.D + 1):
        n = M.stalk_dim(x, d)
        width = sum(M.edge_dim(e, d) for e in es)
        if width == 0:
            bases.append([[M.F.one if i == j else M.F.zero for i in range(n)] for j in range(n)])
            continue
        cols = [M.rho(x, e, d) for e in es]
        mat = [[c for blk in cols for c in blk[r]] for r in range(n)]
        bases.append(row_basis(left_kernel(mat, n, width, M.F), n, M.F) if n else [])
    return bases


def costalk(Z: SectionSpace, x) -> TruncatedGradedModule:
    """The costalk ``M_x`` as a graded module."""
    return submodule(free_module(Z.sheaf.gens[x], Z.D, Z.sheaf.m, Z.sheaf.F), costalk_bases(Z, x))


def principal_submodule_bases(M: MGSheaf, x, f: GradedPoly, D: int):
    """Degreewise bases of ``f * M^x`` when ``M^x`` has a single generator in degree 0."""
    if M.gens[x] != [0]:
        raise ValueError("principal submodule is only formed in a rank-one stalk")
    k = f.degree()
    out = []
    for d in range(D + 1):
        if d < k:
            out.append([])
            continue
        vecs = [(f * GradedPoly({e: 1}, M.m, M.F)).coefficient_vector(d) for e in monomials(M.m, d - k)]
        out.append(row_basis(vecs, dim_S(M.m, d), M.F))
    return out


def label_product(M: MGSheaf, x) -> GradedPoly:
    f = GradedPoly.constant(1, M.m, M.F)
    for e in M.G.edges_at[x]:
        f = f * M.label_poly(e)
    return f


def same_subspace(A, B, n: int, F: Field) -> bool:
    ra, rb = rank(A, n, F), rank(B, n, F)
    return ra == rb == rank(A + B, n, F)


@dataclass
class FlabbyReport:
    failures: list  # (open set as words, degree, dim Gamma(Omega), dim image)
    checked: int
    principal_only: bool = True

    @property
    def ok(self) -> bool:
        return not self.failures


def check_flabby(M: MGSheaf, D: int | None = None, exhaustive: bool = False,
                 global_sections: SectionSpace | None = None, max_vertices: int = 12) -> FlabbyReport:
    """Surjectivity of ``Gamma(M) -> Gamma(Omega, M)`` for open ``Omega``.

    Principal opens ``{>= x}`` by default; every open set if ``exhaustive``
    and the graph has at most ``max_vertices`` vertices.
    """
    from .momentgraph import open_sets

    G = M.G
    D = M.D if D is None else D
    Gam = global_sections or sections(M, G.vertices, D)
    principal = not (exhaustive and len(G.vertices) <= max_vertices)
    seen = set()
    failures = []
    for omega in open_sets(G, principal_only=principal):
        if not omega or omega in seen or len(omega) == len(G.vertices):
            continue
        seen.add(omega)
        loc = sections(M, omega, D)
        for d in range(D + 1):
            n = loc.ambient_dim(d)
            img = rank(restrict(Gam, omega, d), n, M.F) if n else 0
            if img != loc.dims[d]:
                failures.append((sorted(G.word(x) for x in omega), d, loc.dims[d], img))
    return FlabbyReport(failures, len(seen), principal)
