"""The Braden-MacPherson sheaf of a moment graph and checks on its stalks.

Vertices are processed top-down. For a new vertex ``x`` with upward
edges ``delta x`` the module ``B^{delta x}`` is the image of
``Gamma({> x}, B)`` in the sum of the edge modules ``B^E = B^y / alpha B^y``;
``B^x`` is taken free on a minimal generating set of it and ``rho_{x,E}``
sends each generator to the chosen lift.

Two routes compute ``Gamma({> x}, B)``:

* ``"direct"`` solves the edge constraints on ``{> x}`` from scratch;
* ``"incremental"`` keeps ``Gamma(Omega)`` for the set ``Omega`` of
  processed vertices and adds one vertex at a time as a fiber product.
  Restricting ``Gamma(Omega)`` to ``{> x}`` is onto because the sheaf built
  so far is flabby, so both routes give the same ``B^{delta x}``. Tests
  compare them.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field

from .arith.graded import TruncatedGradedModule, direct_sum, minimal_generator_degrees, submodule
from .arith.linalg import left_kernel, matmul, rank, row_basis, select_complement
from .arith.poly import GradedPoly, dim_S
from .klpoly import KLTable, QPolynomial
from .momentgraph import GKMError, MomentGraph, gkm_check, smooth_locus_combinatorial
from .sheafcore import (
    MGSheaf,
    SectionSpace,
    check_flabby,
    costalk_bases,
    label_product,
    principal_submodule_bases,
    same_subspace,
    sections,
    stalk_restriction,
    structure_algebra,
)

log = logging.getLogger(__name__)


class UncertifiedError(RuntimeError):
    """A check needs saturated generator data and the sheaf does not have it."""


def default_order(G: MomentGraph) -> list:
    """Decreasing length, ties broken by reduced word."""
    return sorted(G.vertices, key=lambda x: (-G.lengths[x], G.word(x)))


def random_linear_extension(G: MomentGraph, seed: int) -> list:
    """A random order in which every vertex comes after all vertices above it."""
    rng = random.Random(seed)
    remaining = set(G.vertices)
    done: set = set()
    out = []
    while remaining:
        ready = sorted((x for x in remaining if G.above(x) <= done), key=G.word)
        x = rng.choice(ready)
        out.append(x)
        done.add(x)
        remaining.discard(x)
    return out


def is_linear_extension(G: MomentGraph, order) -> bool:
    if sorted(map(G.word, order)) != sorted(map(G.word, G.vertices)):
        return False
    seen: set = set()
    for x in order:
        if not G.above(x) <= seen:
            return False
        seen.add(x)
    return True


@dataclass
class BMPSheaf:
    sheaf: MGSheaf
    order: list
    method: str
    # delta_bases[x][d]: basis of B^{delta x}_d inside the sum of the edge modules of delta x
    delta_bases: dict = field(repr=False)
    saturated: dict = field(repr=False)
    log: list = field(default_factory=list, repr=False)
    _global: SectionSpace | None = field(default=None, repr=False)

    @property
    def G(self) -> MomentGraph:
        return self.sheaf.G

    @property
    def D(self) -> int:
        return self.sheaf.D

    @property
    def certified(self) -> bool:
        return all(self.saturated.values())

    def generator_degrees(self, x) -> list[int]:
        return sorted(self.sheaf.gens[x])

    def global_sections(self) -> SectionSpace:
        if self._global is None:
            self._global = sections(self.sheaf, self.G.vertices, self.D)
        return self._global

    def delta_module(self, x) -> TruncatedGradedModule:
        """``B^{delta x}`` as a submodule of the sum of the edge modules."""
        es = self.G.upper_edges(x)
        amb = direct_sum([self.sheaf.edge_module(e) for e in es])
        return submodule(amb, self.delta_bases[x])

    def require_certified(self, what: str):
        if not self.certified:
            bad = [self.G.word(x) for x, ok in self.saturated.items() if not ok]
            raise UncertifiedError(f"{what}: generators reach the truncation degree {self.D} at {', '.join(bad)}")


def _edge_blocks(M: MGSheaf, es, d):
    offs, s = [], 0
    for e in es:
        offs.append(s)
        s += M.edge_dim(e, d)
    return offs, s


def _project(M: MGSheaf, es, vectors_at, d, F):
    """Rows: for each section (given by its components at the upper vertices) its image in the sum of ``B^E``."""
    mats = [M.rho_upper(e, d) for e in es]
    width = sum(M.edge_dim(e, d) for e in es)
    out = []
    for comps in vectors_at:
        row = []
        for e, mat in zip(es, mats):
            v = comps[e.upper]
            blk = [F.zero] * M.edge_dim(e, d)
            for c, r in zip(v, mat):
                if c != 0:
                    for j, a in enumerate(r):
                        if a != 0:
                            blk[j] += c * a
            row.extend(blk)
        out.append(row)
    return out, width


def _act_delta(M: MGSheaf, es, i, d, vec):
    offs, _ = _edge_blocks(M, es, d)
    out = []
    for e, o in zip(es, offs):
        out.extend(M.edge_act(e, i, d, vec[o:o + M.edge_dim(e, d)]))
    return out


def _split_lift(M: MGSheaf, es, d, vec):
    """Cut a degree-``d`` vector of the sum of ``B^E`` into per-edge lists of polynomials."""
    offs, _ = _edge_blocks(M, es, d)
    k = M.m - 1
    out = {}
    for e, o in zip(es, offs):
        blk = vec[o:o + M.edge_dim(e, d)]
        polys, s = [], 0
        for h in M.gens[e.upper]:
            if d - h < 0:
                polys.append(GradedPoly({}, k, M.F))
                continue
            n = dim_S(k, d - h)
            polys.append(GradedPoly.from_vector(blk[s:s + n], d - h, k, M.F))
            s += n
        out[e.index] = polys
    return out


def braden_macpherson(G: MomentGraph, D: int | None = None, order=None, method: str = "incremental") -> BMPSheaf:
    """Build the Braden-MacPherson sheaf truncated at degree ``D`` (default ``max(l(w), 1)``).

    ``order`` is a linear extension of the reversed Bruhat order (default
    :func:`default_order`). ``method`` is ``"incremental"`` or ``"direct"``.
    """
    report = gkm_check(G)
    if not report.ok:
        raise GKMError(report)
    if method not in ("incremental", "direct"):
        raise ValueError(f"unknown method {method!r}")
    D = max(G.l, 1) if D is None else D
    if D < 0:
        raise ValueError("negative truncation degree")
    order = list(default_order(G) if order is None else order)
    if not is_linear_extension(G, order):
        raise ValueError("order is not a linear extension of the reversed Bruhat order")
    M = MGSheaf(G, D)
    F = M.F
    top = order[0]
    M.gens[top] = [0]
    delta, saturated, events = {top: [[] for _ in range(D + 1)]}, {top: True}, []

    # incremental state: bases of Gamma(Omega)_d in the coordinates of `omega`
    omega = [top]
    glob = [[[F.one if i == j else F.zero for i in range(M.stalk_dim(top, d))]
             for j in range(M.stalk_dim(top, d))] for d in range(D + 1)]

    for x in order[1:]:
        es = G.upper_edges(x)
        images = []
        sp = sections(M, G.above(x), D) if method == "direct" else None
        for d in range(D + 1):
            if sp is not None:
                comps = [{y: sp.component(v, y, d) for y in sp.subset} for v in sp.bases[d]]
            else:
                offs = _omega_offsets(M, omega, d)
                comps = [{y: v[s:s + n] for y, (s, n) in offs.items()} for v in glob[d]]
            rows, width = _project(M, es, comps, d, F)
            images.append((rows, width))
        I = [row_basis(rows, width, F) if rows else [] for rows, width in images]

        gens, lifts = [], {e.index: [] for e in es}
        mult = {}
        for d in range(D + 1):
            width = images[d][1]
            dec = [] if d == 0 else [_act_delta(M, es, i, d - 1, v) for v in I[d - 1] for i in range(M.m)]
            new = select_complement(dec, I[d], width, F)
            if new:
                mult[d] = len(new)
            for j in new:
                gens.append(d)
                for k, polys in _split_lift(M, es, d, I[d][j]).items():
                    lifts[k].append(polys)
        M.gens[x] = gens
        for k, ls in lifts.items():
            M.lifts[k] = ls
        delta[x] = I
        ok = mult.get(D, 0) == 0
        saturated[x] = ok
        events.append({"vertex": G.word(x), "generators": dict(mult), "saturated": ok})
        if not ok:
            log.warning("generators of B^{delta %s} reach degree %d; result is not certified", G.word(x), D)

        if method == "incremental":
            glob = [_fiber_product(M, omega, glob[d], x, es, images[d][0], d) for d in range(D + 1)]
            omega.append(x)

    B = BMPSheaf(M, order, method, delta, saturated, events)
    if method == "incremental":
        offsets = [_omega_offsets(M, omega, d) for d in range(D + 1)]
        B._global = SectionSpace(M, tuple(omega), D, glob, offsets)
    return B


def _omega_offsets(M: MGSheaf, omega, d):
    out, s = {}, 0
    for y in omega:
        n = M.stalk_dim(y, d)
        out[y] = (s, n)
        s += n
    return out


def _fiber_product(M: MGSheaf, omega, basis, x, es, proj_rows, d):
    """Basis of ``Gamma(Omega + {x})_d`` from ``Gamma(Omega)_d``."""
    F = M.F
    nx = M.stalk_dim(x, d)
    amb = sum(M.stalk_dim(y, d) for y in omega)
    width = sum(M.edge_dim(e, d) for e in es)
    if width == 0:
        ker = [[F.one if i == j else F.zero for i in range(len(basis) + nx)] for j in range(len(basis) + nx)]
    else:
        lo = [M.rho_lower(e, d) for e in es]
        rx = [[-c for blk in lo for c in blk[r]] for r in range(nx)]
        ker = left_kernel(proj_rows + rx, len(basis) + nx, width, F)
    nb = len(basis)
    if not ker:
        return []
    coeff = [k[:nb] for k in ker]
    old = matmul(coeff, basis, len(ker), nb, amb, F) if nb and amb else [[F.zero] * amb for _ in ker]
    return [o + k[nb:] for o, k in zip(old, ker)]


# ---- ranks and the smooth locus ---------------------------------------------


def graded_rank(B: BMPSheaf, x) -> QPolynomial:
    """Generator in degree ``d`` contributes ``q^d``."""
    return QPolynomial.from_multiset(B.sheaf.gens[x])


@dataclass
class CheckReport:
    name: str
    failures: list = field(default_factory=list)
    skipped: str | None = None

    @property
    def ok(self) -> bool:
        return self.skipped is None and not self.failures

    @property
    def status(self) -> str:
        if self.skipped is not None:
            return f"skipped({self.skipped})"
        return "pass" if not self.failures else "fail"

    def __bool__(self):
        return self.ok


def verify_rank_conjecture(B: BMPSheaf, kl: KLTable) -> CheckReport:
    """``graded_rank(B^x) == P_{x,w}`` for every vertex."""
    B.require_certified("rank comparison")
    rep = CheckReport("conjMC")
    for x in B.G.vertices:
        r, p = graded_rank(B, x), kl[x]
        if r != p:
            rep.failures.append((B.G.word(x), str(r), str(p)))
    return rep


def smooth_locus_rank(B: BMPSheaf) -> set:
    B.require_certified("smooth locus")
    return {x for x in B.G.vertices if graded_rank(B, x).is_one()}


def verify_main_theorem(B: BMPSheaf) -> CheckReport:
    """Rank-one stalks versus the edge-count criterion."""
    G = B.G
    a, b = smooth_locus_rank(B), smooth_locus_combinatorial(G)
    rep = CheckReport("mainT")
    for x in sorted(a ^ b, key=G.word):
        rep.failures.append((G.word(x), x in a, x in b))
    return rep


def verify_smooth_costalk(B: BMPSheaf, x, Gam: SectionSpace | None = None) -> CheckReport:
    """At a smooth vertex the costalk is the label product times the stalk."""
    if x not in smooth_locus_rank(B):
        raise ValueError(f"{B.G.word(x)} is not in the smooth locus")
    M = B.sheaf
    Gam = Gam or B.global_sections()
    top = B.D - len(B.G.edges_at[x])
    rep = CheckReport("smB")
    got = costalk_bases(Gam, x)
    want = principal_submodule_bases(M, x, label_product(M, x), B.D)
    for d in range(top + 1):
        if not same_subspace(got[d], want[d], M.stalk_dim(x, d), M.F):
            rep.failures.append((B.G.word(x), d))
    return rep


# ---- structural invariants --------------------------------------------------


def check_conB(B: BMPSheaf) -> CheckReport:
    """Top stalk ``S``; ``rho_{y,E}`` onto with kernel ``alpha B^y``; ``rho_{x,delta x}`` onto ``B^{delta x}``."""
    M, G, F = B.sheaf, B.G, B.sheaf.F
    rep = CheckReport("conB")
    if M.gens[B.order[0]] != [0]:
        rep.failures.append(("conB(1)", G.word(B.order[0])))
    for e in G.edges:
        for d in range(B.D + 1):
            n, k = M.stalk_dim(e.upper, d), M.edge_dim(e, d)
            R = M.rho_upper(e, d)
            if (rank(R, k, F) if n else 0) != k:
                rep.failures.append(("conB(2) onto", G.describe(e), d))
            if d == 0:
                continue
            alpha = M.label_form(e)
            low = [[F.one if i == j else F.zero for i in range(M.stalk_dim(e.upper, d - 1))]
                   for j in range(M.stalk_dim(e.upper, d - 1))]
            amul = [_times_form(M, e.upper, d - 1, v, alpha) for v in low]
            # kernel dimension and containment of alpha * B^y
            if n - k != (rank(amul, n, F) if amul else 0):
                rep.failures.append(("conB(2) kernel dim", G.describe(e), d))
            imgs = matmul(amul, R, len(amul), n, k, F) if amul and k else []
            if any(c != 0 for row in imgs for c in row):
                rep.failures.append(("conB(2) kernel", G.describe(e), d))
    for x in B.order[1:]:
        es = G.upper_edges(x)
        for d in range(B.D + 1):
            _, width = _edge_blocks(M, es, d)
            nx = M.stalk_dim(x, d)
            lo = [M.rho_lower(e, d) for e in es]
            img = [[c for blk in lo for c in blk[r]] for r in range(nx)]
            if not same_subspace(img, B.delta_bases[x][d], width, F):
                rep.failures.append(("conB(3) image", G.word(x), d))
        mg = minimal_generator_degrees(B.delta_module(x))
        if mg.multiset() != sorted(M.gens[x]):
            rep.failures.append(("conB(3) cover", G.word(x), mg.multiset(), sorted(M.gens[x])))
    return rep


def _times_form(M: MGSheaf, y, d, vec, coeffs):
    out = [M.F.zero] * M.stalk_dim(y, d + 1)
    for i, c in enumerate(coeffs):
        if c != 0:
            for j, a in enumerate(M.stalk_act(y, i, d, vec)):
                if a != 0:
                    out[j] += c * a
    return out


def check_single_degree_zero(B: BMPSheaf) -> CheckReport:
    """Each stalk has exactly one generator in degree 0 and none in negative degree."""
    rep = CheckReport("multB")
    for x in B.G.vertices:
        g = B.sheaf.gens[x]
        if g.count(0) != 1 or any(d < 0 for d in g):
            rep.failures.append((B.G.word(x), sorted(g)))
    return rep


def check_upward_closed(B: BMPSheaf) -> CheckReport:
    G = B.G
    S = smooth_locus_rank(B)
    rep = CheckReport("smooth-upward")
    for x in S:
        for y in G.at_least(x) - S:
            rep.failures.append((G.word(x), G.word(y)))
    return rep


def check_degree_bound(B: BMPSheaf) -> CheckReport:
    """Generator degrees of ``B^x``, ``x != w``, stay below ``(l(w) - l(x)) / 2``."""
    G = B.G
    rep = CheckReport("degree-bound")
    for x in G.vertices:
        if x == G.top:
            continue
        L = G.l - G.lengths[x]
        bad = [d for d in B.sheaf.gens[x] if 2 * d >= L]
        if bad:
            rep.failures.append((G.word(x), bad))
    return rep


def check_determinism(B: BMPSheaf, seed: int = 1) -> CheckReport:
    """Rebuild along a different linear extension and compare generator multisets."""
    G = B.G
    other = random_linear_extension(G, seed)
    if other == B.order:
        other = random_linear_extension(G, seed + 1)
    B2 = braden_macpherson(G, B.D, order=other, method=B.method)
    rep = CheckReport("determinism")
    for x in G.vertices:
        if sorted(B.sheaf.gens[x]) != sorted(B2.sheaf.gens[x]):
            rep.failures.append((G.word(x), sorted(B.sheaf.gens[x]), sorted(B2.sheaf.gens[x])))
    return rep


def check_flabby_bmp(B: BMPSheaf, exhaustive: bool = False) -> CheckReport:
    fr = check_flabby(B.sheaf, B.D, exhaustive=exhaustive, global_sections=B.global_sections())
    return CheckReport("flabby", list(fr.failures))


def check_structure_algebra(G: MomentGraph, D: int) -> CheckReport:
    """``Z^x = S`` and ``Z_x = (label product) S`` up to ``D - n(x)``; constants in degree 0."""
    Z = structure_algebra(G, D)
    M = Z.sheaf
    rep = CheckReport("strucZ")
    if G.is_connected() and Z.dims[0] != 1:
        rep.failures.append(("degree-0 sections", Z.dims[0]))
    for x in G.vertices:
        top = D - len(G.edges_at[x])
        st = stalk_restriction(Z, x)
        want = principal_submodule_bases(M, x, label_product(M, x), D)
        cb = costalk_bases(Z, x)
        for d in range(top + 1):
            if st.dims[d] != dim_S(M.m, d):
                rep.failures.append(("stalk", G.word(x), d, st.dims[d]))
            if not same_subspace(cb[d], want[d], M.stalk_dim(x, d), M.F):
                rep.failures.append(("costalk", G.word(x), d, len(cb[d]), len(want[d])))
    return rep
