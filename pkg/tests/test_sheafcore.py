import json
import random

import pytest

from mgsheaf.arith import QQ, Field, dim_S, rank
from mgsheaf.momentgraph import GKMError, build_moment_graph
from mgsheaf.sheafcore import (
    EdgeRing,
    check_flabby,
    costalk,
    costalk_bases,
    label_product,
    principal_submodule_bases,
    restrict,
    same_subspace,
    sections,
    stalk_restriction,
    structure_algebra,
    structure_sheaf,
)
from sweeps import graph, group


def edge_graph():
    return graph("A2", False, "s1")


def test_edge_ring_quotient():
    F = QQ
    R = EdgeRing([F(2), F(-1)], F)
    assert R.k == 1
    # alpha maps to zero in S / alpha
    lin = [R.image(e) for e in [(1, 0), (0, 1)]]
    combo = lin[0] * 2 + lin[1] * -1
    assert combo.is_zero()
    P = R.project_matrix(3)
    assert rank(P, dim_S(1, 3), F) == 1


def test_single_vertex():
    W = group("A2")
    G = build_moment_graph(W, W.identity)
    M = structure_sheaf(G, 3)
    assert M.m == 1
    Z = structure_algebra(G, 3)
    assert Z.dims == [dim_S(M.m, d) for d in range(4)]
    assert list(costalk(Z, W.identity).dims) == Z.dims


def test_single_edge_dims():
    G = edge_graph()
    M = structure_sheaf(G, 4)
    assert M.m == 2
    e = G.edges[0]
    assert [M.edge_dim(e, d) for d in range(5)] == [1] * 5
    Z = structure_algebra(G, 4)
    assert Z.dims == [(d + 1) + d for d in range(5)]
    assert Z.is_closed()
    for x in G.vertices:
        assert stalk_restriction(Z, x).dims == tuple(d + 1 for d in range(5))
        assert costalk(Z, x).dims == (0,) + tuple(d for d in range(1, 5))


def test_alpha_kills_edge_modules():
    G = graph("A3", False, "s2 s1 s3 s2")
    M = structure_sheaf(G, 2)
    for e in G.edges:
        form = M.label_form(e)
        for d in range(2):
            for j in range(M.edge_dim(e, d)):
                v = [M.F.one if i == j else M.F.zero for i in range(M.edge_dim(e, d))]
                assert all(c == 0 for c in M.multiply_by_form(e, d, v, form))
        assert M.edge_module(e).commutes()
        # unit goes to unit
        for x in e.lower, e.upper:
            assert any(c != 0 for c in M.rho(x, e, 0)[0])


def test_rho_commutes_with_action():
    G = graph("A2", True, "s0 s1 s2 s0")
    M = structure_sheaf(G, 2)
    rng = random.Random(3)
    for e in G.edges:
        for x in (e.lower, e.upper):
            for d in range(2):
                R0, R1 = M.rho(x, e, d), M.rho(x, e, d + 1)
                n = M.stalk_dim(x, d)
                v = [M.F(rng.randint(-3, 3)) for _ in range(n)]
                img = [sum((v[r] * R0[r][c] for r in range(n)), M.F.zero) for c in range(M.edge_dim(e, d))]
                for i in range(M.m):
                    lhs = M.edge_act(e, i, d, img)
                    w = M.stalk_act(x, i, d, v)
                    rhs = [sum((w[r] * R1[r][c] for r in range(len(w))), M.F.zero) for c in range(M.edge_dim(e, d + 1))]
                    assert lhs == rhs


def test_singleton_sections_are_the_stalk():
    G = graph("A2", False, "s1 s2 s1")
    M = structure_sheaf(G, 3)
    for x in G.vertices:
        assert sections(M, [x]).dims == [dim_S(M.m, d) for d in range(4)]


def test_structure_algebra_a2_longest():
    G = graph("A2", False, "s1 s2 s1")
    Z = structure_algebra(G, 3)
    assert Z.dims[0] == 1
    assert Z.is_closed()
    W = G.W
    c = costalk(Z, W.identity)
    assert c.dims == (0, 0, 0, 1)
    M = Z.sheaf
    for x in G.vertices:
        assert stalk_restriction(Z, x).dims == tuple(dim_S(M.m, d) for d in range(4))


@pytest.mark.parametrize("label,affine,word", [("A2", False, "s1 s2 s1"), ("B2", False, "s1 s2 s1 s2"),
                                               ("A3", False, "s2 s1 s3 s2"), ("A1", True, "s0 s1 s0 s1"),
                                               ("A2", True, "s0 s1 s2")])
def test_structure_algebra_stalks_and_costalks(label, affine, word):
    G = graph(label, affine, word)
    D = max(G.l, 1) + 1
    Z = structure_algebra(G, D)
    M = Z.sheaf
    assert Z.dims[0] == 1
    for x in G.vertices:
        assert stalk_restriction(Z, x).dims == tuple(dim_S(M.m, d) for d in range(D + 1))
        f = label_product(M, x)
        want = principal_submodule_bases(M, x, f, D)
        got = costalk_bases(Z, x)
        for d in range(D + 1):
            assert same_subspace(got[d], want[d], M.stalk_dim(x, d), M.F)


def test_restriction_lands_in_local_sections():
    G = graph("A3", False, "s2 s1 s3 s2")
    M = structure_sheaf(G, 2)
    Z = sections(M, G.vertices)
    rng = random.Random(7)
    for _ in range(10):
        sub = rng.sample(G.vertices, rng.randint(1, len(G.vertices)))
        loc = sections(M, sub)
        for d in range(3):
            for v in restrict(Z, sub, d):
                # reorder into the local layout
                assert loc.satisfies_constraints(_relayout(Z, loc, v, d), d)


def _relayout(Z, loc, vec, d):
    keep = [x for x in Z.subset if x in set(loc.subset)]
    parts, s = {}, 0
    for x in keep:
        n = Z.sheaf.stalk_dim(x, d)
        parts[x] = vec[s:s + n]
        s += n
    return [c for x in loc.subset for c in parts[x]]


def test_hilbert_json():
    G = edge_graph()
    Z = structure_algebra(G, 2)
    d = json.loads(Z.hilbert_json())
    assert d["dims"] == [1, 3, 5] and d["subset"] == ["e", "s1"]


def test_structure_sheaf_rejects_non_gkm():
    W = group("A1", True)
    G = build_moment_graph(W, W.element("s0 s1 s0"), Field(2), strict=False)
    with pytest.raises(GKMError):
        structure_sheaf(G, 2)


def test_flabby_single_edge():
    G = edge_graph()
    M = structure_sheaf(G, 3)
    rep = check_flabby(M, exhaustive=True)
    assert rep.ok and not rep.principal_only


def test_structure_sheaf_flabby_on_smooth_interval():
    G = graph("A2", False, "s1 s2 s1")
    rep = check_flabby(structure_sheaf(G, 3), exhaustive=True)
    assert rep.ok


@pytest.mark.slow
def test_structure_sheaf_not_flabby_on_singular_a3():
    G = graph("A3", False, "s2 s1 s3 s2")
    M = structure_sheaf(G, 2)
    assert check_flabby(M).ok  # principal opens extend
    rep = check_flabby(M, exhaustive=True, max_vertices=len(G.vertices))
    assert not rep.ok and not rep.principal_only
    omega, d, dim_loc, dim_img = rep.failures[0]
    assert d == 1 and dim_loc > dim_img
    witness = sorted(["s2 s1 s2", "s2 s3 s1", "s2 s3 s1 s2", "s3 s1 s2", "s3 s2 s3"])
    assert any(sorted(f[0]) == witness for f in rep.failures)


def test_exhaustive_falls_back_on_large_graphs():
    G = graph("A3", False, "s2 s1 s3 s2")
    rep = check_flabby(structure_sheaf(G, 1), exhaustive=True)
    assert rep.principal_only
