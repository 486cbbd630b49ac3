import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from mgsheaf.klpoly import QPolynomial, kl_polynomial
from sweeps import group, kl_engine


def test_qpolynomial_basics():
    p = QPolynomial((1, 1))
    assert str(p) == "1 + q"
    assert p(1) == 2 and p.degree() == 1
    assert QPolynomial((1, 0, 0)) == QPolynomial((1,))
    assert QPolynomial.from_multiset([0, 1, 1]) == QPolynomial((1, 2))
    assert (p * p).coeffs == (1, 2, 1)
    assert p.shift(2).coeffs == (0, 0, 1, 1)
    assert QPolynomial.one().is_one() and not p.is_one()


@given(st.lists(st.integers(-3, 3), max_size=5), st.lists(st.integers(-3, 3), max_size=5), st.integers(-3, 3))
def test_qpolynomial_evaluation_is_a_ring_map(a, b, t):
    p, q = QPolynomial(tuple(a)), QPolynomial(tuple(b))
    assert (p * q)(t) == p(t) * q(t)
    assert (p + q)(t) == p(t) + q(t)
    assert (p - p)(t) == 0


def test_a3_singular_pair():
    W = group("A3")
    kl = kl_engine("A3")
    w = W.element("s2 s1 s3 s2")
    assert kl.P(W.element("s2"), w) == QPolynomial((1, 1))
    assert kl.P(W.identity, w) == QPolynomial((1, 1))
    assert kl.P(w, w).is_one()
    assert kl_polynomial(W, W.element("s1"), w).is_one()


def test_h_examples():
    W = group("A3")
    kl = kl_engine("A3")
    w = W.element("s2 s1 s3 s2")
    assert kl.h(w, w).coeffs == (1,)
    assert kl.h(W.element("s1 s3 s2"), w).coeffs == (0, 1)
    # v^4 P(v^-2) with P = 1 + q, seen from x = e where l(w) - l(x) = 4
    assert kl.h(W.identity, w).coeffs == (0, 0, 1, 0, 1)
    # from x = s2 the length gap is 3
    assert kl.h(W.element("s2"), w).coeffs == (0, 1, 0, 1)
    with pytest.raises(ValueError):
        kl.h(W.element("s3 s2 s1"), w)


@pytest.mark.parametrize("label", ["A2", "B2", "G2"])
def test_dihedral_all_one(label):
    W = group(label)
    kl = kl_engine(label)
    for w in W.elements_up_to(W.length(W.longest_element)):
        for x in W.lower_interval(w):
            assert kl.P(x, w).is_one()
            assert kl.deodhar_smooth(x, w)


def test_zero_off_interval():
    W = group("A2")
    kl = kl_engine("A2")
    s1, s2 = W.generators
    assert kl.P(s2, s1).coeffs == ()
    with pytest.raises(ValueError):
        kl.deodhar_smooth(s2, s1)


def test_deodhar_smooth_examples():
    W = group("A3")
    kl = kl_engine("A3")
    w = W.element("s2 s1 s3 s2")
    assert kl.deodhar_smooth(w, w)
    assert not kl.deodhar_smooth(W.element("s2"), w)


def invariants(W, kl, w):
    lw = W.length(w)
    for x in W.lower_interval(w):
        p = kl.P(x, w)
        assert p.coefficient(0) == 1
        assert all(c >= 0 for c in p.coeffs)
        if x != w:
            assert 2 * p.degree() < lw - W.length(x)
        assert (p(1) == 1) == p.is_one()


@pytest.mark.parametrize("label,affine,L", [("A3", False, 6), ("B2", False, 4), ("A1", True, 6), ("A2", True, 4),
                                            ("B3", False, 4)])
def test_invariants_and_descent_independence(label, affine, L):
    W = group(label, affine)
    kl = kl_engine(label, affine)
    for w in W.elements_up_to(L):
        invariants(W, kl, w)
        descents = W.left_descents(w)
        for x in W.lower_interval(w):
            base = kl.P(x, w)
            for s in descents:
                assert kl.P(x, w, descent=s) == base


def test_bad_descent_rejected():
    W = group("A2")
    kl = kl_engine("A2")
    with pytest.raises(ValueError):
        kl.P(W.identity, W.element("s1"), descent=1)


@pytest.mark.parametrize("label,affine,L", [("A3", False, 6), ("B2", False, 4), ("G2", False, 6), ("A1", True, 6),
                                            ("A2", True, 4), ("B3", False, 5)])
def test_matches_r_polynomial_oracle(label, affine, L):
    W = group(label, affine)
    kl = kl_engine(label, affine)
    checked = 0
    for w in W.elements_up_to(L):
        iv = W.lower_interval(w)
        if len(iv) > 30:
            continue
        ref = oracles.RPolynomialKL(oracles.SubwordInterval(W.generators, W.reduced_word(w)))
        for x in iv:
            assert kl.P(x, w).coeffs == ref.P(x.matrix, w.matrix)
            checked += 1
    assert checked > 0


def test_tsv_export():
    W = group("A3")
    t = kl_engine("A3").table(W.element("s2 s1 s3 s2"))
    lines = t.to_tsv().splitlines()
    assert lines[0] == "x\tw\tcoeffs\tP"
    row = next(l for l in lines if l.startswith("s2\t"))
    assert row.endswith("\t1 + q")
