from fractions import Fraction

import pytest

from mgsheaf.rootsys import affine_coroot, build_root_system
from sweeps import group

TYPES = ["A1", "A2", "A3", "B2", "B3", "C3", "D4", "G2"]
# (positive roots, Coxeter number) from the classification tables
TABLE = {"A1": (1, 2), "A2": (3, 3), "A3": (6, 4), "B2": (4, 4), "B3": (9, 6), "C3": (9, 6), "D4": (12, 6),
         "G2": (6, 6)}


@pytest.mark.parametrize("label", TYPES)
def test_counts_and_self_check(label):
    rs = build_root_system(label)
    npos, h = TABLE[label]
    assert len(rs.positive_roots) == npos
    assert rs.coxeter_number == h
    assert len(rs.roots) == h * rs.rank


@pytest.mark.parametrize("label", TYPES)
def test_pairing_identities(label):
    rs = build_root_system(label)
    for a in rs.roots:
        assert rs.pairing(a, rs.coroot_coweight(a)) == 2
    for i in range(rs.rank):
        assert rs.pairing(rs.rho, rs.simple_coweight_of_coroot(i)) == 1


@pytest.mark.parametrize("label", TYPES)
def test_simple_reflections_permute_roots(label):
    rs = build_root_system(label)
    R = set(rs.roots)
    for i in range(rs.rank):
        assert {rs.reflect(i, a) for a in R} == R


def test_a2_data():
    rs = build_root_system("A2")
    assert rs.highest_root == (1, 1)
    assert rs.pairing((1, 0), rs.simple_coweight_of_coroot(1)) == -1
    assert rs.rho == (Fraction(1), Fraction(1))


def test_g2_long_short():
    rs = build_root_system("G2")
    assert len(rs.roots) == 12
    C = rs.cartan
    assert sorted([C[0][1], C[1][0]]) == [-3, -1]


def test_affine_coroot():
    rs = build_root_system("A2")
    a = (1, 1)
    cv = rs.coroot_coweight(a)
    assert affine_coroot(rs, a, 0).coords == cv + (0,)
    assert affine_coroot(rs, a, 1).coords == cv + (-1,)
    assert affine_coroot(rs, a, -2).coords == cv + (2,)
    assert affine_coroot(rs, a, 1).delta_coefficient == -1
    with pytest.raises(ValueError):
        affine_coroot(rs, (2, 1), 0)


def test_pairing_dimension_mismatch():
    rs = build_root_system("A2")
    with pytest.raises(ValueError):
        rs.pairing((1, 0, 0), (1, 0))


@pytest.mark.parametrize("label", ["A1", "X3", "G3", "D3", "B1"])
def test_unsupported(label):
    if label == "A1":
        build_root_system(label)
        return
    with pytest.raises(ValueError):
        build_root_system(label)


@pytest.mark.parametrize("label", ["A2", "A3", "B2", "G2", "B3"])
def test_positive_roots_equal_longest_length(label):
    W = group(label)
    assert W.length(W.longest_element) == len(W.rs.positive_roots)
