import pytest

from lgorbifold.clifford import cl_mul
from lgorbifold.koszul_oracle import (chain_cup_oracle, d_curv, d_kos, sector_dimension_oracle,
                                      verify_conjugation)
from lgorbifold.models import fermat
from lgorbifold.poly import parse_poly
from lgorbifold.symmetry import GroupElement

from conftest import REGRESSION, algebra


@pytest.mark.parametrize("name", REGRESSION)
def test_conjugation_every_sector(name):
    A = algebra(name)
    for g in A.group:
        r = verify_conjugation(A.W, g)
        assert r.ok, r.witness
        assert r.squares_to_zero and r.annihilates_generator


def test_conjugation_needs_the_twist():
    # on the chain the moving curvature is nonzero, so e^{tH} does real work
    A = algebra("chain33")
    g = GroupElement([1, 6], 9)
    assert d_curv(A.W, g, "moving")
    assert d_curv(A.W, g) != d_curv(A.W, g, "fixed")


def test_differential_pieces_anticommute():
    m = fermat(3)
    for g in m.group:
        k, c = d_kos(m.W, g), d_curv(m.W, g)
        assert not cl_mul(k, k) and not cl_mul(c, c)


@pytest.mark.parametrize("name", REGRESSION)
def test_chain_cup_matches_sigma(name):
    A = algebra(name)
    for g in A.group:
        for h in A.group:
            assert chain_cup_oracle(A.W, g, h, A.algebras[g * h]) == A.sigma(g, h), (g, h)


def test_chain_cup_with_coefficients():
    A = algebra("fermat3")
    e, z, z2 = A.group
    M = A.algebras[e]
    x = parse_poly("x", 1, 3)
    # f xi_e . xi_g: the coefficient rides along
    want = A.algebras[z].class_of(parse_poly("1", 1, 3))
    assert chain_cup_oracle(A.W, e, z, A.algebras[z], f1=x) == A.algebras[z].class_of(x)
    assert chain_cup_oracle(A.W, e, z, A.algebras[z]) == want
    assert chain_cup_oracle(A.W, z, z2, M) == A.sigma(z, z2)


QUASI_HOMOGENEOUS = [n for n in REGRESSION if not n.startswith("surface")]


@pytest.mark.parametrize("name", QUASI_HOMOGENEOUS)
def test_dimension_oracle_matches_milnor(name):
    A = algebra(name)
    for g in A.group:
        rep = sector_dimension_oracle(A.W, g, mode="exact")
        assert rep.certified and rep.mode == "exact"
        par = (rep.odd, rep.even) if g.d % 2 else (rep.even, rep.odd)
        assert par == (A.algebras[g].dim, 0)


def test_dimension_oracle_heuristic_on_cube():
    m = fermat(3)
    rep = sector_dimension_oracle(m.W, m.group.identity, D=8, mode="heuristic")
    assert not rep.certified and rep.details["stabilized"]
    assert (rep.even, rep.odd) == (2, 0)


def test_dimension_oracle_non_quasi_homogeneous():
    W = parse_poly("x^3+x^4", 1, 1)
    rep = sector_dimension_oracle(W, GroupElement([0], 1), D=9)
    assert rep.mode == "heuristic"
    with pytest.raises(ValueError):
        sector_dimension_oracle(W, GroupElement([0], 1), mode="exact")


def test_surface_falls_back_to_heuristic():
    # the truncated complex sees every critical point, not just the origin
    A = algebra("surface2")
    rep = sector_dimension_oracle(A.W, A.group.identity, D=6)
    assert rep.mode == "heuristic" and not rep.certified
