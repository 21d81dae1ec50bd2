import pytest
import sympy
from hypothesis import given

from lgorbifold.groebner import (NonIsolatedError, StabilizationError, buchberger,
                                 is_origin_supported, local_quotient_at_origin, normal_form,
                                 quotient_basis)
from lgorbifold.linalg import rank
from lgorbifold.poly import MultiPoly, parse_poly, partial_derivative

from conftest import x_polys


def P(text, n=2, order=3):
    return parse_poly(text, n, order)


def jac(W):
    return [partial_derivative(W, i) for i in range(1, W.nvars + 1)]


def gens_of(gb):
    return set(gb.generators)


def test_single_generators():
    assert gens_of(buchberger([P("x1^2", 1)])) == {P("x1^2", 1)}
    assert gens_of(buchberger([P("3*x1^2", 1)])) == {P("x1^2", 1)}
    assert gens_of(buchberger([P("x1"), P("x1+x2")])) == {P("x1"), P("x2")}


def test_matches_sympy_reduced_basis():
    x1, x2, x3 = sympy.symbols("x1 x2 x3")
    cases = [
        ("x1^3*x2 + x2^3", [x1, x2]),
        ("x1^3*x2 + x2^4", [x1, x2]),
        ("x1^2*x2 + x2^2*x1", [x1, x2]),
    ]
    for text, syms in cases:
        W = P(text)
        ours = {str(sympy.expand(sympy.sympify(str(g).replace("^", "**")))) for g in buchberger(jac(W)).generators}
        e = sympy.sympify(text.replace("^", "**"))
        ref = sympy.groebner([sympy.diff(e, s) for s in syms], *syms, order="grevlex")
        assert ours == {str(sympy.expand(g / sympy.Poly(g, *syms).LC())) for g in ref.exprs}


def test_normal_forms():
    gb = buchberger([P("x1^2", 1)])
    assert normal_form(P("x1^3", 1), gb) == MultiPoly.zero(1, 3)
    assert normal_form(P("x1 + x1^2", 1), gb) == P("x1", 1)


@pytest.mark.parametrize("a1,a2", [(3, 3), (3, 4), (4, 3)])
def test_chain_square_reduction(a1, a2):
    # the identity used for chain models: [x1^(2a1-2)] = [-a2 x1^(a1-2) x2^(a2-1)]
    gb = buchberger(jac(P(f"x1^{a1}*x2 + x2^{a2}", 2, a1 * a2)))
    lhs = normal_form(P(f"x1^{2 * a1 - 2}", 2, a1 * a2), gb)
    rhs = normal_form(P(f"-{a2}*x1^{a1 - 2}*x2^{a2 - 1}", 2, a1 * a2), gb)
    assert lhs == rhs and lhs


def test_quotient_bases():
    assert quotient_basis(buchberger([P("x1^2", 1)])) == [(0,), (1,)]
    assert quotient_basis(buchberger([P("x1"), P("x2")])) == [(0, 0)]
    basis = quotient_basis(buchberger(jac(P("x1^3 + x2^3"))))
    assert sorted(basis) == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_infinite_quotient_raises():
    with pytest.raises(NonIsolatedError):
        quotient_basis(buchberger([P("x1")]))


@pytest.mark.parametrize("a", [2, 3, 5, 7])
def test_milnor_number_of_fermat(a):
    assert len(quotient_basis(buchberger(jac(P(f"x1^{a}", 1))))) == a - 1


def test_thom_sebastiani_multiplies():
    mu = lambda t: len(quotient_basis(buchberger(jac(P(t, 3)))))
    assert mu("x1^3 + x2^4 + x3^2") == 2 * 3 * 1
    # chain Milnor number a1 a2 - a1 + 1
    assert mu("x1^3*x2 + x2^3 + x3^4") == 7 * 3


def test_local_quotient_of_cube_is_global():
    gens = jac(P("x1^3", 1))
    assert quotient_basis(local_quotient_at_origin(gens)) == [(0,), (1,)]


@pytest.mark.parametrize("genus", [2, 3])
def test_surface_local_milnor_algebra(genus):
    m = 2 * genus + 1
    W = P(f"x1^{m}+x2^{m}+x3^{m}-x1*x2*x3", 3, m)
    gb = local_quotient_at_origin(jac(W))
    basis = quotient_basis(gb)
    assert len(basis) == 6 * genus + 2
    # the listed spanning set 1, x1x2x3, x_i^l (l = 1..2g) is a basis too
    listed = ["1", "x1*x2*x3"] + [f"x{i}^{l}" for i in (1, 2, 3) for l in range(1, 2 * genus + 1)]
    pos = {b: k for k, b in enumerate(basis)}
    rows = []
    for t in listed:
        nf = normal_form(P(t, 3, m), gb).x_terms()
        row = [0] * len(basis)
        for mono, c in nf.items():
            row[pos[mono]] = c
        rows.append(row)
    assert rank(rows) == 6 * genus + 2
    # the global quotient also sees the non-origin critical points
    assert len(quotient_basis(buchberger(jac(W)))) > 6 * genus + 2


def test_local_agrees_with_global_when_origin_supported():
    gens = jac(P("x1^3*x2 + x2^4"))
    gb = buchberger(gens)
    assert is_origin_supported(gb)
    assert quotient_basis(local_quotient_at_origin(gens)) == quotient_basis(gb)


def test_stabilization_failure():
    with pytest.raises(StabilizationError):
        local_quotient_at_origin([P("x1*x2")], d_max=3)


@given(x_polys(max_terms=3), x_polys(max_terms=3))
def test_normal_form_is_multiplicative(f, g):
    gb = buchberger(jac(P("x1^3*x2 + x2^3")))
    lhs = normal_form(f * g, gb)
    rhs = normal_form(normal_form(f, gb) * normal_form(g, gb), gb)
    assert lhs == rhs


@given(x_polys(max_terms=3), x_polys(max_terms=3))
def test_normal_form_is_linear(f, g):
    gb = buchberger(jac(P("x1^3 + x2^3")))
    assert normal_form(f + g, gb) == normal_form(f, gb) + normal_form(g, gb)
