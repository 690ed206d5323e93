import pytest
import sympy

from sl4cybe.catalog import compare_up_to_scalar, parse_expression
from sl4cybe.frobenius import (SingularFormError, borel_plus, determinant, form_from_functional,
                               generic_nonexistence, pfaffian, pfaffian_elimination, pfaffian_expansion,
                               pfaffian_square_check, rmatrix_from_functional, standard_parabolics)
from sl4cybe.wedge import cybe_residual


@pytest.fixture(scope="module")
def parabolics(g):
    return standard_parabolics(g)


def test_subalgebra_dimensions(g, parabolics):
    assert borel_plus(g).dim == 9
    assert {k: parabolics[k].dim for k in ("P1", "P2", "P3", "P23")} == {"P1": 10, "P2": 10, "P3": 10, "P23": 12}
    assert all(p.closed for p in parabolics.values())


def test_pfaffian_methods_agree():
    m = [[0, 1, 2, -1], [-1, 0, 3, 5], [-2, -3, 0, 4], [1, -5, -4, 0]]
    from sl4cybe.arith import MultiPoly, Scalar
    pe = pfaffian_expansion([[MultiPoly.const(v) for v in row] for row in m])
    pl = pfaffian_elimination([[Scalar(v) for v in row] for row in m])
    assert pe.constant_value() == pl == Scalar(-9)
    assert pl * pl == Scalar(int(sympy.Matrix(m).det()))


def test_pfaffian_squares_to_determinant(g, cat, parabolics):
    B = form_from_functional(cat["g1a"].value, parabolics["P1"])
    assert pfaffian_square_check(B)
    const = [[v.constant_value() for v in row] for row in B.matrix]
    pf = pfaffian(B).constant_value()
    assert pf * pf == determinant(const)


def test_inverse_form_reproduces_r10_1a(cat, parabolics):
    r = rmatrix_from_functional(cat["g1a"].value, parabolics["P1"])
    assert cybe_residual(r).is_solution
    assert compare_up_to_scalar(r, cat["r10_1a"].value, search=False).match


def test_singular_functional_raises(g, parabolics):
    with pytest.raises(SingularFormError):
        rmatrix_from_functional(parse_expression("e1* + e3*", g), parabolics["P2"])


def test_generic_pfaffians(parabolics):
    assert generic_nonexistence(parabolics["P2"])[0] is False
    exists, pf = generic_nonexistence(parabolics["P1"])
    assert exists and not pf.is_zero()
