from itertools import combinations

import pytest
import sympy

from sl4cybe.lie import (POS_ROOTS, NEG_ROOTS, conformal_basis, coefficient_matrix, element_matrix,
                         label_matrix, rank, root_of)


def test_dimension_and_jacobi(g):
    assert g.dim == 15
    assert g.jacobi_violations() == []


@pytest.mark.parametrize("i", [1, 2, 3])
def test_chevalley_relations(g, i):
    for j in (1, 2, 3):
        got = g.bracket(g.basis(f"e{i}"), g.basis(f"em{j}"))
        assert got == (g.basis(f"h{j}") if i == j else g.zero())


def test_composite_roots_are_brackets(g):
    e = g.basis
    assert g.bracket(e("e1"), e("e2")) == e("e4")
    assert g.bracket(e("e2"), e("e3")) == e("e5")
    assert g.bracket(e("e1"), e("e5")) == e("e6")
    assert g.bracket(e("em2"), e("em1")) == e("em4")
    assert g.bracket(e("em3"), e("em2")) == e("em5")
    assert g.bracket(e("em5"), e("em1")) == e("em6")


def test_structure_table_against_sympy_matrices(g):
    """Every basis bracket agrees with the sympy matrix commutator."""
    mats = {lbl: sympy.Matrix(label_matrix(lbl)) for lbl in g.labels}
    for a, b in combinations(g.labels, 2):
        want = mats[a] * mats[b] - mats[b] * mats[a]
        got = element_matrix(g.bracket(g.basis(a), g.basis(b)))
        got = sympy.Matrix(4, 4, lambda r, c: sympy.Rational(str(got[r][c].constant_value())))
        assert got == want, (a, b)


def test_killing_form_is_nondegenerate(g):
    assert sympy.Matrix(g.killing_matrix()).det() != 0


def test_roots(g):
    assert root_of("e6") == (1, 1, 1)
    assert [root_of(x) for x in NEG_ROOTS] == [tuple(-c for c in root_of(p)) for p in POS_ROOTS]


def test_conformal_generators_span(g):
    gens = conformal_basis(g)
    assert len(gens) == 15
    assert rank(coefficient_matrix(list(gens.values()))) == 15
