"""The in-package matrix oracle against an independent sympy evaluation."""

import pytest
import sympy
from sympy.physics.quantum import TensorProduct

from sl4cybe.lie import element_matrix
from sl4cybe.oracle import cybe_matrix


def _sym(x):
    m = element_matrix(x)
    return sympy.Matrix(4, 4, lambda r, c: sympy.Rational(str(m[r][c].constant_value())))


def _sympy_cybe(r):
    g = r.algebra
    one = sympy.eye(4)
    r12 = r13 = r23 = sympy.zeros(64, 64)
    for (a, b), c in r.tensor().items():
        c = sympy.Rational(str(c.constant_value()))
        x, y = _sym(g.basis_vector(a)), _sym(g.basis_vector(b))
        r12 += c * TensorProduct(x, y, one)
        r13 += c * TensorProduct(x, one, y)
        r23 += c * TensorProduct(one, x, y)
    comm = lambda p, q: p * q - q * p
    return comm(r12, r13) + comm(r12, r23) + comm(r13, r23)


def _as_dict(m):
    out = {}
    for i in range(64):
        for j in range(64):
            if m[i, j] != 0:
                row = (i // 16, (i // 4) % 4, i % 4)
                col = (j // 16, (j // 4) % 4, j % 4)
                out[(row, col)] = m[i, j]
    return out


@pytest.mark.parametrize("name", ["r10_1a", "r10_3d"])
def test_matrix_oracle_matches_sympy(cat, name):
    r = cat[name].value
    want = _as_dict(_sympy_cybe(r))
    got = {k: sympy.Rational(str(v.constant_value())) for k, v in cybe_matrix(r).items()}
    assert got == want


def test_nonzero_residual_matches_sympy(g):
    from sl4cybe.catalog import parse_expression
    r = parse_expression("e1^em1 + h2^e3", g)
    want = _as_dict(_sympy_cybe(r))
    got = {k: sympy.Rational(str(v.constant_value())) for k, v in cybe_matrix(r).items()}
    assert want and got == want
