"""Independent CYBE evaluation in the defining representation.

The residual [r12,r13] + [r12,r23] + [r13,r23] is computed inside
End(C^4)^(x3) (64 x 64 matrices) from 4 x 4 matrix units, never touching
the structure-constant table.  Since the representation is faithful, the
tensor cube of it is injective, so the residual vanishes exactly when the
matrix does.
"""

from __future__ import annotations

from typing import Dict, Tuple

from .arith import MultiPoly
from .lie import LieAlgebra
from .wedge import BiVector, TriVector

Sparse4 = Dict[Tuple[int, int], MultiPoly]
Key = Tuple[Tuple[int, int, int], Tuple[int, int, int]]


def _rep(g: LieAlgebra) -> Dict[int, Sparse4]:
    from .lie import element_matrix
    out = {}
    for k in range(g.dim):
        m = element_matrix(g.basis_vector(k))
        out[k] = {(i, j): m[i][j] for i in range(4) for j in range(4) if m[i][j]}
    return out


def _mul(a: Sparse4, b: Sparse4) -> Sparse4:
    out: Sparse4 = {}
    for (i, k), x in a.items():
        for (k2, j), y in b.items():
            if k == k2:
                out[(i, j)] = out.get((i, j), MultiPoly()) + x * y
    return {k: v for k, v in out.items() if v}


def _comm(a: Sparse4, b: Sparse4) -> Sparse4:
    out = dict(_mul(a, b))
    for k, v in _mul(b, a).items():
        out[k] = out.get(k, MultiPoly()) - v
    return {k: v for k, v in out.items() if v}


def _kron3(acc: Dict[Key, MultiPoly], c: MultiPoly, a: Sparse4, b: Sparse4, d: Sparse4):
    for (i1, j1), x in a.items():
        for (i2, j2), y in b.items():
            xy = x * y
            for (i3, j3), z in d.items():
                key = ((i1, i2, i3), (j1, j2, j3))
                acc[key] = acc.get(key, MultiPoly()) + c * xy * z


def cybe_matrix(r: BiVector) -> Dict[Key, MultiPoly]:
    """Nonzero entries of the residual as a 64 x 64 matrix."""
    g = r.algebra
    rho = _rep(g)
    terms = list(r.tensor().items())
    acc: Dict[Key, MultiPoly] = {}
    for (a, b), rab in terms:
        for (c, d), rcd in terms:
            p = rab * rcd
            # [r12, r13]: [x_a, x_c] (x) x_b (x) x_d
            _kron3(acc, p, _comm(rho[a], rho[c]), rho[b], rho[d])
            # [r12, r23]: x_a (x) [x_b, x_c] (x) x_d
            _kron3(acc, p, rho[a], _comm(rho[b], rho[c]), rho[d])
            # [r13, r23]: x_a (x) x_c (x) [x_b, x_d]
            _kron3(acc, p, rho[a], rho[c], _comm(rho[b], rho[d]))
    return {k: v for k, v in acc.items() if v}


def trivector_matrix(t: TriVector) -> Dict[Key, MultiPoly]:
    """Image of a trivector (as an antisymmetric 3-tensor) under rho (x) rho (x) rho."""
    from itertools import permutations
    from .wedge import _perm_sign
    g = t.algebra
    rho = _rep(g)
    acc: Dict[Key, MultiPoly] = {}
    for key, c in t.coeffs.items():
        for perm in permutations(range(3)):
            sign, _ = _perm_sign(perm)
            i, j, k = (key[p] for p in perm)
            _kron3(acc, c.scale(sign), rho[i], rho[j], rho[k])
    return {k: v for k, v in acc.items() if v}


def oracle_is_solution(r: BiVector) -> bool:
    return not cybe_matrix(r)
