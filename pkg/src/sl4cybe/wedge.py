"""Exterior powers of a Lie algebra, the Schouten bracket and the CYBE residual.

Conventions: x ^ y = x (x) y - y (x) x, and a `BiVector` stores, for each
ordered pair i < j, the coefficient of x_i (x) x_j in its tensor expansion.
A `TriVector` likewise stores the coefficient of x_i (x) x_j (x) x_k for
i < j < k of a totally antisymmetric 3-tensor.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from typing import Dict, List, Mapping, Tuple

from .arith import MultiPoly, Scalar, ZERO_POLY
from .lie import AlgebraError, Element, LieAlgebra, ad_eigenvalue, format_coeff_times


class InternalError(AssertionError):
    """A postcondition that theory guarantees has failed."""


def _perm_sign(idx) -> Tuple[int, Tuple[int, ...]]:
    """Sort a tuple of distinct indices; return (sign, sorted) or (0, ()) on repeats."""
    idx = list(idx)
    sign = 1
    for i in range(len(idx)):
        for j in range(len(idx) - 1 - i):
            if idx[j] > idx[j + 1]:
                idx[j], idx[j + 1] = idx[j + 1], idx[j]
                sign = -sign
            elif idx[j] == idx[j + 1]:
                return 0, ()
    if len(set(idx)) != len(idx):
        return 0, ()
    return sign, tuple(idx)


class _Multivector:
    degree = 0

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: LieAlgebra, coeffs: Mapping[Tuple[int, ...], MultiPoly] | None = None):
        self.algebra = algebra
        self.coeffs = {k: v for k, v in (coeffs or {}).items() if v}

    def _new(self, coeffs):
        return type(self)(self.algebra, coeffs)

    def _check(self, other):
        if not isinstance(other, type(self)):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.algebra is not self.algebra:
            raise AlgebraError("multivectors belong to different algebras")

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        self._check(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, ZERO_POLY) + v
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        return self._new({k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        c = MultiPoly.coerce(c)
        return self._new({k: v * c for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        if not isinstance(other, type(self)):
            return NotImplemented
        return self.algebra is other.algebra and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def map_coeffs(self, fn):
        return self._new({k: fn(v) for k, v in self.coeffs.items()})

    def substitute(self, assignment):
        return self.map_coeffs(lambda c: c.substitute(assignment))

    def parameters(self) -> set:
        out = set()
        for c in self.coeffs.values():
            out |= c.parameters()
        return out

    def coefficient(self, *labels: str) -> MultiPoly:
        """Coefficient of x_l1 ^ ... ^ x_lk (with the permutation sign)."""
        sign, key = _perm_sign([self.algebra.index(l) for l in labels])
        if not sign:
            return ZERO_POLY
        return self.coeffs.get(key, ZERO_POLY).scale(sign)

    def carrier(self) -> List[str]:
        """Basis elements with nonzero incidence, in basis order."""
        idx = sorted({i for key in self.coeffs for i in key})
        return [self.algebra.labels[i] for i in idx]

    def carrier_dim(self) -> int:
        return len(self.carrier())

    def split_by_degree(self, name: str) -> Dict[int, "_Multivector"]:
        parts: Dict[int, Dict] = {}
        for key, c in self.coeffs.items():
            for d, piece in c.split_by_degree(name).items():
                parts.setdefault(d, {})[key] = piece
        return {d: self._new(cs) for d, cs in sorted(parts.items())}

    def __str__(self):
        if not self.coeffs:
            return "0"
        labels = self.algebra.labels
        out = ""
        for key in sorted(self.coeffs):
            piece = format_coeff_times(self.coeffs[key], "^".join(labels[i] for i in key))
            if not out:
                out = piece
            elif piece.startswith("-"):
                out += " - " + piece[1:]
            else:
                out += " + " + piece
        return out

    def __repr__(self):
        return f"{type(self).__name__}({self})"


class BiVector(_Multivector):
    degree = 2
    __slots__ = ()

    def tensor(self) -> Dict[Tuple[int, int], MultiPoly]:
        """Full antisymmetric coefficient array R with r = sum R[a,b] x_a (x) x_b."""
        out = {}
        for (i, j), c in self.coeffs.items():
            out[(i, j)] = c
            out[(j, i)] = -c
        return out


class TriVector(_Multivector):
    degree = 3
    __slots__ = ()


def bivector(g: LieAlgebra, terms: Mapping[Tuple[str, str], object]) -> BiVector:
    """Build sum c * (x ^ y) from {(x_label, y_label): c}."""
    out = BiVector(g)
    for (x, y), c in terms.items():
        out = out + wedge(g.basis(x), g.basis(y)) * MultiPoly.coerce(c)
    return out


def wedge(x, y):
    """Element ^ Element -> BiVector, Element ^ BiVector (or reverse) -> TriVector."""
    if isinstance(x, Element) and isinstance(y, Element):
        if x.algebra is not y.algebra:
            raise AlgebraError("wedge of elements from different algebras")
        out: Dict[Tuple[int, int], MultiPoly] = {}
        for i, ci in x.coeffs.items():
            for j, cj in y.coeffs.items():
                if i == j:
                    continue
                c = ci * cj
                key, c = ((i, j), c) if i < j else ((j, i), -c)
                out[key] = out.get(key, ZERO_POLY) + c
        return BiVector(x.algebra, out)
    if isinstance(x, Element) and isinstance(y, BiVector):
        return _wedge_1_2(x, y, first=True)
    if isinstance(x, BiVector) and isinstance(y, Element):
        return _wedge_1_2(y, x, first=False)
    raise TypeError(f"unsupported wedge of {type(x).__name__} and {type(y).__name__}")


def _wedge_1_2(x: Element, b: BiVector, first: bool) -> TriVector:
    if x.algebra is not b.algebra:
        raise AlgebraError("wedge of elements from different algebras")
    out: Dict[Tuple[int, ...], MultiPoly] = {}
    for i, ci in x.coeffs.items():
        for (j, k), cjk in b.coeffs.items():
            order = (i, j, k) if first else (j, k, i)
            sign, key = _perm_sign(order)
            if not sign:
                continue
            out[key] = out.get(key, ZERO_POLY) + (ci * cjk).scale(sign)
    return TriVector(x.algebra, out)


def wedge3(x: Element, y: Element, z: Element) -> TriVector:
    return wedge(x, wedge(y, z))


# --------------------------------------------------------------------------
# Schouten bracket

def schouten_tensor(r: BiVector, s: BiVector | None = None) -> Dict[Tuple[int, int, int], MultiPoly]:
    """[r12, s13] + [r12, s23] + [r13, s23] as a full 3-tensor (s defaults to r).

    With r = sum R[a,b] x_a (x) x_b and s = sum S[c,d] x_c (x) x_d:
        [r12, s13] = sum R[a,b] S[c,d] [x_a, x_c] (x) x_b (x) x_d
        [r12, s23] = sum R[a,b] S[c,d] x_a (x) [x_b, x_c] (x) x_d
        [r13, s23] = sum R[a,b] S[c,d] x_a (x) x_c (x) [x_b, x_d]
    """
    g = r.algebra
    table = g.table
    R = list(r.tensor().items())
    S = R if s is None else list(s.tensor().items())
    acc: Dict[Tuple[int, int, int], MultiPoly] = {}

    def add(key, c):
        v = acc.get(key)
        acc[key] = c if v is None else v + c

    for (a, b), rab in R:
        for (c, d), rcd in S:
            p = rab * rcd
            for k, f in table[a][c]:
                add((k, b, d), p.scale(f))
            for k, f in table[b][c]:
                add((a, k, d), p.scale(f))
            for k, f in table[b][d]:
                add((a, c, k), p.scale(f))
    return {k: v for k, v in acc.items() if v}


def antisymmetry_defects(t: Mapping[Tuple[int, int, int], MultiPoly]) -> List[Tuple[int, int, int]]:
    """Index triples where t fails to be totally antisymmetric."""
    bad = []
    for key, v in t.items():
        if len(set(key)) < 3:
            bad.append(key)
            continue
        for perm in permutations(range(3)):
            pk = tuple(key[p] for p in perm)
            sign, _ = _perm_sign(perm)
            if t.get(pk, ZERO_POLY) != v.scale(sign):
                bad.append(key)
                break
    return bad


def project_trivector(g: LieAlgebra, t: Mapping[Tuple[int, int, int], MultiPoly]) -> TriVector:
    return TriVector(g, {k: v for k, v in t.items() if k[0] < k[1] < k[2]})


def schouten_self(r: BiVector) -> TriVector:
    """<<r, r>> in canonical form; verifies total antisymmetry first."""
    t = schouten_tensor(r)
    bad = antisymmetry_defects(t)
    if bad:
        raise InternalError(f"Schouten tensor not antisymmetric at {bad[:3]}")
    return project_trivector(r.algebra, t)


def schouten_mixed(r: BiVector, s: BiVector, *, check: bool = True) -> TriVector:
    """Symmetric bilinear form <<r, s>> with <<r, r>> = schouten_self(r).

    Computed directly from the two tensors, so the cost scales with the
    product of the supports; equals the polarization
    (<<r+s, r+s>> - <<r, r>> - <<s, s>>) / 2.
    """
    t = schouten_tensor(r, s)
    for key, v in schouten_tensor(s, r).items():
        t[key] = t[key] + v if key in t else v
    t = {k: v for k, v in t.items() if v}
    bad = antisymmetry_defects(t) if check else None
    if bad:
        raise InternalError(f"mixed Schouten tensor not antisymmetric at {bad[:3]}")
    half = MultiPoly.const(Fraction(1, 2))
    return project_trivector(r.algebra, t) * half


def schouten_polarized(r: BiVector, s: BiVector) -> TriVector:
    """Reference form of schouten_mixed via three self-brackets."""
    half = MultiPoly.const(Fraction(1, 2))
    return (schouten_self(r + s) - schouten_self(r) - schouten_self(s)) * half


class CybeResult:
    """Outcome of a CYBE check with the residual split by parameter degree."""

    def __init__(self, residual: TriVector, per_degree: Dict[str, Dict[int, TriVector]]):
        self.residual = residual
        self.per_degree = per_degree

    @property
    def is_solution(self) -> bool:
        return self.residual.is_zero()

    def __iter__(self):
        yield self.is_solution
        yield self.residual
        yield self.per_degree

    def __repr__(self):
        return f"CybeResult(is_solution={self.is_solution}, terms={len(self.residual.coeffs)})"


def cybe_residual(r: BiVector) -> CybeResult:
    res = schouten_self(r)
    per_degree = {}
    for name in sorted(r.parameters()):
        per_degree[name] = res.split_by_degree(name)
    return CybeResult(res, per_degree)


def parts_by_degree(r: BiVector, name: str) -> Dict[int, BiVector]:
    """Split r = sum_k name**k r_k; used for the 'each part separately' check."""
    return r.split_by_degree(name)


# --------------------------------------------------------------------------
# adjoint action and the invariant three-form

def adjoint_action_bi(x: Element, b: BiVector) -> BiVector:
    g = b.algebra
    out = BiVector(g)
    for (i, j), c in b.coeffs.items():
        xi, xj = g.basis_vector(i), g.basis_vector(j)
        out = out + (wedge(g.bracket(x, xi), xj) + wedge(xi, g.bracket(x, xj))) * c
    return out


def adjoint_action_triv(x: Element, t: TriVector) -> TriVector:
    """Derivation extension ad_x(a^b^c) = [x,a]^b^c + a^[x,b]^c + a^b^[x,c]."""
    g = t.algebra
    if x.algebra is not g:
        raise AlgebraError("adjoint action across algebras")
    out = TriVector(g)
    for (i, j, k), c in t.coeffs.items():
        xi, xj, xk = g.basis_vector(i), g.basis_vector(j), g.basis_vector(k)
        term = (wedge3(g.bracket(x, xi), xj, xk) + wedge3(xi, g.bracket(x, xj), xk)
                + wedge3(xi, xj, g.bracket(x, xk)))
        out = out + term * c
    return out


def _invert_fraction_matrix(m):
    n = len(m)
    a = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c]), None)
        if piv is None:
            raise ValueError("matrix is singular")
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [v * inv for v in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [u - f * v for u, v in zip(a[r], a[c])]
    return [row[n:] for row in a]


def canonical_trivector(g: LieAlgebra) -> TriVector:
    """Omega = sum f^{abc} x_a (x) x_b (x) x_c, indices raised with the Killing form."""
    K = g.killing_matrix()
    try:
        Kinv = _invert_fraction_matrix(K)
    except ValueError:
        raise AlgebraError("Killing form is degenerate") from None
    n = g.dim
    # f_ab^c lowered on the last index: f_abc = sum_k f_ab^k K[k][c]
    # raised: f^{abc} = sum Kinv[a][a'] Kinv[b][b'] f_{a'b'}^c
    raised: Dict[Tuple[int, int, int], Fraction] = {}
    for a2 in range(n):
        for b2 in range(n):
            for c, f in g.table[a2][b2]:
                for a in range(n):
                    ka = Kinv[a][a2]
                    if not ka:
                        continue
                    for b in range(n):
                        kb = Kinv[b][b2]
                        if kb:
                            key = (a, b, c)
                            raised[key] = raised.get(key, Fraction(0)) + ka * kb * f
    t = {k: MultiPoly.const(v) for k, v in raised.items() if v}
    bad = antisymmetry_defects(t)
    if bad:
        raise InternalError(f"raised structure tensor not antisymmetric at {bad[:3]}")
    return project_trivector(g, t)


def multivector_weights(m: _Multivector, grader: Element) -> Dict[Tuple[int, ...], Scalar]:
    """ad(grader)-weight of every stored basis term of a bi- or trivector."""
    g = m.algebra
    cache = {}
    out = {}
    for key in m.coeffs:
        w = Scalar(0)
        for i in key:
            if i not in cache:
                cache[i] = ad_eigenvalue(g, grader, i)
            if cache[i] is None:
                raise AlgebraError(f"ad of grader is not diagonal on {g.labels[i]}")
            w = w + cache[i]
        out[key] = w
    return out


def weight_decomposition(m: _Multivector, grader: Element) -> List[Tuple[Scalar, _Multivector]]:
    """Split a bi-/trivector into ad(grader)-eigencomponents (derivation action)."""
    buckets: Dict[Scalar, Dict] = {}
    for key, w in multivector_weights(m, grader).items():
        buckets.setdefault(w, {})[key] = m.coeffs[key]
    out = [(w, m._new(cs)) for w, cs in buckets.items()]
    out.sort(key=lambda wc: (wc[0].re, wc[0].im))
    return out
