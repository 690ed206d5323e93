"""Quasi-Frobenius machinery: parabolic subalgebras, functionals, skew forms,
Pfaffians and inversion of a nondegenerate form to a CYBE solution.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, product
from typing import Dict, List, Mapping, Sequence, Tuple

from .arith import MultiPoly, ONE_POLY, Scalar, ZERO_POLY, random_point
from .lie import AlgebraError, CARTAN, Element, LieAlgebra, POS_ROOTS
from .wedge import BiVector, InternalError, cybe_residual


class SingularFormError(ValueError):
    pass


class Subalgebra:
    """A subalgebra spanned by basis vectors of its ambient algebra."""

    def __init__(self, algebra: LieAlgebra, members: Sequence[str], name: str = ""):
        self.algebra = algebra
        order = {lbl: k for k, lbl in enumerate(algebra.labels)}
        self.members = tuple(sorted(dict.fromkeys(members), key=order.__getitem__))
        self.indices = tuple(algebra.index(m) for m in self.members)
        self.name = name
        self.closed = self._closure_certificate()

    def _closure_certificate(self) -> bool:
        idx = set(self.indices)
        for i, j in combinations(self.indices, 2):
            if any(k not in idx for k, _ in self.algebra.table[i][j]):
                return False
        return True

    @property
    def dim(self) -> int:
        return len(self.members)

    @property
    def even(self) -> bool:
        return self.dim % 2 == 0

    def __contains__(self, label):
        return label in self.members

    def __repr__(self):
        return f"Subalgebra({self.name or '?'}, dim={self.dim}, closed={self.closed})"


def bracket_closure(g: LieAlgebra, labels: Sequence[str]) -> List[str]:
    """Smallest set of basis labels containing `labels` closed under brackets
    of basis vectors (enough for subalgebras spanned by root/Cartan vectors)."""
    current = set(g.index(l) for l in labels)
    changed = True
    while changed:
        changed = False
        for i, j in combinations(sorted(current), 2):
            for k, _ in g.table[i][j]:
                if k not in current:
                    current.add(k)
                    changed = True
    return [g.labels[k] for k in sorted(current)]


def borel_plus(g: LieAlgebra) -> Subalgebra:
    return Subalgebra(g, CARTAN + POS_ROOTS, name="B+")


def parabolic(g: LieAlgebra, extra: Sequence[str], name: str = "") -> Subalgebra:
    for lbl in extra:
        g.index(lbl)
    members = bracket_closure(g, list(CARTAN + POS_ROOTS) + list(extra))
    if not name:
        name = "P(" + ",".join("-" + x[2:] if x.startswith("em") else x for x in extra) + ")"
    sub = Subalgebra(g, members, name=name)
    if not sub.closed:
        raise InternalError("bracket closure is not closed")
    return sub


def standard_parabolics(g: LieAlgebra) -> Dict[str, Subalgebra]:
    return {
        "P1": parabolic(g, ["em1"], "P(1)"),
        "P2": parabolic(g, ["em2"], "P(2)"),
        "P3": parabolic(g, ["em3"], "P(3)"),
        "P23": parabolic(g, ["em2", "em3"], "P(-2,-3)"),
    }


class Functional:
    """A dual vector sum c_k x_k^* on the ambient algebra."""

    def __init__(self, algebra: LieAlgebra, coeffs: Mapping[str, object] | None = None, name: str = ""):
        self.algebra = algebra
        self.coeffs = {}
        for lbl, c in (coeffs or {}).items():
            c = MultiPoly.coerce(c)
            if c:
                self.coeffs[algebra.index(lbl) if isinstance(lbl, str) else lbl] = c
        self.name = name

    def __call__(self, x: Element) -> MultiPoly:
        out = ZERO_POLY
        for k, c in x.coeffs.items():
            if k in self.coeffs:
                out = out + c * self.coeffs[k]
        return out

    def __add__(self, other: "Functional") -> "Functional":
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, ZERO_POLY) + v
        return Functional(self.algebra, out)

    def __mul__(self, c):
        c = MultiPoly.coerce(c)
        return Functional(self.algebra, {k: v * c for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.coeffs
        return isinstance(other, Functional) and self.coeffs == other.coeffs

    def support(self) -> List[str]:
        return [self.algebra.labels[k] for k in sorted(self.coeffs)]

    def parameters(self) -> set:
        out = set()
        for c in self.coeffs.values():
            out |= c.parameters()
        return out

    def __str__(self):
        from .lie import format_coeff_times
        if not self.coeffs:
            return "0"
        out = ""
        for k in sorted(self.coeffs):
            piece = format_coeff_times(self.coeffs[k], self.algebra.labels[k] + "*")
            if not out:
                out = piece
            elif piece.startswith("-"):
                out += " - " + piece[1:]
            else:
                out += " + " + piece
        return out

    __repr__ = __str__


class SkewForm:
    """Matrix of B(x_i, x_j) on the member basis of a subalgebra."""

    def __init__(self, sub: Subalgebra, matrix: List[List[MultiPoly]]):
        self.subalgebra = sub
        self.matrix = matrix
        m = len(matrix)
        for i in range(m):
            if matrix[i][i]:
                raise ValueError("skew form has a nonzero diagonal entry")
            for j in range(i + 1, m):
                if matrix[i][j] != -matrix[j][i]:
                    raise ValueError("form is not skew-symmetric")

    @property
    def size(self) -> int:
        return len(self.matrix)

    def __call__(self, a: str, b: str) -> MultiPoly:
        m = self.subalgebra.members
        return self.matrix[m.index(a)][m.index(b)]

    def is_constant(self) -> bool:
        return all(v.is_constant() for row in self.matrix for v in row)

    def cocycle_defects(self, triples=None) -> List[Tuple[str, str, str]]:
        """Member triples violating B([x,y],z) + B([y,z],x) + B([z,x],y) = 0."""
        sub = self.subalgebra
        g = sub.algebra
        pos = {k: p for p, k in enumerate(sub.indices)}

        def B(x: Element, y: Element) -> MultiPoly:
            out = ZERO_POLY
            for i, ci in x.coeffs.items():
                for j, cj in y.coeffs.items():
                    out = out + ci * cj * self.matrix[pos[i]][pos[j]]
            return out

        bad = []
        for i, j, k in (triples or combinations(sub.indices, 3)):
            xi, xj, xk = g.basis_vector(i), g.basis_vector(j), g.basis_vector(k)
            s = B(g.bracket(xi, xj), xk) + B(g.bracket(xj, xk), xi) + B(g.bracket(xk, xi), xj)
            if s:
                bad.append((g.labels[i], g.labels[j], g.labels[k]))
        return bad


def form_from_functional(gstar: Functional, p: Subalgebra) -> SkewForm:
    """B(x, y) = <g*, [x, y]> on the members of p."""
    if not p.closed:
        raise AlgebraError(f"{p.name} is not closed under the bracket")
    g = p.algebra
    m = p.dim
    mat = [[ZERO_POLY] * m for _ in range(m)]
    for a in range(m):
        for b in range(a + 1, m):
            val = ZERO_POLY
            for k, c in g.table[p.indices[a]][p.indices[b]]:
                if k in gstar.coeffs:
                    val = val + gstar.coeffs[k].scale(c)
            mat[a][b] = val
            mat[b][a] = -val
    return SkewForm(p, mat)


def pfaffian_expansion(matrix: Sequence[Sequence[MultiPoly]]) -> MultiPoly:
    """Pfaffian as the signed sum over perfect matchings (expansion along the
    first remaining row; identical sub-Pfaffians are shared)."""
    m = len(matrix)
    if m % 2:
        raise ValueError("Pfaffian of an odd-dimensional form")

    @lru_cache(maxsize=None)
    def pf(rest: Tuple[int, ...]) -> MultiPoly:
        if not rest:
            return ONE_POLY
        i = rest[0]
        out = ZERO_POLY
        for pos in range(1, len(rest)):
            j = rest[pos]
            a = matrix[i][j]
            if not a:
                continue
            sub = pf(rest[1:pos] + rest[pos + 1:])
            if not sub:
                continue
            term = a * sub
            out = out + (term if pos % 2 == 1 else -term)
        return out

    return pf(tuple(range(m)))


def pfaffian_elimination(matrix: Sequence[Sequence[Scalar]]) -> Scalar:
    """Pfaffian of a constant skew matrix by skew-symmetric Gaussian elimination."""
    m = len(matrix)
    if m % 2:
        raise ValueError("Pfaffian of an odd-dimensional form")
    a = [[Scalar.coerce(v) for v in row] for row in matrix]
    pf = Scalar(1)
    for k in range(0, m - 1, 2):
        piv = next((j for j in range(k + 1, m) if not a[k][j].is_zero()), None)
        if piv is None:
            return Scalar(0)
        if piv != k + 1:
            # swap rows and columns k+1 <-> piv
            a[k + 1], a[piv] = a[piv], a[k + 1]
            for row in a:
                row[k + 1], row[piv] = row[piv], row[k + 1]
            pf = -pf
        pivot = a[k][k + 1]
        pf = pf * pivot
        inv = pivot.inverse()
        # clear row/col k and k+1 in the remaining block
        for i in range(k + 2, m):
            f_i = a[k][i] * inv      # coefficient used to clear a[k][i]
            g_i = a[k + 1][i] * inv  # coefficient used to clear a[k+1][i]
            if f_i.is_zero() and g_i.is_zero():
                continue
            # col_i -= f_i * col_{k+1}; col_i += g_i * col_k ; same for rows
            for r in range(m):
                a[r][i] = a[r][i] - f_i * a[r][k + 1] + g_i * a[r][k]
            for c in range(m):
                a[i][c] = a[i][c] - f_i * a[k + 1][c] + g_i * a[k][c]
    return pf


def pfaffian(B) -> MultiPoly:
    """Exact Pfaffian of a SkewForm (or raw skew matrix)."""
    matrix = B.matrix if isinstance(B, SkewForm) else B
    if len(matrix) % 2:
        raise ValueError("Pfaffian of an odd-dimensional form")
    if all(MultiPoly.coerce(v).is_constant() for row in matrix for v in row):
        const = [[MultiPoly.coerce(v).constant_value() for v in row] for row in matrix]
        return MultiPoly.const(pfaffian_elimination(const))
    return pfaffian_expansion([[MultiPoly.coerce(v) for v in row] for row in matrix])


def determinant(matrix: Sequence[Sequence[Scalar]]) -> Scalar:
    """Exact determinant over Q(i) by Gaussian elimination."""
    a = [[Scalar.coerce(v) for v in row] for row in matrix]
    n = len(a)
    det = Scalar(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if not a[r][c].is_zero()), None)
        if piv is None:
            return Scalar(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det = det * a[c][c]
        inv = a[c][c].inverse()
        for r in range(c + 1, n):
            if not a[r][c].is_zero():
                f = a[r][c] * inv
                a[r] = [u - f * v for u, v in zip(a[r], a[c])]
    return det


def invert_matrix(matrix: Sequence[Sequence[Scalar]]) -> List[List[Scalar]]:
    n = len(matrix)
    a = [[Scalar.coerce(v) for v in row] + [Scalar(int(i == j)) for j in range(n)]
         for i, row in enumerate(matrix)]
    for c in range(n):
        piv = next((r for r in range(c, n) if not a[r][c].is_zero()), None)
        if piv is None:
            raise SingularFormError("matrix is singular")
        a[c], a[piv] = a[piv], a[c]
        inv = a[c][c].inverse()
        a[c] = [v * inv for v in a[c]]
        for r in range(n):
            if r != c and not a[r][c].is_zero():
                f = a[r][c]
                a[r] = [u - f * v for u, v in zip(a[r], a[c])]
    return [row[n:] for row in a]


def inverse_via_pfaffians(B: SkewForm) -> Tuple[List[List[MultiPoly]], MultiPoly]:
    """Numerators N and denominator Pf(B) with (B^-1)[i][j] = N[i][j] / Pf(B)."""
    mat = B.matrix
    m = len(mat)
    pf = pfaffian(B)
    N = [[ZERO_POLY] * m for _ in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            keep = [k for k in range(m) if k not in (i, j)]
            minor = [[mat[r][c] for c in keep] for r in keep]
            v = pfaffian(minor)
            v = v if (i + j) % 2 == 0 else -v
            # (B^-1)_ij = (-1)^(i+j+1) Pf(minor_ij) / Pf(B), 0-based i<j
            N[i][j] = -v
            N[j][i] = v
    return N, pf


def rmatrix_from_functional(gstar: Functional, p: Subalgebra, *, clear_denominators: bool = False,
                            verify: bool = True) -> BiVector:
    """Invert B(x,y) = <g*,[x,y]> and return r = sum_{i<j} r^{ij} x_i ^ x_j.

    r^{ij} b_{jk} = delta^i_k.  For a form with non-constant Pfaffian the
    inverse is only defined over the fraction field; pass
    clear_denominators=True to get Pf(B) * r instead.
    """
    B = form_from_functional(gstar, p)
    label = gstar.name or str(gstar)
    if B.size % 2:
        raise SingularFormError(f"{p.name} has odd dimension {B.size}; no nondegenerate skew form")
    pf = pfaffian(B)
    if pf.is_zero():
        raise SingularFormError(f"functional {label} is singular on {p.name}")
    g = p.algebra
    coeffs: Dict[Tuple[int, int], MultiPoly] = {}
    if B.is_constant():
        inv = invert_matrix([[v.constant_value() for v in row] for row in B.matrix])
        for a in range(B.size):
            for b in range(a + 1, B.size):
                if not inv[a][b].is_zero():
                    coeffs[(p.indices[a], p.indices[b])] = MultiPoly.const(inv[a][b])
    else:
        N, den = inverse_via_pfaffians(B)
        if den.is_monomial():
            scale = den.monomial_inverse()
        elif clear_denominators:
            scale = ONE_POLY
        else:
            raise SingularFormError(
                f"Pfaffian {den} of {label} is not a unit; use clear_denominators=True")
        for a in range(B.size):
            for b in range(a + 1, B.size):
                if N[a][b]:
                    coeffs[(p.indices[a], p.indices[b])] = N[a][b] * scale
    r = BiVector(g, coeffs)
    if verify and not cybe_residual(r).is_solution:
        raise InternalError(f"inverse of a Frobenius form failed CYBE ({label})")
    return r


def inverse_identity_defect(r: BiVector, B: SkewForm) -> List[Tuple[str, str]]:
    """Entries where sum_j r^{ij} b_{jk} differs from delta^i_k."""
    sub = B.subalgebra
    m = B.size
    R = [[ZERO_POLY] * m for _ in range(m)]
    pos = {k: p for p, k in enumerate(sub.indices)}
    for (i, j), c in r.coeffs.items():
        R[pos[i]][pos[j]] = c
        R[pos[j]][pos[i]] = -c
    bad = []
    for i in range(m):
        for k in range(m):
            s = ZERO_POLY
            for j in range(m):
                if R[i][j] and B.matrix[j][k]:
                    s = s + R[i][j] * B.matrix[j][k]
            if s != (ONE_POLY if i == k else ZERO_POLY):
                bad.append((sub.members[i], sub.members[k]))
    return bad


def generic_functional(p: Subalgebra) -> Functional:
    """sum c_k x_k^* over the members of p with fresh parameters c1, c2, ..."""
    if p.dim > 12:
        raise ValueError("parameter registry holds only c1..c12")
    return Functional(p.algebra, {lbl: MultiPoly.var(f"c{k + 1}") for k, lbl in enumerate(p.members)},
                      name=f"generic on {p.name}")


def generic_nonexistence(p: Subalgebra) -> Tuple[bool, MultiPoly]:
    """(exists, Pf(B(g*))) for the fully generic functional on p.

    exists is False exactly when the generic Pfaffian is the zero polynomial,
    i.e. no functional makes B nondegenerate (p is not Frobenius).
    """
    if not p.even:
        raise ValueError(f"{p.name} has odd dimension {p.dim}")
    B = form_from_functional(generic_functional(p), p)
    pf = pfaffian_expansion(B.matrix)
    return (not pf.is_zero(), pf)


def functional_search(p: Subalgebra, pool: Sequence[str]) -> List[Functional]:
    """All 0/1 combinations over `pool` whose form on p is nondegenerate."""
    if not p.closed or not p.even:
        raise ValueError(f"{p.name} must be closed and even-dimensional")
    pool = list(dict.fromkeys(pool))
    if len(pool) > 12:
        raise ValueError("pool larger than 12 dual vectors")
    g = p.algebra
    found = []
    for mask in product((0, 1), repeat=len(pool)):
        chosen = [lbl for lbl, bit in zip(pool, mask) if bit]
        if not chosen:
            continue
        f = Functional(g, {lbl: 1 for lbl in chosen})
        B = form_from_functional(f, p)
        if not pfaffian(B).is_zero():
            found.append(f)
    found.sort(key=lambda f: (len(f.coeffs), sorted(f.coeffs)))
    return found


def pfaffian_square_check(B: SkewForm, points: int = 5, seed: int = 0) -> bool:
    """Pf(B)^2 == det(B) at random rational points of the free parameters."""
    import random

    rng = random.Random(seed)
    pf = pfaffian(B)
    params = set(pf.parameters())
    for row in B.matrix:
        for v in row:
            params |= v.parameters()
    for _ in range(points):
        pt = random_point(params, rng)
        num = [[v.substitute(pt).constant_value() for v in row] for row in B.matrix]
        lhs = pf.substitute(pt).constant_value()
        if lhs * lhs != determinant(num):
            return False
        if lhs != pfaffian_elimination(num):
            return False
    return True


def functional_edits(gstar: Functional, p: Subalgebra) -> List[Tuple[str, Functional]]:
    """Functionals one elementary edit away from `gstar`: drop a dual vector,
    add one from p, swap one for another, or flip the sign of one."""
    g = gstar.algebra
    labels = g.labels
    support = [labels[k] for k in sorted(gstar.coeffs)]
    out = []

    def with_coeffs(cs, why):
        out.append((why, Functional(g, cs)))

    base = {labels[k]: c for k, c in gstar.coeffs.items()}
    for lbl in support:
        cs = dict(base)
        del cs[lbl]
        if cs:
            with_coeffs(cs, f"drop {lbl}*")
        cs = dict(base)
        cs[lbl] = -cs[lbl]
        with_coeffs(cs, f"flip sign of {lbl}*")
    for new in p.members:
        if new in base:
            continue
        cs = dict(base)
        cs[new] = ONE_POLY
        with_coeffs(cs, f"add {new}*")
        for lbl in support:
            cs = dict(base)
            cs[new] = cs.pop(lbl)
            with_coeffs(cs, f"replace {lbl}* by {new}*")
    return out


def functional_repairs(gstar: Functional, p: Subalgebra, target: BiVector, compare,
                       max_edits: int = 2) -> List[Tuple[str, Functional]]:
    """Fewest elementary edits of `gstar` whose inverted form matches `target`.

    Level k holds every functional k edits away; the first level with a
    match is returned.  `compare(r, s)` decides equality up to a scalar
    (passed in to keep this module independent of the catalog).
    """
    seen = {frozenset(gstar.coeffs.items())}
    frontier = [("", gstar)]
    for _ in range(max_edits):
        level = []
        for path, f0 in frontier:
            for why, f in functional_edits(f0, p):
                key = frozenset(f.coeffs.items())
                if key in seen:
                    continue
                seen.add(key)
                level.append((f"{path}; {why}" if path else why, f))
        hits = []
        for why, f in level:
            B = form_from_functional(f, p)
            if pfaffian(B).is_zero():
                continue
            if compare(rmatrix_from_functional(f, p, verify=False), target):
                hits.append((why, f))
        if hits:
            return hits
        frontier = level
    return []
