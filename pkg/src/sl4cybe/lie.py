"""sl(4,C) in the Cartan-Weyl basis, its conformal (o(4,2)) basis and gradings.

The structure constants are never typed in: they are read off commutators
of 4x4 matrix units and expressed in the basis

    h1, h2, h3, e1..e6, em1..em6

with e1=E12, e2=E23, e3=E34, e4=E13, e5=E24, e6=E14 and em_A the transpose
of e_A.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from .arith import I, ONE, MultiPoly, Scalar, ZERO_POLY, format_poly

Matrix4 = Tuple[Tuple[int, ...], ...]

CARTAN = ("h1", "h2", "h3")
POS_ROOTS = tuple(f"e{k}" for k in range(1, 7))
NEG_ROOTS = tuple(f"em{k}" for k in range(1, 7))
SL4_LABELS = CARTAN + POS_ROOTS + NEG_ROOTS

# positive root e_A -> matrix unit position (row, col), 1-based
ROOT_POSITIONS = {1: (1, 2), 2: (2, 3), 3: (3, 4), 4: (1, 3), 5: (2, 4), 6: (1, 4)}
# positive root e_A -> coordinates in the simple roots alpha1..alpha3
ROOT_COORDS = {1: (1, 0, 0), 2: (0, 1, 0), 3: (0, 0, 1), 4: (1, 1, 0), 5: (0, 1, 1), 6: (1, 1, 1)}
# composite Cartans h4 = h1+h2, h5 = h2+h3, h6 = h1+h2+h3
COMPOSITE_CARTAN = {"h4": (1, 1, 0), "h5": (0, 1, 1), "h6": (1, 1, 1)}


class AlgebraError(Exception):
    pass


class Element:
    """Sparse vector of a Lie algebra with `MultiPoly` coefficients."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: "LieAlgebra", coeffs: Mapping[int, MultiPoly] | None = None):
        self.algebra = algebra
        self.coeffs = {k: v for k, v in (coeffs or {}).items() if v}

    def _check(self, other: "Element"):
        if not isinstance(other, Element):
            raise TypeError(f"expected Element, got {type(other).__name__}")
        if other.algebra is not self.algebra:
            raise AlgebraError("elements belong to different algebras")

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
        return Element(self.algebra, out)

    __radd__ = __add__

    def __neg__(self):
        return Element(self.algebra, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        c = MultiPoly.coerce(c)
        return Element(self.algebra, {k: v * c for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        if not isinstance(other, Element):
            return NotImplemented
        return self.algebra is other.algebra and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def coeff(self, label: str) -> MultiPoly:
        return self.coeffs.get(self.algebra.index(label), ZERO_POLY)

    def map_coeffs(self, fn) -> "Element":
        return Element(self.algebra, {k: fn(v) for k, v in self.coeffs.items()})

    def support(self) -> List[str]:
        return [self.algebra.labels[k] for k in sorted(self.coeffs)]

    def __str__(self):
        return format_linear(self.algebra.labels, self.coeffs)

    __repr__ = __str__


def format_coeff_times(c: MultiPoly, name: str) -> str:
    """Render c*name with the grammar's conventions; leading '-' kept."""
    if c == ONE:
        return name
    if c == -ONE:
        return "-" + name
    text = format_poly(c)
    if len(c.terms) == 1:
        (mono, s), = c.terms.items()
        if not (s.re and s.im):
            return f"{text}*{name}"
    return f"({text})*{name}"


def format_linear(labels: Sequence[str], coeffs: Mapping) -> str:
    if not coeffs:
        return "0"
    out = ""
    for k in sorted(coeffs):
        piece = format_coeff_times(coeffs[k], labels[k])
        if not out:
            out = piece
        elif piece.startswith("-"):
            out += " - " + piece[1:]
        else:
            out += " + " + piece
    return out


class LieAlgebra:
    """Finite-dimensional Lie algebra given by a sparse structure table."""

    def __reduce_ex__(self, protocol):
        # values returned by worker processes must refer to the shared sl(4)
        if self is _SL4:
            return (sl4, ())
        return super().__reduce_ex__(protocol)

    def __init__(self, labels: Sequence[str], structure: Mapping[Tuple[int, int], Mapping[int, Fraction]],
                 *, check_jacobi: bool = True):
        self.labels = tuple(labels)
        self.dim = len(self.labels)
        self._index = {name: k for k, name in enumerate(self.labels)}
        # table[i][j] = ((k, c), ...) meaning [x_i, x_j] = sum c x_k
        self.table: List[List[Tuple[Tuple[int, Fraction], ...]]] = [
            [() for _ in range(self.dim)] for _ in range(self.dim)]
        for (i, j), val in structure.items():
            self.table[i][j] = tuple(sorted((k, Fraction(c)) for k, c in val.items() if c))
        for i in range(self.dim):
            for j in range(self.dim):
                if dict(self.table[i][j]) != {k: -c for k, c in self.table[j][i]}:
                    raise AlgebraError(f"structure table not antisymmetric at {labels[i]}, {labels[j]}")
        self._killing = None
        if check_jacobi:
            bad = self.jacobi_violations()
            if bad:
                raise AlgebraError(f"Jacobi identity fails on {bad[:3]}")

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"unknown generator {label!r}") from None

    def basis(self, label: str) -> Element:
        return Element(self, {self.index(label): MultiPoly.const(1)})

    def basis_vector(self, k: int) -> Element:
        return Element(self, {k: MultiPoly.const(1)})

    def zero(self) -> Element:
        return Element(self)

    def element(self, coeffs: Mapping[str, object]) -> Element:
        return Element(self, {self.index(n): MultiPoly.coerce(c) for n, c in coeffs.items()})

    def bracket_basis(self, i: int, j: int):
        return self.table[i][j]

    def bracket(self, x: Element, y: Element) -> Element:
        if x.algebra is not self or y.algebra is not self:
            raise AlgebraError("bracket arguments belong to a different algebra")
        out: Dict[int, MultiPoly] = {}
        for i, ci in x.coeffs.items():
            row = self.table[i]
            for j, cj in y.coeffs.items():
                entries = row[j]
                if not entries:
                    continue
                cij = ci * cj
                for k, c in entries:
                    out[k] = out.get(k, ZERO_POLY) + cij.scale(c)
        return Element(self, out)

    def jacobi_violations(self) -> List[Tuple[str, str, str]]:
        bad = []
        for i, j, k in combinations(range(self.dim), 3):
            xi, xj, xk = (self.basis_vector(t) for t in (i, j, k))
            s = (self.bracket(self.bracket(xi, xj), xk)
                 + self.bracket(self.bracket(xj, xk), xi)
                 + self.bracket(self.bracket(xk, xi), xj))
            if s:
                bad.append((self.labels[i], self.labels[j], self.labels[k]))
        return bad

    def ad_matrix(self, i: int) -> List[List[Fraction]]:
        """Matrix of ad(x_i): column j holds [x_i, x_j]."""
        m = [[Fraction(0)] * self.dim for _ in range(self.dim)]
        for j in range(self.dim):
            for k, c in self.table[i][j]:
                m[k][j] = c
        return m

    def killing_matrix(self) -> List[List[Fraction]]:
        if self._killing is None:
            ads = [self.ad_matrix(i) for i in range(self.dim)]
            n = self.dim
            K = [[Fraction(0)] * n for _ in range(n)]
            for i in range(n):
                for j in range(i, n):
                    a, b = ads[i], ads[j]
                    t = sum((a[p][q] * b[q][p] for p in range(n) for q in range(n)
                             if a[p][q] and b[q][p]), Fraction(0))
                    K[i][j] = K[j][i] = t
            self._killing = K
        return self._killing

    def killing_form(self, x: Element, y: Element) -> MultiPoly:
        """Trace of ad(x) ad(y), exact."""
        K = self.killing_matrix()
        out = ZERO_POLY
        for i, ci in x.coeffs.items():
            for j, cj in y.coeffs.items():
                if K[i][j]:
                    out = out + (ci * cj).scale(K[i][j])
        return out

    def __repr__(self):
        return f"LieAlgebra(dim={self.dim})"


# --------------------------------------------------------------------------
# sl(4) from matrix units

def matrix_unit(r: int, c: int) -> List[List[int]]:
    m = [[0] * 4 for _ in range(4)]
    m[r - 1][c - 1] = 1
    return m


def label_matrix(label: str) -> List[List[int]]:
    """4x4 integer matrix of a Cartan-Weyl basis label."""
    if label in CARTAN:
        k = int(label[1])
        m = [[0] * 4 for _ in range(4)]
        m[k - 1][k - 1] = 1
        m[k][k] = -1
        return m
    if label.startswith("em"):
        r, c = ROOT_POSITIONS[int(label[2:])]
        return matrix_unit(c, r)
    r, c = ROOT_POSITIONS[int(label[1:])]
    return matrix_unit(r, c)


def _matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(4)) for j in range(4)] for i in range(4)]


def _commutator(a, b):
    ab, ba = _matmul(a, b), _matmul(b, a)
    return [[ab[i][j] - ba[i][j] for j in range(4)] for i in range(4)]


def decompose_matrix(m, labels=SL4_LABELS) -> Dict[int, Fraction]:
    """Coordinates of a traceless 4x4 matrix in the Cartan-Weyl basis."""
    if sum(m[i][i] for i in range(4)) != 0:
        raise AlgebraError("matrix is not traceless")
    idx = {name: k for k, name in enumerate(labels)}
    out: Dict[int, Fraction] = {}
    for a, (r, c) in ROOT_POSITIONS.items():
        if m[r - 1][c - 1]:
            out[idx[f"e{a}"]] = Fraction(m[r - 1][c - 1])
        if m[c - 1][r - 1]:
            out[idx[f"em{a}"]] = Fraction(m[c - 1][r - 1])
    # diag(d1..d4) = x1 h1 + x2 h2 + x3 h3 with x_k = d1 + ... + dk
    run = Fraction(0)
    for k in range(3):
        run += m[k][k]
        if run:
            out[idx[CARTAN[k]]] = run
    return out


def build_sl4(check_jacobi: bool = True) -> LieAlgebra:
    """sl(4,C) with structure constants computed from matrix units."""
    mats = [label_matrix(lbl) for lbl in SL4_LABELS]
    structure = {}
    for i, j in combinations(range(len(mats)), 2):
        val = decompose_matrix(_commutator(mats[i], mats[j]))
        if val:
            structure[(i, j)] = val
            structure[(j, i)] = {k: -c for k, c in val.items()}
    g = LieAlgebra(SL4_LABELS, structure, check_jacobi=check_jacobi)
    return g


_SL4 = None


def sl4() -> LieAlgebra:
    """Shared (immutable) sl(4) instance."""
    global _SL4
    if _SL4 is None:
        _SL4 = build_sl4()
    return _SL4


def element_matrix(x: Element) -> List[List[MultiPoly]]:
    """4x4 matrix of an sl(4) element in the defining representation."""
    out = [[ZERO_POLY] * 4 for _ in range(4)]
    for k, c in x.coeffs.items():
        m = label_matrix(x.algebra.labels[k])
        for r in range(4):
            for s in range(4):
                if m[r][s]:
                    out[r][s] = out[r][s] + c.scale(m[r][s])
    return out


def named_element(g: LieAlgebra, name: str) -> Element:
    """Basis labels plus the composite Cartans h4, h5, h6."""
    if name in COMPOSITE_CARTAN:
        return sum((g.basis(h) * c for h, c in zip(CARTAN, COMPOSITE_CARTAN[name]) if c), g.zero())
    return g.basis(name)


def root_of(label: str) -> Tuple[int, int, int]:
    """Root of a root-vector label in simple-root coordinates; Cartans -> 0."""
    if label in CARTAN:
        return (0, 0, 0)
    if label.startswith("em"):
        return tuple(-c for c in ROOT_COORDS[int(label[2:])])
    return ROOT_COORDS[int(label[1:])]


def label_of_root(root: Sequence[int]) -> str:
    root = tuple(root)
    for a, coords in ROOT_COORDS.items():
        if coords == root:
            return f"e{a}"
        if tuple(-c for c in coords) == root:
            return f"em{a}"
    raise KeyError(f"{root} is not a root of sl(4)")


# --------------------------------------------------------------------------
# conformal basis

PHYSICAL_NAMES = ("Mp", "Mm", "M3", "Lp", "Lm", "L3",
                  "P0", "P1", "P2", "P3", "K0", "K1", "K2", "K3", "D")
# real (hermitian-type) generators: M_i, L_i instead of M+-, L+-
REAL_PHYSICAL_NAMES = ("M1", "M2", "M3", "L1", "L2", "L3",
                       "P0", "P1", "P2", "P3", "K0", "K1", "K2", "K3", "D")


def conformal_basis(g: LieAlgebra) -> Dict[str, Element]:
    """The fifteen physical generators as combinations of the Cartan-Weyl basis."""
    e = {lbl: g.basis(lbl) for lbl in g.labels}
    i = MultiPoly.const(I)
    half = MultiPoly.const(Fraction(1, 2))
    h1, h2, h3 = e["h1"], e["h2"], e["h3"]
    return {
        "Mp": e["e1"] + e["em3"],
        "Mm": -(e["e3"] + e["em1"]),
        "M3": (h1 - h3) * (i * half),
        "Lp": (e["em3"] - e["e1"]) * i,
        "Lm": (e["e3"] - e["em1"]) * (-i),
        "L3": (h1 + h3) * half,
        "P1": -(e["e4"] + e["e5"]),
        "P2": (e["e4"] - e["e5"]) * i,
        "P3": (e["e2"] - e["e6"]) * i,
        "K1": e["em4"] - e["em5"],
        "K2": (e["em4"] + e["em5"]) * i,
        "K3": (e["em2"] - e["em6"]) * i,
        "P0": (e["e2"] + e["e6"]) * (-i),
        "K0": (e["em2"] + e["em6"]) * i,
        "D": (h1 + h2 * 2 + h3) * half,
    }


def real_conformal_basis(g: LieAlgebra) -> Dict[str, Element]:
    """Generators with M+- = M1 +- i M2 and L+- = L1 +- i L2 resolved."""
    gens = conformal_basis(g)
    half = MultiPoly.const(Fraction(1, 2))
    minus_half_i = MultiPoly.const(Scalar(0, Fraction(-1, 2)))
    out = {
        "M1": (gens["Mp"] + gens["Mm"]) * half,
        "M2": (gens["Mp"] - gens["Mm"]) * minus_half_i,
        "L1": (gens["Lp"] + gens["Lm"]) * half,
        "L2": (gens["Lp"] - gens["Lm"]) * minus_half_i,
    }
    out.update({k: v for k, v in gens.items() if k not in ("Mp", "Mm", "Lp", "Lm")})
    return {name: out[name] for name in REAL_PHYSICAL_NAMES}


def o42_generators(g: LieAlgebra) -> Dict[Tuple[int, int], Element]:
    """M_PQ (P<Q, P,Q in 0..5) reassembled from the physical generators.

    M_12 = M3, M_23 = M1, M_31 = M2, M_i0 = L_i, M_4mu = (P_mu - K_mu)/2,
    M_5mu = (P_mu + K_mu)/2, M_45 = D.
    """
    r = real_conformal_basis(g)
    half = MultiPoly.const(Fraction(1, 2))
    M: Dict[Tuple[int, int], Element] = {}

    def put(p, q, x):
        if p < q:
            M[(p, q)] = x
        else:
            M[(q, p)] = -x

    put(1, 2, r["M3"])
    put(2, 3, r["M1"])
    put(3, 1, r["M2"])
    for k in (1, 2, 3):
        put(k, 0, r[f"L{k}"])
    for mu in range(4):
        put(4, mu, (r[f"P{mu}"] - r[f"K{mu}"]) * half)
        put(5, mu, (r[f"P{mu}"] + r[f"K{mu}"]) * half)
    put(4, 5, r["D"])
    return M


O42_METRIC = (-1, 1, 1, 1, 1, -1)


def verify_o42_relations(g: LieAlgebra, eta: Sequence[int] = O42_METRIC):
    """Residuals of [M_PQ, M_RS] = eta_PS M_QR - eta_PR M_QS + eta_QR M_PS - eta_QS M_PR.

    Returns a list of (P, Q, R, S, residual) for every pair of index pairs
    (P<Q, R<S, (P,Q) < (R,S)) whose residual is nonzero.
    """
    M = o42_generators(g)

    def m(p, q):
        if p == q:
            return g.zero()
        return M[(p, q)] if p < q else -M[(q, p)]

    def eta_(p, q):
        return eta[p] if p == q else 0

    pairs = sorted(M)
    report = []
    for a, (p, q) in enumerate(pairs):
        for (r, s) in pairs[a:]:
            lhs = g.bracket(m(p, q), m(r, s))
            rhs = (m(q, r) * eta_(p, s) - m(q, s) * eta_(p, r)
                   + m(p, s) * eta_(q, r) - m(p, r) * eta_(q, s))
            res = lhs - rhs
            if res:
                report.append((p, q, r, s, res))
    return report


def o42_relations_up_to_factor(g: LieAlgebra, eta: Sequence[int] = O42_METRIC):
    """Find a global c with [M_PQ, M_RS] = c * (right side) on all pairs, if any."""
    M = o42_generators(g)

    def m(p, q):
        if p == q:
            return g.zero()
        return M[(p, q)] if p < q else -M[(q, p)]

    def eta_(p, q):
        return eta[p] if p == q else 0

    ratio = None
    pairs = sorted(M)
    for a, (p, q) in enumerate(pairs):
        for (r, s) in pairs[a:]:
            lhs = g.bracket(m(p, q), m(r, s))
            rhs = (m(q, r) * eta_(p, s) - m(q, s) * eta_(p, r)
                   + m(p, s) * eta_(q, r) - m(p, r) * eta_(q, s))
            if not rhs:
                if lhs:
                    return None
                continue
            k = next(iter(rhs.coeffs))
            c = lhs.coeffs.get(k, ZERO_POLY).constant_value() / rhs.coeffs[k].constant_value()
            if lhs != rhs * c:
                return None
            if ratio is None:
                ratio = c
            elif ratio != c:
                return None
    return ratio


# --------------------------------------------------------------------------
# gradings

def ad_eigenvalue(g: LieAlgebra, grader: Element, k: int):
    """Eigenvalue of ad(grader) on basis vector k, or None if not an eigenvector."""
    img = g.bracket(grader, g.basis_vector(k))
    if not img:
        return Scalar(0)
    if set(img.coeffs) != {k}:
        return None
    c = img.coeffs[k]
    if not c.is_constant():
        return None
    return c.constant_value()


def d_weight_decomposition(x: Element, grader: Element) -> List[Tuple[Scalar, Element]]:
    """Split x into ad(grader)-eigencomponents, sorted by weight.

    The grader must act diagonally on the basis (any Cartan element does).
    """
    g = x.algebra
    buckets: Dict[Scalar, Dict[int, MultiPoly]] = {}
    for k, c in x.coeffs.items():
        w = ad_eigenvalue(g, grader, k)
        if w is None:
            raise AlgebraError(f"ad of grader is not diagonal on {g.labels[k]}")
        buckets.setdefault(w, {})[k] = c
    out = [(w, Element(g, cs)) for w, cs in buckets.items()]
    out.sort(key=lambda wc: (wc[0].re, wc[0].im))
    return out


def dilatation(g: LieAlgebra) -> Element:
    return conformal_basis(g)["D"]


def rank(rows: Iterable[Sequence[Scalar]]) -> int:
    """Rank of a matrix over Q(i) by exact Gaussian elimination."""
    m = [[Scalar.coerce(v) for v in row] for row in rows]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if not m[i][c].is_zero()), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = m[r][c].inverse()
        for i in range(len(m)):
            if i != r and not m[i][c].is_zero():
                f = m[i][c] * inv
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
    return r


def coefficient_matrix(elements: Sequence[Element]) -> List[List[Scalar]]:
    """Rows = elements, columns = basis; coefficients must be constants."""
    g = elements[0].algebra
    return [[x.coeffs.get(k, ZERO_POLY).constant_value() for k in range(g.dim)] for x in elements]
