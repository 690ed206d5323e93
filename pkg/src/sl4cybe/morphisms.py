"""Involutions (reality conditions), Weyl reflections, the diagram flip and
their action on the algebra and on bivectors.

Every map is stored by the images of the basis vectors.  Antilinear maps
conjugate the coefficients of their argument first; formal parameters are
treated as real unless a conjugation rule (e.g. a1* = a3) is supplied.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .arith import MultiPoly, ONE_POLY, Scalar, ZERO_POLY, random_point
from .frobenius import determinant
from .lie import (CARTAN, Element, LieAlgebra, label_of_root, root_of)
from .wedge import BiVector, wedge

AUTOMORPHISM = "automorphism"
ANTI_AUTOMORPHISM = "anti-automorphism"

# composite root vectors as brackets of earlier basis vectors
COMPOSITE_DEFS = {
    "e4": ("e1", "e2"), "e5": ("e2", "e3"), "e6": ("e1", "e5"),
    "em4": ("em2", "em1"), "em5": ("em3", "em2"), "em6": ("em5", "em1"),
}
SIMPLE = ("e1", "e2", "e3", "em1", "em2", "em3")

ADMISSIBLE_EPS = ((1, -1, 1), (-1, 1, -1), (-1, -1, -1))


class MorphismError(ValueError):
    pass


ParamConj = Optional[Mapping[str, MultiPoly]]


class AlgebraMap:
    """Linear or antilinear map given by the images of the basis vectors."""

    def __init__(self, algebra: LieAlgebra, images: Sequence[Element], *, antilinear: bool = False,
                 kind: str = AUTOMORPHISM, name: str = "", param_conj: ParamConj = None,
                 check: bool = True):
        if len(images) != algebra.dim:
            raise ValueError("need one image per basis vector")
        self.algebra = algebra
        self.images = list(images)
        self.antilinear = antilinear
        self.kind = kind
        self.name = name
        self.param_conj = dict(param_conj) if param_conj else None
        if check:
            bad = self.kind_defects()
            if bad:
                i, j = bad[0]
                raise MorphismError(f"{name or 'map'} is not an {kind}: fails on [{i}, {j}]")
            if not self.is_invertible():
                raise MorphismError(f"{name or 'map'} is not invertible")

    # application ------------------------------------------------------------
    def _conj(self, c: MultiPoly, param_conj: ParamConj) -> MultiPoly:
        if not self.antilinear:
            return c
        rule = param_conj if param_conj is not None else self.param_conj
        return c.conj(rule)

    def apply(self, x: Element, param_conj: ParamConj = None) -> Element:
        out = self.algebra.zero()
        for k, c in x.coeffs.items():
            out = out + self.images[k] * self._conj(c, param_conj)
        return out

    __call__ = apply

    def image(self, label: str) -> Element:
        return self.images[self.algebra.index(label)]

    def compose(self, other: "AlgebraMap", name: str = "") -> "AlgebraMap":
        """self o other."""
        images = [self.apply(y) for y in other.images]
        kind = AUTOMORPHISM if self.kind == other.kind else ANTI_AUTOMORPHISM
        return AlgebraMap(self.algebra, images, antilinear=self.antilinear != other.antilinear,
                          kind=kind, name=name or f"{self.name}{other.name}",
                          param_conj=self.param_conj or other.param_conj)

    def __mul__(self, other):
        return self.compose(other)

    def __neg__(self):
        return AlgebraMap(self.algebra, [-y for y in self.images], antilinear=self.antilinear,
                          kind=self.kind, name=f"-{self.name}", param_conj=self.param_conj,
                          check=False)

    def substitute(self, assignment) -> "AlgebraMap":
        return AlgebraMap(self.algebra, [y.map_coeffs(lambda c: c.substitute(assignment)) for y in self.images],
                          antilinear=self.antilinear, kind=self.kind, name=self.name,
                          param_conj=self.param_conj)

    # checks -----------------------------------------------------------------
    def kind_defects(self) -> List[Tuple[str, str]]:
        g = self.algebra
        bad = []
        for i, j in combinations(range(g.dim), 2):
            lhs = self.apply(g.bracket(g.basis_vector(i), g.basis_vector(j)))
            a, b = self.images[i], self.images[j]
            rhs = g.bracket(a, b) if self.kind == AUTOMORPHISM else g.bracket(b, a)
            if lhs != rhs:
                bad.append((g.labels[i], g.labels[j]))
        return bad

    def is_invertible(self, seed: int = 0) -> bool:
        """Nonzero determinant at some rational point proves invertibility."""
        params = set()
        for y in self.images:
            for c in y.coeffs.values():
                params |= c.parameters()
        rng = random.Random(seed)
        n = self.algebra.dim
        for _ in range(3):
            pt = random_point(params, rng)
            m = [[self.images[j].coeffs.get(i, ZERO_POLY).substitute(pt).constant_value()
                  for j in range(n)] for i in range(n)]
            if not determinant(m).is_zero():
                return True
        return False

    def is_involutive(self) -> bool:
        g = self.algebra
        return all(self.apply(self.images[k]) == g.basis_vector(k) for k in range(g.dim))

    def preserves_root_grading(self) -> bool:
        """Each root vector maps to a single root vector times a unit monomial."""
        g = self.algebra
        for k, lbl in enumerate(g.labels):
            if lbl in CARTAN:
                continue
            img = self.images[k]
            if len(img.coeffs) != 1 or g.labels[next(iter(img.coeffs))] in CARTAN:
                return False
            if not next(iter(img.coeffs.values())).is_monomial():
                return False
        return True

    def table(self) -> List[Tuple[str, str]]:
        return [(lbl, str(self.images[k])) for k, lbl in enumerate(self.algebra.labels)]

    def serialize(self) -> str:
        return "\n".join(f"{lbl} -> {img}" for lbl, img in self.table())

    def __repr__(self):
        tag = "antilinear " if self.antilinear else ""
        return f"AlgebraMap({self.name!r}, {tag}{self.kind})"


def identity_map(g: LieAlgebra) -> AlgebraMap:
    return AlgebraMap(g, [g.basis_vector(k) for k in range(g.dim)], name="id")


def extend_from_generators(g: LieAlgebra, gen_images: Mapping[str, Element], *, kind: str,
                           antilinear: bool, name: str, param_conj: ParamConj = None,
                           cartan_images: Mapping[str, Element] | None = None) -> AlgebraMap:
    """Extend images of e+-1..3 (and optionally h1..h3) to the whole basis.

    Composite root vectors go through their defining brackets and, unless
    given, h_j = [e_j, e_-j].  The result is checked exhaustively.
    """
    imgs: Dict[str, Element] = dict(gen_images)

    def br(a: Element, b: Element) -> Element:
        return g.bracket(a, b) if kind == AUTOMORPHISM else g.bracket(b, a)

    for lbl, (x, y) in COMPOSITE_DEFS.items():
        assert g.bracket(g.basis(x), g.basis(y)) == g.basis(lbl), lbl
        imgs[lbl] = br(imgs[x], imgs[y])
    for j in (1, 2, 3):
        h = f"h{j}"
        assert g.bracket(g.basis(f"e{j}"), g.basis(f"em{j}")) == g.basis(h)
        derived = br(imgs[f"e{j}"], imgs[f"em{j}"])
        if cartan_images and h in cartan_images:
            if cartan_images[h] != derived:
                raise MorphismError(f"{name}: image of {h} inconsistent with [e{j}, em{j}]")
            imgs[h] = cartan_images[h]
        else:
            imgs[h] = derived
    images = [imgs[lbl] for lbl in g.labels]
    return AlgebraMap(g, images, antilinear=antilinear, kind=kind, name=name, param_conj=param_conj)


# --------------------------------------------------------------------------
# the two families of *-operations

def build_star_case_i(g: LieAlgebra) -> AlgebraMap:
    """h_j* = -h_{4-j}, e_{+-j}* = e_{+-(4-j)}; antilinear anti-automorphism."""
    gens = {}
    cart = {}
    for j in (1, 2, 3):
        gens[f"e{j}"] = g.basis(f"e{4 - j}")
        gens[f"em{j}"] = g.basis(f"em{4 - j}")
        cart[f"h{j}"] = -g.basis(f"h{4 - j}")
    star = extend_from_generators(g, gens, kind=ANTI_AUTOMORPHISM, antilinear=True,
                                  name="star3", cartan_images=cart)
    if not star.is_involutive():
        raise MorphismError("star3 is not involutive")
    return star


def build_star_case_ii(g: LieAlgebra, eps: Sequence[int]) -> AlgebraMap:
    """h_j* = h_j, e_{+-j}* = eps_j e_{-+j}; antilinear anti-automorphism."""
    eps = tuple(int(e) for e in eps)
    if eps not in ADMISSIBLE_EPS:
        raise MorphismError(f"eps={eps} is not one of the admissible triples {ADMISSIBLE_EPS}")
    gens = {}
    cart = {}
    for j, ej in zip((1, 2, 3), eps):
        gens[f"e{j}"] = g.basis(f"em{j}") * ej
        gens[f"em{j}"] = g.basis(f"e{j}") * ej
        cart[f"h{j}"] = g.basis(f"h{j}")
    name = "star4(" + ",".join(f"{e:+d}" for e in eps) + ")"
    star = extend_from_generators(g, gens, kind=ANTI_AUTOMORPHISM, antilinear=True,
                                  name=name, cartan_images=cart)
    if not star.is_involutive():
        raise MorphismError(f"{name} is not involutive")
    return star


def theta(star: AlgebraMap) -> AlgebraMap:
    """theta(x) = -x*: an antilinear automorphism whose fixed points form a real form."""
    if not star.antilinear or star.kind != ANTI_AUTOMORPHISM:
        raise MorphismError("theta needs an antilinear anti-automorphism")
    return AlgebraMap(star.algebra, [-y for y in star.images], antilinear=True, kind=AUTOMORPHISM,
                      name=f"theta[{star.name}]", param_conj=star.param_conj)


# --------------------------------------------------------------------------
# Weyl reflections and the diagram automorphism

def _simple_reflection(i: int, root: Tuple[int, int, int]) -> Tuple[int, int, int]:
    cartan = ((2, -1, 0), (-1, 2, -1), (0, -1, 2))
    # <root, alpha_i^vee> = sum_k m_k A[k][i]
    pairing = sum(m * cartan[k][i - 1] for k, m in enumerate(root))
    out = list(root)
    out[i - 1] -= pairing
    return tuple(out)


def weyl_action(word: Sequence[int], root: Sequence[int]) -> Tuple[int, int, int]:
    """s_{w1} s_{w2} ... applied to a root (rightmost letter first)."""
    out = tuple(root)
    for i in reversed(tuple(word)):
        out = _simple_reflection(i, out)
    return out


def torus_factor(root: Sequence[int], params: Mapping[str, MultiPoly]) -> MultiPoly:
    """a^root = a1**m1 * a2**m2 * a3**m3 (Laurent)."""
    out = ONE_POLY
    for k, m in enumerate(root):
        if m:
            out = out * (params[f"a{k + 1}"] ** m)
    return out


def default_reflection_params() -> Dict[str, MultiPoly]:
    return {f"a{k}": MultiPoly.var(f"a{k}") for k in (1, 2, 3)}


def _params(params) -> Dict[str, MultiPoly]:
    p = default_reflection_params()
    if params:
        p.update({k: MultiPoly.coerce(v) for k, v in params.items()})
    return p


def reflection_pattern(g: LieAlgebra, word: Sequence[int] | int, params=None) -> Dict[str, Element]:
    """Unsigned pattern e_alpha -> a^{w alpha} e_{w alpha} on every root vector."""
    word = (word,) if isinstance(word, int) else tuple(word)
    params = _params(params)
    out = {}
    for lbl in g.labels:
        if lbl in CARTAN:
            continue
        target = weyl_action(word, root_of(lbl))
        out[lbl] = g.basis(label_of_root(target)) * torus_factor(target, params)
    return out


def printed_sigma1_table(g: LieAlgebra, params=None) -> Dict[str, Element]:
    """The explicit table for sigma_1 (a4 = a1 a2, a5 = a2 a3, a6 = a1 a2 a3)."""
    p = _params(params)
    a1, a2, a3 = p["a1"], p["a2"], p["a3"]
    a4, a5, a6 = a1 * a2, a2 * a3, a1 * a2 * a3
    b = g.basis
    return {
        "e1": b("em1") * a1 ** -1, "em1": b("e1") * a1,
        "e2": b("e4") * a4, "em2": b("em4") * a4 ** -1,
        "e3": b("e3") * a3, "em3": b("em3") * a3 ** -1,
        "e4": b("e2") * a2, "em4": b("em2") * a2 ** -1,
        "e5": b("e6") * a6, "em5": b("em6") * a6 ** -1,
        "e6": b("e5") * a5, "em6": b("em5") * a5 ** -1,
    }


def printed_beta_table(g: LieAlgebra) -> Dict[str, Element]:
    """beta(e+-1)=e+-3, beta(e+-2)=e+-2, beta(e+-4)=e+-5, beta(e+-6)=e+-6 (+ inverses)."""
    swap = {"1": "3", "3": "1", "2": "2", "4": "5", "5": "4", "6": "6"}
    out = {}
    for lbl in g.labels:
        if lbl in CARTAN:
            continue
        pre, k = (lbl[:2], lbl[2:]) if lbl.startswith("em") else (lbl[:1], lbl[1:])
        out[lbl] = g.basis(pre + swap[k])
    return out


@dataclass
class Completion:
    """Outcome of the sign completion search for a root-permuting automorphism.

    `map` is the preferred completion (fewest disagreements with the
    unsigned pattern, then most + signs); `alternatives` holds every valid
    completion in the same order.
    """
    map: AlgebraMap
    signs: Dict[str, int]
    deviations: List[str] = field(default_factory=list)
    alternatives: List[Tuple[Dict[str, int], AlgebraMap]] = field(default_factory=list)

    @property
    def candidates_valid(self) -> int:
        return len(self.alternatives)


def complete_signs(g: LieAlgebra, pattern: Mapping[str, Element], *, name: str,
                   require_involutive: bool = False) -> Completion:
    """Search signs on the six simple-root images so the bracket extension is an
    automorphism; prefer the fewest disagreements with the full `pattern`."""
    found = []
    last_error = None
    for signs in product((1, -1), repeat=len(SIMPLE)):
        gens = {lbl: pattern[lbl] * s for lbl, s in zip(SIMPLE, signs)}
        try:
            phi = extend_from_generators(g, gens, kind=AUTOMORPHISM, antilinear=False, name=name)
        except MorphismError as exc:
            last_error = exc
            continue
        if require_involutive and not phi.is_involutive():
            continue
        dev = [lbl for lbl, img in pattern.items() if phi.image(lbl) != img]
        key = (len(dev), [-s for s in signs])
        found.append((key, phi, dict(zip(SIMPLE, signs)), dev))
    if not found:
        raise MorphismError(f"no sign completion makes {name} an automorphism ({last_error})")
    found.sort(key=lambda t: t[0])
    _, phi, signs, dev = found[0]
    return Completion(phi, signs, dev, [(s, m) for _, m, s, _ in found])


def build_weyl_reflection(g: LieAlgebra, i: int, params: Mapping[str, object] | None = None) -> AlgebraMap:
    """sigma_i: the Weyl reflection s_i lifted with torus parameters a1, a2, a3."""
    return weyl_reflection_completion(g, i, params).map


def weyl_reflection_completion(g: LieAlgebra, i: int, params: Mapping[str, object] | None = None) -> Completion:
    if i not in (1, 2, 3):
        raise ValueError("reflection index must be 1, 2 or 3")
    pattern = printed_sigma1_table(g, params) if i == 1 else reflection_pattern(g, i, params)
    return complete_signs(g, pattern, name=f"sigma{i}")


def weyl_element_completion(g: LieAlgebra, word: Sequence[int],
                            params: Mapping[str, object] | None = None) -> Completion:
    """Lift of the Weyl group element s_{w1}...s_{wk} with a single torus factor."""
    word = tuple(word)
    if not word or any(i not in (1, 2, 3) for i in word):
        raise ValueError("word letters must be 1, 2 or 3")
    return complete_signs(g, reflection_pattern(g, word, params),
                          name="sigma" + "".join(str(i) for i in word))


def build_weyl_element(g: LieAlgebra, word: Sequence[int], params=None) -> AlgebraMap:
    return weyl_element_completion(g, word, params).map


def build_beta(g: LieAlgebra) -> AlgebraMap:
    return beta_completion(g).map


def beta_completion(g: LieAlgebra) -> Completion:
    """Diagram flip alpha1 <-> alpha3, closest involutive automorphism to the table."""
    return complete_signs(g, printed_beta_table(g), name="beta", require_involutive=True)


# --------------------------------------------------------------------------
# conjugation rules for the reflection parameters (b_i identified with a_i)

def star3_param_rule() -> Dict[str, MultiPoly]:
    """b1* = b3, b2* = b2 (read as a1* = a3, a3* = a1, a2* = a2)."""
    a = default_reflection_params()
    return {"a1": a["a3"], "a2": a["a2"], "a3": a["a1"]}


def star4_param_rule() -> Dict[str, MultiPoly]:
    """b_i* b_i = 1 (read as a_i* = 1/a_i)."""
    return {f"a{k}": MultiPoly.var(f"a{k}", -1) for k in (1, 2, 3)}


def commuting_lift(completion: Completion, star: AlgebraMap, param_conj: ParamConj = None):
    """First valid sign completion that commutes with `star`, or None.

    The signs of a lifted Weyl element are fixed only up to a torus element
    with entries +-1, so commutation is a property of the family of lifts.
    """
    for signs, phi in completion.alternatives:
        if commute_check(phi, star, param_conj)[0]:
            return signs, phi
    return None


def commute_check(phi: AlgebraMap, star: AlgebraMap, param_conj: ParamConj = None):
    """(phi o * == * o phi on every basis vector, list of failing labels)."""
    g = phi.algebra
    bad = []
    for k, lbl in enumerate(g.labels):
        x = g.basis_vector(k)
        lhs = phi.apply(star.apply(x, param_conj), param_conj)
        rhs = star.apply(phi.apply(x, param_conj), param_conj)
        if lhs != rhs:
            bad.append(lbl)
    return (not bad, bad)


# --------------------------------------------------------------------------
# action on bivectors and reality

def tensor_square_apply(phi: AlgebraMap, r: BiVector, param_conj: ParamConj = None) -> BiVector:
    """(phi (x) phi) r, conjugating coefficients when phi is antilinear."""
    g = r.algebra
    out = BiVector(g)
    for (i, j), c in r.coeffs.items():
        c2 = phi._conj(c, param_conj)
        out = out + wedge(phi.images[i], phi.images[j]) * c2
    return out


@dataclass
class RealityVerdict:
    verdict: str                      # "real", "anti-real" or "neither"
    constraint: Dict[str, str] = field(default_factory=dict)   # parameter -> "real"/"imaginary"

    @property
    def admits(self) -> bool:
        return self.verdict in ("real", "anti-real")

    def __str__(self):
        if not self.constraint:
            return self.verdict
        cons = ", ".join(f"{k} {v}" for k, v in sorted(self.constraint.items()))
        return f"{self.verdict} ({cons})"


def reality_check(r: BiVector, star: AlgebraMap) -> RealityVerdict:
    """Is (theta (x) theta) r = +r or -r, theta = -*?

    Parameters are first taken real; failing that, every assignment of
    "real"/"imaginary" to the free parameters is tried and the first one
    that works is reported.
    """
    th = theta(star)
    if r.is_zero():
        return RealityVerdict("real")
    params = sorted(r.parameters())
    for choice in product(("real", "imaginary"), repeat=len(params)):
        rule = {p: MultiPoly.var(p) * (1 if c == "real" else -1) for p, c in zip(params, choice)}
        img = tensor_square_apply(th, r, rule)
        cons = {p: c for p, c in zip(params, choice)}
        if img == r:
            return RealityVerdict("real", cons)
        if img == -r:
            return RealityVerdict("anti-real", cons)
    return RealityVerdict("neither")


@dataclass
class Eigen:
    star_value: Optional[Scalar]      # c with X* = c X, None if not an eigenvector
    theta_value: Optional[Scalar]
    star_image: Element


def real_form_eigencheck(gens: Mapping[str, Element], star: AlgebraMap) -> Dict[str, Eigen]:
    """For each generator X find c with X* = c X (and theta X = -c X)."""
    out = {}
    for name, x in gens.items():
        img = star.apply(x)
        c = None
        if x:
            k = next(iter(x.coeffs))
            ratio_num = img.coeffs.get(k, ZERO_POLY)
            if ratio_num.is_constant() and x.coeffs[k].is_constant():
                cand = ratio_num.constant_value() / x.coeffs[k].constant_value()
                if img == x * MultiPoly.const(cand):
                    c = cand
        out[name] = Eigen(c, -c if c is not None else None, img)
    return out
