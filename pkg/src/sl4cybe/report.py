"""The verification driver: runs every check against the catalog and
assembles a deterministic report.

Each section is a plain function of the run context returning a list of
checks.  Sections are independent, so they may run in worker processes;
the report is always assembled in section order.
"""

from __future__ import annotations

import json
import multiprocessing
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from functools import lru_cache
from itertools import combinations, product
from typing import Dict, List, Optional, Sequence, Tuple

from . import __version__
from .arith import I, MultiPoly, Scalar, parse_scalar
from .catalog import (FUNCTIONAL_NAMES, RMATRIX_NAMES, CatalogEntry, catalog_dict, catalog_hash,
                      compare_up_to_scalar, emit, minimal_repairs, parse_catalog, parse_expression,
                      read_catalog_text)
from .frobenius import (SingularFormError, form_from_functional, functional_repairs,
                        generic_nonexistence, pfaffian, rmatrix_from_functional, standard_parabolics)
from .lie import (AlgebraError, coefficient_matrix, conformal_basis, dilatation, rank,
                  real_conformal_basis, sl4, verify_o42_relations)
from .morphisms import (ADMISSIBLE_EPS, AlgebraMap, beta_completion,
                        build_star_case_i, build_star_case_ii, build_weyl_element,
                        commute_check, commuting_lift, real_form_eigencheck, reality_check,
                        star3_param_rule, star4_param_rule, tensor_square_apply, theta,
                        weyl_element_completion, weyl_reflection_completion)
from .oracle import cybe_matrix, trivector_matrix
from .wedge import (BiVector, adjoint_action_triv, canonical_trivector, cybe_residual,
                    multivector_weights, schouten_mixed, schouten_self)

PASS, FAIL, INFO = "pass", "fail", "info"

ASSUMPTIONS = (
    "b_i in the commutation conditions are identified with the reflection parameters a_i",
    "sigma1 sigma3 is lifted as one Weyl group element carrying a single torus factor a^(w alpha)",
    "reality means (theta x theta) r = +r or -r with theta = -*",
    "catalog misprints are adjudicated by the smallest repair that satisfies CYBE; "
    "the verbatim failure is reported separately",
)

FAMILY_DIM = {"r12": 12, "r8_1": 8, "r8_2": 8}
FUNCTIONAL_TARGET = {f"g{k}{x}": (f"P{k}", f"r10_{k}{x}") for k in (1, 3) for x in "abcde"}


@dataclass
class Check:
    id: str
    subject: str
    verdict: str
    witness: str = ""
    required: bool = True
    mismatch: bool = False      # info-level disagreement with a printed claim

    @property
    def failed(self) -> bool:
        return self.verdict == FAIL


@dataclass
class Report:
    checks: List[Check]
    engine_version: str
    catalog_hash: str
    params: Dict[str, str] = field(default_factory=dict)
    strict: bool = False

    @property
    def required_failures(self) -> List[Check]:
        return [c for c in self.checks if c.failed and (c.required or self.strict)]

    @property
    def ok(self) -> bool:
        return not self.required_failures

    def summary(self) -> Dict[str, int]:
        out = {PASS: 0, FAIL: 0, INFO: 0}
        for c in self.checks:
            out[c.verdict] += 1
        out["required_failures"] = len(self.required_failures)
        return out

    def to_dict(self) -> dict:
        return {
            "engine_version": self.engine_version,
            "catalog_hash": self.catalog_hash,
            "params": dict(sorted(self.params.items())),
            "strict": self.strict,
            "assumptions": list(ASSUMPTIONS),
            "summary": self.summary(),
            "checks": [asdict(c) for c in self.checks],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    def to_text(self) -> str:
        lines = [f"engine {self.engine_version}  catalog sha256:{self.catalog_hash}"]
        if self.params:
            lines.append("params " + ", ".join(f"{k}={v}" for k, v in sorted(self.params.items())))
        for c in self.checks:
            tag = c.verdict.upper() + ("" if c.required or c.verdict != FAIL else "*")
            lines.append(f"{tag:5} {c.id:38} {c.subject:24} {c.witness}")
        s = self.summary()
        lines.append(f"summary: {s[PASS]} pass, {s[FAIL]} fail, {s[INFO]} info, "
                     f"{s['required_failures']} required failure(s)")
        return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# run context (hashable so the expensive pieces can be cached per process)

@dataclass(frozen=True)
class Context:
    catalog_text: str
    params: Tuple[Tuple[str, str], ...] = ()

    def assignment(self) -> Dict[str, Scalar]:
        return {k: parse_scalar(v) for k, v in self.params}


def parse_params(items: Sequence[str]) -> Tuple[Tuple[str, str], ...]:
    """["a=0", "lam=1/2"] -> (("a", "0"), ("lam", "1/2")), validating names and values."""
    from .arith import ALIASES, Parameter
    out = {}
    for item in items:
        if "=" not in item:
            raise ValueError(f"parameter assignment {item!r} is not of the form name=value")
        k, v = (s.strip() for s in item.split("=", 1))
        k = str(Parameter(ALIASES.get(k, k)))
        parse_scalar(v)
        out[k] = v
    return tuple(sorted(out.items()))


@lru_cache(maxsize=4)
def entries(ctx: Context) -> Dict[str, CatalogEntry]:
    g = sl4()
    cat = catalog_dict(parse_catalog(ctx.catalog_text, g))
    if ctx.params:
        assignment = ctx.assignment()
        for e in cat.values():
            if isinstance(e.value, BiVector):
                e.value = e.value.substitute(assignment)
    return cat


_REPAIRS: Dict[Tuple[Context, str], list] = {}


def repairs_for(ctx: Context, name: str) -> list:
    """Minimal repairs of the printed expression, specialised to the --params values.

    The search always runs on the generic expression; substituting afterwards
    keeps every repair a solution because substitution is a ring homomorphism.
    """
    if (ctx, name) in _REPAIRS:
        return _REPAIRS[(ctx, name)]
    e = entries(ctx)[name]
    reps = minimal_repairs(e.expression, sl4(), carrier_dim=FAMILY_DIM.get(name, 10))
    if ctx.params:
        assignment = ctx.assignment()
        for rep in reps:
            rep.value = rep.value.substitute(assignment)
    _REPAIRS[(ctx, name)] = reps
    return reps


def _failing_rmatrices(ctx: Context) -> List[str]:
    cat = entries(ctx)
    return [n for n in RMATRIX_NAMES if not cybe_residual(cat[n].value).is_solution]


@dataclass
class Adjudication:
    name: str
    verbatim_ok: bool
    value: Optional[BiVector]          # verbatim if it passes, otherwise the selected repair
    repairs: list
    selected: str = ""
    reason: str = ""


@lru_cache(maxsize=4)
def adjudications(ctx: Context) -> Dict[str, Adjudication]:
    g = sl4()
    cat = entries(ctx)
    out = {}
    for name in RMATRIX_NAMES:
        r = cat[name].value
        if cybe_residual(r).is_solution:
            out[name] = Adjudication(name, True, r, [])
            continue
        reps = repairs_for(ctx, name)
        out[name] = Adjudication(name, False, reps[0].value if reps else None, reps,
                                 reps[0].describe() if reps else "", "first repair" if reps else "")
    # several repairs: prefer the one reproduced by the Frobenius construction
    # or by Weyl transport of an already adjudicated partner
    p = standard_parabolics(g)
    for fname, (pname, rname) in FUNCTIONAL_TARGET.items():
        a = out[rname]
        if len(a.repairs) > 1 and fname in cat:
            try:
                derived = rmatrix_from_functional(cat[fname].value, p[pname], verify=False)
            except SingularFormError:
                continue
            _select(a, [rep for rep in a.repairs
                        if compare_up_to_scalar(rep.value, derived, search=False).match],
                    f"reproduced by the form of {fname} on {pname}")
    a1, a2 = out["r8_1"], out["r8_2"]
    if len(a2.repairs) > 1 and a1.value is not None:
        moved = tensor_square_apply(build_weyl_element(g, (1, 3)), a1.value)
        _select(a2, [rep for rep in a2.repairs if compare_up_to_scalar(moved, rep.value).match],
                "image of the adjudicated r8_1 under sigma1 sigma3")
    return out


def _select(a: Adjudication, agreeing, reason: str):
    if len(agreeing) == 1:
        a.value = agreeing[0].value
        a.selected = agreeing[0].describe()
        a.reason = reason


def _adjudicated_value(ctx: Context, name: str) -> BiVector:
    a = adjudications(ctx)[name]
    return a.value if a.value is not None else entries(ctx)[name].value


@lru_cache(maxsize=1)
def _maps():
    g = sl4()
    comps = {
        "sigma1": weyl_reflection_completion(g, 1),
        "sigma2": weyl_reflection_completion(g, 2),
        "sigma3": weyl_reflection_completion(g, 3),
        "sigma1sigma3": weyl_element_completion(g, (1, 3)),
        "beta": beta_completion(g),
    }
    stars = {"star3": (build_star_case_i(g), star3_param_rule())}
    for eps in ADMISSIBLE_EPS:
        s = build_star_case_ii(g, eps)
        stars[s.name] = (s, star4_param_rule())
    return comps, stars


def _fmt(x) -> str:
    return str(x)


# --------------------------------------------------------------------------
# sections

def section_algebra(ctx: Context) -> List[Check]:
    g = sl4()
    out = []
    bad = g.jacobi_violations()
    n = len(list(combinations(range(g.dim), 3)))
    out.append(Check("01.algebra.jacobi", "sl(4)", PASS if not bad else FAIL,
                     f"{n} basis triples, {len(bad)} violations"))
    cartan = ((2, -1, 0), (-1, 2, -1), (0, -1, 2))
    errors = []
    for i in (1, 2, 3):
        for j in (1, 2, 3):
            got = g.bracket(g.basis(f"e{i}"), g.basis(f"em{j}"))
            want = g.basis(f"h{j}") if i == j else g.zero()
            if got != want:
                errors.append(f"[e{i},em{j}]")
            got = g.bracket(g.basis(f"h{i}"), g.basis(f"e{j}"))
            if got != g.basis(f"e{j}") * cartan[j - 1][i - 1]:
                errors.append(f"[h{i},e{j}]")
    out.append(Check("01.algebra.chevalley", "sl(4)", PASS if not errors else FAIL,
                     "[e_i,e_-j] = delta_ij h_j and [h_i,e_j] = A_ji e_j" if not errors
                     else "wrong: " + ", ".join(errors)))
    return out


def section_catalog(ctx: Context) -> List[Check]:
    cat = entries(ctx)
    out = []
    rm = [n for n in RMATRIX_NAMES if n in cat]
    fn = [n for n in FUNCTIONAL_NAMES if n in cat]
    out.append(Check("02.catalog.count", "catalog", PASS if len(rm) == 13 and len(fn) == 10 else FAIL,
                     f"{len(rm)} r-matrices, {len(fn)} functionals"))
    for name in rm:
        r = cat[name].value
        want = FAMILY_DIM.get(name, 10)
        d = r.carrier_dim()
        out.append(Check("02.catalog.carrier_dim", name, PASS if d == want else FAIL,
                         f"carrier dimension {d} (family {want})"))
    unstable = []
    for name in rm + fn:
        text = emit(cat[name].value)
        again = emit(parse_expression(text, sl4()))
        if again != text:
            unstable.append(name)
    out.append(Check("02.catalog.round_trip", "catalog", PASS if not unstable else FAIL,
                     "emit . parse . emit = emit on every entry" if not unstable
                     else "unstable: " + ", ".join(unstable)))
    return out


def section_conformal(ctx: Context) -> List[Check]:
    g = sl4()
    out = []
    gens = conformal_basis(g)
    rk = rank(coefficient_matrix(list(gens.values())))
    out.append(Check("03.conformal.rank", "15 generators", PASS if rk == 15 else FAIL, f"rank {rk}"))
    residuals = verify_o42_relations(g)
    out.append(Check("03.conformal.o42_scan", "M_PQ relations", INFO,
                     f"{len(residuals)} of 120 generator pairs deviate from the o(4,2) relations "
                     f"under the stated dictionary", required=False, mismatch=bool(residuals)))
    _, stars = _maps()
    real = real_conformal_basis(g)
    for sname, (star, _) in stars.items():
        eig = real_form_eigencheck(real, star)
        values = {k: v.theta_value for k, v in eig.items()}
        text = ", ".join(f"{k}:{_fmt(v) if v is not None else 'none'}" for k, v in values.items())
        if sname == "star3":
            all_pm1 = all(v is not None and v in (Scalar(1), Scalar(-1)) for v in values.values())
            uniform = all_pm1 and len(set(values.values())) == 1
            out.append(Check("03.conformal.theta_eigen", sname, PASS if uniform else FAIL,
                             ("uniform; " if uniform else "not uniform; ") + "theta eigenvalues " + text))
            out.append(_closure_check(g, real, theta(star)))
        else:
            out.append(Check("03.conformal.theta_eigen", sname, INFO, "theta eigenvalues " + text,
                             required=False))
    return out


def _closure_check(g, real, th) -> Check:
    """The theta-fixed span of the generators (X or iX) is closed under brackets."""
    fixed = []
    for name, x in real.items():
        tx = th.apply(x)
        if tx == x:
            fixed.append((name, x))
        elif tx == -x:
            fixed.append(("i" + name, x * MultiPoly.const(I)))
        else:
            return Check("03.conformal.closure", "theta-fixed form", FAIL, f"{name} is not a theta eigenvector")
    bad = [f"[{a},{b}]" for (a, x), (b, y) in combinations(fixed, 2)
           if th.apply(g.bracket(x, y)) != g.bracket(x, y)]
    return Check("03.conformal.closure", "theta-fixed form", PASS if not bad else FAIL,
                 f"{len(fixed)} fixed generators, brackets stay fixed" if not bad else ", ".join(bad[:5]))


def section_involutions(ctx: Context) -> List[Check]:
    g = sl4()
    comps, stars = _maps()
    out = []
    for sname, (star, _) in stars.items():
        inv = star.is_involutive()
        th = theta(star)
        th2 = th.compose(th)
        ok = inv and not star.kind_defects() and not th.kind_defects() and th2.is_involutive() and all(
            th2.images[k] == g.basis_vector(k) for k in range(g.dim))
        out.append(Check("04.star.build", sname, PASS if ok else FAIL,
                         "antilinear anti-automorphism, involutive; theta automorphism, theta^2 = id"))
    s3 = stars["star3"][0]
    out.append(Check("04.star.examples", "star3",
                     PASS if s3.image("e4") == g.basis("e5") and s3.image("e6") == g.basis("e6") else FAIL,
                     f"e4* = {s3.image('e4')}, e6* = {s3.image('e6')}"))
    for name, comp in comps.items():
        out.append(Check("04.map.build", name, PASS if comp.map.preserves_root_grading() or name == "beta" else FAIL,
                         f"automorphism; {comp.candidates_valid} valid sign completions; chosen signs "
                         + ",".join(f"{k}:{'+' if v > 0 else '-'}" for k, v in comp.signs.items())))
    b = comps["beta"]
    out.append(Check("04.map.beta_table", "beta", INFO,
                     ("printed table is not an automorphism; closest involutive completion differs on "
                      + ", ".join(b.deviations) + " (" + ", ".join(f"{l} -> {b.map.image(l)}" for l in b.deviations) + ")")
                     if b.deviations else "printed table is an automorphism",
                     required=False, mismatch=bool(b.deviations)))
    s1 = comps["sigma1"]
    out.append(Check("04.map.sigma1_table", "sigma1", PASS if not s1.deviations else FAIL,
                     "printed table is an automorphism with all signs +; sigma1(h1) = "
                     + str(s1.map.image("h1"))))
    # commutation table
    table = {}
    for sname, (star, rule) in stars.items():
        for name, comp in comps.items():
            lift = commuting_lift(comp, star, rule)
            table[(sname, name)] = lift is not None
            if lift is None:
                _, bad = commute_check(comp.map, star, rule)
                wit = "does not commute for any sign completion; fails on " + ",".join(bad[:6])
            else:
                signs, _ = lift
                flips = [k for k, v in signs.items() if v < 0]
                wit = "commutes" + (f" (signs flipped on {','.join(flips)})" if flips else "")
            out.append(Check("04.commute.table", f"{name} vs {sname}", INFO, wit, required=False))
    listed = {"star3": ("sigma2", "sigma1sigma3", "beta")}
    for sname in stars:
        if sname != "star3":
            listed[sname] = ("sigma2", "beta")
    for sname, names in listed.items():
        missing = [n for n in names if not table[(sname, n)]]
        out.append(Check("04.commute.listed", sname, PASS if not missing else FAIL,
                         "commuting: " + ", ".join(n for n in comps if table[(sname, n)])
                         + ("" if not missing else "; listed but not commuting: " + ", ".join(missing))))
    absent = [n for n in ("sigma1", "sigma3") if table[("star3", n)]]
    out.append(Check("04.commute.sigma1_alone", "star3", PASS if not absent else FAIL,
                     "sigma1 and sigma3 alone do not commute with star3" if not absent
                     else "unexpectedly commuting: " + ", ".join(absent)))
    return out


def section_cybe(ctx: Context) -> List[Check]:
    cat = entries(ctx)
    adj = adjudications(ctx)
    out = []
    for name in RMATRIX_NAMES:
        a = adj[name]
        res = cybe_residual(cat[name].value)
        if a.verbatim_ok:
            out.append(Check("05.cybe", name, PASS, "zero residual as printed"))
        elif a.value is not None:
            out.append(Check("05.cybe", name, PASS,
                             f"adjudicated: {a.selected}" + (f" ({a.reason})" if a.reason else "")))
        else:
            out.append(Check("05.cybe", name, FAIL,
                             f"{len(res.residual.coeffs)} nonzero residual components; no repair found"))
        if not a.verbatim_ok:
            out.append(Check("05.cybe.verbatim", name, INFO,
                             f"printed form fails: {len(res.residual.coeffs)} nonzero residual components",
                             required=False, mismatch=True))
            for k, rep in enumerate(a.repairs):
                out.append(Check("05.cybe.repair", name, INFO,
                                 f"candidate {k + 1}: {rep.describe()} => {rep.expression}", required=False))
        used = a.value if a.value is not None else cat[name].value
        note = "" if a.verbatim_ok else "adjudicated form; "
        for param in sorted(used.parameters()):
            top = max(used.split_by_degree(param))
            res_parts = schouten_self(used).split_by_degree(param)
            for d in range(2 * top + 1):
                part = res_parts.get(d)
                ok = part is None or part.is_zero()
                out.append(Check(f"05.cybe.residual_degree.{param}", f"{name}[{param}^{d}]",
                                 PASS if ok else FAIL,
                                 note + ("residual part vanishes" if ok else
                                         f"{len(part.coeffs)} nonzero components")))
            for d, part in used.split_by_degree(param).items():
                ok = cybe_residual(part).is_solution
                out.append(Check(f"05.cybe.part.{param}", f"{name}[{param}^{d}]",
                                 PASS if ok else FAIL,
                                 note + ("this part alone solves CYBE" if ok else "this part alone fails CYBE"),
                                 required=(name == "r12")))
    return out


def section_reality(ctx: Context) -> List[Check]:
    cat = entries(ctx)
    _, stars = _maps()
    out = []
    ok = True
    for name in RMATRIX_NAMES:
        for sname, (star, _) in stars.items():
            v = reality_check(cat[name].value, star)
            expect_real = name in ("r8_1", "r8_2") and sname == "star3"
            good = v.admits == expect_real
            ok &= good
            out.append(Check("06.reality", f"{name} vs {sname}", INFO, str(v), required=False))
    out.append(Check("06.reality.d8_only", "catalog", PASS if ok else FAIL,
                     "only r8_1, r8_2 admit a reality condition, and only under star3" if ok
                     else "verdicts disagree with the eight-dimensional-only claim"))
    adj = adjudications(ctx)
    for name in ("r8_1", "r8_2"):
        a = adj[name]
        if not a.verbatim_ok and a.value is not None:
            v = reality_check(a.value, stars["star3"][0])
            out.append(Check("06.reality.adjudicated", f"{name} vs star3", INFO, str(v), required=False))
    return out


def section_frobenius(ctx: Context) -> List[Check]:
    g = sl4()
    cat = entries(ctx)
    adj = adjudications(ctx)
    p = standard_parabolics(g)
    out = []
    for key, want in (("B", 9), ("P1", 10), ("P2", 10), ("P3", 10), ("P23", 12)):
        sub = p[key] if key != "B" else None
        if key == "B":
            from .frobenius import borel_plus
            sub = borel_plus(g)
        out.append(Check("07.parabolic.dim", key, PASS if sub.dim == want and sub.closed else FAIL,
                         f"dimension {sub.dim}, closed"))
    for fname, (pname, rname) in FUNCTIONAL_TARGET.items():
        gstar = cat[fname].value
        B = form_from_functional(gstar, p[pname])
        pf = pfaffian(B)
        out.append(Check("07.frobenius.pfaffian", f"{fname} on {pname}", PASS if pf else FAIL, f"Pf = {pf}"))
        if not pf:
            continue
        r = rmatrix_from_functional(gstar, p[pname], verify=False)
        ok = cybe_residual(r).is_solution
        out.append(Check("07.frobenius.cybe", fname, PASS if ok else FAIL, "inverse form solves CYBE"))
        verbatim = compare_up_to_scalar(r, cat[rname].value, search=False)
        a = adj[rname]
        target = a.value if a.value is not None else cat[rname].value
        cmp = compare_up_to_scalar(r, target, search=False)
        if cmp.match:
            wit = f"matches {rname}, scalar {cmp.scalar_text()}"
            if not verbatim.match:
                wit += " (adjudicated form)"
            out.append(Check("07.frobenius.match", f"{fname} -> {rname}", PASS, wit))
        else:
            fixes = functional_repairs(gstar, p[pname], target,
                                       lambda x, y: compare_up_to_scalar(x, y, search=False).match)
            wit = f"inverse form differs from {rname}"
            if fixes:
                wit += "; " + " | ".join(f"{why} gives {f} which reproduces it" for why, f in fixes)
            out.append(Check("07.frobenius.match", f"{fname} -> {rname}", FAIL, wit))
            if fixes:
                out.append(Check("07.frobenius.functional_repair", fname, INFO,
                                 " | ".join(f"{f}" for _, f in fixes), required=False, mismatch=True))
    for key, want in (("P1", True), ("P2", False), ("P3", True)):
        exists, pf = generic_nonexistence(p[key])
        wit = "generic Pfaffian is the zero polynomial" if not exists else \
            f"generic Pfaffian nonzero ({len(pf.terms)} terms)"
        out.append(Check("07.frobenius.generic", key, PASS if exists == want else FAIL, wit))
    exists, pf = generic_nonexistence(p["P23"])
    out.append(Check("07.frobenius.generic", "P23", INFO,
                     f"generic Pfaffian {'nonzero' if exists else 'zero'} ({len(pf.terms)} terms)", required=False))
    return out


def _sign_torus_matches(moved: BiVector, candidates: Dict[str, BiVector]) -> List[Tuple[str, Tuple[int, ...], str]]:
    hits = []
    for signs in product((1, -1), repeat=3):
        t = moved.substitute({f"a{k + 1}": s for k, s in enumerate(signs)})
        for y, target in candidates.items():
            c = compare_up_to_scalar(target, t, search=False)
            if c.match:
                hits.append((y, signs, c.scalar_text()))
    return hits


def _pairing(moved_by: AlgebraMap, ctx: Context) -> Dict[str, List[str]]:
    targets = {f"r10_1{y}": _adjudicated_value(ctx, f"r10_1{y}") for y in "abcde"}
    table = {}
    for x in "abcde":
        src = _adjudicated_value(ctx, f"r10_3{x}")
        hits = _sign_torus_matches(tensor_square_apply(moved_by, src), targets)
        table[f"r10_3{x}"] = sorted({h[0] for h in hits})
    return table


def sigma2_pairing(ctx: Context) -> Dict[str, List[str]]:
    comps, _ = _maps()
    return _pairing(comps["sigma2"].map, ctx)


def section_transport(ctx: Context) -> List[Check]:
    g = sl4()
    cat = entries(ctx)
    comps, _ = _maps()
    out = []
    r1, r2 = cat["r8_1"].value, cat["r8_2"].value
    for name, phi, check_id in (("sigma2", comps["sigma2"].map, "08.transport.d8"),
                                ("sigma1sigma3", comps["sigma1sigma3"].map, "08.transport.d8")):
        c = compare_up_to_scalar(tensor_square_apply(phi, r1), r2)
        wit = (f"scalar {c.scalar_text()}, parameter map "
               + (", ".join(f"{k} -> {v}" for k, v in c.parameter_map.items()) or "identity")) if c.match \
            else "no scalar or monomial parameter map relates the image to r8_2"
        out.append(Check(check_id, f"{name}: r8_1 -> r8_2", PASS if c.match else FAIL, wit))
    prod = comps["sigma1"].map.compose(comps["sigma3"].map)
    c = compare_up_to_scalar(tensor_square_apply(prod, r1), r2)
    out.append(Check("08.transport.d8.product", "sigma1 o sigma3: r8_1 -> r8_2", INFO,
                     f"match {c.match}, scalar {c.scalar_text()}", required=False))
    a1, a2 = adjudications(ctx)["r8_1"], adjudications(ctx)["r8_2"]
    if a1.value is not None and a2.value is not None and not (a1.verbatim_ok and a2.verbatim_ok):
        c = compare_up_to_scalar(tensor_square_apply(comps["sigma1sigma3"].map, a1.value), a2.value)
        out.append(Check("08.transport.d8.adjudicated", "sigma1sigma3", INFO,
                         f"adjudicated r8_1 -> adjudicated r8_2: {c.match}", required=False))
    table = sigma2_pairing(ctx)
    unmatched = [x for x, ys in table.items() if not ys]
    for x, ys in table.items():
        out.append(Check("08.transport.d10.sigma2", x, INFO, "-> " + (", ".join(ys) if ys else "none"),
                     required=False))
    out.append(Check("08.transport.d10", "sigma2: r10_3x -> r10_1y", PASS if not unmatched else FAIL,
                     f"{5 - len(unmatched)} of 5 matched (sign torus a_i = +-1 allowed)"))
    bt = build_weyl_element(g, (1, 1)).compose(comps["beta"].map)
    for x, ys in _pairing(bt, ctx).items():
        out.append(Check("08.transport.d10.beta", x, INFO, "-> " + (", ".join(ys) if ys else "none"),
                         required=False))
    return out


def section_incompatibility(ctx: Context) -> List[Check]:
    out = []
    nonzero = {}
    for x in "abcde":
        for y in "abcde":
            r, s = _adjudicated_value(ctx, f"r10_1{x}"), _adjudicated_value(ctx, f"r10_3{y}")
            m = schouten_mixed(r, s)
            nonzero[(x, y)] = not m.is_zero()
            out.append(Check("09.mixed", f"r10_1{x}, r10_3{y}", INFO,
                             "nonzero" if nonzero[(x, y)] else "zero", required=False))
    comps, _ = _maps()
    bt = build_weyl_element(sl4(), (1, 1)).compose(comps["beta"].map)
    bpairs = [(y[-1], x[-1]) for x, ys in _pairing(bt, ctx).items() for y in ys]
    bzero = [f"(1{a},3{b})" for a, b in bpairs if not nonzero[(a, b)]]
    out.append(Check("09.incompatible.beta", "beta-matched pairs", INFO,
                     f"{len(bpairs)} pairs" + (", all nonzero" if not bzero else "; zero: " + ", ".join(bzero)),
                     required=False))
    pairs = [(ys, x[-1]) for x, ys in sigma2_pairing(ctx).items()]
    matched = [(y[-1], x) for ys, x in pairs for y in ys]
    if not matched:
        out.append(Check("09.incompatible", "sigma2-matched pairs", FAIL,
                         f"no sigma2-matched pairs exist; {sum(nonzero.values())} of 25 mixed brackets nonzero"))
    else:
        zero = [f"(1{a},3{b})" for a, b in matched if not nonzero[(a, b)]]
        out.append(Check("09.incompatible", "sigma2-matched pairs", PASS if not zero else FAIL,
                         f"{len(matched)} pairs" + (", all nonzero" if not zero else "; zero: " + ", ".join(zero))))
    return out


def section_gradings(ctx: Context) -> List[Check]:
    g = sl4()
    cat = entries(ctx)
    D = dilatation(g)
    out = []
    for name in ("r8_1", "r8_2"):
        try:
            w = multivector_weights(cat[name].value, D)
        except AlgebraError as exc:
            out.append(Check("10.grading.d8", name, FAIL, str(exc)))
            continue
        vals = sorted({str(v) for v in w.values()})
        homogeneous = len(vals) == 1
        out.append(Check("10.grading.d8", name, PASS if homogeneous else FAIL,
                         f"every term is a D-weight eigenvector; weights {', '.join(vals)}"
                         + ("; homogeneous" if homogeneous else "; not homogeneous")))
    omega = canonical_trivector(g)
    wts = {str(v) for v in multivector_weights(omega, D).values()}
    not_inv = [g.labels[k] for k in range(g.dim) if not adjoint_action_triv(g.basis_vector(k), omega).is_zero()]
    ok = not omega.is_zero() and wts == {"0"} and not not_inv
    out.append(Check("10.trivector", "Omega", PASS if ok else FAIL,
                     f"{len(omega.coeffs)} components, D-weight {','.join(sorted(wts))}, "
                     + ("ad-invariant" if not not_inv else "not invariant under " + ",".join(not_inv))))
    return out


def section_oracle(ctx: Context) -> List[Check]:
    g = sl4()
    cat = entries(ctx)
    out = []
    for text, want_zero in (("h1^e1", True), ("e1^em1", False)):
        r = parse_expression(text, g)
        s = schouten_self(r)
        m = cybe_matrix(r)
        ok = s.is_zero() == want_zero and (not m) == want_zero and trivector_matrix(s) == m
        out.append(Check("11.oracle", text, PASS if ok else FAIL,
                         f"Schouten {'zero' if s.is_zero() else 'nonzero'}, matrix oracle "
                         f"{'zero' if not m else f'{len(m)} nonzero entries'}"))
    disagree = []
    for name in RMATRIX_NAMES:
        r = cat[name].value
        if trivector_matrix(schouten_self(r)) != cybe_matrix(r):
            disagree.append(name)
    out.append(Check("11.oracle.catalog", "13 r-matrices", PASS if not disagree else FAIL,
                     "residuals agree entrywise in the 64x64 representation" if not disagree
                     else "disagree: " + ", ".join(disagree)))
    return out


SECTIONS = (section_algebra, section_catalog, section_conformal, section_involutions, section_cybe,
            section_reality, section_frobenius, section_transport, section_incompatibility,
            section_gradings, section_oracle)
SECTION_NAMES = tuple(f.__name__ for f in SECTIONS)


def _run_repairs(args) -> list:
    ctx, name = args
    return repairs_for(ctx, name)


def _pool(jobs: int) -> ProcessPoolExecutor:
    # forked workers inherit the parent's warm caches (adjudications, maps)
    methods = multiprocessing.get_all_start_methods()
    ctx = multiprocessing.get_context("fork") if "fork" in methods else None
    return ProcessPoolExecutor(max_workers=jobs, mp_context=ctx)


_SECTION_RESULTS: Dict[Tuple[str, Context], List[Check]] = {}


def _run_section(args) -> List[Check]:
    name, ctx = args
    if (name, ctx) not in _SECTION_RESULTS:
        _SECTION_RESULTS[(name, ctx)] = globals()[name](ctx)
    return [replace(c) for c in _SECTION_RESULTS[(name, ctx)]]


def clear_caches() -> None:
    """Forget per-process section results (adjudications and maps stay cached)."""
    _SECTION_RESULTS.clear()


def run_all(catalog_path=None, params: Sequence[str] = (), jobs: int = 1, strict: bool = False,
            sections: Optional[Sequence[str]] = None) -> Report:
    text = read_catalog_text(catalog_path)
    ctx = Context(text, parse_params(params))
    entries(ctx)        # aborts early on a catalog that does not load
    names = [n for n in SECTION_NAMES if sections is None or n in sections]
    work = [(n, ctx) for n in names]
    if jobs > 1:
        # the repair searches dominate the run time; spread them out first
        failing = _failing_rmatrices(ctx)
        with _pool(jobs) as pool:
            for name, reps in zip(failing, pool.map(_run_repairs, [(ctx, n) for n in failing])):
                _REPAIRS[(ctx, name)] = reps
        adjudications(ctx)
        _maps()
        with _pool(jobs) as pool:
            results = list(pool.map(_run_section, work))
        for (name, _), part in zip(work, results):
            _SECTION_RESULTS.setdefault((name, ctx), [replace(c) for c in part])
    else:
        results = [_run_section(w) for w in work]
    checks = [c for part in results for c in part]
    if strict:
        for c in checks:
            if c.mismatch:
                c.verdict = FAIL
    return Report(checks, __version__, catalog_hash(catalog_path), dict(ctx.params), strict)
