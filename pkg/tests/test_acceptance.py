"""Acceptance criteria, all at zero tolerance (every computation is exact).

Each criterion prints one PASS/FAIL line; the lines are also collected and
repeated in the pytest terminal summary.  Run this file directly
(``python3 tests/test_acceptance.py``) to get only the twelve lines.

Criteria 2 and 3 are evaluated on the catalog entries exactly as printed.
Criteria 4, 5, 8 and 9 use the adjudicated entries (the verbatim form when
it solves CYBE, otherwise the selected minimal repair).
"""

from __future__ import annotations

import time
from itertools import combinations

import pytest

from sl4cybe.catalog import RMATRIX_NAMES, compare_up_to_scalar, parse_expression, read_catalog_text
from sl4cybe.frobenius import (form_from_functional, generic_nonexistence, pfaffian, rmatrix_from_functional,
                               standard_parabolics)
from sl4cybe.lie import (coefficient_matrix, conformal_basis, dilatation, rank, real_conformal_basis, sl4,
                         verify_o42_relations)
from sl4cybe.morphisms import commuting_lift, real_form_eigencheck, reality_check, tensor_square_apply
from sl4cybe.oracle import cybe_matrix, trivector_matrix
from sl4cybe.report import FUNCTIONAL_TARGET, Context, _maps, adjudications, entries, sigma2_pairing
from sl4cybe.wedge import (adjoint_action_triv, canonical_trivector, multivector_weights, schouten_mixed,
                           schouten_self)

RESULTS: dict = {}
D10 = [f"r10_{k}{x}" for k in (1, 3) for x in "abcde"]


def _ctx() -> Context:
    return Context(read_catalog_text(), ())


def _adjudicated(ctx, name):
    a = adjudications(ctx)[name]
    return a.value if a.value is not None else entries(ctx)[name].value


def _record(number: int, title: str, ok: bool, detail: str):
    line = f"{'PASS' if ok else 'FAIL'}  criterion {number:2d} {title}: {detail}"
    RESULTS[number] = line
    print(line)
    return ok


# --------------------------------------------------------------------------
# the twelve criteria; each returns (ok, detail)

def criterion_1(ctx):
    g = sl4()
    triples = list(combinations(range(g.dim), 3))
    bad = g.jacobi_violations()
    wrong = [f"[e{i},em{j}]" for i in (1, 2, 3) for j in (1, 2, 3)
             if g.bracket(g.basis(f"e{i}"), g.basis(f"em{j}")) != (g.basis(f"h{j}") if i == j else g.zero())]
    ok = len(triples) == 455 and not bad and not wrong
    return ok, f"{len(triples)} triples, {len(bad)} Jacobi violations, {len(wrong)} wrong [e_i,e_-j]"


def criterion_2(ctx):
    cat = entries(ctx)
    notes = []
    ok = True
    for name in ("r8_1", "r8_2"):
        t = time.perf_counter()
        res = schouten_self(cat[name].value)
        dt = time.perf_counter() - t
        zero = res.is_zero() and dt < 1.0
        ok &= zero
        note = f"{name} {'zero' if res.is_zero() else f'{len(res.coeffs)} nonzero components'} ({dt:.2f}s)"
        a = adjudications(ctx)[name]
        if not a.verbatim_ok and a.value is not None:
            note += f"; repair '{a.selected}' solves"
        notes.append(note)
    return ok, "; ".join(notes)


def criterion_3(ctx):
    r = entries(ctx)["r12"].value
    res = schouten_self(r)
    parts = res.split_by_degree("lam")
    nonzero = [d for d in range(3) if d in parts and not parts[d].is_zero()]
    ok = res.is_zero() and not nonzero
    detail = ("residual zero" if res.is_zero() else
              f"residual nonzero in lam-degrees {nonzero}")
    a = adjudications(ctx)["r12"]
    if not a.verbatim_ok and a.value is not None:
        rparts = schouten_self(a.value).split_by_degree("lam")
        if all(p.is_zero() for p in rparts.values()):
            detail += f"; repair '{a.selected}' vanishes in every lam-degree"
    return ok, detail


def criterion_4(ctx):
    adj = adjudications(ctx)
    passing = []
    repaired = []
    for name in D10:
        a = adj[name]
        value = a.value
        if value is not None and not schouten_self(value).is_zero():
            value = None
        if value is not None:
            passing.append(name)
            if not a.verbatim_ok:
                repaired.append(f"{name} ({a.selected})")
    ok = len(passing) == 10
    return ok, f"{len(passing)} of 10 pass; repaired: " + (", ".join(repaired) or "none")


def criterion_5(ctx):
    g = sl4()
    cat = entries(ctx)
    p = standard_parabolics(g)
    bad = []
    for fname, (pname, rname) in FUNCTIONAL_TARGET.items():
        gstar = cat[fname].value
        if pfaffian(form_from_functional(gstar, p[pname])).is_zero():
            bad.append(f"{fname} degenerate")
            continue
        r = rmatrix_from_functional(gstar, p[pname], verify=False)
        if not schouten_self(r).is_zero():
            bad.append(f"{fname} inverse fails CYBE")
            continue
        cmp = compare_up_to_scalar(r, _adjudicated(ctx, rname), search=False)
        if not cmp.match or cmp.scalar is None or cmp.scalar[0].is_zero():
            bad.append(f"{fname} does not match {rname}")
    return not bad, f"{10 - len(bad)} of 10 reproduce their entry" + ("; " + ", ".join(bad) if bad else "")


def criterion_6(ctx):
    p = standard_parabolics(sl4())
    e2, pf2 = generic_nonexistence(p["P2"])
    e1, pf1 = generic_nonexistence(p["P1"])
    e3, pf3 = generic_nonexistence(p["P3"])
    ok = not e2 and pf2.is_zero() and e1 and e3
    return ok, (f"P2 generic Pfaffian {'zero' if pf2.is_zero() else 'nonzero'}; "
                f"P1 {len(pf1.terms)} terms, P3 {len(pf3.terms)} terms")


def criterion_7(ctx):
    _, stars = _maps()
    wrong = []
    signs = []
    for name in RMATRIX_NAMES:
        r = _adjudicated(ctx, name)
        for sname, (star, _) in stars.items():
            v = reality_check(r, star)
            want = name in ("r8_1", "r8_2") and sname == "star3"
            if v.admits != want:
                wrong.append(f"{name}/{sname}: {v}")
            elif want:
                signs.append(f"{name} {v}")
    return not wrong, "; ".join(signs) + ("; unexpected: " + ", ".join(wrong) if wrong else
                                          "; all others neither under the four stars")


def criterion_8(ctx):
    comps, _ = _maps()
    r1, r2 = _adjudicated(ctx, "r8_1"), _adjudicated(ctx, "r8_2")
    notes = []
    ok = True
    for name in ("sigma2", "sigma1sigma3"):
        c = compare_up_to_scalar(tensor_square_apply(comps[name].map, r1), r2)
        ok &= c.match
        notes.append(f"{name}: r8_1 -> r8_2 " + (f"scalar {c.scalar_text()}" if c.match else "no match"))
    table = sigma2_pairing(ctx)
    matched = [x for x, ys in table.items() if ys]
    ok &= len(matched) == 5
    notes.append(f"sigma2 pairs {len(matched)} of 5 r10_3x with some r10_1y")
    return ok, "; ".join(notes)


def criterion_9(ctx):
    pairs = [(y, x) for x, ys in sigma2_pairing(ctx).items() for y in ys]
    nonzero = {}
    for x in "abcde":
        for y in "abcde":
            r, s = _adjudicated(ctx, f"r10_1{x}"), _adjudicated(ctx, f"r10_3{y}")
            nonzero[(f"r10_1{x}", f"r10_3{y}")] = not schouten_mixed(r, s).is_zero()
    if not pairs:
        return False, (f"no sigma2-matched pairs to test; {sum(nonzero.values())} of 25 mixed brackets nonzero")
    zero = [p for p in pairs if not nonzero[p]]
    return not zero, f"{len(pairs)} matched pairs, {len(zero)} with zero mixed bracket"


def criterion_10(ctx):
    g = sl4()
    comps, stars = _maps()
    notes = []
    rk = rank(coefficient_matrix(list(conformal_basis(g).values())))
    scan = verify_o42_relations(g)
    notes.append(f"rank {rk}; relation scan emitted ({len(scan)} deviating pairs)")
    star3 = stars["star3"][0]
    eig = real_form_eigencheck(real_conformal_basis(g), star3)
    values = {k: v.theta_value for k, v in eig.items()}
    pm1 = all(v is not None and v in (1, -1) for v in values.values())
    uniform = pm1 and len(set(values.values())) == 1
    odd = sorted(k for k, v in values.items() if v != values.get("M1"))
    notes.append("theta eigenvalues uniform" if uniform else
                 f"theta eigenvalues not uniform (differ on {', '.join(odd)})")
    listed = {"star3": ("sigma2", "sigma1sigma3", "beta")}
    listed.update({s: ("sigma2", "beta") for s in stars if s != "star3"})
    missing = []
    for sname, names in listed.items():
        star, rule = stars[sname]
        missing += [f"{n} vs {sname}" for n in names if commuting_lift(comps[n], star, rule) is None]
    notes.append("commutation lists reproduced" if not missing else "not commuting: " + ", ".join(missing))
    return rk == 15 and uniform and not missing, "; ".join(notes)


def criterion_11(ctx):
    g = sl4()
    D = dilatation(g)
    notes = []
    ok = True
    for name in ("r8_1", "r8_2"):
        try:
            w = multivector_weights(entries(ctx)[name].value, D)
            notes.append(f"{name} weights {sorted({str(v) for v in w.values()})}")
        except Exception as exc:       # a term that is not a D-eigenvector
            ok = False
            notes.append(f"{name}: {exc}")
    omega = canonical_trivector(g)
    wts = {str(v) for v in multivector_weights(omega, D).values()}
    invariant = all(adjoint_action_triv(g.basis_vector(k), omega).is_zero() for k in range(g.dim))
    ok &= not omega.is_zero() and wts == {"0"} and invariant
    notes.append(f"Omega {len(omega.coeffs)} components, weight {','.join(sorted(wts))}, "
                 + ("ad-invariant" if invariant else "not invariant"))
    return ok, "; ".join(notes)


def criterion_12(ctx):
    g = sl4()
    a, b = parse_expression("h1^e1", g), parse_expression("e1^em1", g)
    sa, sb = schouten_self(a), schouten_self(b)
    ma, mb = cybe_matrix(a), cybe_matrix(b)
    ok = sa.is_zero() and not ma and not sb.is_zero() and mb and trivector_matrix(sb) == mb
    return ok, f"h1^e1: zero/zero; e1^em1: {len(sb.coeffs)} components, {len(mb)} matrix entries, agree"


CRITERIA = [
    (1, "algebra soundness", criterion_1),
    (2, "CYBE d=8 as printed", criterion_2),
    (3, "CYBE d=12 as printed, per lam-degree", criterion_3),
    (4, "CYBE d=10 with repairs", criterion_4),
    (5, "Frobenius reconstruction", criterion_5),
    (6, "non-existence on P2", criterion_6),
    (7, "reality", criterion_7),
    (8, "Weyl transport", criterion_8),
    (9, "incompatibility", criterion_9),
    (10, "conformal basis and involutions", criterion_10),
    (11, "gradings", criterion_11),
    (12, "oracle sanity", criterion_12),
]


@pytest.fixture(scope="module")
def ctx():
    return _ctx()


@pytest.mark.parametrize("number,title,fn", CRITERIA, ids=[f"criterion_{n:02d}" for n, _, _ in CRITERIA])
def test_criterion(ctx, number, title, fn):
    ok, detail = fn(ctx)
    assert _record(number, title, ok, detail), RESULTS[number]


if __name__ == "__main__":
    c = _ctx()
    for number, title, fn in CRITERIA:
        _record(number, title, *fn(c))
