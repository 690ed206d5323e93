import pytest
from hypothesis import given, strategies as st

from sl4cybe.arith import I, MultiPoly
from sl4cybe.catalog import parse_expression
from sl4cybe.lie import sl4
from sl4cybe.morphisms import (ADMISSIBLE_EPS, MorphismError, beta_completion,
                               build_star_case_i, build_star_case_ii, build_weyl_element,
                               commuting_lift, extend_from_generators,
                               printed_sigma1_table, reality_check, star3_param_rule, star4_param_rule,
                               tensor_square_apply, theta, weyl_action, weyl_element_completion,
                               weyl_reflection_completion)
from sl4cybe.wedge import cybe_residual

G = sl4()
STARS = [build_star_case_i(G)] + [build_star_case_ii(G, e) for e in ADMISSIBLE_EPS]
elements = st.dictionaries(st.sampled_from(G.labels), st.sampled_from([1, -2, "i", "1/2"]), max_size=4)


def _elt(d):
    return G.element({k: parse_expression(str(v)) for k, v in d.items()})


@pytest.mark.parametrize("star", STARS, ids=lambda s: s.name)
def test_star_is_an_involutive_antilinear_anti_automorphism(star):
    assert star.is_involutive()
    assert star.kind_defects() == []
    x = G.basis("e1") * MultiPoly.const(I)
    assert star.apply(x) == star.apply(G.basis("e1")) * MultiPoly.const(-I)


@pytest.mark.parametrize("star", STARS, ids=lambda s: s.name)
@given(elements, elements)
def test_theta_is_an_automorphism_squaring_to_one(star, x, y):
    th = theta(star)
    x, y = _elt(x), _elt(y)
    assert th.apply(th.apply(x)) == x
    assert th.apply(G.bracket(x, y)) == G.bracket(th.apply(x), th.apply(y))


def test_star_case_i_examples(g):
    s = STARS[0]
    assert s.image("e4") == g.basis("e5")
    assert s.image("e6") == g.basis("e6")


def test_inadmissible_signs_are_rejected(g):
    with pytest.raises(MorphismError):
        build_star_case_ii(g, (1, 1, 1))


def test_weyl_action():
    assert weyl_action((1,), (1, 0, 0)) == (-1, 0, 0)
    assert weyl_action((1,), (0, 1, 0)) == (1, 1, 0)
    assert weyl_action((1, 3), (1, 1, 1)) == (0, 1, 0)


@pytest.mark.parametrize("i", [1, 2, 3])
def test_reflections_are_automorphisms(g, i):
    comp = weyl_reflection_completion(g, i)
    phi = comp.map
    assert phi.kind_defects() == []
    assert phi.is_invertible()
    assert phi.preserves_root_grading()


def test_printed_sigma1_table_is_an_automorphism(g):
    comp = weyl_reflection_completion(g, 1)
    assert comp.deviations == []
    assert all(comp.map.image(k) == v for k, v in printed_sigma1_table(g).items())


def test_printed_beta_needs_sign_corrections(g):
    comp = beta_completion(g)
    assert sorted(comp.deviations) == ["e4", "e5", "em4", "em5"]
    assert comp.map.image("e4") == -g.basis("e5")
    assert comp.map.is_involutive()


def test_extension_rejects_non_homomorphism(g):
    with pytest.raises(MorphismError):
        extend_from_generators(g, {"e1": g.basis("e1"), "e2": g.basis("e1"), "e3": g.basis("e3"),
                                   "em1": g.basis("em1"), "em2": g.basis("em2"), "em3": g.basis("em3")},
                               kind="automorphism", antilinear=False, name="bad")


def test_automorphisms_preserve_cybe_solutions(cat):
    phi = build_weyl_element(G, (1, 3))
    for name in ("r10_1a", "r10_3d", "r10_1c"):
        assert cybe_residual(tensor_square_apply(phi, cat[name].value)).is_solution


def test_sigma1sigma3_commutes_with_star_case_i(g):
    comp = weyl_element_completion(g, (1, 3))
    assert commuting_lift(comp, STARS[0], star3_param_rule()) is not None
    assert commuting_lift(weyl_reflection_completion(g, 1), STARS[0], star3_param_rule()) is None


def test_sigma2_commutes_with_star_case_ii_only_for_middle_plus(g):
    comp = weyl_reflection_completion(g, 2)
    got = {s.name: commuting_lift(comp, s, star4_param_rule()) is not None for s in STARS[1:]}
    assert list(got.values()).count(True) == 1
    assert got[build_star_case_ii(g, (-1, 1, -1)).name]


def test_reality_verdicts(g):
    r = parse_expression("h1^e1", g)
    assert reality_check(r, STARS[0]).verdict == "neither"
    assert reality_check(parse_expression("0", g, kind=type(r)), STARS[0]).verdict == "real"
