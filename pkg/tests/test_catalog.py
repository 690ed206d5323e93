import pytest
from hypothesis import given, strategies as st

from sl4cybe.arith import MultiPoly
from sl4cybe.catalog import (FUNCTIONAL_NAMES, RMATRIX_NAMES, ParseError, compare_up_to_scalar, emit,
                             minimal_repairs, parse_catalog, parse_expression)
from sl4cybe.frobenius import Functional
from sl4cybe.lie import sl4
from sl4cybe.wedge import BiVector, cybe_residual

G = sl4()
gens = st.sampled_from(G.labels + ("h4", "h5", "h6"))
nums = st.sampled_from(["1", "2", "-1", "1/2", "3/4", "lam", "a", "i", "a1**-1"])


@st.composite
def expressions(draw):
    terms = []
    for _ in range(draw(st.integers(1, 4))):
        left = draw(gens)
        if draw(st.booleans()):
            left = f"({left} + {draw(nums)}*{draw(gens)})"
        terms.append(f"{draw(nums)}*{left}^{draw(gens)}")
    return " + ".join(terms)


def test_shipped_catalog_loads(cat):
    assert all(n in cat for n in RMATRIX_NAMES + FUNCTIONAL_NAMES)
    assert isinstance(cat["r12"].value, BiVector)
    assert isinstance(cat["g1a"].value, Functional)
    assert cat["r12"].value.parameters() == {"lam"}


@given(expressions())
def test_emit_parse_round_trip(src):
    v = parse_expression(src, G, kind=BiVector)
    assert parse_expression(emit(v), G, kind=BiVector) == v
    assert emit(parse_expression(emit(v), G, kind=BiVector)) == emit(v)


def test_composite_cartan_names(g):
    assert parse_expression("h6", g) == parse_expression("h1 + h2 + h3", g)


@pytest.mark.parametrize("src", ["e1 ^", "2 * * e1", "e9^e1", "(e1 + e2"])
def test_parse_errors_carry_position(src):
    with pytest.raises(ParseError) as info:
        parse_expression(src, G)
    assert info.value.column >= 1


def test_catalog_errors_report_line():
    with pytest.raises(ParseError) as info:
        parse_catalog("x = e1^e2\n\ny = e1 ^ ^ e2\n", G)
    assert info.value.line == 3
    with pytest.raises(ParseError):
        parse_catalog("x = e1^e2\nx = e1^e3\n", G)


@given(expressions(), st.sampled_from(["2", "-1/3", "i", "a", "lam"]))
def test_compare_accepts_scalar_multiples(src, c):
    r = parse_expression(src, G)
    if r.is_zero():
        return
    s = r * parse_expression(c, G)
    cmp = compare_up_to_scalar(s, r, search=False)
    assert cmp.match
    back = compare_up_to_scalar(r, s, search=False)
    assert back.match


def test_compare_rejects_different_supports(g):
    r = parse_expression("h1^e1 + e2^e3", g)
    s = parse_expression("h1^e1 - e2^e3", g)
    assert not compare_up_to_scalar(r, s).match


def test_compare_finds_parameter_map(g):
    r = parse_expression("a1*h1^e1 + e2^e3", g)
    s = parse_expression("a1**-1*h1^e1 + e2^e3", g)
    cmp = compare_up_to_scalar(r, s)
    assert cmp.match and cmp.parameter_map == {"a1": MultiPoly.var("a1").monomial_inverse()}


def test_repair_of_a_planted_misprint(cat, g):
    src = cat["r10_1a"].expression
    assert cybe_residual(cat["r10_1a"].value).is_solution
    planted = src.replace("-e2^e3", "e2^e3", 1)
    assert not cybe_residual(parse_expression(planted, g)).is_solution
    reps = minimal_repairs(planted, g, carrier_dim=10)
    assert reps and all(cybe_residual(r.value).is_solution for r in reps)
    assert any(r.value == cat["r10_1a"].value for r in reps)
    assert all(r.size == 1 for r in reps)


def test_repairs_only_accept_bivectors(g):
    with pytest.raises(TypeError):
        minimal_repairs("e1 + e2", g)
