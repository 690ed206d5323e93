"""Expression grammar, the r-matrix/functional catalog and comparison helpers.

Grammar (whitespace insignificant)::

    expr    := ['+'|'-'] term (('+'|'-') term)*
    term    := factor ('*' factor)*
    factor  := power ('^' power)*              # '^' (or '∧') is the wedge
    power   := ('+'|'-') power | atom ('**' ['-'] integer)?
    atom    := number | number'i' | 'i' | parameter | generator
             | generator '*'                   # dual vector, e.g. e5*
             | '(' expr ')'

Generators: h1..h6 (h4..h6 composite), e1..e6, em1..em6 (em = e_-),
and the physical names Mp Mm M1 M2 M3 Lp Lm L1 L2 L3 P0..P3 K0..K3 D.
"""

from __future__ import annotations

import hashlib
import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from itertools import combinations, product
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .arith import ALIASES, PARAM_INDEX, MultiPoly, ONE_POLY, Scalar, ZERO_POLY
from .frobenius import Functional
from .lie import (COMPOSITE_CARTAN, Element, LieAlgebra, conformal_basis, named_element,
                  real_conformal_basis, sl4)
from .wedge import (BiVector, TriVector, _Multivector, cybe_residual, schouten_mixed,
                    schouten_self, wedge)

Value = Union[MultiPoly, Element, BiVector, TriVector, Functional]


class ParseError(ValueError):
    def __init__(self, msg: str, src: str = "", pos: int = 0):
        line = src.count("\n", 0, pos) + 1
        col = pos - (src.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{msg} at line {line}, column {col}")
        self.line, self.column = line, col


# --------------------------------------------------------------------------
# tokens and AST

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>\d+(?:/\d+)?i?)
  | (?P<name>[A-Za-zλε_][A-Za-z0-9λε_]*)
  | (?P<op>\*\*|[-+*^∧()])
""", re.X)


@dataclass
class Tok:
    kind: str
    text: str
    pos: int


def tokenize(src: str) -> List[Tok]:
    toks, pos = [], 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if not m:
            raise ParseError(f"unexpected character {src[pos]!r}", src, pos)
        kind = m.lastgroup
        if kind != "ws":
            text = m.group()
            toks.append(Tok(kind, "^" if text == "∧" else text, pos))
        pos = m.end()
    toks.append(Tok("end", "", len(src)))
    return toks


@dataclass
class Num:
    value: Scalar


@dataclass
class Name:
    name: str


@dataclass
class Dual:
    name: str


@dataclass
class Pow:
    base: object
    exp: int


@dataclass
class Prod:
    factors: list


@dataclass
class Wedge:
    factors: list


@dataclass
class Sum:
    terms: list  # [(sign, node)]


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.toks = tokenize(src)
        self.k = 0

    @property
    def tok(self) -> Tok:
        return self.toks[self.k]

    def take(self, text=None) -> Tok:
        t = self.tok
        if text is not None and t.text != text:
            self.fail(f"expected {text!r}, found {t.text or 'end of input'!r}")
        self.k += 1
        return t

    def fail(self, msg):
        raise ParseError(msg, self.src, self.tok.pos)

    def parse(self):
        if self.tok.kind == "end":
            self.fail("empty expression")
        node = self.expr()
        if self.tok.kind != "end":
            self.fail(f"unexpected {self.tok.text!r}")
        return node

    def expr(self):
        terms = []
        sign = 1
        if self.tok.text in "+-" and self.tok.kind == "op":
            sign = -1 if self.take().text == "-" else 1
        terms.append((sign, self.term()))
        while self.tok.kind == "op" and self.tok.text in ("+", "-"):
            sign = -1 if self.take().text == "-" else 1
            terms.append((sign, self.term()))
        return Sum(terms)

    def term(self):
        factors = [self.factor()]
        while self.tok.text == "*" and self.tok.kind == "op":
            self.take()
            factors.append(self.factor())
        return factors[0] if len(factors) == 1 else Prod(factors)

    def factor(self):
        parts = [self.power()]
        while self.tok.text == "^":
            self.take()
            parts.append(self.power())
        return parts[0] if len(parts) == 1 else Wedge(parts)

    def power(self):
        if self.tok.kind == "op" and self.tok.text in ("+", "-"):
            sign = self.take().text
            inner = self.power()
            return inner if sign == "+" else Prod([Num(Scalar(-1)), inner])
        base = self.atom()
        if self.tok.text == "**":
            self.take()
            sign = 1
            if self.tok.text == "-":
                self.take()
                sign = -1
            t = self.tok
            if t.kind != "num" or not t.text.isdigit():
                self.fail("exponent must be an integer")
            self.take()
            return Pow(base, sign * int(t.text))
        return base

    def atom(self):
        t = self.tok
        if t.kind == "num":
            self.take()
            text = t.text
            if text.endswith("i"):
                return Num(Scalar(0, Fraction(text[:-1])))
            return Num(Scalar(Fraction(text)))
        if t.kind == "name":
            self.take()
            if t.text == "i":
                return Num(Scalar(0, 1))
            after = self.toks[self.k + 1] if self.tok.text == "*" else None
            if after is not None and (after.kind == "end" or after.text in ("+", "-", ")")):
                self.take()
                return Dual(t.text)
            return Name(t.text)
        if t.text == "(":
            self.take()
            node = self.expr()
            self.take(")")
            return node
        self.fail(f"unexpected {t.text or 'end of input'!r}")


def parse_ast(src: str):
    return _Parser(src).parse()


# --------------------------------------------------------------------------
# evaluation

def _generator_table(g: LieAlgebra) -> Dict[str, Element]:
    table = {lbl: g.basis(lbl) for lbl in g.labels}
    for name in COMPOSITE_CARTAN:
        table[name] = named_element(g, name)
    table.update(conformal_basis(g))
    table.update(real_conformal_basis(g))
    return table


_TABLES: Dict[int, Dict[str, Element]] = {}


def generator_table(g: LieAlgebra) -> Dict[str, Element]:
    if id(g) not in _TABLES:
        _TABLES[id(g)] = _generator_table(g)
    return _TABLES[id(g)]


def _is_zero_value(v) -> bool:
    return isinstance(v, MultiPoly) and v.is_zero()


def _add(x, y):
    if _is_zero_value(x):
        return y
    if _is_zero_value(y):
        return x
    if type(x) is not type(y):
        raise TypeError(f"cannot add {type(x).__name__} and {type(y).__name__}")
    return x + y


def _mul(x, y):
    if isinstance(x, MultiPoly):
        return y * x if not isinstance(y, MultiPoly) else x * y
    if isinstance(y, MultiPoly):
        return x * y
    raise TypeError(f"cannot multiply {type(x).__name__} by {type(y).__name__}; use '^' for wedge")


def _wedge(x, y):
    if _is_zero_value(x) or _is_zero_value(y):
        return ZERO_POLY
    return wedge(x, y)


def evaluate(node, g: LieAlgebra, src: str = "") -> Value:
    gens = generator_table(g)

    def ev(n):
        if isinstance(n, Num):
            return MultiPoly.const(n.value)
        if isinstance(n, Name):
            name = ALIASES.get(n.name, n.name)
            if name in PARAM_INDEX:
                return MultiPoly.var(name)
            if n.name in gens:
                return gens[n.name]
            raise ParseError(f"unknown generator or parameter {n.name!r}", src, 0)
        if isinstance(n, Dual):
            if n.name not in g.labels:
                raise ParseError(f"dual of unknown basis generator {n.name!r}", src, 0)
            return Functional(g, {n.name: 1})
        if isinstance(n, Pow):
            base = ev(n.base)
            if not isinstance(base, MultiPoly):
                raise TypeError("only scalars and parameters can be raised to powers")
            return base ** n.exp
        if isinstance(n, Prod):
            out = ev(n.factors[0])
            for f in n.factors[1:]:
                out = _mul(out, ev(f))
            return out
        if isinstance(n, Wedge):
            out = ev(n.factors[0])
            for f in n.factors[1:]:
                out = _wedge(out, ev(f))
            return out
        if isinstance(n, Sum):
            out = ZERO_POLY
            for sign, t in n.terms:
                v = ev(t)
                out = _add(out, v if sign > 0 else _mul(MultiPoly.const(-1), v))
            return out
        raise TypeError(f"bad AST node {n!r}")

    return ev(node)


def parse_expression(src: str, g: Optional[LieAlgebra] = None, kind=None) -> Value:
    """Parse grammar text into a scalar, Element, BiVector, TriVector or Functional.

    With `kind` given (e.g. BiVector), a zero result is returned as the zero
    object of that kind and any other type is rejected.
    """
    g = g or sl4()
    val = evaluate(parse_ast(src), g, src)
    if kind is not None:
        if _is_zero_value(val):
            return kind(g) if kind is not MultiPoly else val
        if not isinstance(val, kind):
            raise TypeError(f"expected {kind.__name__}, got {type(val).__name__}")
    return val


def emit(value) -> str:
    """Canonical text of a value in the grammar."""
    return str(value)


def emit_node(n) -> str:
    """Source text of an AST (used to print repaired catalog entries)."""
    if isinstance(n, Num):
        s = str(n.value)
        return s if not (n.value.re and n.value.im) else f"({s})"
    if isinstance(n, Name):
        return n.name
    if isinstance(n, Dual):
        return n.name + "*"
    if isinstance(n, Pow):
        return f"{emit_node(n.base)}**{n.exp}"
    if isinstance(n, Prod):
        return "*".join(_paren(f) for f in n.factors)
    if isinstance(n, Wedge):
        return "^".join(_paren(f) for f in n.factors)
    if isinstance(n, Sum):
        out = ""
        for k, (sign, t) in enumerate(n.terms):
            body = emit_node(t) if not isinstance(t, Sum) else f"({emit_node(t)})"
            if k == 0:
                out = ("-" if sign < 0 else "") + body
            else:
                out += (" - " if sign < 0 else " + ") + body
        return out
    raise TypeError(n)


def _paren(n) -> str:
    s = emit_node(n)
    return f"({s})" if isinstance(n, Sum) and (len(n.terms) > 1 or n.terms[0][0] < 0) else s


# --------------------------------------------------------------------------
# catalog

@dataclass
class CatalogEntry:
    name: str
    expression: str
    value: Value = field(repr=False, default=None)
    parameters: List[str] = field(default_factory=list)
    expected: Dict[str, object] = field(default_factory=dict)

    @property
    def is_functional(self) -> bool:
        return isinstance(self.value, Functional)


RMATRIX_NAMES = ("r12",
                 "r10_1a", "r10_1b", "r10_1c", "r10_1d", "r10_1e",
                 "r10_3a", "r10_3b", "r10_3c", "r10_3d", "r10_3e",
                 "r8_1", "r8_2")
FUNCTIONAL_NAMES = ("g1a", "g1b", "g1c", "g1d", "g1e", "g3a", "g3b", "g3c", "g3d", "g3e")

# what the source asserts about each entry
EXPECTED = {
    **{n: {"cybe": True, "reality": {"star3": False, "star4": False}, "carrier_dim": 10}
       for n in RMATRIX_NAMES if n.startswith("r10")},
    "r12": {"cybe": True, "reality": {"star3": False, "star4": False}, "carrier_dim": 12},
    "r8_1": {"cybe": True, "reality": {"star3": True, "star4": False}, "carrier_dim": 8},
    "r8_2": {"cybe": True, "reality": {"star3": True, "star4": False}, "carrier_dim": 8},
    **{n: {"nonsingular_on": "P1" if n[1] == "1" else "P3", "rmatrix": f"r10_{n[1:]}"}
       for n in FUNCTIONAL_NAMES},
}


def default_catalog_path() -> Path:
    env = os.environ.get("CYBE_CATALOG")
    if env:
        return Path(env)
    return Path(str(resources.files("sl4cybe") / "data" / "catalog.txt"))


def read_catalog_text(path=None) -> str:
    return Path(path or default_catalog_path()).read_text(encoding="utf-8")


def catalog_hash(path=None) -> str:
    return hashlib.sha256(read_catalog_text(path).encode("utf-8")).hexdigest()


def parse_catalog(text: str, g: Optional[LieAlgebra] = None) -> List[CatalogEntry]:
    g = g or sl4()
    entries = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError("expected 'name = expr'", text, _line_offset(text, lineno))
        name, expr = (s.strip() for s in line.split("=", 1))
        if name in seen:
            raise ParseError(f"duplicate entry {name!r}", text, _line_offset(text, lineno))
        seen.add(name)
        try:
            val = parse_expression(expr, g)
        except ParseError as exc:
            raise ParseError(f"entry {name}: {exc}", text, _line_offset(text, lineno)) from exc
        if _is_zero_value(val):
            val = BiVector(g)
        params = sorted(val.parameters(), key=PARAM_INDEX.__getitem__) if hasattr(val, "parameters") else []
        entries.append(CatalogEntry(name, expr, val, params, EXPECTED.get(name, {})))
    return entries


def _line_offset(text, lineno):
    return sum(len(l) + 1 for l in text.splitlines()[:lineno - 1])


def load_catalog(path=None, g: Optional[LieAlgebra] = None) -> List[CatalogEntry]:
    """Parse the shipped catalog (or `path`, or $CYBE_CATALOG)."""
    return parse_catalog(read_catalog_text(path), g)


def catalog_dict(entries: Sequence[CatalogEntry]) -> Dict[str, CatalogEntry]:
    return {e.name: e for e in entries}


# --------------------------------------------------------------------------
# comparison

@dataclass
class Comparison:
    match: bool
    scalar: Optional[Tuple[MultiPoly, MultiPoly]] = None   # numerator, denominator
    parameter_map: Optional[Dict[str, MultiPoly]] = None

    def __iter__(self):
        yield self.match
        yield self.scalar
        yield self.parameter_map

    def scalar_text(self) -> str:
        if self.scalar is None:
            return "none"
        num, den = self.scalar
        if den == ONE_POLY:
            return str(num)
        return f"({num})/({den})"


def _ratio(r: _Multivector, s: _Multivector):
    if set(r.coeffs) != set(s.coeffs):
        return None
    # prefer a normalising term whose coefficient in s is invertible
    def invertible(c):
        try:
            c.monomial_inverse() if c.is_monomial() else None
        except ValueError:
            return False
        return c.is_monomial()
    k0 = min(r.coeffs, key=lambda k: (not invertible(s.coeffs[k]), k))
    num, den = r.coeffs[k0], s.coeffs[k0]
    for k in r.coeffs:
        if r.coeffs[k] * den != s.coeffs[k] * num:
            return None
    if den.is_monomial():
        try:
            num, den = num / den, ONE_POLY
        except ValueError:      # ordinary (non-Laurent) symbol in the denominator
            pass
    return num, den


def _monomial_candidates(targets: Sequence[str]):
    """Unit monomials +-prod(p**e) with e in {-1,0,1} (0,1 for ordinary symbols)."""
    from .arith import Parameter
    ranges = [(-1, 0, 1) if Parameter(p).laurent else (0, 1) for p in targets]
    out = []
    for exps in product(*ranges):
        m = ONE_POLY
        for p, e in zip(targets, exps):
            if e:
                m = m * MultiPoly.var(p, e)
        out.append(m)
        out.append(-m)
    # identity-like and simple maps first
    out.sort(key=lambda m: (len(str(m)), str(m)))
    return out


def compare_up_to_scalar(r: _Multivector, s: _Multivector, *, search: bool = True) -> Comparison:
    """Is r = c * s(params -> unit monomials) for some nonzero c?

    The identity assignment is tried first; otherwise each parameter of s is
    mapped to a signed unit monomial in the parameters of r.
    """
    if r.is_zero() or s.is_zero():
        return Comparison(r.is_zero() and s.is_zero(), None, {})
    ratio = _ratio(r, s)
    if ratio is not None:
        return Comparison(True, ratio, {})
    s_params = sorted(s.parameters(), key=PARAM_INDEX.__getitem__)
    if not search or not s_params:
        return Comparison(False)
    pool = sorted(r.parameters() | set(s_params), key=PARAM_INDEX.__getitem__)
    cands = _monomial_candidates(pool)
    for choice in product(cands, repeat=len(s_params)):
        assignment = dict(zip(s_params, choice))
        if all(v == MultiPoly.var(k) for k, v in assignment.items()):
            continue
        ratio = _ratio(r, s.substitute(assignment))
        if ratio is not None:
            return Comparison(True, ratio, assignment)
    return Comparison(False)


# --------------------------------------------------------------------------
# minimal repair search

def _term_sites(node, path=()):
    """Yield (path, sign, coefficient) for every additive term in the AST."""
    if isinstance(node, Sum):
        for k, (sign, t) in enumerate(node.terms):
            c = Fraction(1)
            if isinstance(t, Prod) and isinstance(t.factors[0], Num) and t.factors[0].value.is_real():
                c = t.factors[0].value.re
            elif isinstance(t, Num) and t.value.is_real():
                c = t.value.re
            yield path + (k,), sign, c
            yield from _term_sites(t, path + (k,))
    elif isinstance(node, (Prod, Wedge)):
        for k, f in enumerate(node.factors):
            yield from _term_sites(f, path + ("f", k))
    elif isinstance(node, Pow):
        yield from _term_sites(node.base, path + ("b",))


def _replace_coefficient(node, path, new: Fraction):
    """Copy of the AST with the term at `path` given signed coefficient `new`."""
    import copy
    root = copy.deepcopy(node)
    cur = root
    steps = list(path)
    while len(steps) > 1:
        s = steps.pop(0)
        if s == "f":
            cur = cur.factors[steps.pop(0)]
        elif s == "b":
            cur = cur.base
        else:
            cur = cur.terms[s][1]
    k = steps[0]
    _, t = cur.terms[k]
    sign = 1 if new > 0 else -1
    mag = Num(Scalar(abs(new)))
    if isinstance(t, Prod) and isinstance(t.factors[0], Num) and t.factors[0].value.is_real():
        t = Prod([mag] + t.factors[1:]) if abs(new) != 1 else (
            t.factors[1] if len(t.factors) == 2 else Prod(t.factors[1:]))
    elif isinstance(t, Num):
        t = mag
    elif abs(new) != 1:
        t = Prod([mag, t])
    cur.terms[k] = (sign, t)
    return root


GENERATOR_KINDS = {"h": tuple(f"h{k}" for k in range(1, 7)),
                   "e": tuple(f"e{k}" for k in range(1, 7)),
                   "em": tuple(f"em{k}" for k in range(1, 7))}


def _generator_kind(name: str) -> Optional[str]:
    for kind, names in GENERATOR_KINDS.items():
        if name in names:
            return kind
    return None


def _leaf_sites(node, path=()):
    """Yield (path, name) for every generator leaf in the AST."""
    if isinstance(node, Name):
        if _generator_kind(node.name):
            yield path, node.name
    elif isinstance(node, Sum):
        for k, (_, t) in enumerate(node.terms):
            yield from _leaf_sites(t, path + (k,))
    elif isinstance(node, (Prod, Wedge)):
        for k, f in enumerate(node.factors):
            yield from _leaf_sites(f, path + ("f", k))
    elif isinstance(node, Pow):
        yield from _leaf_sites(node.base, path + ("b",))


def _replace_leaf(node, path, new_name: str):
    import copy
    root = copy.deepcopy(node)
    if not path:
        return Name(new_name)
    cur = root
    steps = list(path)
    while len(steps) > 1:
        s = steps.pop(0)
        if s == "f":
            k = steps.pop(0)
            if not steps:
                cur.factors[k] = Name(new_name)
                return root
            cur = cur.factors[k]
        elif s == "b":
            if not steps:
                cur.base = Name(new_name)
                return root
            cur = cur.base
        else:
            cur = cur.terms[s][1]
    k = steps[0]
    sign, _ = cur.terms[k]
    cur.terms[k] = (sign, Name(new_name))
    return root


def _site_text(path) -> str:
    return "/".join(map(str, path))


@dataclass(frozen=True)
class Edit:
    """One elementary change to a catalog expression.

    kind is "coefficient" (old/new are Fractions) or "generator"
    (old/new are generator names); extended marks edits outside the
    basic class (sign flips and integer swaps among +-1, +-3).
    """
    kind: str
    path: tuple
    old: object
    new: object
    extended: bool

    def apply(self, ast):
        if self.kind == "coefficient":
            return _replace_coefficient(ast, self.path, self.new)
        return _replace_leaf(ast, self.path, self.new)

    def __str__(self):
        return f"{self.kind} at {_site_text(self.path)}: {self.old} -> {self.new}"


@dataclass
class Repair:
    edits: Tuple[Edit, ...]
    expression: str
    value: BiVector = field(repr=False, default=None)

    @property
    def size(self) -> int:
        return len(self.edits)

    @property
    def extended(self) -> bool:
        return any(e.extended for e in self.edits)

    # single-edit conveniences
    @property
    def site(self) -> str:
        return _site_text(self.edits[0].path)

    @property
    def old(self):
        return self.edits[0].old

    @property
    def new(self):
        return self.edits[0].new

    def describe(self) -> str:
        return "; ".join(str(e) for e in self.edits)


def candidate_edits(src: str, extended: bool = True) -> List[Edit]:
    """Basic class: flip a term's sign, or swap an integer coefficient among
    +-1, +-3.  Extended class: scale a coefficient by 2 or 1/2, swap a root
    vector with its negative, or change the index of a generator."""
    ast = parse_ast(src)
    out = []
    for path, sign, c in _term_sites(ast):
        old = sign * c
        basic = {-old}
        if c.denominator == 1:
            basic |= {Fraction(v) for v in (-3, -1, 1, 3)}
        basic.discard(old)
        out += [Edit("coefficient", path, old, new, False) for new in sorted(basic)]
        if extended:
            ext = {old * 2, old / 2} - basic - {old}
            out += [Edit("coefficient", path, old, new, True) for new in sorted(ext)]
    if extended:
        for path, name in _leaf_sites(ast):
            kind = _generator_kind(name)
            options = [n for n in GENERATOR_KINDS[kind] if n != name]
            if kind == "e":
                options.append("em" + name[1:])
            elif kind == "em":
                options.append("e" + name[2:])
            out += [Edit("generator", path, name, n, True) for n in options]
    return out


def repair_candidates(src: str):
    """Basic single-coefficient edits as (path, old, new, ast)."""
    ast = parse_ast(src)
    for e in candidate_edits(src, extended=False):
        yield e.path, e.old, e.new, e.apply(ast)


def _apply_edits(ast, edits: Sequence[Edit]):
    # deeper sites first, so an outer coefficient edit keeps inner changes
    for e in sorted(edits, key=lambda e: -len(e.path)):
        ast = e.apply(ast)
    return ast


def minimal_repairs(src: str, g: Optional[LieAlgebra] = None, *, extended: bool = True,
                    max_edits: int = 2, carrier_dim: Optional[int] = None) -> List[Repair]:
    """Smallest sets of edits that turn a BiVector expression into a CYBE solution.

    Levels are tried in order: one basic edit, one extended edit, then
    pairs of edits (only when `extended`).  Returns every repair at the
    first level that yields any; an empty list if none does.  A pair is
    screened with the quadratic identity
        C(r+d1+d2) = C(r+d1) + C(r+d2) - C(r) + 2<<d1, d2>>
    before the repaired expression is re-parsed and re-checked in full.
    With `carrier_dim`, repairs that change the carrier dimension (for
    instance by cancelling a term) are discarded.
    """
    g = g or sl4()
    ast = parse_ast(src)
    base = evaluate(ast, g, src)
    if not isinstance(base, BiVector):
        raise TypeError("repairs apply to bivector expressions only")
    c0 = schouten_self(base)
    if c0.is_zero():
        return []

    singles = []      # (edit, delta, residual)
    for e in candidate_edits(src, extended):
        try:
            val = evaluate(e.apply(ast), g, src)
        except (TypeError, ParseError, ValueError):
            continue
        if not isinstance(val, BiVector):
            continue
        delta = val - base
        if delta.is_zero():
            continue
        res = c0 + schouten_mixed(base, delta, check=False) * 2 + schouten_self(delta)
        singles.append((e, delta, res))

    def finish(edits):
        new_ast = _apply_edits(ast, edits)
        val = evaluate(new_ast, g, src)
        if not cybe_residual(val).is_solution:     # the screen is exact; this is a guard
            raise AssertionError("repair screen accepted a non-solution")
        if carrier_dim is not None and val.carrier_dim() != carrier_dim:
            return None
        return Repair(tuple(edits), emit_node(new_ast), val)

    def nested(p, q):
        return p[:len(q)] == q or q[:len(p)] == p

    for want_extended in ((False, True) if extended else (False,)):
        hits = [finish([e]) for e, _, res in singles if e.extended == want_extended and res.is_zero()]
        hits = [h for h in hits if h is not None]
        if hits:
            return hits
    if not extended or max_edits < 2:
        return []

    carriers = [{k for key in d.coeffs for k in key} for _, d, _ in singles]
    hits = []
    for i, j in combinations(range(len(singles)), 2):
        ei, di, ri = singles[i]
        ej, dj, rj = singles[j]
        if ei.path == ej.path:
            continue
        if nested(ei.path, ej.path):
            # edits inside one term do not add; evaluate the combined change
            try:
                val = evaluate(_apply_edits(ast, [ei, ej]), g, src)
            except (TypeError, ParseError, ValueError):
                continue
            delta = val - base
            if (c0 + schouten_mixed(base, delta, check=False) * 2 + schouten_self(delta)).is_zero():
                hits.append(finish([ei, ej]))
            continue
        # every term of <<d1, d2>> carries a leg of d1 and a leg of d2, so
        # C(r+d1) + C(r+d2) - C(r) must already vanish off those triples
        ci, cj = carriers[i], carriers[j]
        if any(not (set(key) & ci and set(key) & cj)
               and ri.coeffs.get(key, ZERO_POLY) + rj.coeffs.get(key, ZERO_POLY)
               != c0.coeffs.get(key, ZERO_POLY)
               for key in ri.coeffs.keys() | rj.coeffs.keys() | c0.coeffs.keys()):
            continue
        target = ri + rj - c0
        if (target + schouten_mixed(di, dj, check=False) * 2).is_zero():
            hits.append(finish([ei, ej]))
    return [h for h in hits if h is not None]
