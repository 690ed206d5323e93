"""Exact arithmetic over the Gaussian rationals Q(i) and sparse polynomials.

`Scalar` is an immutable element of Q(i).  `MultiPoly` is a sparse polynomial
over `Scalar` in the formal parameters of a fixed registry.  The reflection
parameters (a1..a6, b1..b3) may carry negative exponents, so polynomials in
those symbols are Laurent polynomials; every other parameter is ordinary.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Tuple, Union


class Scalar:
    """A Gaussian rational re + i*im with exact `Fraction` parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if isinstance(re, Fraction) else Fraction(re)
        self.im = im if isinstance(im, Fraction) else Fraction(im)

    @classmethod
    def coerce(cls, x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, complex):
            raise TypeError("floating point complex numbers are not exact")
        if isinstance(x, float):
            raise TypeError("floats are not exact; use Fraction or str")
        return cls(x)

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def is_real(self) -> bool:
        return not self.im

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.re == other and not self.im
        if isinstance(other, Scalar):
            return self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __add__(self, other):
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Fraction)):
                return Scalar(self.re + other, self.im)
            return NotImplemented
        return Scalar(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(-self.re, -self.im)

    def __sub__(self, other):
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Fraction)):
                return Scalar(self.re - other, self.im)
            return NotImplemented
        return Scalar(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Fraction)):
                return Scalar(self.re * other, self.im * other)
            return NotImplemented
        if not self.im and not other.im:
            return Scalar(self.re * other.re)
        return Scalar(self.re * other.re - self.im * other.im,
                      self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def conj(self) -> "Scalar":
        return Scalar(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "Scalar":
        n = self.norm()
        if not n:
            raise ZeroDivisionError("division by zero in Q(i)")
        return Scalar(self.re / n, -self.im / n)

    def __truediv__(self, other):
        other = Scalar.coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return Scalar.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = Scalar(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __str__(self):
        return format_scalar(self)

    def __repr__(self):
        return f"Scalar({format_scalar(self)!r})"


ZERO = Scalar(0)
ONE = Scalar(1)
I = Scalar(0, 1)


def _fmt_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(x: Scalar) -> str:
    """Emit "p/q", "p/q*i" or "p/q+r/s*i" (lowest terms, integers bare)."""
    if not x.im:
        return _fmt_fraction(x.re)
    if x.im == 1:
        im = "i"
    elif x.im == -1:
        im = "-i"
    else:
        im = _fmt_fraction(x.im) + "*i"
    if not x.re:
        return im
    sign = "+" if x.im > 0 else ""
    return f"{_fmt_fraction(x.re)}{sign}{im}"


def parse_scalar(text: str) -> Scalar:
    """Inverse of `format_scalar`; also accepts a bare "i" and "-i"."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty scalar literal")
    if not s.endswith("i"):
        return Scalar(Fraction(s))
    # split off the imaginary part at the last sign that is not leading
    body = s[:-1]
    if body.endswith("*"):
        body = body[:-1]
    cut = max(body.rfind("+"), body.rfind("-"))
    if cut <= 0:
        re_part, im_part = "", body
    else:
        re_part, im_part = body[:cut], body[cut:]
    if im_part in ("", "+"):
        im = Fraction(1)
    elif im_part == "-":
        im = Fraction(-1)
    else:
        im = Fraction(im_part)
    return Scalar(Fraction(re_part) if re_part else 0, im)


# --------------------------------------------------------------------------
# parameter registry

PARAMETERS: Tuple[str, ...] = (
    ("lam", "a")
    + tuple(f"a{k}" for k in range(1, 7))
    + tuple(f"b{k}" for k in range(1, 4))
    + tuple(f"eps{k}" for k in range(1, 4))
    + tuple(f"c{k}" for k in range(1, 13))
)
PARAM_INDEX: Dict[str, int] = {name: k for k, name in enumerate(PARAMETERS)}
LAURENT: frozenset = frozenset(
    PARAM_INDEX[n] for n in PARAMETERS if n[0] in "ab" and n != "a"
)
ALIASES = {"λ": "lam", "lambda": "lam", "ε1": "eps1", "ε2": "eps2", "ε3": "eps3"}


class Parameter(str):
    """A registered formal symbol.  Behaves as its (canonical) name."""

    def __new__(cls, name: str):
        name = ALIASES.get(name, name)
        if name not in PARAM_INDEX:
            raise KeyError(f"unregistered parameter {name!r}")
        return super().__new__(cls, name)

    @property
    def index(self) -> int:
        return PARAM_INDEX[self]

    @property
    def laurent(self) -> bool:
        return self.index in LAURENT


Monomial = Tuple[Tuple[int, int], ...]  # sorted ((param_index, exponent), ...)
Coefficient = Union["MultiPoly", Scalar, int, Fraction]


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    d = dict(m1)
    for k, e in m2:
        e2 = d.get(k, 0) + e
        if e2:
            d[k] = e2
        else:
            del d[k]
    return tuple(sorted(d.items()))


class MultiPoly:
    """Sparse polynomial over Q(i); immutable, canonical (no zero terms)."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None, *, _trusted=False):
        if _trusted:
            self.terms = terms
        else:
            clean = {}
            for mono, c in (terms or {}).items():
                c = Scalar.coerce(c)
                if c.is_zero():
                    continue
                for k, e in mono:
                    if e < 0 and k not in LAURENT:
                        raise ValueError(f"negative exponent on non-Laurent parameter {PARAMETERS[k]}")
                clean[tuple(sorted(mono))] = c
            self.terms = clean
        self._hash = None

    # construction -------------------------------------------------------
    @classmethod
    def const(cls, c) -> "MultiPoly":
        c = Scalar.coerce(c)
        return cls({(): c}, _trusted=True) if not c.is_zero() else ZERO_POLY

    @classmethod
    def var(cls, name: str, power: int = 1) -> "MultiPoly":
        p = Parameter(name)
        if power < 0 and not p.laurent:
            raise ValueError(f"parameter {p} does not admit negative powers")
        if power == 0:
            return ONE_POLY
        return cls({((p.index, power),): ONE}, _trusted=True)

    @classmethod
    def coerce(cls, x) -> "MultiPoly":
        if isinstance(x, MultiPoly):
            return x
        return cls.const(x)

    # predicates ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def constant_value(self) -> Scalar:
        """Value of a constant polynomial; raises if it has variables."""
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.terms.get((), ZERO)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def parameters(self) -> set:
        return {PARAMETERS[k] for mono in self.terms for k, _ in mono}

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            if isinstance(other, (int, Fraction, Scalar)):
                other = MultiPoly.const(other)
            else:
                return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # ring operations ----------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, MultiPoly):
            other = MultiPoly.coerce(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            if m in out:
                s = out[m] + c
                if s.is_zero():
                    del out[m]
                else:
                    out[m] = s
            else:
                out[m] = c
        return MultiPoly(out, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly({m: -c for m, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other):
        return self + (-MultiPoly.coerce(other))

    def __rsub__(self, other):
        return MultiPoly.coerce(other) + (-self)

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            if isinstance(other, (int, Fraction, Scalar)):
                return self.scale(other)
            return NotImplemented
        if not self.terms or not other.terms:
            return ZERO_POLY
        out: Dict[Monomial, Scalar] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                c = c1 * c2
                if m in out:
                    out[m] = out[m] + c
                else:
                    out[m] = c
        return MultiPoly({m: c for m, c in out.items() if not c.is_zero()}, _trusted=True)

    __rmul__ = __mul__

    def scale(self, c) -> "MultiPoly":
        c = Scalar.coerce(c)
        if c.is_zero():
            return ZERO_POLY
        if c == ONE:
            return self
        return MultiPoly({m: v * c for m, v in self.terms.items()}, _trusted=True)

    def __pow__(self, n: int):
        if n < 0:
            if not self.is_monomial():
                raise ValueError("only monomials can be inverted")
            return self.monomial_inverse() ** (-n)
        out = ONE_POLY
        for _ in range(n):
            out = out * self
        return out

    def monomial_inverse(self) -> "MultiPoly":
        """Inverse of a unit monomial c * prod(p**e) (Laurent symbols only)."""
        if not self.is_monomial():
            raise ValueError(f"{self} is not a monomial")
        (mono, c), = self.terms.items()
        return MultiPoly({tuple((k, -e) for k, e in mono): c.inverse()})

    def __truediv__(self, other):
        other = MultiPoly.coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if not other.is_monomial():
            raise ValueError("exact division only by monomials")
        return self * other.monomial_inverse()

    # maps -----------------------------------------------------------------
    def conj(self, param_conj: Mapping[str, "MultiPoly"] | None = None) -> "MultiPoly":
        """Complex-conjugate coefficients.

        Parameters are treated as real unless `param_conj` gives the
        conjugate of a parameter as a polynomial (e.g. a1 -> a3).
        """
        out = MultiPoly({m: c.conj() for m, c in self.terms.items()}, _trusted=True)
        if param_conj:
            out = out.substitute(param_conj)
        return out

    def substitute(self, assignment: Mapping[str, Coefficient]) -> "MultiPoly":
        """Simultaneously replace parameters by polynomials."""
        if not assignment:
            return self
        subs = {}
        for name, val in assignment.items():
            p = Parameter(name)
            subs[p.index] = MultiPoly.coerce(val)
        out = ZERO_POLY
        for mono, c in self.terms.items():
            kept = []
            term = MultiPoly.const(c)
            for k, e in mono:
                if k in subs:
                    v = subs[k]
                    if e < 0:
                        v = v.monomial_inverse() if v else _raise_zero_power(k)
                    term = term * (v ** abs(e))
                else:
                    kept.append((k, e))
            if kept:
                term = term * MultiPoly({tuple(kept): ONE}, _trusted=True)
            out = out + term
        return out

    def evaluate(self, point: Mapping[str, object]) -> Scalar:
        """Exact value at a point assigning every occurring parameter."""
        val = self.substitute(point)
        return val.constant_value()

    def degree_in(self, name: str) -> int:
        k = Parameter(name).index
        return max((dict(m).get(k, 0) for m in self.terms), default=0)

    def split_by_degree(self, name: str) -> Dict[int, "MultiPoly"]:
        """Group terms by exponent of one parameter (the exponent is kept)."""
        k = Parameter(name).index
        parts: Dict[int, Dict[Monomial, Scalar]] = {}
        for m, c in self.terms.items():
            parts.setdefault(dict(m).get(k, 0), {})[m] = c
        return {d: MultiPoly(t, _trusted=True) for d, t in sorted(parts.items())}

    def coefficients(self) -> Iterable[Scalar]:
        return self.terms.values()

    # text -----------------------------------------------------------------
    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda mc: _mono_key(mc[0]))

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"MultiPoly({format_poly(self)!r})"


def _raise_zero_power(k):
    raise ZeroDivisionError(f"negative power of {PARAMETERS[k]} substituted by 0")


def _mono_key(m: Monomial):
    # lexicographic on the registry order; constants first
    return (sum(abs(e) for _, e in m), [(k, -e) for k, e in m])


def format_monomial(m: Monomial) -> str:
    parts = []
    for k, e in m:
        name = PARAMETERS[k]
        parts.append(name if e == 1 else f"{name}**{e}")
    return "*".join(parts)


def format_poly(p: MultiPoly) -> str:
    if p.is_zero():
        return "0"
    pieces = []
    for mono, c in p.sorted_terms():
        if not mono:
            pieces.append(format_scalar(c))
            continue
        ms = format_monomial(mono)
        if c == ONE:
            pieces.append(ms)
        elif c == -ONE:
            pieces.append("-" + ms)
        elif c.im and c.re:
            pieces.append(f"({format_scalar(c)})*{ms}")
        else:
            pieces.append(f"{format_scalar(c)}*{ms}")
    out = pieces[0]
    for s in pieces[1:]:
        out += " - " + s[1:] if s.startswith("-") else " + " + s
    return out


ZERO_POLY = MultiPoly({}, _trusted=True)
ONE_POLY = MultiPoly({(): ONE}, _trusted=True)


def poly(x) -> MultiPoly:
    """Shorthand: coerce ints, Fractions, Scalars or parameter names."""
    if isinstance(x, str):
        try:
            return MultiPoly.var(x)
        except KeyError:
            return MultiPoly.const(parse_scalar(x))
    return MultiPoly.coerce(x)


def random_rational(rng: random.Random, bound: int = 50) -> Fraction:
    den = rng.randint(1, bound)
    return Fraction(rng.randint(-bound, bound), den)


def random_point(params: Iterable[str], rng: random.Random, nonzero=True) -> Dict[str, Fraction]:
    """Random rational assignment; Laurent symbols never get 0."""
    point = {}
    for name in sorted(params):
        v = random_rational(rng)
        while nonzero and not v:
            v = random_rational(rng)
        point[name] = v
    return point


def composite_a_rules() -> Dict[str, MultiPoly]:
    """a4 = a1 a2, a5 = a2 a3, a6 = a1 a2 a3."""
    a1, a2, a3 = (MultiPoly.var(f"a{k}") for k in (1, 2, 3))
    return {"a4": a1 * a2, "a5": a2 * a3, "a6": a1 * a2 * a3}
