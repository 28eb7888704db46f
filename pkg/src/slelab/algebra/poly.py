"""Exact multivariate polynomials in the parameters kappa, c and Delta.

Coefficients are :class:`fractions.Fraction`; nothing in the algebra layer
ever touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from numbers import Rational
from typing import Iterable, Mapping

VARIABLES = ("kappa", "c", "delta")
_NVARS = len(VARIABLES)
_ZERO_EXP = (0,) * _NVARS

_PRETTY = {"kappa": "κ", "c": "c", "delta": "Δ"}


def as_fraction(value) -> Fraction:
    """Convert ints, Fractions or ``"p/q"`` strings to a Fraction.

    Floats are refused: every coefficient must be exact.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot use {type(value).__name__} as an exact coefficient")


def format_fraction(q: Fraction) -> str:
    """Canonical ``"p/q"`` string (``"p"`` when the denominator is 1)."""
    q = as_fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _grlex_key(exp):
    return (sum(exp), exp)


class ParamPoly:
    """Immutable polynomial over Q in (kappa, c, delta).

    >>> k = ParamPoly.var("kappa")
    >>> (k + 1) * (k - 1)
    ParamPoly('κ^2 - 1')
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[tuple, object] | None = None):
        clean = {}
        for exp, coeff in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != _NVARS or any(e < 0 for e in exp):
                raise ValueError(f"bad exponent vector {exp!r}")
            q = as_fraction(coeff)
            if q:
                clean[exp] = clean.get(exp, 0) + q
                if not clean[exp]:
                    del clean[exp]
        self._terms = dict(sorted(clean.items(), key=lambda kv: _grlex_key(kv[0]), reverse=True))
        self._hash = None

    # construction -----------------------------------------------------

    @classmethod
    def const(cls, value) -> "ParamPoly":
        return cls({_ZERO_EXP: value})

    @classmethod
    def var(cls, name: str) -> "ParamPoly":
        exp = [0] * _NVARS
        exp[VARIABLES.index(name)] = 1
        return cls({tuple(exp): 1})

    @classmethod
    def coerce(cls, value) -> "ParamPoly":
        if isinstance(value, ParamPoly):
            return value
        return cls.const(value)

    @classmethod
    def from_univariate(cls, coeffs: Iterable, name: str = "kappa") -> "ParamPoly":
        """Build from coefficients listed by increasing degree."""
        i = VARIABLES.index(name)
        terms = {}
        for deg, c in enumerate(coeffs):
            exp = [0] * _NVARS
            exp[i] = deg
            terms[tuple(exp)] = c
        return cls(terms)

    # inspection -------------------------------------------------------

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(e == _ZERO_EXP for e in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._terms.get(_ZERO_EXP, Fraction(0))

    def variables(self) -> set:
        return {VARIABLES[i] for exp in self._terms for i, e in enumerate(exp) if e}

    def degree(self, name: str | None = None) -> int:
        if not self._terms:
            return -1
        if name is None:
            return max(sum(e) for e in self._terms)
        i = VARIABLES.index(name)
        return max(e[i] for e in self._terms)

    def univariate_coeffs(self, name: str = "kappa") -> list:
        """Coefficient list by increasing degree; the polynomial must depend on ``name`` only."""
        extra = self.variables() - {name}
        if extra:
            raise ValueError(f"{self} also depends on {sorted(extra)}")
        i = VARIABLES.index(name)
        out = [Fraction(0)] * (self.degree(name) + 1 if self._terms else 0)
        for exp, c in self._terms.items():
            out[exp[i]] = c
        return out

    def coefficient_in(self, name: str, power: int) -> "ParamPoly":
        """The polynomial multiplying ``name**power``."""
        i = VARIABLES.index(name)
        terms = {}
        for exp, c in self._terms.items():
            if exp[i] == power:
                e = list(exp)
                e[i] = 0
                terms[tuple(e)] = c
        return ParamPoly(terms)

    # arithmetic -------------------------------------------------------

    def __add__(self, other):
        other = ParamPoly.coerce(other)
        terms = dict(self._terms)
        for exp, c in other._terms.items():
            terms[exp] = terms.get(exp, 0) + c
        return ParamPoly(terms)

    __radd__ = __add__

    def __neg__(self):
        return ParamPoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-ParamPoly.coerce(other))

    def __rsub__(self, other):
        return ParamPoly.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, ParamPoly):
            q = as_fraction(other)
            return ParamPoly({e: c * q for e, c in self._terms.items()})
        terms: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return ParamPoly(terms)

    __rmul__ = __mul__

    def __truediv__(self, other):
        # division by exact scalars only
        q = as_fraction(other)
        if not q:
            raise ZeroDivisionError("division of ParamPoly by zero")
        return self * (1 / q)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        out = ParamPoly.const(1)
        for _ in range(k):
            out = out * self
        return out

    # evaluation -------------------------------------------------------

    def subs(self, **values) -> "ParamPoly":
        """Substitute exact values (or other ParamPolys) for named variables."""
        for name in values:
            if name not in VARIABLES:
                raise KeyError(name)
        out = ParamPoly()
        for exp, c in self._terms.items():
            term = ParamPoly.const(c)
            rest = list(exp)
            for name, val in values.items():
                i = VARIABLES.index(name)
                if rest[i]:
                    term = term * (ParamPoly.coerce(_exact_or_poly(val)) ** rest[i])
                    rest[i] = 0
            out = out + term * ParamPoly({tuple(rest): 1})
        return out

    def __call__(self, **values) -> Fraction:
        """Evaluate at a point; every variable present must be given."""
        return self.subs(**values).constant_value()

    # comparison -------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, ParamPoly):
            return self._terms == other._terms
        try:
            return self == ParamPoly.const(other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    # display ----------------------------------------------------------

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for exp, c in self._terms.items():
            mono = "*".join(
                _PRETTY[VARIABLES[i]] + (f"^{e}" if e > 1 else "")
                for i, e in enumerate(exp) if e
            )
            mag = abs(c)
            if mono:
                body = mono if mag == 1 else f"{format_fraction(mag)}*{mono}"
            else:
                body = format_fraction(mag)
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"ParamPoly({str(self)!r})"


def _exact_or_poly(val):
    return val if isinstance(val, ParamPoly) else as_fraction(val)


KAPPA = ParamPoly.var("kappa")
C = ParamPoly.var("c")
DELTA = ParamPoly.var("delta")


# univariate helpers (polynomials in a single variable, as coefficient lists) ---

def _trim(p):
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return p


def poly_divmod(num, den):
    """Long division of univariate coefficient lists (increasing degree)."""
    num, den = _trim(num), _trim(den)
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    quot = [Fraction(0)] * max(len(num) - len(den) + 1, 0)
    rem = [Fraction(x) for x in num]
    lead = Fraction(den[-1])
    while len(rem) >= len(den) and rem:
        shift = len(rem) - len(den)
        f = rem[-1] / lead
        quot[shift] = f
        for i, d in enumerate(den):
            rem[shift + i] -= f * d
        rem = _trim(rem)
    return quot, rem


def poly_gcd(a, b):
    """Monic gcd of two univariate coefficient lists."""
    a, b = _trim(a), _trim(b)
    while b:
        _, r = poly_divmod(a, b)
        a, b = b, r
    if not a:
        return []
    lead = Fraction(a[-1])
    return [Fraction(x) / lead for x in a]


def _divisors(m: int) -> list:
    m = abs(m)
    small, large = [], []
    d = 1
    while d * d <= m:
        if m % d == 0:
            small.append(d)
            if d * d != m:
                large.append(m // d)
        d += 1
    return small + large[::-1]


def rational_roots(coeffs) -> list:
    """All rational roots of a univariate polynomial (increasing-degree coefficients).

    Uses the rational root theorem on the integer-scaled polynomial, so it is
    exact for any degree; the zero polynomial raises ValueError since every
    value is a root.
    """
    p = _trim(as_fraction(c) for c in coeffs)
    if not p:
        raise ValueError("the zero polynomial has every value as a root")
    roots = []
    # strip the factor kappa**m
    while p and p[0] == 0:
        p = p[1:]
        if 0 not in roots:
            roots.append(Fraction(0))
    if len(p) <= 1:
        return sorted(roots)
    scale = reduce(lcm, (c.denominator for c in p), 1)
    ints = [int(c * scale) for c in p]
    g = reduce(gcd, ints)
    ints = [x // g for x in ints]
    for num in _divisors(ints[0]):
        for den in _divisors(ints[-1]):
            for cand in (Fraction(num, den), Fraction(-num, den)):
                if cand in roots:
                    continue
                if sum(c * cand**i for i, c in enumerate(ints)) == 0:
                    roots.append(cand)
    return sorted(roots)


def common_rational_roots(polys: Iterable[ParamPoly], name: str = "kappa"):
    """Rational values of ``name`` annihilating every polynomial.

    Returns ``None`` when all polynomials vanish identically (no constraint).
    """
    g: list = []
    for p in polys:
        g = poly_gcd(g, p.univariate_coeffs(name))
    if not g:
        return None
    return rational_roots(g)
