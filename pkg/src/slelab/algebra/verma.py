"""Virasoro action on Verma modules in the PBW basis.

A basis state of the level-``N`` subspace is labelled by a partition
``(l1, ..., lk)`` with ``l1 >= ... >= lk`` and stands for
``L_{-l1} ... L_{-lk} |Delta>``.  All coefficients are exact
:class:`~slelab.algebra.poly.ParamPoly` objects.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

from .linalg import nullspace, rref
from .poly import VARIABLES, ParamPoly, as_fraction, format_fraction

CENTRAL = "central"


# partitions ---------------------------------------------------------------

@lru_cache(maxsize=None)
def _partitions(level: int, largest: int) -> tuple:
    if level == 0:
        return ((),)
    out = []
    for first in range(min(level, largest), 0, -1):
        for rest in _partitions(level - first, first):
            out.append((first,) + rest)
    return tuple(out)


def partitions(level: int) -> list:
    """Partitions of ``level`` in the canonical basis order.

    The order is lexicographically decreasing, e.g. level 4 gives
    ``(4), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)``.
    """
    if level < 0:
        raise ValueError("level must be non-negative")
    return list(_partitions(level, level))


def check_partition(parts) -> tuple:
    parts = tuple(int(p) for p in parts)
    if any(p <= 0 for p in parts):
        raise ValueError(f"partition parts must be positive: {parts}")
    if any(a < b for a, b in zip(parts, parts[1:])):
        raise ValueError(f"partition must be non-increasing: {parts}")
    return parts


# the algebra --------------------------------------------------------------

def commutator(m: int, k: int) -> list:
    """``[L_m, L_k]`` as a list of ``(index, coefficient)`` pairs.

    The central term, when present, is keyed by :data:`CENTRAL`.

    >>> commutator(2, -2)
    [(0, ParamPoly('4')), ('central', ParamPoly('1/2*c'))]
    """
    out = []
    if m != k:
        out.append((m + k, ParamPoly.const(m - k)))
    if m + k == 0 and m * (m * m - 1):
        out.append((CENTRAL, ParamPoly.var("c") * Fraction(m * (m * m - 1), 12)))
    return out


@dataclass(frozen=True)
class VermaParams:
    """Central charge and highest weight of a Verma module."""

    c: ParamPoly
    delta: ParamPoly

    def __init__(self, c=0, delta=0):
        object.__setattr__(self, "c", _to_poly(c))
        object.__setattr__(self, "delta", _to_poly(delta))

    @property
    def is_numeric(self) -> bool:
        return self.c.is_constant() and self.delta.is_constant()

    @classmethod
    def symbolic(cls) -> "VermaParams":
        return cls(ParamPoly.var("c"), ParamPoly.var("delta"))

    def subs(self, **values) -> "VermaParams":
        return VermaParams(self.c.subs(**values), self.delta.subs(**values))

    def __str__(self):
        return f"(c={self.c}, Δ={self.delta})"


def _to_poly(x) -> ParamPoly:
    return x if isinstance(x, ParamPoly) else ParamPoly.const(as_fraction(x))


class _Engine:
    """Memoised action of single modes on PBW monomials for fixed params."""

    def __init__(self, params: VermaParams):
        self.params = params
        self._cache: dict = {}

    def act(self, m: int, parts: tuple) -> dict:
        key = (m, parts)
        hit = self._cache.get(key)
        if hit is None:
            hit = self._act(m, parts)
            self._cache[key] = hit
        return hit

    def _act(self, m: int, parts: tuple) -> dict:
        out: dict = {}

        def add(p, coeff):
            total = out.get(p, ParamPoly()) + coeff
            if total.is_zero():
                out.pop(p, None)
            else:
                out[p] = total

        if m == 0:
            add(parts, self.params.delta + sum(parts))
            return out
        if not parts:
            if m < 0:
                add((-m,), ParamPoly.const(1))
            return out

        a, rest = parts[0], parts[1:]
        if m < 0:
            k = -m
            if k >= a:
                add((k,) + parts, ParamPoly.const(1))
                return out
            # L_{-k} L_{-a} = L_{-a} L_{-k} + (a - k) L_{-(a+k)}
            for p, cf in self.act(m, rest).items():
                for q, cf2 in self.act(-a, p).items():
                    add(q, cf * cf2)
            for q, cf in self.act(-(a + k), rest).items():
                add(q, cf * (a - k))
            return out

        # L_m L_{-a} = L_{-a} L_m + (m + a) L_{m-a} + (c/12) m (m^2 - 1) delta_{m,a}
        for p, cf in self.act(m, rest).items():
            for q, cf2 in self.act(-a, p).items():
                add(q, cf * cf2)
        for q, cf in self.act(m - a, rest).items():
            add(q, cf * (m + a))
        if m == a:
            add(rest, self.params.c * Fraction(m * (m * m - 1), 12))
        return out


@lru_cache(maxsize=64)
def _engine(params: VermaParams) -> _Engine:
    return _Engine(params)


# vectors ------------------------------------------------------------------

class PBWVector:
    """Homogeneous vector of a Verma module, immutable.

    ``terms`` maps partitions to nonzero ParamPoly coefficients.  A negative
    level is allowed only for the zero vector, which is what lowering the
    weight below the highest weight produces.
    """

    __slots__ = ("level", "_terms", "params")

    def __init__(self, level: int, terms: Mapping | None, params: VermaParams):
        if level < 0 and terms:
            raise ValueError("only the zero vector may sit below level 0")
        clean = {}
        for parts, coeff in (terms or {}).items():
            parts = check_partition(parts)
            if sum(parts) != level:
                raise ValueError(f"partition {parts} does not have level {level}")
            coeff = ParamPoly.coerce(coeff if isinstance(coeff, ParamPoly) else as_fraction(coeff))
            if coeff:
                clean[parts] = clean.get(parts, ParamPoly()) + coeff
                if not clean[parts]:
                    del clean[parts]
        order = {p: i for i, p in enumerate(partitions(level))} if level >= 0 else {}
        self.level = level
        self._terms = dict(sorted(clean.items(), key=lambda kv: order[kv[0]]))
        self.params = params

    @classmethod
    def highest_weight(cls, params: VermaParams) -> "PBWVector":
        return cls(0, {(): 1}, params)

    @classmethod
    def zero(cls, level: int, params: VermaParams) -> "PBWVector":
        return cls(level, {}, params)

    @classmethod
    def from_coefficients(cls, level: int, coeffs: Iterable, params: VermaParams) -> "PBWVector":
        """Build from a coefficient list in the order of :func:`partitions`."""
        basis = partitions(level)
        coeffs = list(coeffs)
        if len(coeffs) != len(basis):
            raise ValueError(f"level {level} has {len(basis)} basis states, got {len(coeffs)}")
        return cls(level, dict(zip(basis, coeffs)), params)

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def coefficient(self, parts) -> ParamPoly:
        return self._terms.get(tuple(parts), ParamPoly())

    def coefficients(self) -> list:
        """Coefficients over the full basis of this level."""
        if self.level < 0:
            return []
        return [self.coefficient(p) for p in partitions(self.level)]

    def is_zero(self) -> bool:
        return not self._terms

    # arithmetic ---------------------------------------------------------

    def _check(self, other: "PBWVector"):
        if other.level != self.level:
            raise ValueError(f"level mismatch: {self.level} vs {other.level}")
        if other.params != self.params:
            raise ValueError("vectors live in different Verma modules")

    def __add__(self, other: "PBWVector") -> "PBWVector":
        self._check(other)
        terms = dict(self._terms)
        for p, cf in other._terms.items():
            terms[p] = terms.get(p, ParamPoly()) + cf
        return PBWVector(self.level, terms, self.params)

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar) -> "PBWVector":
        s = scalar if isinstance(scalar, ParamPoly) else ParamPoly.const(as_fraction(scalar))
        return PBWVector(self.level, {p: cf * s for p, cf in self._terms.items()}, self.params)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, PBWVector):
            return NotImplemented
        return (self.level, self._terms, self.params) == (other.level, other._terms, other.params)

    def __hash__(self):
        return hash((self.level, tuple(self._terms.items()), self.params))

    def subs(self, **values) -> "PBWVector":
        """Substitute parameter values into coefficients and module data."""
        return PBWVector(
            self.level,
            {p: cf.subs(**values) for p, cf in self._terms.items()},
            self.params.subs(**values),
        )

    # mode action --------------------------------------------------------

    def apply(self, m: int) -> "PBWVector":
        """Apply ``L_m`` for any integer ``m``."""
        eng = _engine(self.params)
        new_level = self.level - m
        if new_level < 0 or self.is_zero():
            return PBWVector(new_level, {}, self.params)
        out: dict = {}
        for parts, cf in self._terms.items():
            for q, cf2 in eng.act(m, parts).items():
                out[q] = out.get(q, ParamPoly()) + cf * cf2
        return PBWVector(new_level, out, self.params)

    def lower(self, k: int) -> "PBWVector":
        return act_lowering(self, k)

    def raise_(self, k: int) -> "PBWVector":
        return act_raising(self, k)

    def __str__(self):
        if not self._terms:
            return "0"
        out = []
        for parts, cf in self._terms.items():
            ops = "".join(f"L_{{-{p}}}" for p in parts) or "1"
            out.append(f"({cf})·{ops}")
        return " + ".join(out) + "|Δ⟩"

    def __repr__(self):
        return f"PBWVector(level={self.level}, {self})"

    # serialisation ------------------------------------------------------

    def to_dict(self, include_params: bool = True) -> dict:
        d = {
            "level": self.level,
            "terms": [
                {"partition": list(p), "coeff": _coeff_to_json(cf)}
                for p, cf in self._terms.items()
            ],
        }
        if include_params:
            d["params"] = {"c": _coeff_to_json(self.params.c),
                           "delta": _coeff_to_json(self.params.delta)}
        return d

    def to_json(self, include_params: bool = True) -> str:
        return json.dumps(self.to_dict(include_params), ensure_ascii=False)

    @classmethod
    def from_dict(cls, data: Mapping, params: VermaParams | None = None) -> "PBWVector":
        if params is None:
            if "params" not in data:
                raise ValueError("params missing from serialised vector")
            params = VermaParams(_coeff_from_json(data["params"]["c"]),
                                 _coeff_from_json(data["params"]["delta"]))
        terms = {tuple(t["partition"]): _coeff_from_json(t["coeff"]) for t in data["terms"]}
        return cls(int(data["level"]), terms, params)

    @classmethod
    def from_json(cls, text: str, params: VermaParams | None = None) -> "PBWVector":
        return cls.from_dict(json.loads(text), params)


def _coeff_to_json(cf: ParamPoly):
    if cf.is_constant():
        return format_fraction(cf.constant_value())
    return [
        {"exponents": {v: e for v, e in zip(VARIABLES, exp) if e}, "coeff": format_fraction(q)}
        for exp, q in cf.terms.items()
    ]


def _coeff_from_json(obj) -> ParamPoly:
    if isinstance(obj, str):
        return ParamPoly.const(Fraction(obj))
    terms = {}
    for mono in obj:
        exp = tuple(int(mono["exponents"].get(v, 0)) for v in VARIABLES)
        terms[exp] = Fraction(mono["coeff"])
    return ParamPoly(terms)


# operations ---------------------------------------------------------------

def act_lowering(v: PBWVector, k: int) -> PBWVector:
    """``L_{-k} v`` re-ordered into the PBW basis; raises the level by ``k``."""
    if k < 1:
        raise ValueError("lowering index must be positive")
    return v.apply(-k)


def act_raising(v: PBWVector, k: int) -> PBWVector:
    """``L_k v`` reduced by commuting through to the highest-weight state.

    If ``k`` exceeds the level the result is the zero vector (at a negative level).
    """
    if k < 1:
        raise ValueError("raising index must be positive")
    return v.apply(k)


def apply_word(v: PBWVector, parts: Iterable[int]) -> PBWVector:
    """``L_{-p1} L_{-p2} ... L_{-pk} v`` (rightmost operator acts first)."""
    for p in reversed(tuple(parts)):
        v = act_lowering(v, p)
    return v


def basis_vector(parts, params: VermaParams) -> PBWVector:
    parts = check_partition(parts)
    return PBWVector(sum(parts), {parts: 1}, params)


def gram_matrix(level: int, params: VermaParams) -> list:
    """Shapovalov form on the level-``level`` subspace.

    Rows and columns follow :func:`partitions`; entry ``(lam, mu)`` is
    ``<Delta| L_{lam_k} ... L_{lam_1} L_{-mu_1} ... L_{-mu_k} |Delta>``.
    """
    if level < 1:
        raise ValueError("level must be positive")
    basis = partitions(level)
    matrix = []
    for lam in basis:
        row = []
        for mu in basis:
            v = basis_vector(mu, params)
            for part in lam:
                v = act_raising(v, part)
            row.append(v.coefficient(()))
        matrix.append(row)
    return matrix


def gram_determinant(level: int, params: VermaParams) -> Fraction:
    """Determinant of the Gram matrix at numeric parameters."""
    from .linalg import determinant

    if not params.is_numeric:
        raise ValueError("numeric (c, Delta) required")
    g = gram_matrix(level, params)
    return determinant([[e.constant_value() for e in row] for row in g])


def _constraint_rows(level: int, params: VermaParams) -> list:
    basis = partitions(level)
    images = [[act_raising(basis_vector(mu, params), k) for mu in basis] for k in (1, 2)]
    rows = []
    for k, imgs in zip((1, 2), images):
        if level - k < 0:
            continue
        for target in partitions(level - k):
            rows.append([img.coefficient(target).constant_value() for img in imgs])
    return rows


def find_singular_vectors(level: int, params: VermaParams) -> list:
    """Basis of vectors at ``level`` killed by ``L_1`` and ``L_2``.

    Each vector has coefficient 1 on its first nonzero basis state (in the
    order of :func:`partitions`), and the list is in reduced echelon form.
    """
    if level < 1:
        raise ValueError("level must be positive")
    if not params.is_numeric:
        raise ValueError("find_singular_vectors needs numeric (c, Delta)")
    rows = _constraint_rows(level, params)
    basis = nullspace(rows, len(partitions(level)))
    return [PBWVector.from_coefficients(level, vec, params) for vec in basis]


def is_singular(v: PBWVector) -> bool:
    return act_raising(v, 1).is_zero() and act_raising(v, 2).is_zero()


def descendants(generator: PBWVector, level: int) -> list:
    """All ``L_{-lam} g`` with ``|lam| = level - g.level`` (a spanning set)."""
    diff = level - generator.level
    if diff < 0:
        return []
    return [apply_word(generator, lam) for lam in partitions(diff)]


def _span_rows(generators: Iterable[PBWVector], level: int) -> list:
    rows = []
    for g in generators:
        for d in descendants(g, level):
            if d.is_zero():
                continue
            row = []
            for cf in d.coefficients():
                if not cf.is_constant():
                    raise ValueError("submodule generators must have numeric coefficients")
                row.append(cf.constant_value())
            rows.append(row)
    return rows


def submodule_reduce(v: PBWVector, generators: Iterable[PBWVector]) -> PBWVector:
    """Canonical residue of ``v`` modulo the submodule generated by ``generators``.

    The level-``v.level`` part of the submodule is spanned by the lowering
    descendants of each generator; its reduced echelon basis is used to
    clear every pivot coordinate of ``v``.  Coefficients of ``v`` may be
    symbolic (e.g. depend on kappa), the generators must be numeric.
    """
    generators = list(generators)
    for g in generators:
        if g.params != v.params:
            raise ValueError("generator lives in a different module")
        if g.level > v.level:
            raise ValueError("generator level exceeds the vector's level")
    rows = _span_rows(generators, v.level)
    if not rows:
        return v
    reduced, pivots = rref(rows)
    coeffs = v.coefficients()
    for row, p in zip(reduced, pivots):
        f = coeffs[p]
        if f:
            coeffs = [a - f * b for a, b in zip(coeffs, row)]
    return PBWVector.from_coefficients(v.level, coeffs, v.params)


def in_submodule(v: PBWVector, generators: Iterable[PBWVector]) -> bool:
    return submodule_reduce(v, generators).is_zero()


def primitive_singular_vectors(params: VermaParams, max_level: int) -> list:
    """Singular vectors up to ``max_level`` not already generated by lower ones."""
    found: list = []
    for level in range(1, max_level + 1):
        for s in find_singular_vectors(level, params):
            if not in_submodule(s, found):
                found.append(s)
    return found
