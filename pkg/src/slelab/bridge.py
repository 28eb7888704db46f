"""From grade-n walks on the Virasoro group to null vectors and kappa.

The Ito form of the walk attached to a grade-``n`` evolution with sign
choice ``s`` has drift

    (2(-1)^s - kappa (n-1) / (2 n^2)) L_{-2n} + kappa / (2 n^2) L_{-n}^2

and noise ``sqrt(kappa)/n L_{-n} dB``.  ``G_t|Delta>`` is a martingale when
the drift applied to ``|Delta>`` vanishes in the module, which pins kappa.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra.minimal import minimal_model_c, minimal_model_weight
from .algebra.poly import (
    KAPPA,
    ParamPoly,
    as_fraction,
    common_rational_roots,
    format_fraction,
    rational_roots,
)
from .algebra.verma import (
    PBWVector,
    VermaParams,
    act_raising,
    primitive_singular_vectors,
    submodule_reduce,
)


@dataclass(frozen=True)
class CandidateSpec:
    """Grade ``n``, sign choice ``s`` and kappa (symbolic by default)."""

    n: int
    s: int
    kappa: ParamPoly = KAPPA

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError("grade n must be a positive integer")
        if self.s not in (1, 2):
            raise ValueError("sign choice s must be 1 or 2")
        k = self.kappa
        if not isinstance(k, ParamPoly):
            object.__setattr__(self, "kappa", ParamPoly.const(as_fraction(k)))


@dataclass(frozen=True)
class GeneratorDrift:
    """Coefficients of the Ito walk; the noise coefficient is kept squared."""

    coeff_L_minus_2n: ParamPoly
    coeff_L_minus_n_squared: ParamPoly
    noise_coeff_squared: ParamPoly

    def __post_init__(self):
        if self.coeff_L_minus_n_squared != self.noise_coeff_squared / 2:
            raise ValueError("Ito bookkeeping violated: square term must be half the noise variance")


def _sign(s: int) -> int:
    return 1 if s % 2 == 0 else -1


def drift_from_walk(spec: CandidateSpec) -> GeneratorDrift:
    n, k = spec.n, spec.kappa
    a = 2 * _sign(spec.s) - k * Fraction(n - 1, 2 * n * n)
    b = k * Fraction(1, 2 * n * n)
    return GeneratorDrift(a, b, k * Fraction(1, n * n))


def candidate_vector(spec: CandidateSpec, params: VermaParams | None = None) -> PBWVector:
    """The drift applied to ``|Delta>``: a level-``2n`` vector."""
    params = params if params is not None else VermaParams.symbolic()
    d = drift_from_walk(spec)
    n = spec.n
    return PBWVector(2 * n, {(2 * n,): d.coeff_L_minus_2n, (n, n): d.coeff_L_minus_n_squared}, params)


def obstruction_L1(spec: CandidateSpec, params: VermaParams | None = None) -> PBWVector:
    """``L_1`` of the candidate, from the closed-form coefficients.

    Only valid for ``n >= 2``; for ``n = 1`` the level-two singular
    conditions apply instead.
    """
    n = spec.n
    if n < 2:
        raise ValueError("the L_1 obstruction formula needs n >= 2")
    params = params if params is not None else VermaParams.symbolic()
    d = drift_from_walk(spec)
    k = spec.kappa
    top = d.coeff_L_minus_2n * (2 * n + 1) + k * Fraction(n + 1, 2 * n * n)
    mixed = k * Fraction(n + 1, n * n)
    return PBWVector(2 * n - 1, {(2 * n - 1,): top, (n, n - 1): mixed}, params)


# solving for kappa ----------------------------------------------------------

@dataclass(frozen=True)
class RationalFunction:
    """``num(kappa) / den(kappa)`` with ParamPoly numerator and denominator."""

    num: ParamPoly
    den: ParamPoly

    def __call__(self, kappa) -> Fraction:
        d = self.den(kappa=kappa)
        if not d:
            raise ZeroDivisionError(f"denominator vanishes at kappa = {kappa}")
        return self.num(kappa=kappa) / d

    def equals(self, num: ParamPoly, den: ParamPoly) -> bool:
        """Identity test ``self == num/den`` by cross-multiplication."""
        return (self.num * den - num * self.den).is_zero()

    def __str__(self):
        return f"({self.num}) / ({self.den})"


@dataclass(frozen=True)
class KappaFamily:
    """One-parameter family ``kappa -> (c(kappa), Delta(kappa))``."""

    c: RationalFunction
    delta: RationalFunction
    excluded: tuple = ()

    def at(self, kappa) -> tuple:
        k = as_fraction(kappa)
        return self.c(k), self.delta(k)


@dataclass(frozen=True)
class SingularSolution:
    family: KappaFamily | None = None
    points: tuple = ()

    @property
    def is_empty(self) -> bool:
        return self.family is None and not self.points


def _linear_parts(eq: ParamPoly):
    """Split ``eq = A c + B Delta + E`` with A, B, E depending on kappa only."""
    if eq.degree("c") > 1 or eq.degree("delta") > 1:
        raise NotImplementedError(f"equation not linear in (c, Delta): {eq}")
    A = eq.coefficient_in("c", 1)
    B = eq.coefficient_in("delta", 1)
    E = eq.coefficient_in("c", 0).coefficient_in("delta", 0)
    if A.variables() - {"kappa"} or B.variables() - {"kappa"}:
        raise NotImplementedError(f"mixed c*Delta term in {eq}")
    return A, B, E


def _singular_equations(spec: CandidateSpec) -> list:
    v = candidate_vector(spec)
    eqs = []
    for k in (1, 2):
        eqs.extend(cf for cf in act_raising(v, k).coefficients() if cf)
    return eqs


def solve_kappa_singular(n: int, s: int) -> SingularSolution:
    """Solve ``L_1 v = L_2 v = 0`` for the grade-``n`` candidate over (kappa, c, Delta)."""
    spec = CandidateSpec(n, s)
    eqs = _singular_equations(spec)
    kappa_only = [e for e in eqs if e.variables() <= {"kappa"}]
    rest = [e for e in eqs if not e.variables() <= {"kappa"}]

    if kappa_only:
        roots = common_rational_roots(kappa_only)
        if roots is not None:
            points = []
            for k in roots:
                sol = _solve_linear_numeric([e.subs(kappa=k) for e in rest])
                if sol is not None:
                    points.append((k,) + sol)
            return SingularSolution(points=tuple(points))

    parts = [_linear_parts(e) for e in rest]
    for i in range(len(parts)):
        for j in range(i + 1, len(parts)):
            (A1, B1, E1), (A2, B2, E2) = parts[i], parts[j]
            D = A1 * B2 - A2 * B1
            if D.is_zero():
                continue
            Nc = -E1 * B2 + E2 * B1
            Nd = -A1 * E2 + A2 * E1
            if all((A * Nc + B * Nd + E * D).is_zero() for A, B, E in parts):
                excluded = tuple(rational_roots(D.univariate_coeffs()))
                return SingularSolution(
                    family=KappaFamily(RationalFunction(Nc, D), RationalFunction(Nd, D), excluded)
                )
            return SingularSolution()
    return SingularSolution()


def _solve_linear_numeric(eqs):
    """Unique (c, Delta) solving exact linear equations, or None."""
    from .algebra.linalg import rref

    rows = []
    for e in eqs:
        A, B, E = _linear_parts(e)
        rows.append([A.constant_value(), B.constant_value(), -E.constant_value()])
    if not rows:
        return None
    red, piv = rref(rows)
    if 2 in piv or piv != [0, 1]:
        return None
    return red[0][2], red[1][2]


@dataclass(frozen=True)
class ModuleSpec:
    """A Verma module quotiented by the submodule of explicit generators."""

    params: VermaParams
    generators: tuple
    label: str = ""

    @classmethod
    def minimal_model(cls, p: int, pp: int, r: int, s: int, max_level: int) -> "ModuleSpec":
        c = minimal_model_c(p, pp)
        delta = minimal_model_weight(p, pp, r, s)
        params = VermaParams(c, delta)
        gens = tuple(primitive_singular_vectors(params, max_level))
        return cls(params, gens, f"M({p},{pp}) ({r},{s}) module")

    @classmethod
    def verma_quotient(cls, params: VermaParams, max_level: int) -> "ModuleSpec":
        gens = tuple(primitive_singular_vectors(params, max_level))
        return cls(params, gens, f"Verma quotient at {params}")


@dataclass
class KappaNullResult:
    n: int
    s: int
    model: tuple
    module: tuple
    roots: list | None
    residue: PBWVector | None
    certificates: dict = field(default_factory=dict)
    generators: tuple = ()
    diagnostic: str = ""

    @property
    def nonnegative_roots(self) -> list:
        return [k for k in (self.roots or []) if k >= 0]

    @property
    def negative_roots(self) -> list:
        return [k for k in (self.roots or []) if k < 0]

    def to_dict(self) -> dict:
        out = {
            "n": self.n,
            "s": self.s,
            "model": list(self.model),
            "module": list(self.module),
            "kappa": [format_fraction(k) for k in self.nonnegative_roots],
            "negative_roots": [format_fraction(k) for k in self.negative_roots],
            "certificate": {format_fraction(k): v.to_dict(include_params=False)
                            for k, v in self.certificates.items()},
            "residue": self.residue.to_dict(include_params=False) if self.residue is not None else None,
            "generator_levels": [g.level for g in self.generators],
        }
        if self.roots is None and self.residue is not None:
            out["note"] = "candidate is null for every kappa"
        elif not self.nonnegative_roots:
            out["note"] = "no non-negative solution"
        if self.diagnostic:
            out["diagnostic"] = self.diagnostic
        return out


def solve_kappa_null(n: int, s: int, p: int, pp: int, r: int, s_label: int) -> KappaNullResult:
    """All rational kappa making the candidate null in the (r, s_label) module of M(p, p').

    kappa stays symbolic through the reduction; the residue coefficients
    are polynomials in kappa whose common rational roots are returned,
    negative ones included.
    """
    spec = CandidateSpec(n, s)
    module = ModuleSpec.minimal_model(p, pp, r, s_label, 2 * n)
    result = KappaNullResult(n, s, (p, pp), (r, s_label), [], None, generators=module.generators)
    if not module.generators:
        result.diagnostic = f"no singular vectors at or below level {2 * n}"
        return result
    residue = submodule_reduce(candidate_vector(spec, module.params), module.generators)
    result.residue = residue
    roots = common_rational_roots([cf for cf in residue.coefficients() if cf] or [ParamPoly()])
    result.roots = roots
    for k in roots or []:
        result.certificates[k] = residue.subs(kappa=k)
    return result


def martingale_generator_check(spec: CandidateSpec, module: ModuleSpec):
    """Whether the walk's drift kills ``|Delta>`` in the quotient module.

    Returns ``(is_null, residue)``; the residue is the certificate.
    """
    if not spec.kappa.is_constant():
        raise ValueError("martingale check needs a numeric kappa")
    residue = submodule_reduce(candidate_vector(spec, module.params), module.generators)
    return residue.is_zero(), residue
