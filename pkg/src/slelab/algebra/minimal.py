"""Minimal-model data and the kappa parameterisation of level-two modules."""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .poly import as_fraction


class DomainError(ValueError):
    """Raised for parameters outside an operation's domain."""


def _check_model(p: int, pp: int):
    if not (isinstance(p, int) and isinstance(pp, int)):
        raise DomainError("p and p' must be integers")
    if not (p > pp >= 2) or gcd(p, pp) != 1:
        raise DomainError(f"need p > p' >= 2 coprime, got ({p}, {pp})")


def minimal_model_c(p: int, pp: int) -> Fraction:
    """Central charge ``1 - 6 (p - p')^2 / (p p')`` of M(p, p')."""
    _check_model(p, pp)
    return 1 - Fraction(6 * (p - pp) ** 2, p * pp)


def minimal_model_weight(p: int, pp: int, r: int, s: int) -> Fraction:
    """Kac weight ``((r p - s p')^2 - (p - p')^2) / (4 p p')`` for 1 <= r < p', 1 <= s < p."""
    _check_model(p, pp)
    if not (1 <= r < pp and 1 <= s < p):
        raise DomainError(f"labels (r, s) = ({r}, {s}) out of range for M({p}, {pp})")
    return Fraction((r * p - s * pp) ** 2 - (p - pp) ** 2, 4 * p * pp)


def kac_labels(p: int, pp: int):
    """All admissible (r, s) labels of M(p, p')."""
    _check_model(p, pp)
    return [(r, s) for r in range(1, pp) for s in range(1, p)]


def singular_levels(p: int, pp: int, r: int, s: int) -> tuple:
    """Levels ``r s`` and ``(p' - r)(p - s)`` of the two primitive singular vectors."""
    minimal_model_weight(p, pp, r, s)
    return (r * s, (pp - r) * (p - s))


def kappa_parameterization(kappa) -> tuple:
    """``(c, Delta)`` for which ``(L_{-2} - kappa/4 L_{-1}^2)|Delta>`` is singular.

    >>> kappa_parameterization(6)
    (Fraction(0, 1), Fraction(0, 1))
    """
    k = as_fraction(kappa)
    if k <= 0:
        raise DomainError("kappa must be positive")
    c = 1 - 3 * (4 - k) ** 2 / (2 * k)
    delta = (6 - k) / (2 * k)
    return c, delta
