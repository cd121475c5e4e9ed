"""Exact continued-fraction expansion of rationals and their convergents.

The expansion is computed as the Euclidean quotient sequence on the
numerator/denominator pair, never through floating point: float
reciprocals mis-round coefficients for denominators near powers of two,
exactly the regime the period-recovery step lives in.  The quotient
sequence automatically yields the normalized form (last coefficient > 1
unless the expansion is a single term), so expansions are unique.
"""

from __future__ import annotations

from dataclasses import dataclass

from .numtheory import gcd_euclid


@dataclass(frozen=True)
class CFExpansion:
    """A finite simple continued fraction [a0; a1, ..., aN] of a rational.

    ``convergents[n]`` is the reduced fraction (p_n, q_n) truncating the
    expansion after coefficient n; the last convergent equals
    numerator/denominator in lowest terms.
    """

    numerator: int
    denominator: int
    coefficients: tuple[int, ...]
    convergents: tuple[tuple[int, int], ...]


def expansion_coefficients(numerator: int, denominator: int) -> list[int]:
    """Quotient sequence of the Euclidean algorithm on numerator/denominator."""
    if denominator < 1:
        raise ValueError("denominator must be >= 1")
    if numerator < 0:
        raise ValueError("numerator must be non-negative")
    coefficients = []
    while True:
        a, remainder = divmod(numerator, denominator)
        coefficients.append(a)
        if remainder == 0:
            return coefficients
        numerator, denominator = denominator, remainder


def convergents_from_coefficients(coefficients: list[int] | tuple[int, ...]) -> list[tuple[int, int]]:
    """Convergents p_n/q_n via the three-term recurrence.

    Seeds p_0 = a_0, q_0 = 1, p_1 = a_1*a_0 + 1, q_1 = a_1, then
    p_n = a_n*p_{n-1} + p_{n-2} and likewise for q_n.
    """
    convergents = []
    p_prev, p_prev2 = 1, 0
    q_prev, q_prev2 = 0, 1
    for a in coefficients:
        p = a * p_prev + p_prev2
        q = a * q_prev + q_prev2
        convergents.append((p, q))
        p_prev2, p_prev = p_prev, p
        q_prev2, q_prev = q_prev, q
    return convergents


def cf_expand(numerator: int, denominator: int) -> CFExpansion:
    """Full normalized expansion of numerator/denominator with its convergents.

    Computed eagerly: desk-scale denominators keep the expansion length at
    O(lg denominator), so there is nothing to gain from laziness.  An input
    of 0/q expands to the single coefficient [0].
    """
    coefficients = expansion_coefficients(numerator, denominator)
    convergents = convergents_from_coefficients(coefficients)
    return CFExpansion(
        numerator=numerator,
        denominator=denominator,
        coefficients=tuple(coefficients),
        convergents=tuple(convergents),
    )


def convergents_of(expansion: CFExpansion) -> list[tuple[int, int]]:
    """Convergent list of an expansion (recomputed from its coefficients)."""
    return convergents_from_coefficients(expansion.coefficients)


def is_convergent(a: int, b: int, numerator: int, denominator: int) -> bool:
    """True iff a/b in lowest terms is a convergent of numerator/denominator."""
    if b < 1:
        raise ValueError("b must be >= 1")
    g = gcd_euclid(a, b) if a else b
    target = (a // g, b // g)
    return target in cf_expand(numerator, denominator).convergents
