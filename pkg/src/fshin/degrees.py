"""Exact degree arithmetic, fuzzy operators, inequality algebra, conjugation.

Degrees are exact rationals (fractions.Fraction).  Floating point is never
used: whether two bounds conjugate can hinge on exact equality of degrees
(e.g. ">= n" against "< m" clashes exactly when n >= m), so rounding would
change answers.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Degree = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)

DegreeLike = Union[Degree, int, str]


def to_degree(value: DegreeLike) -> Degree:
    """Convert an int, exact-decimal string, or "p/q" string to a Degree."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)  # handles "0.75" and "3/4" exactly
    raise TypeError(f"cannot interpret {value!r} as a degree")


def format_degree(d: Degree) -> str:
    """Shortest exact rendering: decimal when terminating, else p/q."""
    den = d.denominator
    while den % 2 == 0:
        den //= 2
    while den % 5 == 0:
        den //= 5
    if den != 1:
        return f"{d.numerator}/{d.denominator}"
    if d.denominator == 1:
        return str(d.numerator)
    # terminating decimal: places = max multiplicity of 2 and 5 in the denominator
    twos = fives = 0
    den = d.denominator
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    places = max(twos, fives)
    scaled = d * 10**places
    assert scaled.denominator == 1
    digits = str(abs(scaled.numerator)).rjust(places + 1, "0")
    sign = "-" if d < 0 else ""
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


def neg_lukasiewicz(d: Degree) -> Degree:
    """Lukasiewicz complement: 1 - d, exactly."""
    return ONE - d


def tnorm_min(a: Degree, b: Degree) -> Degree:
    return min(a, b)


def tconorm_max(a: Degree, b: Degree) -> Degree:
    return max(a, b)


def impl_kd(a: Degree, b: Degree) -> Degree:
    """Kleene-Dienes implication: max(1 - a, b)."""
    return max(ONE - a, b)


class Ineq(enum.Enum):
    GE = ">="
    GT = ">"
    LE = "<="
    LT = "<"

    @property
    def positive(self) -> bool:
        return self in (Ineq.GE, Ineq.GT)

    @property
    def negative(self) -> bool:
        return not self.positive

    @property
    def strict(self) -> bool:
        return self in (Ineq.GT, Ineq.LT)

    def holds(self, lhs: Degree, rhs: Degree) -> bool:
        """Whether "lhs <self> rhs" is true."""
        if self is Ineq.GE:
            return lhs >= rhs
        if self is Ineq.GT:
            return lhs > rhs
        if self is Ineq.LE:
            return lhs <= rhs
        return lhs < rhs

    def __str__(self) -> str:
        return self.value


_REFLECT = {Ineq.GE: Ineq.LE, Ineq.LE: Ineq.GE, Ineq.GT: Ineq.LT, Ineq.LT: Ineq.GT}
_NEGATE = {Ineq.GE: Ineq.LT, Ineq.LT: Ineq.GE, Ineq.GT: Ineq.LE, Ineq.LE: Ineq.GT}

# stable sort order for deterministic iteration
INEQ_ORDER = {Ineq.GE: 0, Ineq.GT: 1, Ineq.LE: 2, Ineq.LT: 3}


def reflect(k: Ineq) -> Ineq:
    """>= <-> <=, > <-> <."""
    return _REFLECT[k]


def negate(k: Ineq) -> Ineq:
    """>= <-> <, > <-> <=."""
    return _NEGATE[k]


@dataclass(frozen=True)
class SignedBound:
    """The "|><| n" suffix of a fuzzy assertion or membership triple."""

    ineq: Ineq
    degree: Degree

    def __str__(self) -> str:
        return f"{self.ineq} {format_degree(self.degree)}"


def conjugates(b1: SignedBound, b2: SignedBound) -> bool:
    """Whether two bounds on the same subject are jointly unsatisfiable.

    Only a positive and a negative bound can conjugate:
      (>= n, <  m) iff n >= m      (>  n, <  m) iff n >= m
      (>= n, <= m) iff n >  m      (>  n, <= m) iff n >= m
    Symmetric in argument order.
    """
    if b1.ineq.positive == b2.ineq.positive:
        return False
    pos, neg = (b1, b2) if b1.ineq.positive else (b2, b1)
    n, m = pos.degree, neg.degree
    if pos.ineq is Ineq.GE and neg.ineq is Ineq.LE:
        return n > m
    return n >= m
