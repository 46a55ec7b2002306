"""Exact rationals and p-adic valuations.

All field arithmetic in this package happens in Q via fractions.Fraction,
which already guarantees lowest terms and a positive denominator.  This
module adds the p-adic valuation (with a distinguished infinity for the
valuation of 0) and the string forms used in corpus files and CLI output.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Union

from .errors import InputError, NonPrimeError

Rational = Fraction

#: Valuation of 0.  Compares greater than every finite valuation and
#: absorbs addition, which is exactly the arithmetic downstream min/sum
#: logic relies on.
INFINITY = float("inf")

Valuation = Union[int, float]

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; exact for all n < 3.3e24."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n == q:
            return True
        if n % q == 0:
            return False
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def check_prime(p) -> int:
    if not isinstance(p, int) or isinstance(p, bool) or not is_prime(p):
        raise NonPrimeError(f"not a prime: {p!r}")
    return p


def val(q, p: int) -> Valuation:
    """Exponent of the prime p in the rational q; INFINITY iff q == 0.

    Satisfies val(q1*q2) = val(q1) + val(q2) and
    val(q1+q2) >= min(val(q1), val(q2)), with equality when the two
    valuations differ.
    """
    check_prime(p)
    q = Fraction(q)
    if q == 0:
        return INFINITY
    num, den = q.numerator, q.denominator
    v = 0
    while num % p == 0:
        num //= p
        v += 1
    if v:
        return v  # q is in lowest terms, so p cannot also divide den
    while den % p == 0:
        den //= p
        v -= 1
    return v


def int_val(q, p: int) -> int:
    """val() for callers that require a finite result."""
    v = val(q, p)
    if v == INFINITY:
        raise InputError("valuation of zero where a finite valuation is required")
    return int(v)


def parse_rational(text: str) -> Fraction:
    """Parse 'num' or 'num/den' into an exact rational."""
    if not isinstance(text, str):
        raise InputError(f"expected a rational string, got {text!r}")
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad rational {text!r}") from exc


def format_rational(q) -> str:
    """Canonical 'num/den' or 'num' form (lowest terms, positive denominator)."""
    return str(Fraction(q))


def val_to_json(v: Valuation):
    """Finite valuations serialize as ints, infinity as the string 'inf'."""
    if v == INFINITY:
        return "inf"
    return int(v)
