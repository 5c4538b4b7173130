"""Exact dyadic rationals.

Boolean-valued functions on ``2**n`` points have means, Fourier
coefficients and influences of the form ``count / 2**k``.  They are held
as :class:`fractions.Fraction` and serialized as ``"num/den"`` strings so
that exactness survives a JSON round trip.
"""
from __future__ import annotations

from fractions import Fraction


class NotDyadicError(ValueError):
    pass


def is_dyadic(q: Fraction) -> bool:
    den = Fraction(q).denominator
    return den & (den - 1) == 0


def dyadic_exponent(q: Fraction) -> int:
    """Return ``k`` such that ``q`` has reduced denominator ``2**k``."""
    q = Fraction(q)
    if not is_dyadic(q):
        raise NotDyadicError(f"{q} is not a dyadic rational")
    return q.denominator.bit_length() - 1


def to_str(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def from_str(s: str) -> Fraction:
    return Fraction(s)
