"""Exact integer and rational arithmetic primitives.

Every identity check and lattice decision downstream must be a genuine
decision procedure, so this module is integer and ``Fraction`` arithmetic
only -- no floats anywhere.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

# The universal exact scalar: arbitrary precision, always stored reduced with
# a positive denominator, which is exactly the canonical form we need.
Rational = Fraction


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"``, ``"p"``, or an exact decimal string such as ``"0.25"``.

    Decimal strings are exact (power-of-ten denominators), never binary floats.
    """
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {text!r}") from exc


def format_rational(q: Fraction) -> str:
    """Render as ``"p/q"``, or plain ``"p"`` when the denominator is 1."""
    return str(Fraction(q))


def factorial(n: int) -> int:
    """n! as an exact integer."""
    if n < 0:
        raise ValueError(f"factorial requires n >= 0, got {n}")
    return math.factorial(n)


def double_factorial_odd(i: int) -> int:
    """(2i-1)!! = 1*3*5*...*(2i-1), with the convention (2*0-1)!! = 1."""
    if i < 0:
        raise ValueError(f"double_factorial_odd requires i >= 0, got {i}")
    out = 1
    for odd in range(3, 2 * i, 2):
        out *= odd
    return out


def binomial(n: int, k: int) -> int:
    """C(n, k); zero when k > n."""
    if n < 0 or k < 0:
        raise ValueError(f"binomial requires n, k >= 0, got n={n}, k={k}")
    return math.comb(n, k)


def multinomial(k: int, parts: Sequence[int]) -> int:
    """k! / (parts_1! * ... * parts_r!) for parts summing to k."""
    if k < 0:
        raise ValueError(f"multinomial requires k >= 0, got {k}")
    if any(p < 0 for p in parts):
        raise ValueError(f"multinomial parts must be >= 0, got {list(parts)}")
    if sum(parts) != k:
        raise ValueError(
            f"multinomial parts must sum to k={k}, got sum {sum(parts)}"
        )
    out = math.factorial(k)
    for p in parts:
        out //= math.factorial(p)
    return out
