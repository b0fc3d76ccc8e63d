"""Exact rational helpers: "p/q" serialization and integer root bracketing."""

from fractions import Fraction

from .errors import UsageError


def format_rational(x: Fraction) -> str:
    """Render a Fraction as "p" or "p/q" (lowest terms, q > 0)."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s) -> Fraction:
    """Parse "p/q" or an integer (int or string) into a Fraction."""
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, Fraction):
        return s
    if not isinstance(s, str):
        raise UsageError(f"expected rational string or integer, got {type(s).__name__}")
    try:
        if "/" in s:
            p, q = s.split("/")
            return Fraction(int(p), int(q))
        return Fraction(int(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"malformed rational {s!r}") from exc


def integer_kth_root(m: int, k: int) -> int:
    """floor(m ** (1/k)) for m >= 0, exactly, by Newton iteration on integers."""
    if m < 0 or k < 1:
        raise UsageError("integer_kth_root needs m >= 0, k >= 1")
    if m == 0:
        return 0
    if k == 1:
        return m
    r = 1 << ((m.bit_length() + k - 1) // k)
    while True:
        nr = ((k - 1) * r + m // r ** (k - 1)) // k
        if nr >= r:
            break
        r = nr
    while r ** k > m:
        r -= 1
    return r


def kth_root_interval(x: Fraction, k: int, digits: int = 12) -> tuple[Fraction, Fraction]:
    """Bracket x**(1/k) for x >= 0 in an interval of width 10**-digits.

    Returns (lo, hi) with lo <= x**(1/k) <= hi, both exact rationals with
    denominator 10**digits.
    """
    x = Fraction(x)
    if x < 0:
        raise UsageError("kth_root_interval needs x >= 0")
    scale = 10 ** digits
    # floor((x * scale**k) ** (1/k)) == floor(scale * x**(1/k))
    r = integer_kth_root(x.numerator * scale ** k // x.denominator, k)
    # floor division may undershoot by one; fix with exact comparisons
    while (r + 1) ** k * x.denominator <= x.numerator * scale ** k:
        r += 1
    while r ** k * x.denominator > x.numerator * scale ** k:
        r -= 1
    return Fraction(r, scale), Fraction(r + 1, scale)
