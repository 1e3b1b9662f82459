"""Exact money arithmetic and its text boundary.

All mechanism logic works on `fractions.Fraction` values; nothing in this
package ever touches binary floats for money or quality. Text I/O accepts
decimal strings (at most six fractional digits) and exact "p/q" rationals,
and emits whichever of the two can represent the value exactly, so
parse(format(x)) == x for every value.
"""

from __future__ import annotations

from fractions import Fraction

__all__ = [
    "Money",
    "MoneyError",
    "parse_money",
    "format_money",
    "format_money_fixed",
]

# Money is plain Fraction: wrapping it in a class would buy nothing but
# ceremony, and Fraction already gives exact add/sub/mul/compare.
Money = Fraction

# I/O boundary precision: six fractional digits.
_SCALE = 10**6


class MoneyError(ValueError):
    """Raised for unparseable or out-of-domain money text."""


def parse_money(text: str, *, allow_negative: bool = False) -> Fraction:
    """Parse decimal text (or an exact "p/q" rational) into a Fraction.

    Decimal inputs are limited to six fractional digits so that every
    accepted value is exactly representable and re-emittable.
    """
    if not isinstance(text, str):
        raise MoneyError(f"money must be a string, got {type(text).__name__}")
    s = text.strip()
    if not s:
        raise MoneyError("empty money string")
    try:
        if "/" in s:
            value = Fraction(s)
        else:
            sign = 1
            body = s
            if body[0] in "+-":
                sign = -1 if body[0] == "-" else 1
                body = body[1:]
            if not body or body.count(".") > 1:
                raise ValueError(s)
            whole, _, frac = body.partition(".")
            if frac and len(frac) > 6:
                raise MoneyError(f"more than 6 fractional digits: {text!r}")
            whole = whole or "0"
            if not whole.isdigit() or (frac and not frac.isdigit()):
                raise ValueError(s)
            num = int(whole) * _SCALE + int(frac.ljust(6, "0") or "0")
            value = Fraction(sign * num, _SCALE)
    except MoneyError:
        raise
    except (ValueError, ZeroDivisionError) as exc:
        raise MoneyError(f"bad money string: {text!r}") from exc
    if value < 0 and not allow_negative:
        raise MoneyError(f"negative money not allowed here: {text!r}")
    return value


def format_money(value: Fraction) -> str:
    """Render exactly: canonical decimal when the denominator divides 10^6,
    else the exact "p/q" form."""
    value = Fraction(value)
    if _SCALE % value.denominator == 0:
        scaled = value.numerator * (_SCALE // value.denominator)
        sign = "-" if scaled < 0 else ""
        scaled = abs(scaled)
        whole, frac = divmod(scaled, _SCALE)
        if frac == 0:
            return f"{sign}{whole}"
        return f"{sign}{whole}.{frac:06d}".rstrip("0")
    return f"{value.numerator}/{value.denominator}"


def format_money_fixed(value: Fraction, digits: int = 6) -> str:
    """Fixed-point rendering with `digits` fractional digits, half-even.

    Display-only: used at the CSV boundary where non-terminating totals
    (e.g. 25/3) must still fit a decimal column.
    """
    scale = 10**digits
    scaled = Fraction(value) * scale
    quantized = round(scaled)  # round() on Fraction is exact half-even
    sign = "-" if quantized < 0 else ""
    whole, frac = divmod(abs(quantized), scale)
    return f"{sign}{whole}.{frac:0{digits}d}"
