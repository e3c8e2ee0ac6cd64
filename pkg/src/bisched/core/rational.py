from __future__ import annotations

from fractions import Fraction

from bisched.core.errors import ParseError

Time = Fraction


def format_time(value: Fraction) -> int | str:
    """Целое остаётся целым, дробь пишется как "num/den" в несократимом виде."""
    if value.denominator == 1:
        return value.numerator
    return f"{value.numerator}/{value.denominator}"


def parse_time(raw: object, path: str, *, integral: bool = False) -> Fraction:
    if isinstance(raw, bool):
        raise ParseError(path, "ожидалось число, получено логическое значение")
    if isinstance(raw, int):
        return Fraction(raw)
    if isinstance(raw, str) and not integral:
        try:
            value = Fraction(raw.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(path, f"некорректная дробь '{raw}'") from exc
        if "/" in raw and raw.strip() != f"{value.numerator}/{value.denominator}":
            raise ParseError(path, f"дробь '{raw}' не в несократимом виде")
        return value
    expected = "целое число" if integral else "целое число или строка 'num/den'"
    raise ParseError(path, f"ожидалось {expected}, получено {raw!r}")


def parse_epsilon(raw: str) -> Fraction:
    try:
        value = Fraction(raw)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError("epsilon", f"некорректное значение '{raw}'") from exc
    if value <= 0:
        raise ParseError("epsilon", "epsilon должен быть положительным")
    return value
