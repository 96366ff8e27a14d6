"""Utility helpers for chanmetric."""

from __future__ import annotations

import logging
from fractions import Fraction
from math import lcm
from typing import Any, Dict, Iterable, List, Sequence, Union

from rich.console import Console
from rich.logging import RichHandler


LOGGER_NAME = "chanmetric"

RatLike = Union[Fraction, int, str]

console = Console(stderr=True)


def get_logger() -> logging.Logger:
    """Return the package logger configured with rich if not already."""
    logger = logging.getLogger(LOGGER_NAME)
    if not logger.handlers:
        handler = RichHandler(console=console, rich_tracebacks=True, show_path=False)
        handler.setFormatter(logging.Formatter("%(message)s"))
        logger.setLevel(logging.INFO)
        logger.addHandler(handler)
    return logger


logger = get_logger()


def set_log_level(level: str) -> None:
    """Set the ``chanmetric`` logger level (library code logs under this name)."""

    level_value = getattr(logging, level.upper(), logging.INFO)
    logging.getLogger(LOGGER_NAME).setLevel(level_value)


def log_fields(level: int, event: str, **fields: Any) -> None:
    """Emit one grep-friendly line: ``event | key=value ...``."""

    tail = " ".join(f"{k}={v!r}" for k, v in fields.items())
    msg = f"{event} | {tail}" if tail else event
    logger.log(level, msg)


def to_rat(value: RatLike) -> Fraction:
    """Coerce ``value`` to an exact rational. Floats are refused."""

    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"exact rationals only, got {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rat(value)
    raise TypeError(f"cannot convert {value!r} to a rational")


def parse_rat(token: str) -> Fraction:
    """Parse an integer or ``p/q`` literal. Decimal points and exponents are rejected."""

    text = token.strip()
    head, sep, tail = text.partition("/")
    if not _is_int_literal(head) or (sep and not _is_int_literal(tail, signed=False)):
        raise ValueError(f"malformed rational {token!r}")
    if sep:
        denominator = int(tail)
        if denominator == 0:
            raise ValueError(f"zero denominator in {token!r}")
        return Fraction(int(head), denominator)
    return Fraction(int(head))


def _is_int_literal(text: str, signed: bool = True) -> bool:
    body = text[1:] if signed and text[:1] in {"+", "-"} else text
    return body.isdigit() and body.isascii()


def format_rat(value: Fraction) -> str:
    """Reduced ``p/q`` (or plain integer) rendering."""

    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def dense_ranks(values: Sequence[Union[Fraction, int]], descending: bool = False) -> List[int]:
    """Dense ranks of ``values`` (ties share a rank, next distinct value gets the next rank)."""

    distinct = sorted(set(values), reverse=descending)
    position: Dict[Union[Fraction, int], int] = {value: idx + 1 for idx, value in enumerate(distinct)}
    return [position[value] for value in values]


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def lcm_of(values: Iterable[int]) -> int:
    return lcm(1, *values)


__all__ = [
    "LOGGER_NAME",
    "RatLike",
    "console",
    "dense_ranks",
    "format_rat",
    "get_logger",
    "lcm_of",
    "log_fields",
    "logger",
    "parse_rat",
    "popcount",
    "set_log_level",
    "to_rat",
]
