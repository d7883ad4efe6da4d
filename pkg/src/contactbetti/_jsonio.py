"""Rational-aware JSON helpers shared by the CLI and the corpus."""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Sequence, Union

Rat = Union[int, Fraction]


def rat_str(x: Rat) -> str:
    """Lowest-terms ``p/q`` string, plain ``p`` when the denominator is 1."""
    f = Fraction(x)
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def parse_rat(s: Union[str, int]) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    return Fraction(s.strip())


def parse_point(coords: Sequence[Union[str, int]]) -> tuple:
    return tuple(parse_rat(c) for c in coords)


def point_json(p: Sequence[Rat]) -> list:
    return [rat_str(c) for c in p]


def dumps(obj: Any) -> str:
    """Deterministic serialization: sorted keys, no trailing whitespace."""
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"
