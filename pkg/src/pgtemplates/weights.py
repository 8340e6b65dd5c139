"""Edge weights: nonnegative Python integers or the ``INF`` sentinel."""

from __future__ import annotations

from typing import Union


class _Infinity:
    """Singleton larger than every integer. Absorbs addition and scaling."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __str__(self) -> str:
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())

    def __eq__(self, other) -> bool:
        return other is self

    def __hash__(self) -> int:
        return hash("pgtemplates.INF")

    def __lt__(self, other) -> bool:
        return False

    def __le__(self, other) -> bool:
        return other is self

    def __gt__(self, other) -> bool:
        return other is not self

    def __ge__(self, other) -> bool:
        return True


INF = _Infinity()

Weight = Union[int, _Infinity]


def is_inf(w: Weight) -> bool:
    return w is INF


def check_weight(w) -> Weight:
    """Return ``w`` if it is a legal weight, else raise ``ValueError``."""
    if w is INF:
        return w
    if isinstance(w, bool) or not isinstance(w, int):
        raise ValueError(f"weight must be a nonnegative integer or INF, got {w!r}")
    if w < 0:
        raise ValueError(f"negative weight {w}")
    return w


def scale(w: Weight, factor: int) -> Weight:
    """Multiply a weight by a positive integer factor."""
    if w is INF:
        return INF
    return w * factor


def add(a: Weight, b: Weight) -> Weight:
    if a is INF or b is INF:
        return INF
    return a + b


def parse_weight(text: str) -> Weight:
    """Parse the decimal-string / ``"inf"`` form used in documents."""
    if not isinstance(text, str):
        raise ValueError(f"weight must be a decimal string, got {text!r}")
    if text == "inf":
        return INF
    if not text.isdigit():
        raise ValueError(f"weight must be a decimal string or 'inf', got {text!r}")
    return int(text)


def format_weight(w: Weight) -> str:
    return "inf" if w is INF else str(w)
