"""Finitely supported probability measures with exact rational values."""

from __future__ import annotations

from fractions import Fraction

from .errors import InputError


class ProbMeasure:
    """An exact probability measure on a finite set of hashable points."""

    __slots__ = ("_values",)

    def __init__(self, values):
        cleaned = {}
        for key, value in dict(values).items():
            value = Fraction(value)
            if value < 0:
                raise InputError(f"negative mass {value} at {key!r}")
            if value:
                cleaned[key] = value
        if sum(cleaned.values()) != 1:
            raise InputError(
                f"masses sum to {sum(cleaned.values())}, not 1"
            )
        self._values = cleaned

    @classmethod
    def point(cls, key) -> "ProbMeasure":
        return cls({key: Fraction(1)})

    @classmethod
    def uniform(cls, keys) -> "ProbMeasure":
        keys = list(keys)
        if not keys:
            raise InputError("uniform measure on an empty set")
        share = Fraction(1, len(keys))
        return cls({k: share for k in keys})

    def __getitem__(self, key) -> Fraction:
        return self._values.get(key, Fraction(0))

    def items(self):
        return self._values.items()

    @property
    def support(self) -> frozenset:
        return frozenset(self._values)

    def l1(self, other: "ProbMeasure") -> Fraction:
        keys = self.support | other.support
        return sum((abs(self[k] - other[k]) for k in keys), Fraction(0))

    def map_keys(self, fn) -> "ProbMeasure":
        """Pushforward along an injective relabeling of the points."""
        moved = {}
        for key, value in self._values.items():
            target = fn(key)
            if target in moved:
                raise InputError("pushforward map is not injective on the support")
            moved[target] = value
        return ProbMeasure(moved)

    def __eq__(self, other):
        return isinstance(other, ProbMeasure) and self._values == other._values

    def __hash__(self):
        return hash(frozenset(self._values.items()))

    def __repr__(self):
        body = ", ".join(
            f"{k!r}: {v}" for k, v in sorted(self._values.items(), key=lambda kv: str(kv[0]))
        )
        return "ProbMeasure({%s})" % body


def format_exact(value) -> str:
    """Render an int or Fraction as an exact decimal-free string."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
