"""Triangular fuzzy judgments and the linear membership they induce on weight ratios."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping


class FuzzyNumberError(ValueError):
    """Base class for invalid triangular fuzzy numbers."""


class OrderViolation(FuzzyNumberError):
    pass


class NonPositive(FuzzyNumberError):
    pass


@dataclass(frozen=True)
class TriangularFuzzyNumber:
    """A judgment band ``(l, m, u)`` on the ratio of two weights.

    ``m`` is the most plausible ratio; ``l`` and ``u`` bound the band.
    Construction enforces ``0 < l < m < u``.
    """

    l: float
    m: float
    u: float

    def __post_init__(self):
        l, m, u = float(self.l), float(self.m), float(self.u)
        object.__setattr__(self, "l", l)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "u", u)
        if not (l < m < u):
            raise OrderViolation(f"need l < m < u, got ({l}, {m}, {u})")
        if l <= 0:
            raise NonPositive(f"lower bound must be positive, got {l}")

    def __iter__(self) -> Iterator[float]:
        return iter((self.l, self.m, self.u))

    def __repr__(self):
        return f"TFN({self.l:g}, {self.m:g}, {self.u:g})"

    def reciprocal(self) -> "TriangularFuzzyNumber":
        return reciprocal(self)


TFN = TriangularFuzzyNumber


def make_tfn(l: float, m: float, u: float) -> TriangularFuzzyNumber:
    return TriangularFuzzyNumber(l, m, u)


def reciprocal(t: TriangularFuzzyNumber) -> TriangularFuzzyNumber:
    """Judgment on the inverse ratio: ``(1/u, 1/m, 1/l)``."""
    return TriangularFuzzyNumber(1.0 / t.u, 1.0 / t.m, 1.0 / t.l)


def membership_degree(t: TriangularFuzzyNumber, ratio: float) -> float:
    """Degree to which ``ratio`` satisfies judgment ``t``.

    Piecewise linear with peak 1 at ``t.m`` and zeros at ``t.l`` and
    ``t.u``. Outside the band the lines are extended, so the result goes
    negative rather than being clipped at zero.
    """
    if ratio <= 0:
        raise ValueError(f"ratio must be positive, got {ratio}")
    if ratio <= t.m:
        return (ratio - t.l) / (t.m - t.l)
    return (t.u - ratio) / (t.u - t.m)


DEFAULT_SCALE_ITEMS = (
    ("very low", (1.0, 2.0, 3.0)),
    ("low", (2.0, 3.0, 4.0)),
    ("medium", (3.0, 4.0, 5.0)),
    ("high", (4.0, 5.0, 6.0)),
    ("very high", (5.0, 6.0, 7.0)),
)


class LinguisticScale(Mapping[str, TriangularFuzzyNumber]):
    """Ordered mapping from verbal labels to fuzzy bands.

    Labels are matched case-insensitively. Bands must be listed in
    nondecreasing order of their modal value.
    """

    def __init__(self, items: Iterable[tuple[str, TriangularFuzzyNumber | tuple]]):
        self._items: dict[str, TriangularFuzzyNumber] = {}
        last_m = float("-inf")
        for label, band in items:
            key = self._key(label)
            if key in self._items:
                raise ValueError(f"duplicate label {label!r}")
            if not isinstance(band, TriangularFuzzyNumber):
                band = TriangularFuzzyNumber(*band)
            if band.m < last_m:
                raise ValueError(f"label {label!r} breaks nondecreasing modal order")
            last_m = band.m
            self._items[key] = band

    @staticmethod
    def _key(label: str) -> str:
        return " ".join(str(label).lower().split())

    @classmethod
    def default(cls) -> "LinguisticScale":
        return cls(DEFAULT_SCALE_ITEMS)

    def with_label(self, label: str, band) -> "LinguisticScale":
        """Return a new scale with one extra label inserted by modal order."""
        if not isinstance(band, TriangularFuzzyNumber):
            band = TriangularFuzzyNumber(*band)
        items = list(self._items.items()) + [(label, band)]
        items.sort(key=lambda kv: kv[1].m)
        return LinguisticScale(items)

    def __getitem__(self, label: str) -> TriangularFuzzyNumber:
        try:
            return self._items[self._key(label)]
        except KeyError:
            raise KeyError(f"unknown linguistic label {label!r}") from None

    def __iter__(self):
        return iter(self._items)

    def __len__(self):
        return len(self._items)

    def __repr__(self):
        body = ", ".join(f"{k!r}: {v!r}" for k, v in self._items.items())
        return f"LinguisticScale({{{body}}})"

    def __eq__(self, other):
        if not isinstance(other, LinguisticScale):
            return NotImplemented
        return list(self._items.items()) == list(other._items.items())

    __hash__ = None
