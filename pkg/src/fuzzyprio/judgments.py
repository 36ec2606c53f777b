"""Fuzzy pairwise comparison matrices: construction, expert aggregation, crisp import."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

from .fuzzy_core import TriangularFuzzyNumber, reciprocal


class JudgmentError(ValueError):
    pass


class DuplicatePair(JudgmentError):
    pass


class MissingPair(JudgmentError):
    pass


class SelfComparison(JudgmentError):
    pass


class UnknownItem(JudgmentError):
    pass


class ShapeMismatch(JudgmentError):
    pass


class EmptyInput(JudgmentError):
    pass


class FloorAboveModal(JudgmentError):
    pass


@dataclass(frozen=True)
class FuzzyComparisonMatrix:
    """Complete upper-triangular set of fuzzy judgments over ``item_ids``.

    ``judgments[(i, j)]`` with ``i < j`` (positional indices) is the band on
    ``w_i / w_j``. Use :func:`build_matrix` rather than the constructor.
    """

    item_ids: tuple
    judgments: dict = field(compare=True)

    def __post_init__(self):
        n = len(self.item_ids)
        if n < 2:
            raise JudgmentError("a comparison matrix needs at least 2 items")
        if len(set(self.item_ids)) != n:
            raise JudgmentError("item ids must be unique")
        for i, j in itertools.combinations(range(n), 2):
            if (i, j) not in self.judgments:
                raise MissingPair(f"missing judgment ({self.item_ids[i]}, {self.item_ids[j]})")
        if len(self.judgments) != n * (n - 1) // 2:
            raise JudgmentError("judgments must be keyed by (i, j) with i < j")

    @property
    def n(self) -> int:
        return len(self.item_ids)

    def pairs(self):
        return itertools.combinations(range(self.n), 2)

    def get(self, i: int, j: int) -> TriangularFuzzyNumber:
        """Judgment on ``w_i / w_j`` for any ordered pair of positions."""
        if i == j:
            raise SelfComparison(f"no judgment for an item against itself ({i})")
        if i < j:
            return self.judgments[(i, j)]
        return reciprocal(self.judgments[(j, i)])

    def get_by_id(self, a, b) -> TriangularFuzzyNumber:
        return self.get(self.item_ids.index(a), self.item_ids.index(b))

    def permuted(self, order: Sequence[int]) -> "FuzzyComparisonMatrix":
        """Same judgments with items re-listed as ``[item_ids[k] for k in order]``."""
        ids = [self.item_ids[k] for k in order]
        entries = [(ids[a], ids[b], self.get(order[a], order[b]))
                   for a, b in itertools.combinations(range(self.n), 2)]
        return build_matrix(ids, entries)

    def bounds(self):
        """``(l, m, u)`` arrays over :meth:`pairs` order, for vectorised use."""
        pairs = list(self.pairs())
        l = [self.judgments[p].l for p in pairs]
        m = [self.judgments[p].m for p in pairs]
        u = [self.judgments[p].u for p in pairs]
        return pairs, l, m, u


def build_matrix(item_ids: Iterable[Hashable], judgments: Iterable[tuple]) -> FuzzyComparisonMatrix:
    """Assemble a complete matrix from ``(a, b, tfn)`` entries.

    ``a`` and ``b`` may be item ids or positional indices. An entry given
    against the storage order is stored as its reciprocal.
    """
    ids = tuple(item_ids)
    index = {item: k for k, item in enumerate(ids)}

    def position(ref):
        if ref in index:
            return index[ref]
        if isinstance(ref, int) and not isinstance(ref, bool) and 0 <= ref < len(ids):
            return ref
        raise UnknownItem(f"unknown item {ref!r}")

    stored = {}
    for a, b, t in judgments:
        i, j = position(a), position(b)
        if i == j:
            raise SelfComparison(f"item {ids[i]!r} compared with itself")
        if not isinstance(t, TriangularFuzzyNumber):
            t = TriangularFuzzyNumber(*t)
        key = (min(i, j), max(i, j))
        if key in stored:
            raise DuplicatePair(f"pair ({ids[key[0]]}, {ids[key[1]]}) given twice")
        stored[key] = t if i < j else reciprocal(t)
    return FuzzyComparisonMatrix(ids, stored)


def aggregate_experts(matrices: Sequence[FuzzyComparisonMatrix]) -> FuzzyComparisonMatrix:
    """Combine expert matrices by component-wise geometric mean per pair."""
    matrices = list(matrices)
    if not matrices:
        raise EmptyInput("no matrices to aggregate")
    first = matrices[0]
    for other in matrices[1:]:
        if other.item_ids != first.item_ids:
            raise ShapeMismatch(f"item ids differ: {first.item_ids} vs {other.item_ids}")
    if len(matrices) == 1:
        return first
    k = len(matrices)
    out = {}
    for pair in first.pairs():
        parts = [mat.judgments[pair] for mat in matrices]
        # fsum of logs keeps the result independent of expert order
        l, m, u = (math.exp(math.fsum(math.log(getattr(t, c)) for t in parts) / k) for c in "lmu")
        out[pair] = TriangularFuzzyNumber(l, m, u)
    return FuzzyComparisonMatrix(first.item_ids, out)


@dataclass(frozen=True)
class SpreadPolicy:
    """How a crisp ratio ``c`` becomes a band ``(max(c - spread, floor), c, c + spread)``."""

    spread: float = 1.0
    floor: float = 1.0 / 9.0

    def __post_init__(self):
        if not self.spread > 0:
            raise ValueError(f"spread must be positive, got {self.spread}")
        if not 0 < self.floor < 1:
            raise ValueError(f"floor must lie in (0, 1), got {self.floor}")

    def widen(self, crisp: float) -> TriangularFuzzyNumber:
        if not crisp > 0:
            raise ValueError(f"crisp judgments must be positive, got {crisp}")
        lower = max(crisp - self.spread, self.floor)
        if lower >= crisp:
            raise FloorAboveModal(f"floor {self.floor} is not below crisp value {crisp}")
        return TriangularFuzzyNumber(lower, crisp, crisp + self.spread)

    def clips(self, crisp: float) -> bool:
        return crisp - self.spread < self.floor


def import_crisp(item_ids, crisp: Iterable[tuple], policy: SpreadPolicy | None = None) -> FuzzyComparisonMatrix:
    """Build a matrix from ``(a, b, c)`` crisp ratios widened by ``policy``."""
    policy = policy or SpreadPolicy()
    return build_matrix(item_ids, [(a, b, policy.widen(c)) for a, b, c in crisp])


@dataclass
class ValidationReport:
    n: int
    complete: bool
    band_widths: dict
    max_triple_deviation: float | None
    worst_triple: tuple | None
    messages: list

    @property
    def has_triples(self) -> bool:
        return self.max_triple_deviation is not None


def validate(matrix: FuzzyComparisonMatrix) -> ValidationReport:
    """Diagnostics: completeness, band widths and modal (multiplicative) consistency."""
    ids = matrix.item_ids
    n = matrix.n
    complete = all(p in matrix.judgments for p in itertools.combinations(range(n), 2))
    widths = {(ids[i], ids[j]): t.u - t.l for (i, j), t in matrix.judgments.items()}
    messages = []
    worst, worst_triple = None, None
    for i, j, k in itertools.combinations(range(n), 3):
        dev = abs(matrix.get(i, j).m * matrix.get(j, k).m / matrix.get(i, k).m - 1.0)
        if worst is None or dev > worst:
            worst, worst_triple = dev, (ids[i], ids[j], ids[k])
    if worst is None:
        messages.append("no triples: modal consistency is trivially satisfied")
    else:
        messages.append(f"max modal triple deviation {worst:.6g} at {worst_triple}")
    if not complete:
        messages.append("matrix is incomplete")
    return ValidationReport(n, complete, widths, worst, worst_triple, messages)
