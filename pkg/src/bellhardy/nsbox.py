"""Non-signaling checks, zero sets and extremality of non-signaling boxes."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .boxspace import BinaryVector, Box, EventTable, lex_words, to_bitstring, words
from .errors import SignalingError
from .linalg import Echelon


@dataclass(frozen=True)
class Violation:
    """Observer ``party`` changes a marginal of the others by switching setting.

    ``settings`` and ``outcomes`` fix the other observers (the entry for
    ``party`` itself is written as ``*``); ``values`` holds the two marginal
    sums for local setting 0 and 1.
    """

    party: int
    settings: str
    outcomes: str
    values: tuple[Fraction, Fraction]

    def __str__(self):
        return (f"observer {self.party} signals: marginal at settings {self.settings} "
                f"outcomes {self.outcomes} is {self.values[0]} vs {self.values[1]}")


@dataclass(frozen=True)
class NSReport:
    nonsignaling: bool
    violations: list[Violation] = field(default_factory=list)

    def __bool__(self):
        return self.nonsignaling

    @property
    def parties(self) -> list[int]:
        return sorted({v.party for v in self.violations})


def _star(word: int, n: int, k: int) -> str:
    text = list(to_bitstring(word, n))
    text[k] = "*"
    return "".join(text)


def is_nonsignaling(box: EventTable) -> NSReport:
    """Check every (party, context) pair; all violations are collected."""
    n = box.n
    violations = []
    for k in range(n):
        bit = 1 << k
        for s in words(n):
            if s & bit:
                continue
            for a in words(n):
                if a & bit:
                    continue
                lo = box.value(s, a) + box.value(s, a | bit)
                hi = box.value(s | bit, a) + box.value(s | bit, a | bit)
                if lo != hi:
                    violations.append(Violation(k + 1, _star(s, n, k), _star(a, n, k), (lo, hi)))
    return NSReport(not violations, violations)


def require_nonsignaling(box: EventTable) -> None:
    report = is_nonsignaling(box)
    if not report:
        raise SignalingError(str(report.violations[0]))


@dataclass(frozen=True)
class ZeroSet:
    """Events ``(t, b)`` with ``P(b|t) = 0``, lexicographically ordered."""

    n: int
    events: tuple[tuple[BinaryVector, BinaryVector], ...]

    def __len__(self):
        return len(self.events)

    def __iter__(self):
        return iter(self.events)

    def labels(self) -> list[tuple[str, str]]:
        return [(str(t), str(b)) for t, b in self.events]


def zeros(box: Box) -> ZeroSet:
    n = box.n
    order = lex_words(n)
    events = tuple(
        (BinaryVector(n, t), BinaryVector(n, b))
        for t in order for b in order if box.value(t, b) == 0
    )
    return ZeroSet(n, events)


def ns_rows(n: int) -> list[dict[int, int]]:
    """Homogeneous non-signaling constraints on the ``4**n`` box entries."""
    rows = []
    for k in range(n):
        bit = 1 << k
        for s in words(n):
            if s & bit:
                continue
            for a in words(n):
                if a & bit:
                    continue
                lo, hi = s << n, (s | bit) << n
                rows.append({lo | a: 1, lo | a | bit: 1, hi | a: -1, hi | a | bit: -1})
    return rows


def normalization_rows(n: int) -> list[dict[int, int]]:
    """Coefficient rows of ``sum_a Q(a|s)``, one per setting (right-hand side 1)."""
    return [{(s << n) | a: 1 for a in words(n)} for s in words(n)]


def ns_chart_dimension(n: int) -> int:
    """Dimension of the affine space of normalized non-signaling tables."""
    ech = Echelon()
    for row in ns_rows(n) + normalization_rows(n):
        ech.add(row)
    return (1 << (2 * n)) - ech.rank


@dataclass(frozen=True)
class ExtremalityReport:
    extremal: bool
    zero_rank: int
    target: int
    zero_count: int

    @property
    def defect(self) -> int:
        """Dimension of the face of the non-signaling polytope carved out by the zeros."""
        return self.target - self.zero_rank

    def __bool__(self):
        return self.extremal


def is_extremal(box: Box) -> ExtremalityReport:
    """Decide whether the zeros plus normalization pin down ``box`` uniquely.

    The zero constraints are eliminated against the non-signaling and
    normalization system; their rank inside the ``3**n - 1`` dimensional chart
    must be full for the solution set to collapse to a point.
    """
    require_nonsignaling(box)
    n = box.n
    ech = Echelon()
    for row in ns_rows(n) + normalization_rows(n):
        ech.add(row)
    base = ech.rank
    zero_events = [(t << n) | b for t in words(n) for b in words(n) if box.value(t, b) == 0]
    for idx in zero_events:
        ech.add({idx: 1})
    zero_rank = ech.rank - base
    target = 3 ** n - 1
    return ExtremalityReport(zero_rank == target, zero_rank, target, len(zero_events))
