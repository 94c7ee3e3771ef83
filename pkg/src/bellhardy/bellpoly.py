"""Deterministic local vertices, exact spans, tightness, and Bell-polytope membership."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .boxspace import (
    ZERO,
    BinaryVector,
    Box,
    EventTable,
    check_parties,
    correlations_of_box,
    lex_words,
    subsets,
    words,
)
from .errors import DimensionError, InvalidBoxError
from .functional import (
    BellFunctional,
    check_inequality,
    evaluate,
    standardize,
    vertex_values,
)
from .linalg import rank
from .simplex import INFEASIBLE, feasible_point

LOCAL = "local"
NONLOCAL = "nonlocal"


@dataclass(frozen=True)
class DeterministicStrategy:
    """Outcome ``a_k`` under setting 0 and ``b_k`` under setting 1 for every observer."""

    a: BinaryVector
    b: BinaryVector

    def __post_init__(self):
        if self.a.n != self.b.n:
            raise DimensionError(f"mismatched party counts {self.a.n} and {self.b.n}")

    @classmethod
    def of(cls, a, b, n: int | None = None) -> "DeterministicStrategy":
        """Build from bitstrings, or from integer words when ``n`` is given."""
        if isinstance(a, str):
            return cls(BinaryVector.parse(a), BinaryVector.parse(b))
        return cls(BinaryVector(n, a), BinaryVector(n, b))

    @property
    def n(self) -> int:
        return self.a.n

    def outcome(self, s: int) -> int:
        """Joint outcome word under the joint setting word ``s``."""
        return (self.a.bits & ~s) | (self.b.bits & s)

    def __str__(self):
        return f"{self.a};{self.b}"


def deterministic_box(strategy: DeterministicStrategy) -> Box:
    n = strategy.n
    vals = [ZERO] * (1 << (2 * n))
    for s in words(n):
        vals[(s << n) | strategy.outcome(s)] = Fraction(1)
    return Box(n, vals, check=False)


def enumerate_vertices(n: int, limit: int | None = None) -> list[DeterministicStrategy]:
    """All ``4**n`` strategies, lexicographic in ``(a, b)`` bitstrings."""
    check_parties(n, limit)
    order = lex_words(n)
    return [DeterministicStrategy.of(a, b, n) for a in order for b in order]


def _sparse(table: EventTable) -> dict[int, Fraction]:
    return {i: v for i, v in enumerate(table.values) if v}


def span_dimension(boxes: Iterable[EventTable]) -> int:
    """Rank over the rationals of the boxes as vectors in the ``4**n`` box space."""
    boxes = list(boxes)
    if not boxes:
        return 0
    n = boxes[0].n
    if any(b.n != n for b in boxes):
        raise DimensionError("all boxes must share the party count")
    return rank(_sparse(b) for b in boxes)


def saturating_vertices(functional: BellFunctional) -> list[DeterministicStrategy]:
    """Strategies on which the functional vanishes, in lexicographic order."""
    n = functional.n
    values = vertex_values(functional)
    order = lex_words(n)
    return [DeterministicStrategy.of(a, b, n) for a in order for b in order if values[(a, b)] == 0]


@dataclass(frozen=True)
class TightnessReport:
    tight: bool
    rank: int
    target: int
    saturating: list[DeterministicStrategy] = field(default_factory=list, repr=False)

    def __bool__(self):
        return self.tight


def is_tight(functional: BellFunctional) -> TightnessReport:
    """Facet test: do the saturating vertices span a ``3**n - 1`` dimensional space?

    Raises :class:`~bellhardy.errors.NotAnInequalityError` if the functional is
    negative on some vertex.
    """
    check_inequality(functional)
    sat = saturating_vertices(functional)
    r = span_dimension(deterministic_box(d) for d in sat)
    target = 3 ** functional.n - 1
    return TightnessReport(r == target, r, target, sat)


# --------------------------------------------------------------------------
# Membership


@dataclass(frozen=True)
class Certificate:
    """Witness of (non)locality.

    ``weights`` maps strategies to convex weights when local; ``separator`` is
    a functional that is >= 0 on every vertex and negative on the queried box
    when nonlocal.  ``value`` is the separator evaluated on that box.
    """

    verdict: str
    n: int
    weights: dict[DeterministicStrategy, Fraction] | None = None
    separator: BellFunctional | None = None
    value: Fraction | None = None
    reason: str = ""

    @property
    def local(self) -> bool:
        return self.verdict == LOCAL

    def verify(self, box: Box) -> bool:
        if box.n != self.n:
            return False
        if self.local:
            if not self.weights or any(w < 0 for w in self.weights.values()):
                return False
            if sum(self.weights.values(), ZERO) != 1:
                return False
            vals = [ZERO] * len(box.values)
            for d, w in self.weights.items():
                for s in words(self.n):
                    vals[(s << self.n) | d.outcome(s)] += w
            return tuple(vals) == box.values
        if self.separator is None:
            return False
        if any(v < 0 for v in vertex_values(self.separator).values()):
            return False
        return evaluate(self.separator, box) < 0


def _signaling_separator(box: Box) -> BellFunctional | None:
    """A functional vanishing on every non-signaling box and negative on ``box``."""
    n = box.n
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
                if lo == hi:
                    continue
                # <F|Q> = (lo - hi) for Q, zero on every non-signaling Q
                w = Fraction(-1, 1) / (lo - hi)
                entries = {
                    (s, a): w, (s, a | bit): w,
                    (s | bit, a): -w, (s | bit, a | bit): -w,
                }
                return BellFunctional.from_mapping(n, entries)
    return None


def _chart_columns(n: int) -> tuple[list[tuple[int, int]], list[DeterministicStrategy], list[list[int]]]:
    keys = [(c, s) for c in words(n) for s in subsets(c)]
    strategies = enumerate_vertices(n, limit=n)
    matrix = [[0] * len(strategies) for _ in keys]
    for j, d in enumerate(strategies):
        for i, (c, s) in enumerate(keys):
            matrix[i][j] = -1 if (d.outcome(s) & c).bit_count() & 1 else 1
    return keys, strategies, matrix


def is_local(box: Box) -> Certificate:
    """Exact membership in the Bell polytope, with a constructive certificate.

    Signaling boxes are rejected with a functional built from the signaling
    witness.  Non-signaling boxes are decided by phase-1 simplex in the
    ``3**n`` correlation coordinates; an infeasible program yields a Farkas
    dual which is turned into a separating functional and standardized.
    """
    n = box.n
    if not box.is_normalized():
        raise InvalidBoxError("box is not normalized for every setting")

    sig = _signaling_separator(box)
    if sig is not None:
        cert = Certificate(NONLOCAL, n, separator=sig, value=evaluate(sig, box),
                           reason="box is signaling")
        _assert_verified(cert, box)
        return cert

    keys, strategies, matrix = _chart_columns(n)
    target = correlations_of_box(box)
    rhs = [target[key] for key in keys]
    result = feasible_point(matrix, rhs)

    if result.status != INFEASIBLE:
        weights = {d: w for d, w in zip(strategies, result.x) if w}
        cert = Certificate(LOCAL, n, weights=weights, reason="convex decomposition found")
        _assert_verified(cert, box)
        return cert

    y = dict(zip(keys, result.y))
    vals = []
    for s in words(n):
        for a in words(n):
            total = ZERO
            others = ((1 << n) - 1) & ~s
            for extra in subsets(others):
                c = s | extra
                coeff = y[(c, s)]
                if coeff:
                    total += -coeff if (a & c).bit_count() & 1 else coeff
            vals.append(-total)
    raw = BellFunctional(n, vals)
    separator = standardize(raw)
    cert = Certificate(NONLOCAL, n, separator=separator, value=evaluate(separator, box),
                       reason="Farkas dual of the membership program")
    _assert_verified(cert, box)
    return cert


def _assert_verified(cert: Certificate, box: Box) -> None:
    if not cert.verify(box):
        raise AssertionError(f"internal error: {cert.verdict} certificate failed verification")

