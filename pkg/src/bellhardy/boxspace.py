"""Binary vectors, event tables and the correlation chart of the (n,2,2) scenario.

Observer ``k`` (1-based) occupies bit ``k - 1`` of the integer word, so
observer 1 is the least significant bit.  Bitstrings are written with
observer 1 leftmost: ``"10"`` means observer 1 holds a 1 and observer 2 a 0,
which is the integer ``1``.

Event tables are dense tuples of :class:`fractions.Fraction` with the entry for
setting ``s`` and outcome ``a`` stored at index ``(s << n) | a``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from .errors import (
    DimensionError,
    IncompleteTableError,
    InvalidBoxError,
    PartyLimitError,
    SignalingError,
)

DEFAULT_PARTY_LIMIT = 5

ZERO = Fraction(0)
ONE = Fraction(1)


def check_parties(n: int, limit: int | None = None) -> int:
    """Validate a party count against ``1..limit`` and return it."""
    if limit is None:
        limit = DEFAULT_PARTY_LIMIT
    if not isinstance(n, int) or isinstance(n, bool):
        raise PartyLimitError(f"party count must be an integer, got {n!r}")
    if n < 1 or n > limit:
        raise PartyLimitError(f"party count {n} outside 1..{limit} (raise the limit to go further)")
    return n


# --------------------------------------------------------------------------
# Binary vectors


@dataclass(frozen=True, order=False)
class BinaryVector:
    """An ``n``-bit word: a setting vector, an outcome vector, or a set of observers."""

    n: int
    bits: int

    def __post_init__(self):
        if self.n < 1:
            raise DimensionError(f"binary vector needs n >= 1, got {self.n}")
        if not 0 <= self.bits < (1 << self.n):
            raise DimensionError(f"bits {self.bits} do not fit in {self.n} components")

    @classmethod
    def parse(cls, text: str) -> "BinaryVector":
        if not text or any(ch not in "01" for ch in text):
            raise DimensionError(f"not a bitstring: {text!r}")
        return cls(len(text), from_bitstring(text))

    @classmethod
    def zeros(cls, n: int) -> "BinaryVector":
        return cls(n, 0)

    @classmethod
    def ones(cls, n: int) -> "BinaryVector":
        return cls(n, (1 << n) - 1)

    @classmethod
    def unit(cls, n: int, k: int) -> "BinaryVector":
        """The vector with a single 1 at observer ``k`` (1-based)."""
        if not 1 <= k <= n:
            raise DimensionError(f"observer {k} outside 1..{n}")
        return cls(n, 1 << (k - 1))

    def __getitem__(self, k: int) -> int:
        if not 1 <= k <= self.n:
            raise DimensionError(f"observer {k} outside 1..{self.n}")
        return (self.bits >> (k - 1)) & 1

    def __iter__(self) -> Iterator[int]:
        return (self[k] for k in range(1, self.n + 1))

    def __str__(self) -> str:
        return to_bitstring(self.bits, self.n)

    def _same_n(self, other: "BinaryVector") -> None:
        if not isinstance(other, BinaryVector):
            raise TypeError(f"expected BinaryVector, got {type(other).__name__}")
        if other.n != self.n:
            raise DimensionError(f"mismatched party counts {self.n} and {other.n}")

    def __and__(self, other: "BinaryVector") -> "BinaryVector":
        return wedge(self, other)

    def __xor__(self, other: "BinaryVector") -> "BinaryVector":
        self._same_n(other)
        return BinaryVector(self.n, self.bits ^ other.bits)

    __add__ = __xor__

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    def issubset(self, other: "BinaryVector") -> bool:
        self._same_n(other)
        return self.bits & ~other.bits == 0

    def support(self) -> tuple[int, ...]:
        return tuple(k for k in range(1, self.n + 1) if self[k])


def wedge(a: BinaryVector, b: BinaryVector) -> BinaryVector:
    """Componentwise product (bitwise AND) of two vectors of equal length."""
    a._same_n(b)
    return BinaryVector(a.n, a.bits & b.bits)


def dot_parity(a: BinaryVector, b: BinaryVector) -> int:
    """``sum_k a_k b_k mod 2``."""
    a._same_n(b)
    return parity(a.bits & b.bits)


def parity(word: int) -> int:
    return word.bit_count() & 1


def sign(word: int) -> int:
    """``(-1) ** popcount(word)``."""
    return -1 if word.bit_count() & 1 else 1


def to_bitstring(word: int, n: int) -> str:
    return "".join("1" if (word >> k) & 1 else "0" for k in range(n))


def from_bitstring(text: str) -> int:
    return sum(1 << k for k, ch in enumerate(text) if ch == "1")


def words(n: int) -> range:
    return range(1 << n)


def lex_words(n: int) -> list[int]:
    """All ``n``-bit words ordered lexicographically by their bitstrings."""
    return sorted(words(n), key=lambda w: to_bitstring(w, n))


def subsets(c: int) -> Iterator[int]:
    """All submasks of ``c``, including 0 and ``c`` itself."""
    s = c
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & c


def coerce_word(value, n: int) -> int:
    """Accept a BinaryVector, a bitstring or a raw integer word."""
    if isinstance(value, BinaryVector):
        if value.n != n:
            raise DimensionError(f"vector has {value.n} components, table has {n}")
        return value.bits
    if isinstance(value, str):
        if len(value) != n or any(ch not in "01" for ch in value):
            raise DimensionError(f"expected a bitstring of length {n}, got {value!r}")
        return from_bitstring(value)
    if isinstance(value, int) and not isinstance(value, bool) and 0 <= value < (1 << n):
        return value
    raise DimensionError(f"cannot read {value!r} as an {n}-bit word")


# --------------------------------------------------------------------------
# Walsh-Hadamard (parity) transform


def walsh_hadamard(values: Iterable) -> list:
    """Unnormalized parity transform ``out[c] = sum_a (-1)^(a.c) values[a]``.

    Length must be a power of two.  Uses the in-place butterfly, so only
    additions and subtractions are performed and exactness is preserved.
    """
    out = list(values)
    size = len(out)
    if size & (size - 1):
        raise DimensionError(f"length {size} is not a power of two")
    h = 1
    while h < size:
        for start in range(0, size, 2 * h):
            for i in range(start, start + h):
                x, y = out[i], out[i + h]
                out[i], out[i + h] = x + y, x - y
        h *= 2
    return out


# --------------------------------------------------------------------------
# Event tables


class EventTable:
    """Dense table of ``4**n`` rationals indexed by (setting, outcome)."""

    __slots__ = ("n", "values")

    def __init__(self, n: int, values: Iterable):
        if not isinstance(n, int) or n < 1:
            raise DimensionError(f"party count must be a positive integer, got {n!r}")
        vals = tuple(Fraction(v) for v in values)
        if len(vals) != 1 << (2 * n):
            raise IncompleteTableError(f"expected {1 << (2 * n)} entries for n={n}, got {len(vals)}")
        self.n = n
        self.values = vals

    @classmethod
    def from_function(cls, n: int, fn, **kwargs):
        """Build from ``fn(s, a)`` evaluated on integer words."""
        return cls(n, (fn(s, a) for s in words(n) for a in words(n)), **kwargs)

    @classmethod
    def from_mapping(cls, n: int, entries: Mapping, default=ZERO, **kwargs):
        """Build from ``{(s, a): value}``; keys may be words, bitstrings or vectors."""
        vals = [Fraction(default)] * (1 << (2 * n))
        for (s, a), v in entries.items():
            vals[(coerce_word(s, n) << n) | coerce_word(a, n)] = Fraction(v)
        return cls(n, vals, **kwargs)

    def index(self, s, a) -> int:
        return (coerce_word(s, self.n) << self.n) | coerce_word(a, self.n)

    def __getitem__(self, key) -> Fraction:
        s, a = key
        return self.values[self.index(s, a)]

    def value(self, s: int, a: int) -> Fraction:
        """Fast lookup by integer words."""
        return self.values[(s << self.n) | a]

    def row(self, s: int) -> tuple:
        """All ``2**n`` entries for setting ``s``, indexed by outcome word."""
        size = 1 << self.n
        return self.values[s * size:(s + 1) * size]

    def items(self) -> Iterator[tuple[int, int, Fraction]]:
        """``(s, a, value)`` in lexicographic order of the bitstrings."""
        order = lex_words(self.n)
        for s in order:
            for a in order:
                yield s, a, self.values[(s << self.n) | a]

    def nonzero(self) -> list[tuple[str, str, Fraction]]:
        n = self.n
        return [(to_bitstring(s, n), to_bitstring(a, n), v) for s, a, v in self.items() if v]

    def __eq__(self, other):
        if type(self) is not type(other):
            return NotImplemented
        return self.n == other.n and self.values == other.values

    def __hash__(self):
        return hash((type(self).__name__, self.n, self.values))

    def __repr__(self):
        shown = ", ".join(f"({s},{a})={v}" for s, a, v in self.nonzero()[:8])
        more = "" if len(self.nonzero()) <= 8 else ", ..."
        return f"{type(self).__name__}(n={self.n}, {shown}{more})"

    def _check_same_n(self, other: "EventTable") -> None:
        if other.n != self.n:
            raise DimensionError(f"mismatched party counts {self.n} and {other.n}")


class Box(EventTable):
    """Conditional probabilities ``P(a|s)``.

    Construction validates non-negativity and per-setting normalization unless
    ``check=False``; unchecked boxes are produced by coordinate inversions that
    may land outside the probability simplex (see :meth:`is_physical`).
    """

    __slots__ = ()

    def __init__(self, n: int, values: Iterable, check: bool = True):
        super().__init__(n, values)
        if check:
            problem = self.defect()
            if problem:
                raise InvalidBoxError(problem)

    def defect(self) -> str | None:
        """Describe the first violated box invariant, or None."""
        n = self.n
        for s in words(n):
            row = self.row(s)
            for a, v in enumerate(row):
                if v < 0:
                    return f"negative entry P({to_bitstring(a, n)}|{to_bitstring(s, n)}) = {v}"
            total = sum(row, ZERO)
            if total != 1:
                return f"setting {to_bitstring(s, n)} sums to {total}, not 1"
        return None

    def is_normalized(self) -> bool:
        return all(sum(self.row(s), ZERO) == 1 for s in words(self.n))

    def is_nonnegative(self) -> bool:
        return all(v >= 0 for v in self.values)

    def is_physical(self) -> bool:
        return self.defect() is None


def uniform_box(n: int) -> Box:
    p = Fraction(1, 1 << n)
    return Box(n, [p] * (1 << (2 * n)))


def mix(boxes: Iterable[Box], weights: Iterable) -> Box:
    """Convex combination ``sum_i w_i P_i``; weights must be >= 0 and sum to 1."""
    boxes = list(boxes)
    weights = [Fraction(w) for w in weights]
    if not boxes or len(boxes) != len(weights):
        raise DimensionError("need one weight per box")
    if any(w < 0 for w in weights) or sum(weights) != 1:
        raise InvalidBoxError("mixing weights must be non-negative and sum to 1")
    n = boxes[0].n
    for b in boxes:
        boxes[0]._check_same_n(b)
    vals = [ZERO] * (1 << (2 * n))
    for w, b in zip(weights, boxes):
        if w:
            for i, v in enumerate(b.values):
                if v:
                    vals[i] += w * v
    return Box(n, vals)


# --------------------------------------------------------------------------
# Correlation chart


class SubsetTable(Mapping):
    """Table keyed by ``(c, s)`` with ``s`` a submask of ``c``; exactly ``3**n`` entries."""

    def __init__(self, n: int, entries: Mapping):
        data = {}
        for (c, s), v in entries.items():
            ci, si = coerce_word(c, n), coerce_word(s, n)
            if si & ~ci:
                raise DimensionError(f"setting {to_bitstring(si, n)} is not inside {to_bitstring(ci, n)}")
            data[(ci, si)] = Fraction(v)
        if len(data) != 3 ** n:
            raise IncompleteTableError(f"expected {3 ** n} (c, s) entries for n={n}, got {len(data)}")
        self.n = n
        self._data = data

    def __getitem__(self, key) -> Fraction:
        c, s = key
        return self._data[(coerce_word(c, self.n), coerce_word(s, self.n))]

    def __iter__(self):
        order = lex_words(self.n)
        for c in order:
            for s in order:
                if not s & ~c:
                    yield (c, s)

    def __len__(self):
        return len(self._data)

    def block(self, c) -> dict[int, Fraction]:
        """Entries with fixed ``c``, keyed by the submask ``s``."""
        c = coerce_word(c, self.n)
        return {s: self._data[(c, s)] for s in subsets(c)}

    def __eq__(self, other):
        if not isinstance(other, SubsetTable):
            return NotImplemented
        return type(self) is type(other) and self.n == other.n and self._data == other._data

    def __hash__(self):
        return hash((type(self).__name__, self.n, frozenset(self._data.items())))

    def __repr__(self):
        n = self.n
        shown = ", ".join(
            f"({to_bitstring(c, n)},{to_bitstring(s, n)})={self._data[(c, s)]}"
            for c, s in self if self._data[(c, s)]
        )
        return f"{type(self).__name__}(n={n}, {shown})"


class CorrelationTable(SubsetTable):
    """Parity correlations ``A^c_s``; the ``(0, 0)`` entry is the normalization 1."""

    def __init__(self, n: int, entries: Mapping):
        super().__init__(n, entries)
        if self._data[(0, 0)] != 1:
            raise InvalidBoxError(f"normalization entry A^0_0 is {self._data[(0, 0)]}, expected 1")


def parity_sums(table: EventTable) -> list[list[Fraction]]:
    """``out[s][c] = sum_a (-1)^(a.c) table(a|s)`` for every setting and every ``c``."""
    return [walsh_hadamard(table.row(s)) for s in words(table.n)]


def correlations_of_box(box: Box) -> CorrelationTable:
    """The ``3**n`` coordinates ``A^c_s = sum_a (-1)^(a.c) P(a|s)`` with ``s`` inside ``c``."""
    sums = parity_sums(box)
    entries = {(c, s): sums[s][c] for c in words(box.n) for s in subsets(c)}
    return CorrelationTable(box.n, entries)


def box_from_correlations(table: Mapping | CorrelationTable, n: int | None = None) -> Box:
    """Invert the chart: ``P(a|s) = 2^-n sum_c (-1)^(a.c) A^c_(s&c)``.

    The result is normalized and non-signaling by construction but is not
    checked for non-negativity; use :meth:`Box.is_physical`.
    """
    if not isinstance(table, SubsetTable):
        if n is None:
            raise IncompleteTableError("party count required for a raw mapping")
        table = CorrelationTable(n, table)
    n = table.n
    scale = Fraction(1, 1 << n)
    vals: list[Fraction] = []
    for s in words(n):
        coords = [table._data[(c, s & c)] for c in words(n)]
        vals.extend(v * scale for v in walsh_hadamard(coords))
    return Box(n, vals, check=False)


def marginal(box: Box, k: int, setting: int, outcome: int, strict: bool = False) -> Fraction:
    """Probability that observer ``k`` (1-based) sees ``outcome`` under local ``setting``.

    The other observers' settings are fixed to 0.  With ``strict`` every
    completion is evaluated and a :class:`SignalingError` raised if they differ.
    """
    n = box.n
    if not 1 <= k <= n:
        raise DimensionError(f"observer {k} outside 1..{n}")
    if setting not in (0, 1) or outcome not in (0, 1):
        raise DimensionError("setting and outcome must be 0 or 1")
    bit = 1 << (k - 1)

    def at(s: int) -> Fraction:
        row = box.row(s)
        return sum((v for a, v in enumerate(row) if bool(a & bit) == bool(outcome)), ZERO)

    base = setting * bit
    value = at(base)
    if strict:
        others = ((1 << n) - 1) & ~bit
        for rest in subsets(others):
            other = at(rest | base)
            if other != value:
                raise SignalingError(
                    f"marginal of observer {k} depends on the other settings: "
                    f"{value} at {to_bitstring(base, n)} vs {other} at {to_bitstring(rest | base, n)}"
                )
    return value
