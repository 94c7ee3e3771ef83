"""Exact rank of rational matrices.

Rows are cleared of denominators and reduced fraction-free over the integers,
each row divided by the gcd of its entries after every update so coefficients
stay small.  Rows are sparse ``{column: int}`` dicts, which suits the 0/1 and
+-1 matrices met in this package.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence


def _integer_row(row) -> dict[int, int]:
    if isinstance(row, Mapping):
        items = [(j, Fraction(v)) for j, v in row.items() if v]
    else:
        items = [(j, Fraction(v)) for j, v in enumerate(row) if v]
    if not items:
        return {}
    den = lcm(*(v.denominator for _, v in items))
    out = {j: v.numerator * (den // v.denominator) for j, v in items}
    return _primitive(out)


def _primitive(row: dict[int, int]) -> dict[int, int]:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    return {j: v // g for j, v in row.items()}


class Echelon:
    """Incrementally maintained row echelon basis over the rationals."""

    def __init__(self):
        self.pivots: dict[int, dict[int, int]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row) -> dict[int, int]:
        """Residual of ``row`` after elimination against the current basis."""
        r = _integer_row(row)
        while r:
            lead = min(r)
            piv = self.pivots.get(lead)
            if piv is None:
                return r
            p, q = piv[lead], r[lead]
            new = {j: v * p for j, v in r.items()}
            for j, v in piv.items():
                w = new.get(j, 0) - q * v
                if w:
                    new[j] = w
                else:
                    new.pop(j, None)
            r = _primitive(new) if new else new
        return r

    def add(self, row) -> bool:
        """Insert ``row``; return True if it was independent of the basis."""
        r = self.reduce(row)
        if not r:
            return False
        self.pivots[min(r)] = r
        return True

    def contains(self, row) -> bool:
        return not self.reduce(row)


def rank(rows: Iterable[Sequence | Mapping]) -> int:
    """Rank over the rationals of a collection of rows (dense or sparse)."""
    ech = Echelon()
    for row in rows:
        ech.add(row)
    return ech.rank
