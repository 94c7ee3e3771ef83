"""Exact two-phase simplex over the rationals with Bland's anti-cycling rule.

Solves ``min c.x  s.t.  A x = b, x >= 0``.  The tableau is kept fraction-free:
every constraint row is an integer vector scaled by an arbitrary positive
factor, so a basic variable's value is ``rhs / pivot`` for its row.  The
reduced-cost row is stored as integers over a common positive denominator.

Phase 1 adds one artificial column per row.  Artificial columns stay in the
tableau (barred from re-entering in phase 2) so the dual solution can be read
off their reduced costs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class LPResult:
    status: str
    x: list[Fraction] | None = None
    objective: Fraction | None = None
    # dual for the equality rows; for infeasible problems this is the phase-1
    # dual, i.e. a Farkas certificate with y.A <= 0 and y.b > 0
    y: list[Fraction] | None = None
    pivots: int = 0
    basis: list[int] = field(default_factory=list)


def _reduce(row: list[int]) -> list[int]:
    g = 0
    for v in row:
        if v:
            g = gcd(g, v)
            if g == 1:
                return row
    if g > 1:
        return [v // g for v in row]
    return row


class _Tableau:
    def __init__(self, A: Sequence[Sequence], b: Sequence):
        m = len(A)
        nvar = len(A[0]) if m else 0
        self.m, self.nvar = m, nvar
        self.ncol = nvar + m  # structural + artificial
        self.rows: list[list[int]] = []
        self.row_scale: list[Fraction] = []  # integer row = row_scale * original row
        for i in range(m):
            coeffs = [Fraction(v) for v in A[i]] + [Fraction(b[i])]
            den = lcm(1, *(v.denominator for v in coeffs))
            scale = Fraction(den)
            if coeffs[-1] < 0:
                scale = -scale
            ints = [int(v * scale) for v in coeffs]
            art = [0] * m
            art[i] = 1
            self.rows.append(ints[:-1] + art + [ints[-1]])
            self.row_scale.append(scale)
        self.basis = [nvar + i for i in range(m)]
        self.obj: list[int] = [0] * (self.ncol + 1)
        self.obj_den = 1
        self.pivots = 0

    def set_objective(self, costs: Sequence[Fraction]) -> None:
        """Reduced costs ``d = c - c_B B^-1 A`` for full-length ``costs`` (ncol)."""
        d = [Fraction(v) for v in costs] + [Fraction(0)]
        for i, bvar in enumerate(self.basis):
            cb = Fraction(costs[bvar])
            if cb:
                row = self.rows[i]
                piv = row[bvar]
                factor = cb / piv
                for j, v in enumerate(row):
                    if v:
                        d[j] -= factor * v
        den = lcm(1, *(v.denominator for v in d))
        ints = [int(v * den) for v in d]
        self.obj, self.obj_den = ints, den
        self._reduce_obj()

    def _reduce_obj(self) -> None:
        g = self.obj_den
        for v in self.obj:
            if v:
                g = gcd(g, v)
                if g == 1:
                    return
        if g > 1:
            self.obj = [v // g for v in self.obj]
            self.obj_den //= g

    def pivot(self, r: int, j: int) -> None:
        prow = self.rows[r]
        p = prow[j]
        if p < 0:
            # only reached when driving out a zero-level artificial (rhs 0)
            prow = [-v for v in prow]
            self.rows[r] = prow
            p = -p
        for i in range(self.m):
            if i == r:
                continue
            row = self.rows[i]
            q = row[j]
            if q:
                self.rows[i] = _reduce([v * p - q * w for v, w in zip(row, prow)])
        q = self.obj[j]
        if q:
            self.obj = [v * p - q * w for v, w in zip(self.obj, prow)]
            self.obj_den *= p
            self._reduce_obj()
        self.basis[r] = j
        self.pivots += 1

    def entering(self, allowed: int) -> int | None:
        for j in range(allowed):
            if self.obj[j] < 0:
                return j
        return None

    def leaving(self, j: int) -> int | None:
        best = None
        for i, row in enumerate(self.rows):
            a = row[j]
            if a <= 0:
                continue
            rhs = row[-1]
            if best is None:
                best = i
                continue
            brow = self.rows[best]
            # compare rhs/a with brow[-1]/brow[j]; both denominators positive
            lhs, cur = rhs * brow[j], brow[-1] * a
            if lhs < cur or (lhs == cur and self.basis[i] < self.basis[best]):
                best = i
        return best

    def run(self, allowed: int) -> str:
        while True:
            j = self.entering(allowed)
            if j is None:
                return OPTIMAL
            r = self.leaving(j)
            if r is None:
                return UNBOUNDED
            self.pivot(r, j)

    def objective_value(self) -> Fraction:
        return Fraction(-self.obj[-1], self.obj_den)

    def primal(self) -> list[Fraction]:
        x = [Fraction(0)] * self.ncol
        for i, bvar in enumerate(self.basis):
            row = self.rows[i]
            x[bvar] = Fraction(row[-1], row[bvar])
        return x

    def dual(self, art_cost: Fraction) -> list[Fraction]:
        """Dual of the original rows from the artificial reduced costs."""
        y = []
        for i in range(self.m):
            d = Fraction(self.obj[self.nvar + i], self.obj_den)
            y_scaled = art_cost - d
            y.append(y_scaled * self.row_scale[i])
        return y

    def drive_out_artificials(self) -> None:
        for i, bvar in enumerate(self.basis):
            if bvar < self.nvar:
                continue
            row = self.rows[i]
            for j in range(self.nvar):
                if row[j]:
                    self.pivot(i, j)
                    break


def solve(c: Sequence, A: Sequence[Sequence], b: Sequence) -> LPResult:
    """Minimize ``c.x`` subject to ``A x = b`` and ``x >= 0``, exactly."""
    m = len(A)
    nvar = len(c)
    if any(len(row) != nvar for row in A) or len(b) != m:
        raise ValueError("inconsistent LP dimensions")
    if m == 0:
        if any(Fraction(v) < 0 for v in c):
            return LPResult(UNBOUNDED)
        return LPResult(OPTIMAL, [Fraction(0)] * nvar, Fraction(0), [], 0, [])
    tab = _Tableau(A, b)

    phase1 = [Fraction(0)] * nvar + [Fraction(1)] * m
    tab.set_objective(phase1)
    tab.run(allowed=tab.ncol)
    infeas = tab.objective_value()
    if infeas > 0:
        return LPResult(INFEASIBLE, y=tab.dual(Fraction(1)), objective=infeas,
                        pivots=tab.pivots, basis=list(tab.basis))

    tab.drive_out_artificials()
    phase2 = [Fraction(v) for v in c] + [Fraction(0)] * m
    tab.set_objective(phase2)
    status = tab.run(allowed=nvar)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED, pivots=tab.pivots)
    x = tab.primal()[:nvar]
    return LPResult(OPTIMAL, x=x, objective=tab.objective_value(), y=tab.dual(Fraction(0)),
                    pivots=tab.pivots, basis=list(tab.basis))


def feasible_point(A: Sequence[Sequence], b: Sequence) -> LPResult:
    """Phase 1 only: find ``x >= 0`` with ``A x = b`` or a Farkas certificate."""
    return solve([0] * (len(A[0]) if A else 0), A, b)
