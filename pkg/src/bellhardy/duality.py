"""Correspondence between standard-form Bell functionals and non-signaling boxes.

A standard functional ``B`` gives the box ``P(b|t) = sum_s B(b + s&t, s)``,
which is the value of ``B`` on the deterministic strategy
``(a, b) = (b_t, b_t + t)``.  Conversely a non-signaling box ``P`` gives

    B(a, s) = 8^-n  sum_{t, b} P(b|t)  prod_k (1 + 2 (-1)^(a_k + b_k + s_k t_k)).

Zeros of the box are exactly the saturating vertices of the functional, so
facets of the Bell polytope and vertices of the non-signaling polytope are
exchanged.  This module also holds the Hardy box, the reference PR box, and
the group of local relabelings.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import TypeVar

from .boxspace import (
    ZERO,
    Box,
    CorrelationTable,
    EventTable,
    SubsetTable,
    check_parties,
    subsets,
    words,
)
from .errors import DimensionError
from .functional import (
    BellFunctional,
    CorrelationFunctional,
    check_inequality,
    is_standard,
    standardize,
    vertex_value,
)
from .nsbox import require_nonsignaling


class StandardizationNotice(UserWarning):
    """Emitted when a functional is standardized before dualization."""


def box_from_functional(functional: BellFunctional) -> Box:
    """Non-signaling box of a Bell inequality.

    Inputs not in standard form are standardized first, with a
    :class:`StandardizationNotice` warning.
    """
    check_inequality(functional)
    if not is_standard(functional):
        warnings.warn("functional is not in standard form; standardizing before dualization",
                      StandardizationNotice, stacklevel=2)
        functional = standardize(functional, check=False)
    n = functional.n
    vals = []
    for t in words(n):
        for b in words(n):
            vals.append(sum((functional.values[(s << n) | (b ^ (s & t))] for s in words(n)), ZERO))
    return Box(n, vals)


def _local_kernel_transform(values: tuple, n: int, kernel) -> list:
    """Apply ``kernel[(s,a)][(t,b)]`` on every party's (setting, outcome) pair.

    ``values`` is indexed by ``(t << n) | b``; the kernel is a 4x4 table keyed
    by the local index ``2*setting + outcome``.
    """
    out = list(values)
    for k in range(n):
        obit, sbit = 1 << k, 1 << (k + n)
        new = [ZERO] * len(out)
        for idx, v in enumerate(out):
            if not v:
                continue
            loc_in = 2 * bool(idx & sbit) + bool(idx & obit)
            base = idx & ~(obit | sbit)
            for loc_out in range(4):
                w = kernel[loc_out][loc_in]
                if w:
                    target = base | (sbit if loc_out & 2 else 0) | (obit if loc_out & 1 else 0)
                    new[target] += w * v
        out = new
    return out


_DUAL_KERNEL = [
    [Fraction(1 + 2 * (-1) ** ((a + b + s * t) % 2), 8) for t in (0, 1) for b in (0, 1)]
    for s in (0, 1) for a in (0, 1)
]


def functional_from_box(box: Box) -> BellFunctional:
    """Standard-form Bell functional whose value on ``(a; b)`` is ``P(a|a+b)``."""
    require_nonsignaling(box)
    n = box.n
    return BellFunctional(n, _local_kernel_transform(box.values, n, _DUAL_KERNEL))


def nscorr_from_functional(coeffs: SubsetTable) -> CorrelationTable:
    """``A~^c_t = 2^n sum_{s in c} (-1)^(s.t) K^c_s`` for ``t`` inside ``c``."""
    n = coeffs.n
    scale = 1 << n
    entries = {}
    for c in words(n):
        block = coeffs.block(c)
        for t in subsets(c):
            total = ZERO
            for s, v in block.items():
                total += -v if (s & t).bit_count() & 1 else v
            entries[(c, t)] = scale * total
    return CorrelationTable(n, entries)


def corrfunctional_from_nsbox(table: SubsetTable) -> CorrelationFunctional:
    """``K^c_s = 2^-(n+|c|) sum_{t in c} (-1)^(s.t) A~^c_t``; inverse of the map above."""
    n = table.n
    entries = {}
    for c in words(n):
        block = table.block(c)
        scale = Fraction(1, 1 << (n + c.bit_count()))
        for s in subsets(c):
            total = ZERO
            for t, v in block.items():
                total += -v if (s & t).bit_count() & 1 else v
            entries[(c, s)] = scale * total
    return CorrelationFunctional(n, entries)


# --------------------------------------------------------------------------
# Named boxes


def hardy_box(n: int, limit: int | None = None) -> Box:
    """``P(b|t) = (sum_j [b = t_j] + [b = t] - [b = 1]) / n`` with ``t_j = 1 + t & 1_j``."""
    check_parties(n, limit)
    ones = (1 << n) - 1
    inv_n = Fraction(1, n)
    vals = [ZERO] * (1 << (2 * n))
    for t in words(n):
        base = t << n
        for j in range(n):
            vals[base | (ones ^ (t & (1 << j)))] += inv_n
        vals[base | t] += inv_n
        vals[base | ones] -= inv_n
    box = Box(n, vals)
    require_nonsignaling(box)
    return box


def pr_box() -> Box:
    """Uniform marginals and ``b_1 + b_2 = t_1 t_2`` (mod 2)."""
    half = Fraction(1, 2)
    return Box.from_function(2, lambda t, b: half if ((b & 1) ^ (b >> 1)) == (t & 1) * (t >> 1) else ZERO)


# --------------------------------------------------------------------------
# Local relabelings

T = TypeVar("T", bound=EventTable)


@dataclass(frozen=True)
class Relabeling:
    """Permute observers, swap local settings, and flip outcomes.

    Observer ``k`` becomes observer ``perm[k-1]``; its setting is XORed with
    ``swap[k-1]`` and its outcome with ``alpha[k-1] + beta[k-1] * t_k`` where
    ``t_k`` is the original local setting.
    """

    perm: tuple[int, ...]
    swap: tuple[int, ...]
    alpha: tuple[int, ...]
    beta: tuple[int, ...]

    def __post_init__(self):
        n = len(self.perm)
        if sorted(self.perm) != list(range(1, n + 1)):
            raise DimensionError(f"{self.perm} is not a permutation of 1..{n}")
        for name in ("swap", "alpha", "beta"):
            vec = getattr(self, name)
            if len(vec) != n or any(x not in (0, 1) for x in vec):
                raise DimensionError(f"{name} must be {n} bits, got {vec}")

    @property
    def n(self) -> int:
        return len(self.perm)

    @classmethod
    def identity(cls, n: int) -> "Relabeling":
        return cls(tuple(range(1, n + 1)), (0,) * n, (0,) * n, (0,) * n)

    @classmethod
    def build(cls, n: int, perm=None, swap=None, alpha=None, beta=None) -> "Relabeling":
        return cls(
            tuple(perm) if perm is not None else tuple(range(1, n + 1)),
            tuple(swap) if swap is not None else (0,) * n,
            tuple(alpha) if alpha is not None else (0,) * n,
            tuple(beta) if beta is not None else (0,) * n,
        )

    def then(self, other: "Relabeling") -> "Relabeling":
        """Apply ``self`` first and ``other`` second."""
        if other.n != self.n:
            raise DimensionError("relabelings act on different party counts")
        n = self.n
        perm, swap, alpha, beta = [0] * n, [0] * n, [0] * n, [0] * n
        for k in range(n):
            j = self.perm[k] - 1
            perm[k] = other.perm[j]
            swap[k] = self.swap[k] ^ other.swap[j]
            alpha[k] = self.alpha[k] ^ other.alpha[j] ^ (other.beta[j] & self.swap[k])
            beta[k] = self.beta[k] ^ other.beta[j]
        return Relabeling(tuple(perm), tuple(swap), tuple(alpha), tuple(beta))

    def inverse(self) -> "Relabeling":
        n = self.n
        perm, swap, alpha, beta = [0] * n, [0] * n, [0] * n, [0] * n
        for k in range(n):
            j = self.perm[k] - 1
            perm[j] = k + 1
            swap[j] = self.swap[k]
            alpha[j] = self.alpha[k] ^ (self.beta[k] & self.swap[k])
            beta[j] = self.beta[k]
        return Relabeling(tuple(perm), tuple(swap), tuple(alpha), tuple(beta))

    def map_event(self, t: int, b: int) -> tuple[int, int]:
        new_t = new_b = 0
        for k in range(self.n):
            tk = (t >> k) & 1
            bk = (b >> k) & 1
            j = self.perm[k] - 1
            new_t |= (tk ^ self.swap[k]) << j
            new_b |= (bk ^ self.alpha[k] ^ (self.beta[k] & tk)) << j
        return new_t, new_b


def apply_relabeling(relabeling: Relabeling, table: T) -> T:
    """Relabel a box or a functional; pairings ``<B|P>`` are preserved."""
    n = table.n
    if relabeling.n != n:
        raise DimensionError(f"relabeling acts on {relabeling.n} parties, table has {n}")
    vals = [ZERO] * len(table.values)
    for t in words(n):
        for b in words(n):
            nt, nb = relabeling.map_event(t, b)
            vals[(nt << n) | nb] = table.values[(t << n) | b]
    if isinstance(table, Box):
        return Box(n, vals, check=False)
    return type(table)(n, vals)


def dual_is_consistent(functional: BellFunctional, box: Box) -> bool:
    """``<B|a;b> == P(a|a+b)`` on every vertex, the defining identity of the duality."""
    n = functional.n
    if box.n != n:
        return False
    return all(
        vertex_value(functional, a, b) == box.value(a ^ b, a)
        for a in words(n) for b in words(n)
    )

