"""Bell functionals, their two standard forms, and the Hardy family.

A functional ``B`` pairs with a box as ``<B|P> = sum_{s,a} B(a,s) P(a|s)``.
Raw parity sums ``H^c_s = sum_a (-1)^(a.c) B(a,s)`` are kept without any
``2^-|c|`` prefactor; the reduced correlation coefficients

    K^c_s = 2^-n  sum_{t : t & c = s} H^c_t        (s inside c)

satisfy ``<B|P> = sum_c sum_{s in c} K^c_s A^c_s`` on every non-signaling box.
For a functional already in standard form ``K^c_s = 2^-|c| H^c_s``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .boxspace import (
    ZERO,
    Box,
    EventTable,
    SubsetTable,
    check_parties,
    parity_sums,
    to_bitstring,
    walsh_hadamard,
    words,
)
from .errors import DimensionError, NotAnInequalityError, NotNormalizableError


class BellFunctional(EventTable):
    """Coefficients ``B(a, s)`` over all ``4**n`` events; no sign constraints."""

    __slots__ = ()

    def __add__(self, other: "BellFunctional") -> "BellFunctional":
        self._check_same_n(other)
        return BellFunctional(self.n, (x + y for x, y in zip(self.values, other.values)))

    def __sub__(self, other: "BellFunctional") -> "BellFunctional":
        self._check_same_n(other)
        return BellFunctional(self.n, (x - y for x, y in zip(self.values, other.values)))

    def __neg__(self) -> "BellFunctional":
        return BellFunctional(self.n, (-x for x in self.values))

    def scale(self, factor) -> "BellFunctional":
        factor = Fraction(factor)
        return BellFunctional(self.n, (factor * x for x in self.values))

    def __mul__(self, factor) -> "BellFunctional":
        return self.scale(factor)

    __rmul__ = __mul__


class CorrelationFunctional(SubsetTable):
    """Correlation-form coefficients ``K^c_s`` (``s`` inside ``c``)."""


def zero_functional(n: int) -> BellFunctional:
    return BellFunctional(n, [ZERO] * (1 << (2 * n)))


def evaluate(functional: BellFunctional, box: EventTable) -> Fraction:
    """``<B|P>``."""
    if functional.n != box.n:
        raise DimensionError(f"functional has n={functional.n}, box has n={box.n}")
    return sum((x * y for x, y in zip(functional.values, box.values) if x and y), ZERO)


def theta_value(functional: BellFunctional) -> Fraction:
    """Pairing with the all-ones vector, i.e. the sum of all coefficients."""
    return sum(functional.values, ZERO)


def vertex_value(functional: BellFunctional, a: int, b: int) -> Fraction:
    """Value on the deterministic strategy answering ``a`` to setting 0 and ``b`` to setting 1."""
    n = functional.n
    total = ZERO
    for s in words(n):
        total += functional.values[(s << n) | (a & ~s) | (b & s)]
    return total


def vertex_values(functional: BellFunctional) -> dict[tuple[int, int], Fraction]:
    n = functional.n
    return {(a, b): vertex_value(functional, a, b) for a in words(n) for b in words(n)}


def check_inequality(functional: BellFunctional) -> None:
    """Raise :class:`NotAnInequalityError` naming a vertex where ``B`` is negative."""
    n = functional.n
    for (a, b), v in vertex_values(functional).items():
        if v < 0:
            raise NotAnInequalityError(
                f"functional is {v} on the deterministic strategy "
                f"a={to_bitstring(a, n)} b={to_bitstring(b, n)}",
                strategy=(a, b),
                value=v,
            )


def raw_correlation_coeffs(functional: BellFunctional) -> dict[tuple[int, int], Fraction]:
    """``H^c_s = sum_a (-1)^(a.c) B(a,s)`` for all ``4**n`` pairs ``(c, s)``."""
    sums = parity_sums(functional)
    return {(c, s): sums[s][c] for s in words(functional.n) for c in words(functional.n)}


def correlation_coeffs(functional: BellFunctional) -> CorrelationFunctional:
    """Reduced coefficients ``K^c_s`` of the correlation form."""
    n = functional.n
    sums = parity_sums(functional)
    scale = Fraction(1, 1 << n)
    acc: dict[tuple[int, int], Fraction] = {}
    for s in words(n):
        row = sums[s]
        for c in words(n):
            key = (c, s & c)
            acc[key] = acc.get(key, ZERO) + row[c]
    return CorrelationFunctional(n, {k: v * scale for k, v in acc.items()})


def functional_from_correlations(coeffs: SubsetTable) -> BellFunctional:
    """Expand ``B(a,s) = sum_c (-1)^(a.c) 2^(|c|-n) K^c_(s&c)``.

    The result is setting-independent in every single-party coefficient
    marginal, whatever ``coeffs`` is.
    """
    n = coeffs.n
    data = {key: coeffs[key] for key in coeffs}
    vals: list[Fraction] = []
    for s in words(n):
        vec = [data[(c, s & c)] * Fraction(1 << c.bit_count(), 1 << n) for c in words(n)]
        vals.extend(walsh_hadamard(vec))
    return BellFunctional(n, vals)


def standardize(functional: BellFunctional, check: bool = True) -> BellFunctional:
    """Rescale to unit total weight and symmetrize the setting dependence.

    The output agrees with ``B / theta_value(B)`` on every non-signaling box,
    sums to 1, and its single-party coefficient marginals do not depend on the
    local setting.
    """
    if check:
        check_inequality(functional)
    theta = theta_value(functional)
    if theta <= 0:
        raise NotNormalizableError(f"total weight {theta} is not positive")
    coeffs = correlation_coeffs(functional)
    scaled = CorrelationFunctional(coeffs.n, {k: coeffs[k] / theta for k in coeffs})
    return functional_from_correlations(scaled)


def standard_form_defect(functional: BellFunctional) -> str | None:
    """Describe the first violated standard-form condition, or None."""
    n = functional.n
    total = theta_value(functional)
    if total != 1:
        return f"coefficients sum to {total}, not 1"
    for k in range(n):
        bit = 1 << k
        for s in words(n):
            if s & bit:
                continue
            for a in words(n):
                if a & bit:
                    continue
                lo = functional.value(s, a) + functional.value(s, a | bit)
                hi = functional.value(s | bit, a) + functional.value(s | bit, a | bit)
                if lo != hi:
                    return (
                        f"observer {k + 1}: marginal coefficient at a={to_bitstring(a, n)} "
                        f"s={to_bitstring(s, n)} is {lo} for setting 0 but {hi} for setting 1"
                    )
    return None


def is_standard(functional: BellFunctional) -> bool:
    return standard_form_defect(functional) is None


# --------------------------------------------------------------------------
# Hardy


def hardy_functional(n: int, limit: int | None = None) -> BellFunctional:
    """``sum_j P(1|1_j) + P(0|1) - P(1|0)`` as a functional.

    For ``n = 1`` the events ``(s=1, a=1)`` and ``(s=1, a=0)`` are distinct and
    both carry +1.
    """
    check_parties(n, limit)
    ones = (1 << n) - 1
    entries: dict[tuple[int, int], Fraction] = {}
    for j in range(n):
        key = (1 << j, ones)
        entries[key] = entries.get(key, ZERO) + 1
    entries[(ones, 0)] = entries.get((ones, 0), ZERO) + 1
    entries[(0, ones)] = entries.get((0, ones), ZERO) - 1
    return BellFunctional.from_mapping(n, entries)


@dataclass(frozen=True)
class HardyTestResult:
    passed: bool
    failures: list[str] = field(default_factory=list)

    def __bool__(self):
        return self.passed


def hardy_test(box: Box) -> HardyTestResult:
    """Check ``P(1|0) > 0``, ``P(0|1) = 0`` and ``P(1|1_j) = 0`` for every ``j``, exactly."""
    n = box.n
    ones = (1 << n) - 1
    failures = []
    p = box.value(0, ones)
    if not p > 0:
        failures.append(f"P(1|0) = {p} is not positive")
    p = box.value(ones, 0)
    if p != 0:
        failures.append(f"P(0|1) = {p} is not zero")
    for j in range(n):
        p = box.value(1 << j, ones)
        if p != 0:
            failures.append(f"P(1|1_{j + 1}) = {p} is not zero")
    return HardyTestResult(not failures, failures)


def uniform_functional(n: int) -> BellFunctional:
    """The standard-form functional with every coefficient ``4**-n``."""
    return BellFunctional(n, [Fraction(1, 1 << (2 * n))] * (1 << (2 * n)))


def combine(functionals: Iterable[BellFunctional], weights: Iterable) -> BellFunctional:
    functionals = list(functionals)
    out = zero_functional(functionals[0].n)
    for f, w in zip(functionals, weights):
        out = out + f.scale(w)
    return out

