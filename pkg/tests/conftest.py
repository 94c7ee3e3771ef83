import random
from fractions import Fraction

import pytest

from bellhardy.bellpoly import deterministic_box, enumerate_vertices
from bellhardy.boxspace import Box, mix, words
from bellhardy.duality import Relabeling, apply_relabeling, hardy_box, pr_box
from bellhardy.functional import BellFunctional, hardy_functional
from bellhardy.nsbox import normalization_rows, ns_rows
from bellhardy.simplex import OPTIMAL, solve


@pytest.fixture
def rng():
    return random.Random(20241018)


def rand_fraction(rng, lo=-5, hi=5, maxden=7):
    return Fraction(rng.randint(lo * maxden, hi * maxden), rng.randint(1, maxden))


def random_weights(rng, k, maxden=9):
    raw = [Fraction(rng.randint(1, maxden)) for _ in range(k)]
    total = sum(raw)
    return [w / total for w in raw]


def random_relabeling(rng, n):
    perm = list(range(1, n + 1))
    rng.shuffle(perm)
    bits = lambda: [rng.randint(0, 1) for _ in range(n)]  # noqa: E731
    return Relabeling.build(n, perm=perm, swap=bits(), alpha=bits(), beta=bits())


def random_local_box(rng, n, support=4):
    verts = enumerate_vertices(n)
    chosen = [deterministic_box(rng.choice(verts)) for _ in range(support)]
    return mix(chosen, random_weights(rng, support))


def random_ns_box(rng, n):
    """Vertex mixtures, optionally blended with a relabeled Hardy (or PR) box."""
    parts = [random_local_box(rng, n, support=rng.randint(1, 5))]
    if rng.random() < 0.7:
        parts.append(apply_relabeling(random_relabeling(rng, n), hardy_box(n)))
    if n == 2 and rng.random() < 0.5:
        parts.append(apply_relabeling(random_relabeling(rng, n), pr_box()))
    return mix(parts, random_weights(rng, len(parts)))


def ns_null_functional(rng, n):
    """A functional vanishing on every non-signaling box."""
    vals = [Fraction(0)] * (1 << (2 * n))
    k = rng.randrange(n)
    bit = 1 << k
    for s in words(n):
        if s & bit:
            continue
        for a in words(n):
            if a & bit:
                continue
            g = rand_fraction(rng, -2, 2, 3)
            for x in (a, a | bit):
                vals[(s << n) | x] += g
                vals[((s | bit) << n) | x] -= g
    return BellFunctional(n, vals)


def random_inequality(rng, n):
    """Valid but generally non-standard Bell inequality."""
    f = BellFunctional(n, [Fraction(0)] * (1 << (2 * n)))
    for _ in range(rng.randint(1, 3)):
        f = f + apply_relabeling(random_relabeling(rng, n), hardy_functional(n)).scale(rng.randint(1, 4))
    if rng.random() < 0.5:
        f = f + BellFunctional(n, [Fraction(rng.randint(0, 2), rng.randint(1, 3)) for _ in range(1 << (2 * n))])
    for _ in range(rng.randint(0, 2)):
        f = f + ns_null_functional(rng, n)
    return f


def hardy_constraint_lp(n):
    """Rows/rhs for normalized non-signaling boxes with Hardy's n+1 zero conditions."""
    size = 1 << (2 * n)
    ones = (1 << n) - 1
    rows, rhs = [], []
    for r in ns_rows(n):
        rows.append([r.get(i, 0) for i in range(size)])
        rhs.append(0)
    for r in normalization_rows(n):
        rows.append([r.get(i, 0) for i in range(size)])
        rhs.append(1)
    for z in [(ones << n) | 0] + [((1 << j) << n) | ones for j in range(n)]:
        row = [0] * size
        row[z] = 1
        rows.append(row)
        rhs.append(0)
    return rows, rhs


def hardy_passing_boxes(rng, n, count):
    """Non-signaling boxes obeying Hardy's zero conditions, most with P(1|0) > 0.

    LP vertices (maximize P(1|0) plus a random tie-breaker) blended with
    deterministic boxes that also satisfy the zero conditions.
    """
    size = 1 << (2 * n)
    ones = (1 << n) - 1
    rows, rhs = hardy_constraint_lp(n)
    extremes = []
    for _ in range(3):
        c = [Fraction(rng.randint(0, 3), 16) for _ in range(size)]
        c[ones] = Fraction(-1)
        res = solve(c, rows, rhs)
        assert res.status == OPTIMAL
        extremes.append(Box(n, res.x))
    compliant = [
        deterministic_box(d) for d in enumerate_vertices(n)
        if d.outcome(ones) != 0 and all(d.outcome(1 << j) != ones for j in range(n))
    ]
    boxes = []
    for _ in range(count):
        parts = [rng.choice(extremes)] + [rng.choice(compliant) for _ in range(rng.randint(0, 3))]
        weights = random_weights(rng, len(parts))
        if rng.random() < 0.15:
            weights = [Fraction(0)] + random_weights(rng, len(parts) - 1) if len(parts) > 1 else weights
        boxes.append(mix(parts, weights))
    return boxes


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
