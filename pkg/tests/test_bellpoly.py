from fractions import Fraction
from itertools import product

import pytest

from bellhardy.bellpoly import (
    DeterministicStrategy,
    deterministic_box,
    enumerate_vertices,
    is_local,
    is_tight,
    saturating_vertices,
    span_dimension,
)
from bellhardy.boxspace import Box, uniform_box, words
from bellhardy.duality import apply_relabeling, hardy_box, pr_box
from bellhardy.errors import InvalidBoxError, NotAnInequalityError, PartyLimitError
from bellhardy.functional import (
    BellFunctional,
    evaluate,
    hardy_functional,
    is_standard,
    standardize,
    uniform_functional,
    vertex_value,
)

from conftest import random_local_box, random_relabeling

D = DeterministicStrategy.of


def brute_hardy_value(a, b, n):
    """Closed form sum_j b_j prod_{k!=j} a_k + prod(1 - b_k) - prod a_k on bit lists."""
    def prod(xs):
        out = 1
        for x in xs:
            out *= x
        return out

    return (sum(b[j] * prod(a[k] for k in range(n) if k != j) for j in range(n))
            + prod(1 - x for x in b) - prod(a))


class TestDeterministicBox:
    def test_one_party(self):
        box = deterministic_box(D("0", "1"))
        assert box["0", "0"] == 1 and box["1", "1"] == 1
        assert box["0", "1"] == 0 and box["1", "0"] == 0

    def test_constant_strategy(self):
        box = deterministic_box(D("11", "11"))
        assert all(box[s, "11"] == 1 for s in ("00", "10", "01", "11"))

    def test_componentwise_selection(self):
        # observer k answers a_k under setting 0 and b_k under setting 1
        box = deterministic_box(D("10", "01"))
        assert box["00", "10"] == 1
        assert box["01", "11"] == 1
        assert box["10", "00"] == 1
        assert box["11", "01"] == 1
        assert sum(box.values) == 4


class TestEnumeration:
    def test_counts_and_order(self):
        assert len(enumerate_vertices(1)) == 4
        assert len(enumerate_vertices(2)) == 16
        verts = enumerate_vertices(3)
        assert len(verts) == 64
        assert verts[0] == D("000", "000")
        assert verts[1] == D("000", "001")
        assert len(set(verts)) == 64

    def test_limit(self):
        with pytest.raises(PartyLimitError):
            enumerate_vertices(6)


class TestSpan:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_full_span(self, n):
        assert span_dimension(deterministic_box(d) for d in enumerate_vertices(n)) == 3 ** n

    def test_empty(self):
        assert span_dimension([]) == 0

    def test_one_site_identity(self):
        boxes = [deterministic_box(D(a, b)) for a, b in (("0", "0"), ("1", "1"), ("0", "1"), ("1", "0"))]
        assert span_dimension(boxes) == 3

    def test_identity_embedded_in_larger_scenarios(self, rng):
        # |0;0> + |1;1> = |0;1> + |1;0> at one site, other sites fixed
        for n in (2, 3):
            for _ in range(5):
                k = rng.randrange(n)
                a = rng.randrange(1 << n) & ~(1 << k)
                b = rng.randrange(1 << n) & ~(1 << k)
                bit = 1 << k
                quad = [(a, b), (a | bit, b | bit), (a, b | bit), (a | bit, b)]
                boxes = [deterministic_box(D(x, y, n)) for x, y in quad]
                assert span_dimension(boxes) == 3


class TestSaturation:
    def test_hardy_one(self):
        assert saturating_vertices(hardy_functional(1)) == [D("1", "0"), D("1", "1")]

    def test_hardy_two(self):
        sat = saturating_vertices(hardy_functional(2))
        assert D("11", "10") in sat
        assert D("00", "00") not in sat
        assert vertex_value(hardy_functional(2), 0, 0) == 1

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_hardy_nonnegative_on_vertices(self, n):
        f = hardy_functional(n)
        for d in enumerate_vertices(n):
            value = evaluate(f, deterministic_box(d))
            assert value >= 0
            assert value == brute_hardy_value(list(d.a), list(d.b), n)


class TestTightness:
    @pytest.mark.parametrize("n,rank", [(1, 2), (2, 8), (3, 26)])
    def test_hardy_tight(self, n, rank):
        report = is_tight(hardy_functional(n))
        assert report.tight and report.rank == rank and report.target == rank

    def test_uniform_not_tight(self):
        report = is_tight(uniform_functional(2))
        assert not report.tight and report.rank == 0

    def test_not_an_inequality(self):
        with pytest.raises(NotAnInequalityError) as info:
            is_tight(-hardy_functional(2))
        assert info.value.strategy is not None

    def test_invariant_under_scaling_and_standardization(self):
        for n in (2, 3):
            f = hardy_functional(n)
            base = is_tight(f)
            assert is_tight(f.scale(Fraction(7, 3))).rank == base.rank
            std = standardize(f)
            assert is_tight(std).rank == base.rank
            assert saturating_vertices(std) == saturating_vertices(f)

    def test_relabeled_hardy_is_tight(self, rng):
        for _ in range(5):
            f = apply_relabeling(random_relabeling(rng, 3), hardy_functional(3))
            assert is_tight(f).rank == 26


class TestMembership:
    def test_deterministic_boxes_are_local(self):
        for d in enumerate_vertices(2):
            cert = is_local(deterministic_box(d))
            assert cert.local
            assert cert.weights == {d: 1}

    def test_uniform_is_local(self):
        cert = is_local(uniform_box(2))
        assert cert.local and cert.verify(uniform_box(2))

    def test_random_local_boxes(self, rng):
        for n in (1, 2, 3):
            for _ in range(5):
                box = random_local_box(rng, n, support=rng.randint(1, 6))
                cert = is_local(box)
                assert cert.local and cert.verify(box)

    @pytest.mark.parametrize("n", [2, 3])
    def test_hardy_box_nonlocal(self, n):
        box = hardy_box(n)
        cert = is_local(box)
        assert not cert.local
        assert cert.value < 0
        assert cert.value == evaluate(cert.separator, box)
        assert is_standard(cert.separator)
        assert cert.verify(box)

    def test_pr_box_nonlocal(self):
        cert = is_local(pr_box())
        assert not cert.local and cert.verify(pr_box())

    def test_hardy_one_is_local(self):
        assert is_local(hardy_box(1)).local

    def test_signaling_box(self):
        box = Box.from_mapping(2, {("00", "00"): 1, ("01", "11"): 1, ("10", "00"): 1, ("11", "00"): 1})
        cert = is_local(box)
        assert not cert.local and cert.reason == "box is signaling"
        assert cert.verify(box)
        # the separator vanishes on every non-signaling box
        for d in enumerate_vertices(2):
            assert evaluate(cert.separator, deterministic_box(d)) == 0

    def test_unnormalized_rejected(self):
        box = Box(1, [1, 0, 0, 0], check=False)
        with pytest.raises(InvalidBoxError):
            is_local(box)

    def test_deterministic_certificates(self):
        a, b = is_local(hardy_box(2)), is_local(hardy_box(2))
        assert a.separator == b.separator

    def test_verify_rejects_wrong_box(self):
        cert = is_local(uniform_box(2))
        assert not cert.verify(hardy_box(2))


def test_vertex_value_matches_box_evaluation(rng):
    for n in (1, 2, 3):
        vals = [Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(1 << (2 * n))]
        f = BellFunctional(n, vals)
        for a, b in product(words(n), repeat=2):
            assert vertex_value(f, a, b) == evaluate(f, deterministic_box(D(a, b, n)))
