from fractions import Fraction
from itertools import product

import pytest

from bellhardy.bellpoly import DeterministicStrategy, deterministic_box, enumerate_vertices
from bellhardy.boxspace import (
    BinaryVector,
    Box,
    CorrelationTable,
    EventTable,
    box_from_correlations,
    check_parties,
    correlations_of_box,
    dot_parity,
    lex_words,
    marginal,
    mix,
    subsets,
    uniform_box,
    walsh_hadamard,
    wedge,
    words,
)
from bellhardy.duality import hardy_box
from bellhardy.errors import (
    DimensionError,
    IncompleteTableError,
    InvalidBoxError,
    PartyLimitError,
    SignalingError,
)
from bellhardy.nsbox import is_nonsignaling

from conftest import rand_fraction, random_ns_box

V = BinaryVector.parse


class TestBinaryVector:
    def test_wedge_examples(self):
        assert wedge(V("101"), V("011")) == V("001")
        assert wedge(V("111"), V("111")) == V("111")
        assert wedge(V("110"), V("001")) == V("000")

    def test_dot_parity_examples(self):
        assert dot_parity(V("110"), V("011")) == 1
        assert dot_parity(V("000"), V("111")) == 0
        assert dot_parity(V("111"), V("111")) == 1
        assert dot_parity(V("11"), V("11")) == 0

    def test_mismatched_n_rejected(self):
        with pytest.raises(DimensionError):
            wedge(V("10"), V("101"))
        with pytest.raises(DimensionError):
            dot_parity(V("1"), V("10"))
        with pytest.raises(DimensionError):
            V("10") ^ V("1")

    def test_components_and_printing(self):
        v = V("100")
        # observer 1 is leftmost and occupies the lowest bit
        assert v.bits == 1
        assert (v[1], v[2], v[3]) == (1, 0, 0)
        assert str(v) == "100"
        assert list(V("011")) == [0, 1, 1]
        assert V("011").weight == 2
        assert BinaryVector.unit(3, 2) == V("010")
        assert BinaryVector.ones(2) == V("11")
        assert BinaryVector.zeros(2).weight == 0

    def test_bad_bitstrings(self):
        for text in ("", "102", "1a"):
            with pytest.raises(DimensionError):
                V(text)
        with pytest.raises(DimensionError):
            BinaryVector(2, 4)

    def test_subset_and_xor(self):
        assert V("010").issubset(V("110"))
        assert not V("011").issubset(V("110"))
        assert V("110") ^ V("011") == V("101")
        assert V("110").support() == (1, 2)


def test_party_limit():
    assert check_parties(5) == 5
    with pytest.raises(PartyLimitError):
        check_parties(6)
    assert check_parties(6, limit=6) == 6
    with pytest.raises(DimensionError):
        check_parties(0)


def test_subsets_and_lex_order():
    assert sorted(subsets(0b101)) == [0, 1, 4, 5]
    assert list(subsets(0)) == [0]
    assert len(lex_words(3)) == 8
    # lexicographic on the printed string, observer 1 first
    assert lex_words(2) == [0b00, 0b10, 0b01, 0b11]


def test_walsh_hadamard_matches_direct_sum(rng):
    for n in range(1, 5):
        vals = [rand_fraction(rng) for _ in range(1 << n)]
        fast = walsh_hadamard(vals)
        direct = [sum((-v if bin(a & c).count("1") % 2 else v) for a, v in enumerate(vals)) for c in words(n)]
        assert fast == direct
    with pytest.raises(DimensionError):
        walsh_hadamard([1, 2, 3])


class TestBox:
    def test_validation(self):
        with pytest.raises(InvalidBoxError):
            Box(1, [1, 0, 1, 1])
        with pytest.raises(InvalidBoxError):
            Box(1, [Fraction(3, 2), Fraction(-1, 2), 1, 0])
        with pytest.raises(IncompleteTableError):
            Box(1, [1, 0, 1])
        b = Box(1, [Fraction(3, 2), Fraction(-1, 2), 1, 0], check=False)
        assert b.is_normalized() and not b.is_nonnegative()

    def test_indexing(self):
        box = hardy_box(2)
        assert box["01", "10"] == Fraction(1, 2)
        assert box[(V("01"), V("01"))] == Fraction(1, 2)
        assert box["01", "11"] == 0

    def test_values_are_reduced_fractions(self):
        box = Box(1, ["2/4", "1/2", 1, 0])
        assert box.values[0] == Fraction(1, 2)
        assert box.values[0].denominator == 2

    def test_mix(self):
        d0 = deterministic_box(DeterministicStrategy.of("0", "0"))
        d1 = deterministic_box(DeterministicStrategy.of("1", "1"))
        m = mix([d0, d1], [Fraction(1, 2), Fraction(1, 2)])
        assert m == uniform_box(1)
        with pytest.raises(InvalidBoxError):
            mix([d0, d1], [1, 1])

    def test_equality_and_hash(self):
        assert uniform_box(2) == uniform_box(2)
        assert hash(uniform_box(2)) == hash(uniform_box(2))
        assert uniform_box(2) != hardy_box(2)


class TestCorrelations:
    def test_uniform(self):
        table = correlations_of_box(uniform_box(2))
        assert len(table) == 9
        assert table[0, 0] == 1
        assert all(v == 0 for k, v in table.items() if k != (0, 0))

    def test_hardy3_parity(self):
        assert correlations_of_box(hardy_box(3))["111", "000"] == Fraction(-1, 3)

    def test_deterministic_parity(self):
        box = deterministic_box(DeterministicStrategy.of("11", "11"))
        assert correlations_of_box(box)["10", "00"] == -1

    def test_uniform_round_trip(self):
        assert box_from_correlations(correlations_of_box(uniform_box(2))) == uniform_box(2)

    def test_negative_entry_flagged_not_raised(self):
        entries = {(c, s): 0 for c in words(2) for s in subsets(c)}
        entries[(0, 0)] = 1
        entries[(3, 0)] = 3
        box = box_from_correlations(CorrelationTable(2, entries))
        assert box.is_normalized()
        assert not box.is_nonnegative()
        assert box.defect() is not None

    def test_incomplete_table(self):
        with pytest.raises(IncompleteTableError):
            CorrelationTable(2, {(0, 0): 1})
        with pytest.raises(InvalidBoxError):
            CorrelationTable(1, {(0, 0): 2, (1, 0): 0, (1, 1): 0})
        with pytest.raises(DimensionError):
            CorrelationTable(1, {(0, 0): 1, (1, 0): 0, (0, 1): 0})

    def test_round_trip_deterministic(self):
        for n in range(1, 4):
            for d in enumerate_vertices(n):
                box = deterministic_box(d)
                assert box_from_correlations(correlations_of_box(box)) == box

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_round_trip_hardy(self, n):
        box = hardy_box(n)
        assert box_from_correlations(correlations_of_box(box)) == box

    def test_completion_independence(self, rng):
        for n in (2, 3):
            for _ in range(10):
                box = random_ns_box(rng, n)
                sums = [walsh_hadamard(box.row(s)) for s in words(n)]
                for s, c in product(words(n), repeat=2):
                    assert sums[s][c] == sums[s & c][c]

    def test_chart_output_is_nonsignaling(self, rng):
        for _ in range(10):
            entries = {(c, s): rand_fraction(rng) for c in words(3) for s in subsets(c)}
            entries[(0, 0)] = Fraction(1)
            assert is_nonsignaling(box_from_correlations(CorrelationTable(3, entries)))


class TestMarginal:
    def test_hardy_marginals(self):
        assert marginal(hardy_box(3), 1, 0, 0) == Fraction(1, 3)
        assert marginal(hardy_box(3), 2, 1, 1) == Fraction(2, 3)

    def test_uniform(self):
        for k, s in product((1, 2, 3), (0, 1)):
            assert marginal(uniform_box(3), k, s, 0, strict=True) == Fraction(1, 2)

    def test_strict_detects_signaling(self):
        box = Box.from_mapping(2, {("00", "00"): 1, ("01", "11"): 1, ("10", "00"): 1, ("11", "00"): 1})
        assert marginal(box, 1, 0, 0) == 1
        with pytest.raises(SignalingError):
            marginal(box, 1, 0, 0, strict=True)

    def test_bad_party(self):
        with pytest.raises(DimensionError):
            marginal(uniform_box(2), 3, 0, 0)


def test_event_table_is_immutable():
    table = EventTable(1, [1, 2, 3, 4])
    with pytest.raises((AttributeError, TypeError)):
        table.values[0] = 5
