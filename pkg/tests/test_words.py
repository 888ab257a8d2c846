import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hexacarpet.words import (
    WordError,
    all_words,
    cell_boundary,
    conjugation_f,
    conjugation_f_cumulative,
    conjugation_f_inverse,
    delta_metric,
    edge_blocks,
    edge_tag,
    first_disagreement,
    fixedpoint_neighbors,
    format_word,
    hole_words,
    index_word,
    parse_word,
    partition_class,
    partition_classes,
    shift,
    word_index,
    word_neighbors,
)

words = st.integers(1, 7).flatmap(lambda n: st.lists(st.integers(0, 5), min_size=n, max_size=n).map(tuple))


def brute_class(w):
    # oracle straight from the definition: W_k = words ending in exactly n-k letters from {0,5}
    n = len(w)
    tail = 0
    for d in reversed(w[1:]):
        if d in (0, 5):
            tail += 1
        else:
            break
    return n - tail if tail < n - 1 else 1


def brute_edges(n):
    """Group-form relation enumerated from its definition, independent of word_neighbors."""
    out = set()
    for w in all_words(n):
        out.add(frozenset((w, w[:-1] + ((w[-1] + 1) % 6,))))
    for k in range(2, n + 1):
        for x in itertools.product(range(6), repeat=k - 2):
            for v in itertools.product((0, 5), repeat=n - k):
                for i in range(6):
                    alphas = (3, 4) if i % 2 else (1, 2)
                    for a in alphas:
                        out.add(frozenset((x + (i, a) + v, x + ((i + 1) % 6, a) + v)))
    return out


def fixedpoint_edges(n):
    return {frozenset((w, u)) for w in all_words(n) for u in fixedpoint_neighbors(w)}


class TestParsing:
    def test_round_trip_string(self):
        assert format_word(parse_word("0350")) == "0350"

    def test_rejects_bad_digit(self):
        with pytest.raises(WordError):
            parse_word("06")
        with pytest.raises(WordError):
            parse_word("0a")
        with pytest.raises(WordError):
            parse_word("")

    def test_index_is_base_six(self):
        assert word_index("10") == 6
        assert word_index("55") == 35
        assert index_word(35, 2) == (5, 5)
        # "05" and "5" are distinct words at different levels
        assert index_word(5, 2) == (0, 5)

    @given(words)
    def test_index_round_trip(self, w):
        assert index_word(word_index(w), len(w)) == w

    def test_index_out_of_range(self):
        with pytest.raises(WordError):
            index_word(36, 2)


class TestPartitionClass:
    def test_examples(self):
        assert partition_class("00") == 1
        assert partition_class("03") == 2

    def test_1350_is_class_2(self):
        # the last letter outside {0,5} is the 3 at position 2 (position 3 holds a 5)
        assert partition_class("1350") == 2

    @given(words)
    def test_matches_definition(self, w):
        assert partition_class(w) == brute_class(w)

    @pytest.mark.parametrize("n", range(1, 8))
    def test_class_sizes(self, n):
        counts = np.bincount(partition_classes(n), minlength=n + 1)[1:].tolist()
        expected = [3 * 2**n] + [3 ** (k - 1) * 2 ** (n + 1) for k in range(2, n + 1)]
        assert counts == expected

    @pytest.mark.parametrize("n", range(1, 5))
    def test_vectorised_agrees(self, n):
        assert partition_classes(n).tolist() == [partition_class(w) for w in all_words(n)]


class TestNeighbors:
    def test_examples(self):
        assert word_neighbors("00") == ["01", "05"]
        assert word_neighbors("03") == ["02", "04", "53"]
        assert word_neighbors("0") == ["1", "5"]

    def test_tuple_in_tuple_out(self):
        assert word_neighbors((0, 3)) == [(0, 2), (0, 4), (5, 3)]

    @given(words)
    def test_degree_law(self, w):
        assert len(word_neighbors(w)) == (2 if partition_class(w) == 1 else 3)

    @given(words)
    def test_symmetric_and_loop_free(self, w):
        nb = word_neighbors(w)
        assert w not in nb
        assert len(set(nb)) == len(nb)
        for u in nb:
            assert w in word_neighbors(u)

    @pytest.mark.parametrize("n", range(1, 5))
    def test_matches_enumerated_relation(self, n):
        ours = {frozenset((w, u)) for w in all_words(n) for u in word_neighbors(w)}
        assert ours == brute_edges(n)

    @pytest.mark.parametrize("n", range(1, 8))
    def test_block_sizes(self, n):
        sizes = [len(b) for b in edge_blocks(n)]
        assert sizes == [6**n] + [6 ** (k - 1) * 2 ** (n - k + 1) for k in range(2, n + 1)]
        assert sum(sizes) == 2 ** (n - 1) * (3 ** (n + 1) - 3)

    @pytest.mark.parametrize("n", range(1, 5))
    def test_blocks_match_neighbors(self, n):
        blocks = edge_blocks(n)
        for k, b in enumerate(blocks, start=1):
            for u, v in b.tolist():
                wu, wv = index_word(u, n), index_word(v, n)
                assert wv in word_neighbors(wu)
                assert edge_tag(wu, wv) == k

    def test_edge_tag_rejects_non_edge(self):
        with pytest.raises(WordError):
            edge_tag("00", "03")

    def test_shift_respects_blocks(self):
        n = 3
        for k, b in enumerate(edge_blocks(n), start=1):
            if k < 3:
                continue
            for u, v in b.tolist():
                su, sv = shift(index_word(u, n)), shift(index_word(v, n))
                assert edge_tag(su, sv) == k - 1


class TestConjugation:
    def test_examples(self):
        assert conjugation_f("03") == "03"
        assert conjugation_f("12") == "15"
        assert conjugation_f_inverse("15") == "12"
        assert conjugation_f_inverse("03") == "03"
        for d in "012345":
            assert conjugation_f(d) == d
            assert conjugation_f_inverse(d) == d

    @given(words)
    def test_inverse_both_ways(self, w):
        assert conjugation_f_inverse(conjugation_f(w)) == w
        assert conjugation_f(conjugation_f_inverse(w)) == w

    @pytest.mark.parametrize("n", range(1, 6))
    def test_bijection(self, n):
        images = {conjugation_f(w) for w in all_words(n)}
        assert len(images) == 6**n

    @pytest.mark.parametrize("n", range(1, 5))
    def test_first_disagreement_preserved(self, n):
        ws = list(all_words(n))
        fw = [conjugation_f(w) for w in ws]
        for a in range(len(ws)):
            for b in range(a + 1, len(ws), 7):
                assert first_disagreement(ws[a], ws[b]) == first_disagreement(fw[a], fw[b])

    def test_pushes_example_edge(self):
        assert conjugation_f("53") in fixedpoint_neighbors(conjugation_f("03"))

    def test_fixedpoint_level_one(self):
        assert fixedpoint_neighbors("0") == ["1", "5"]

    def test_fixedpoint_edge_count_n2(self):
        assert len(fixedpoint_edges(2)) == 48

    @pytest.mark.parametrize("n", range(1, 6))
    def test_bridge(self, n):
        pushed = {frozenset((conjugation_f(a), conjugation_f(b))) for a, b in map(tuple, brute_edges(n))}
        assert pushed == fixedpoint_edges(n)

    def test_cumulative_variant_agrees_short_words(self):
        for n in (1, 2):
            for w in all_words(n):
                assert conjugation_f_cumulative(w) == conjugation_f(w)

    def test_cumulative_variant_breaks_bridge_at_three(self):
        pushed = {
            frozenset((conjugation_f_cumulative(a), conjugation_f_cumulative(b)))
            for a, b in map(tuple, brute_edges(3))
        }
        assert pushed != fixedpoint_edges(3)


class TestMetricAndShift:
    def test_delta_examples(self):
        assert delta_metric("012", "015", 0.5) == 0.125
        assert delta_metric("012", "012", 0.3) == 0
        assert delta_metric("0123", "5123", 0.5) == 0.5

    def test_delta_length_mismatch(self):
        with pytest.raises(WordError):
            delta_metric("01", "012")

    def test_delta_bad_r(self):
        with pytest.raises(WordError):
            delta_metric("01", "02", 1.0)

    @given(st.integers(1, 6).flatmap(lambda n: st.tuples(*[st.lists(st.integers(0, 5), min_size=n, max_size=n)] * 3)),
           st.floats(0.05, 0.95))
    def test_delta_ultrametric(self, triple, r):
        u, v, w = map(tuple, triple)
        assert delta_metric(u, w, r) <= max(delta_metric(u, v, r), delta_metric(v, w, r)) + 1e-15
        assert delta_metric(u, v, r) == delta_metric(v, u, r)

    def test_shift(self):
        assert shift("123") == "23"
        assert shift("00") == "0"
        with pytest.raises(WordError):
            shift("1")


class TestCells:
    def test_non_neighbours_empty(self):
        for n in (2, 3, 4):
            assert cell_boundary(0, 3, n) == []

    def test_examples(self):
        assert len(cell_boundary(5, 0, 3)) == 4
        assert cell_boundary(0, 1, 2) == [("01", "11"), ("02", "12")]

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_count(self, n):
        for i in range(6):
            assert len(cell_boundary(i, (i + 1) % 6, n)) == 2 * 2 ** (n - 2)

    def test_same_cell_rejected(self):
        with pytest.raises(WordError):
            cell_boundary(2, 2, 3)

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_hole_word_count(self, n):
        assert len(hole_words(n)) == 3 * 2**n
