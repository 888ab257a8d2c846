import numpy as np
import pytest

from hexacarpet.graphs import (
    ChecksumError,
    LevelGraph,
    ResourceCapError,
    build_geometry_graph,
    build_word_graph,
    census,
    compare_graphs,
    edge_list_text,
    hole_cycle,
    induced_cycle,
    inner_cycle_geometric,
    is_connected,
    outer_cycle_geometric,
    read_edge_list,
    verify_isomorphism,
    write_edge_list,
)
from hexacarpet.words import all_words, format_word, word_neighbors


class TestBuild:
    def test_six_cycle(self, wg):
        g = wg(1)
        assert g.edges.tolist() == [[0, 1], [0, 5], [1, 2], [2, 3], [3, 4], [4, 5]]

    def test_level_two(self, wg):
        g = wg(2)
        assert (g.vertex_count, g.edge_count) == (36, 48)

    def test_level_seven(self, wg):
        g = wg(7)
        assert g.vertex_count == 279936
        assert g.edge_count == 2**6 * (3**8 - 3) == 419712

    def test_geometry_level_three(self, gg):
        assert gg(3).edge_count == 312

    @pytest.mark.parametrize("n", range(1, 5))
    def test_csr_matches_word_neighbors(self, wg, n):
        g = wg(n)
        for idx, w in enumerate(all_words(n)):
            got = [g.word(v) for v in g.neighbors(idx)]
            assert got == word_neighbors(format_word(w))

    def test_caps(self):
        with pytest.raises(ResourceCapError):
            build_word_graph(10)
        with pytest.raises(ResourceCapError):
            build_geometry_graph(8)
        with pytest.raises(ValueError):
            build_word_graph(0)

    def test_index_and_word(self, wg):
        g = wg(3)
        assert g.index("053") == 33
        assert g.word(33) == "053"
        with pytest.raises(ValueError):
            g.index("0530")


class TestIsomorphism:
    @pytest.mark.parametrize("n", range(1, 7))
    def test_identical(self, wg, gg, n):
        rep = verify_isomorphism(n, wg(n), gg(n))
        assert rep.equal_edge_sets and rep.mismatches == []

    @pytest.mark.parametrize("n", range(1, 5))
    def test_tag_concordance(self, wg, gg, n):
        # block F_1 = sibling edges; F_k = deepest common ancestor at level k-2
        assert np.array_equal(wg(n).tags, gg(n).tags)

    def test_corrupted_edge_reported(self, wg):
        g = wg(3)
        edges = g.edges.copy()
        edges[10] = [0, 215]
        bad = LevelGraph.from_edges(3, edges, g.tags, "corrupted")
        rep = compare_graphs(g, bad)
        assert not rep.equal_edge_sets
        assert ("000", "555", "only corrupted") in rep.mismatches
        assert len(rep.mismatches) == 2

    def test_level_mismatch(self, wg):
        with pytest.raises(ValueError):
            compare_graphs(wg(2), wg(3))


class TestCensus:
    @pytest.mark.parametrize("n", range(1, 8))
    def test_all_formulas(self, wg, n):
        c = census(wg(n))
        assert all(c.matches.values()), c.matches

    def test_level_two(self, wg):
        assert census(wg(2)).class_sizes == [12, 24]

    def test_level_three(self, wg):
        assert census(wg(3)).block_sizes == [216, 24, 72]

    def test_degree_histogram(self, wg):
        assert census(wg(4)).degree_histogram == {2: 48, 3: 1296 - 48}

    def test_disconnected_detected(self):
        edges = np.array([[0, 1], [2, 3], [4, 5]])
        g = LevelGraph.from_edges(1, edges, np.ones(3), "test")
        assert not is_connected(g)

    def test_rotation_automorphism_level_one(self, wg):
        g = wg(1)
        es = {tuple(sorted(((u + 2) % 6, (v + 2) % 6))) for u, v in g.edges.tolist()}
        assert es == {tuple(e) for e in g.edges.tolist()}


class TestCycles:
    @pytest.mark.parametrize("n", range(2, 7))
    def test_hole_cycle(self, wg, n):
        cyc = hole_cycle(n, wg(n))
        assert len(cyc) == 3 * 2**n
        assert cyc[0] == min(cyc)

    def test_hole_cycle_level_two(self, wg):
        assert len(hole_cycle(2, wg(2))) == 12

    @pytest.mark.parametrize("n", range(2, 7))
    def test_hole_set_is_inner_circumference(self, n):
        assert sorted(hole_cycle(n)) == sorted(inner_cycle_geometric(n))

    @pytest.mark.parametrize("n", range(1, 7))
    def test_circumference_lengths(self, n):
        assert len(inner_cycle_geometric(n)) == 3 * 2**n
        assert len(outer_cycle_geometric(n)) == 3 * n * 2**n

    def test_non_cycle_rejected(self, wg):
        with pytest.raises(ValueError):
            induced_cycle(wg(2), np.array([0, 1, 2]))


class TestSerialization:
    def test_round_trip(self, wg, tmp_path):
        g = wg(3)
        header = write_edge_list(g, tmp_path / "g.edges")
        assert header["edges"] == 312
        h = read_edge_list(tmp_path / "g.edges")
        assert np.array_equal(h.edges, g.edges) and np.array_equal(h.tags, g.tags)

    def test_bit_exact(self, tmp_path):
        write_edge_list(build_word_graph(3), tmp_path / "a")
        write_edge_list(build_word_graph(3), tmp_path / "b")
        assert (tmp_path / "a").read_bytes() == (tmp_path / "b").read_bytes()

    def test_corruption_detected(self, wg, tmp_path):
        p = tmp_path / "g.edges"
        write_edge_list(wg(2), p)
        lines = p.read_text().splitlines(keepends=True)
        lines[5] = lines[5].replace("1", "2", 1)
        p.write_text("".join(lines))
        with pytest.raises(ChecksumError):
            read_edge_list(p)

    def test_garbage_header(self, tmp_path):
        p = tmp_path / "g.edges"
        p.write_text("not json\n00 01 1\n")
        with pytest.raises(ChecksumError):
            read_edge_list(p)

    def test_format(self, wg):
        assert edge_list_text(wg(1)).splitlines()[:2] == ["0 1 1", "0 5 1"]
