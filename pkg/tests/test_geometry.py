from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hexacarpet.geometry import (
    AdjacencyKind,
    GeometryError,
    Simplex,
    boundary_and_special,
    build_level,
    classify_adjacency,
    geometric_edges,
    make_root,
    skeleton,
    special_flags,
    subdivide,
)
from hexacarpet.words import index_word, word_neighbors

F = Fraction


def all_simplexes(n, root=None):
    """Recursive Fraction-based subdivision: independent of the integer fast path."""
    level = [make_root(root)]
    for _ in range(n):
        level = [c for t in level for c in subdivide(t)]
    return level


def brute_edges(n):
    tris = all_simplexes(n)
    owner = {}
    edges = set()
    for i, t in enumerate(tris):
        for s in t.sides():
            if s in owner:
                edges.add((owner[s], i))
            else:
                owner[s] = i
    return sorted(edges)


class TestSubdivide:
    def test_root_barycenter(self):
        assert make_root().barycenter() == (F(1, 3), F(1, 3))

    def test_midpoint(self):
        kids = subdivide(make_root())
        # child 0 is [v0, b01, b]
        assert kids[0].vertices == ((F(0), F(0)), (F(1, 2), F(0)), (F(1, 3), F(1, 3)))

    def test_area_fair(self):
        root = make_root()
        for c in subdivide(root):
            assert abs(c.area()) == abs(root.area()) / 6

    def test_labels(self):
        kids = subdivide(Simplex(make_root().vertices, (2,)))
        assert [c.label for c in kids] == [(2, k) for k in range(6)]
        assert all(c.parent_label == (2,) for c in kids)

    def test_degenerate(self):
        with pytest.raises(GeometryError):
            make_root([(0, 0), (1, 1), (2, 2)])
        with pytest.raises(GeometryError):
            subdivide(Simplex(((F(0), F(0)), (F(1), F(1)), (F(2), F(2)))))

    @given(st.lists(st.tuples(st.integers(-20, 20), st.integers(-20, 20)), min_size=3, max_size=3, unique=True))
    def test_children_tile_parent(self, pts):
        try:
            root = make_root(pts)
        except GeometryError:
            return
        kids = subdivide(root)
        assert sum(abs(c.area()) for c in kids) == abs(root.area())
        assert len({c.vertices for c in kids}) == 6


class TestLevels:
    @pytest.mark.parametrize("n", range(0, 5))
    def test_size_and_labels(self, n):
        lv = build_level(n)
        assert len(lv) == 6**n
        if n:
            assert lv.labels()[:2] == ["0" * n, "0" * (n - 1) + "1"]

    @pytest.mark.parametrize("n", range(1, 4))
    def test_fast_path_matches_fractions(self, n):
        lv = build_level(n)
        for t in all_simplexes(n):
            assert lv.simplex(t.label).vertices == t.vertices

    def test_cap(self):
        with pytest.raises(MemoryError):
            build_level(8)

    @pytest.mark.parametrize("n", range(1, 5))
    def test_edges_match_brute_force(self, n):
        assert [tuple(e) for e in geometric_edges(build_level(n)).tolist()] == brute_edges(n)

    @pytest.mark.parametrize("n", range(1, 8))
    def test_edge_count(self, n):
        assert len(geometric_edges(build_level(n))) == 2 ** (n - 1) * (3 ** (n + 1) - 3)

    def test_six_cycle(self):
        edges = geometric_edges(build_level(1)).tolist()
        assert edges == [[0, 1], [0, 5], [1, 2], [2, 3], [3, 4], [4, 5]]

    def test_other_root_same_graph(self):
        a = geometric_edges(build_level(3))
        b = geometric_edges(build_level(3, make_root([(0, 0), (7, 1), (2, 5)])))
        assert np.array_equal(a, b)


class TestAdjacency:
    def setup_method(self):
        self.lv = build_level(2)

    def s(self, w):
        return self.lv.simplex(w)

    def test_vertex_pairs(self):
        for a, b in (("30", "31"), ("32", "33"), ("34", "35")):
            assert classify_adjacency(self.s(a), self.s(b)) is AdjacencyKind.VERTEX

    def test_side_pairs(self):
        for a, b in (("31", "32"), ("33", "34"), ("35", "30")):
            assert classify_adjacency(self.s(a), self.s(b)) is AdjacencyKind.SIDE

    def test_not_adjacent(self):
        assert classify_adjacency(self.s("31"), self.s("33")) is None
        assert classify_adjacency(self.s("31"), self.s("31")) is None

    def test_cross_parent(self):
        assert classify_adjacency(self.s("03"), self.s("53")) is AdjacencyKind.CROSS_PARENT

    def test_levels_must_match(self):
        with pytest.raises(GeometryError):
            classify_adjacency(build_level(1).simplex("0"), self.s("00"))

    @pytest.mark.parametrize("n", range(2, 5))
    def test_address_patterns(self, n):
        lv = build_level(n)
        for u, v in geometric_edges(lv).tolist():
            a, b = index_word(u, n), index_word(v, n)
            kind = classify_adjacency(lv.simplex(a), lv.simplex(b))
            p = next(i for i in range(n) if a[i] != b[i])
            if p == n - 1:
                assert kind in (AdjacencyKind.VERTEX, AdjacencyKind.SIDE)
                assert (a[-1] - b[-1]) % 6 in (1, 5)
            else:
                assert kind is AdjacencyKind.CROSS_PARENT
                assert a[p + 1 :] == b[p + 1 :]
                if p < n - 2:
                    # cross-grandparent: equal trailing letters from {0,5}
                    assert set(a[p + 2 :]) <= {0, 5}
            assert b in word_neighbors(a)

    @pytest.mark.parametrize("n", range(2, 5))
    def test_children_of_nonadjacent_parents_are_not_adjacent(self, n):
        parents = {tuple(e) for e in geometric_edges(build_level(n - 1)).tolist()}
        for u, v in geometric_edges(build_level(n)).tolist():
            pu, pv = u // 6, v // 6
            assert pu == pv or (min(pu, pv), max(pu, pv)) in parents


class TestBoundary:
    @pytest.mark.parametrize("n", range(1, 8))
    def test_counts(self, n):
        rep = boundary_and_special(build_level(n), with_special=False)
        assert len(rep.Y) == 3 * 2**n
        assert len(rep.Z) == (n - 1) * 3 * 2**n

    def test_z1_empty(self):
        assert boundary_and_special(build_level(1)).Z == set()

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_child_zero_is_the_special_one(self, n):
        lv = build_level(n)
        flags = special_flags(lv, n - 2)
        per_parent = flags.reshape(-1, 6)
        assert per_parent.sum(axis=1).tolist() == [1] * (6 ** (n - 1))
        assert per_parent[:, 0].all()

    def test_special_bad_level(self):
        with pytest.raises(GeometryError):
            special_flags(build_level(2), 2)

    @pytest.mark.parametrize("n", range(1, 6))
    def test_boundary_degree(self, n):
        from hexacarpet.graphs import build_geometry_graph

        g = build_geometry_graph(n)
        in_y = boundary_and_special(build_level(n), with_special=False).Y
        deg = g.degrees()
        for v in range(g.vertex_count):
            assert deg[v] == (2 if g.word(v) in in_y else 3)


class TestSkeleton:
    def test_level_one(self):
        pts, sides = skeleton(build_level(1))
        assert len(pts) == 7
        assert len(sides) == 12

    @pytest.mark.parametrize("n", range(1, 5))
    def test_euler(self, n):
        pts, sides = skeleton(build_level(n))
        # planar triangulation of a disc: V - E + F = 1
        assert len(pts) - len(sides) + 6**n == 1
