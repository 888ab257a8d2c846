"""Repeated barycentric subdivision of a triangle with exact coordinates.

Every triangle keeps its corners in *role order*:

0. the corner it shares with its parent (a parent vertex),
1. the midpoint of a parent side,
2. the parent's barycentre.

With that order the six children of ``(P, E, C)`` can be listed once, in the
order of the standard labeling::

    0 (P, m(P,E), b)    1 (P, m(P,C), b)    2 (C, m(P,C), b)
    3 (C, m(E,C), b)    4 (E, m(E,C), b)    5 (E, m(P,E), b)

Child 0 is the unique child lying on ``[P, E]`` (a piece of the parent's
boundary) and touching ``P``, i.e. the child that is special with respect to
the grandparent.  Consecutive children share ``[P,b]``, ``[m(P,C),b]``,
``[C,b]``, ... alternately, giving vertex adjacencies {0,1}, {2,3}, {4,5} and
side adjacencies {1,2}, {3,4}, {5,0}.  For the root ``[v0, v1, v2]`` the same
listing puts label 0 on ``[v0, b01, b]``.

A whole level is stored as one integer array: coordinates are multiplied by a
common denominator ``scale = d0 * 6**n`` so midpoints and barycentres stay
exact integers.  Scalar :class:`Simplex` objects use :class:`fractions.Fraction`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Optional, Sequence

import numpy as np

from .words import format_word, index_word, parse_word

Point = tuple[Fraction, Fraction]

DEFAULT_ROOT: tuple[Point, Point, Point] = (
    (Fraction(0), Fraction(0)),
    (Fraction(1), Fraction(0)),
    (Fraction(0), Fraction(1)),
)

# children of (P, E, C) as (corner, first midpoint end, second midpoint end)
# corner: 0=P 1=E 2=C; midpoint given by the pair of corner roles
_CHILD_RECIPE = (
    (0, (0, 1)),
    (0, (0, 2)),
    (2, (0, 2)),
    (2, (1, 2)),
    (1, (1, 2)),
    (1, (0, 1)),
)

MAX_GEOMETRY_LEVEL = 7


class GeometryError(ValueError):
    pass


class AdjacencyKind(enum.Enum):
    VERTEX = "vertex-adjacent"
    SIDE = "side-adjacent"
    CROSS_PARENT = "cross-parent"


def _point(p) -> Point:
    return (Fraction(p[0]), Fraction(p[1]))


def _mid(a: Point, b: Point) -> Point:
    return ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)


def signed_area(a: Point, b: Point, c: Point) -> Fraction:
    return ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])) / 2


@dataclass(frozen=True)
class Simplex:
    vertices: tuple[Point, Point, Point]
    label: tuple[int, ...] = ()

    @property
    def parent_label(self) -> tuple[int, ...]:
        return self.label[:-1]

    @property
    def level(self) -> int:
        return len(self.label)

    def area(self) -> Fraction:
        return signed_area(*self.vertices)

    def barycenter(self) -> Point:
        a, b, c = self.vertices
        return ((a[0] + b[0] + c[0]) / 3, (a[1] + b[1] + c[1]) / 3)

    def sides(self) -> list[frozenset]:
        a, b, c = self.vertices
        return [frozenset((a, b)), frozenset((a, c)), frozenset((b, c))]


def make_root(vertices: Optional[Sequence] = None) -> Simplex:
    verts = DEFAULT_ROOT if vertices is None else tuple(_point(p) for p in vertices)
    if len(verts) != 3:
        raise GeometryError("a 2-simplex needs three vertices")
    root = Simplex(verts, ())
    if root.area() == 0:
        raise GeometryError("root triangle is degenerate")
    return root


def subdivide(t: Simplex) -> list[Simplex]:
    """Six children of ``t`` in standard-label order, labels ``t.label + (c,)``."""
    if t.area() == 0:
        raise GeometryError(f"degenerate simplex {t.vertices}")
    b = t.barycenter()
    v = t.vertices
    children = []
    for c, (corner, (r1, r2)) in enumerate(_CHILD_RECIPE):
        children.append(Simplex((v[corner], _mid(v[r1], v[r2]), b), t.label + (c,)))
    return children


# -- whole levels -------------------------------------------------------------


@dataclass
class SubdivisionLevel:
    """All ``6**n`` triangles of one level, row ``i`` labeled ``index_word(i, n)``."""

    n: int
    coords: np.ndarray  # (6**n, 3, 2) int64, role order
    scale: int
    root: Simplex = field(repr=False)

    def __len__(self) -> int:
        return self.coords.shape[0]

    def simplex(self, label) -> Simplex:
        digits = parse_word(label) if not isinstance(label, (int, np.integer)) else index_word(int(label), self.n)
        if len(digits) != self.n:
            raise GeometryError(f"label length {len(digits)} != level {self.n}")
        idx = 0
        for d in digits:
            idx = idx * 6 + d
        verts = tuple(
            (Fraction(int(x), self.scale), Fraction(int(y), self.scale)) for x, y in self.coords[idx]
        )
        return Simplex(verts, digits)

    def labels(self) -> list[str]:
        return [format_word(index_word(i, self.n)) for i in range(len(self))]


def root_level(root: Optional[Simplex] = None) -> SubdivisionLevel:
    root = make_root() if root is None else root
    d0 = lcm(*(c.denominator for p in root.vertices for c in p))
    coords = np.array([[[int(c * d0) for c in p] for p in root.vertices]], dtype=np.int64)
    return SubdivisionLevel(0, coords, d0, root)


def label_level(prev: SubdivisionLevel) -> SubdivisionLevel:
    """Subdivide every triangle of ``prev`` and apply the standard labeling."""
    if prev.coords.shape != (6**prev.n, 3, 2):
        raise GeometryError("inconsistent level: wrong number of triangles")
    big = prev.coords * 6
    if np.abs(big).max() > 2**60:
        raise GeometryError("coordinate overflow")
    P, E, C = big[:, 0], big[:, 1], big[:, 2]
    roles = (P, E, C)
    b = (P + E + C) // 3
    mids = {(0, 1): (P + E) // 2, (0, 2): (P + C) // 2, (1, 2): (E + C) // 2}
    kids = np.empty((big.shape[0], 6, 3, 2), dtype=np.int64)
    for c, (corner, pair) in enumerate(_CHILD_RECIPE):
        kids[:, c, 0] = roles[corner]
        kids[:, c, 1] = mids[pair]
        kids[:, c, 2] = b
    return SubdivisionLevel(prev.n + 1, kids.reshape(-1, 3, 2), prev.scale * 6, prev.root)


def build_level(n: int, root: Optional[Simplex] = None, cap: int = MAX_GEOMETRY_LEVEL) -> SubdivisionLevel:
    if n < 0:
        raise GeometryError("level must be >= 0")
    if n > cap:
        raise MemoryError(f"geometry level {n} exceeds cap {cap}")
    level = root_level(root)
    for _ in range(n):
        level = label_level(level)
    return level


# -- adjacency ----------------------------------------------------------------


def classify_adjacency(s: Simplex, t: Simplex) -> Optional[AdjacencyKind]:
    """How two same-level triangles meet; ``None`` unless they share a side."""
    if s.level != t.level:
        raise GeometryError("triangles from different levels")
    common = set(s.sides()) & set(t.sides())
    if not common or s.vertices == t.vertices:
        return None
    if s.parent_label != t.parent_label:
        return AdjacencyKind.CROSS_PARENT
    (side,) = common
    # siblings always share the barycentre (role 2); the other end decides
    roles = {i for i, p in enumerate(s.vertices) if p in side}
    if roles == {0, 2}:
        return AdjacencyKind.VERTEX
    if roles == {1, 2}:
        return AdjacencyKind.SIDE
    raise GeometryError(f"unexpected sibling side roles {roles}")


def _side_keys(coords: np.ndarray) -> np.ndarray:
    """(3N, 4) rows ``(ax, ay, bx, by)`` with endpoints in lexicographic order."""
    pairs = ((0, 1), (0, 2), (1, 2))
    a = np.concatenate([coords[:, i] for i, _ in pairs])
    b = np.concatenate([coords[:, j] for _, j in pairs])
    swap = (a[:, 0] > b[:, 0]) | ((a[:, 0] == b[:, 0]) & (a[:, 1] > b[:, 1]))
    lo = np.where(swap[:, None], b, a)
    hi = np.where(swap[:, None], a, b)
    return np.concatenate([lo, hi], axis=1)


def geometric_edges(level: SubdivisionLevel) -> np.ndarray:
    """Pairs of triangle indices sharing a full side, sorted, ``u < v``."""
    m = len(level)
    keys = _side_keys(level.coords)
    owner = np.tile(np.arange(m, dtype=np.int64), 3)
    order = np.lexsort(keys.T[::-1])
    keys, owner = keys[order], owner[order]
    same = np.all(keys[1:] == keys[:-1], axis=1)
    if np.any(same[1:] & same[:-1]):
        raise GeometryError("a side is shared by more than two triangles")
    pos = np.nonzero(same)[0]
    edges = np.sort(np.stack([owner[pos], owner[pos + 1]], axis=1), axis=1)
    order = np.lexsort((edges[:, 1], edges[:, 0]))
    return edges[order]


# -- boundary predicates ------------------------------------------------------


def _on_segment(pts: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact test that integer points ``pts[..., 2]`` lie on segment ``[a, b]``."""
    d = b - a
    rel = pts - a
    cross = d[..., 0] * rel[..., 1] - d[..., 1] * rel[..., 0]
    dot = d[..., 0] * rel[..., 0] + d[..., 1] * rel[..., 1]
    length2 = d[..., 0] * d[..., 0] + d[..., 1] * d[..., 1]
    return (cross == 0) & (dot >= 0) & (dot <= length2)


def _root_coords(level: SubdivisionLevel) -> np.ndarray:
    return np.array(
        [[int(c * level.scale) for c in p] for p in level.root.vertices], dtype=np.int64
    )


def _boundary_incidence(coords: np.ndarray, tri: np.ndarray) -> np.ndarray:
    """(N, 3 corners, 3 sides) flags: corner lies on side of ``tri`` (N, 3, 2)."""
    out = np.zeros(coords.shape[:2] + (3,), dtype=bool)
    for s, (i, j) in enumerate(((0, 1), (0, 2), (1, 2))):
        a = tri[:, None, i, :]
        b = tri[:, None, j, :]
        out[:, :, s] = _on_segment(coords, a, b)
    return out


def special_flags(level: SubdivisionLevel, ancestor_level: int) -> np.ndarray:
    """Whether each triangle is special with respect to its ancestor at ``ancestor_level``.

    Special: a side lies on the ancestor's boundary and a corner is one of the
    ancestor's vertices.
    """
    if not 0 <= ancestor_level < level.n:
        raise GeometryError("ancestor level must be below the level")
    anc = build_level(ancestor_level, level.root, cap=level.n)
    factor = 6 ** (level.n - ancestor_level)
    idx = np.arange(len(level)) // factor
    tri = anc.coords[idx] * (level.scale // anc.scale)
    inc = _boundary_incidence(level.coords, tri)
    on_side = np.any(inc.sum(axis=1) >= 2, axis=1)
    has_vertex = np.zeros(len(level), dtype=bool)
    for k in range(3):
        has_vertex |= np.all(level.coords == tri[:, None, k, :], axis=2).any(axis=1)
    return on_side & has_vertex


@dataclass
class BoundaryReport:
    Y: set[str]  # full side on the root boundary
    Z: set[str]  # exactly one point on the root boundary
    special: dict[int, np.ndarray]  # ancestor level -> flags by vertex index


def boundary_masks(level: SubdivisionLevel) -> tuple[np.ndarray, np.ndarray]:
    inc = _boundary_incidence(level.coords, _root_coords(level)[None])
    in_y = np.any(inc.sum(axis=1) >= 2, axis=1)
    touches = inc.any(axis=2).sum(axis=1)
    in_z = ~in_y & (touches == 1)
    return in_y, in_z


def boundary_and_special(level: SubdivisionLevel, with_special: bool = True) -> BoundaryReport:
    if level.n < 1:
        raise GeometryError("level must be >= 1")
    in_y, in_z = boundary_masks(level)
    n = level.n
    y = {format_word(index_word(int(i), n)) for i in np.nonzero(in_y)[0]}
    z = {format_word(index_word(int(i), n)) for i in np.nonzero(in_z)[0]}
    special = {m: special_flags(level, m) for m in range(n)} if with_special else {}
    return BoundaryReport(y, z, special)


def barycenter_mask(level: SubdivisionLevel) -> np.ndarray:
    """Triangles having the root barycentre as a corner."""
    root = _root_coords(level)
    b = root.sum(axis=0) // 3
    return np.all(level.coords == b, axis=2).any(axis=1)


# -- skeleton -----------------------------------------------------------------


def skeleton(level: SubdivisionLevel) -> tuple[np.ndarray, np.ndarray]:
    """Distinct corner points and distinct triangle sides of a level.

    Returns ``(points, sides)``: ``points`` is ``(P, 2)`` int64 in units of
    ``1 / level.scale`` sorted lexicographically; ``sides`` is ``(S, 2)``
    point indices.
    """
    flat = level.coords.reshape(-1, 2)
    points, inverse = np.unique(flat, axis=0, return_inverse=True)
    corner = inverse.reshape(-1, 3)
    pairs = np.concatenate([corner[:, [0, 1]], corner[:, [0, 2]], corner[:, [1, 2]]])
    pairs = np.unique(np.sort(pairs, axis=1), axis=0)
    return points, pairs
