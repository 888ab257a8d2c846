"""The approximation graphs ``G_n``, built from words or from geometry.

Vertices are level-``n`` words indexed by their base-6 value, so a graph is
fully described by its sorted edge array.  Two builds of the same level are
compared by plain array equality.
"""

from __future__ import annotations

import hashlib
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import _kernels
from .geometry import MAX_GEOMETRY_LEVEL, barycenter_mask, boundary_masks, build_level, geometric_edges
from .words import edge_blocks, format_word, hole_words, index_word, partition_classes, word_index

MAX_WORD_LEVEL = 9


class ResourceCapError(MemoryError):
    """Requested level is beyond the configured memory cap."""


class ChecksumError(ValueError):
    pass


def expected_edge_count(n: int) -> int:
    return 2 ** (n - 1) * (3 ** (n + 1) - 3)


def expected_block_sizes(n: int) -> list[int]:
    return [6**n] + [6 ** (k - 1) * 2 ** (n - k + 1) for k in range(2, n + 1)]


def expected_class_sizes(n: int) -> list[int]:
    return [3 * 2**n] + [3 ** (k - 1) * 2 ** (n + 1) for k in range(2, n + 1)]


@dataclass(frozen=True, eq=False)
class LevelGraph:
    n: int
    edges: np.ndarray  # (m, 2) int64, rows sorted, u < v
    tags: np.ndarray  # (m,) int8, block index k of each edge
    provenance: str
    indptr: np.ndarray = field(repr=False)
    indices: np.ndarray = field(repr=False)

    @classmethod
    def from_edges(cls, n: int, edges: np.ndarray, tags: np.ndarray, provenance: str) -> "LevelGraph":
        edges = np.asarray(edges, dtype=np.int64)
        order = np.lexsort((edges[:, 1], edges[:, 0]))
        edges, tags = edges[order], np.asarray(tags, dtype=np.int8)[order]
        nv = 6**n
        src = np.concatenate([edges[:, 0], edges[:, 1]])
        dst = np.concatenate([edges[:, 1], edges[:, 0]])
        order = np.lexsort((dst, src))
        indices = dst[order].astype(np.int32)
        indptr = np.zeros(nv + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=nv), out=indptr[1:])
        return cls(n, edges, tags, provenance, indptr, indices)

    @property
    def vertex_count(self) -> int:
        return 6**self.n

    @property
    def edge_count(self) -> int:
        return int(self.edges.shape[0])

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def word(self, v: int) -> str:
        return format_word(index_word(int(v), self.n))

    def index(self, w) -> int:
        idx = word_index(w)
        if idx >= self.vertex_count or (isinstance(w, str) and len(w) != self.n):
            raise ValueError(f"{w!r} is not a level-{self.n} word")
        return idx

    def to_scipy(self):
        from scipy.sparse import csr_array

        data = np.ones(self.indices.shape[0], dtype=np.float64)
        return csr_array((data, self.indices, self.indptr), shape=(self.vertex_count,) * 2)


def _check_cap(n: int, cap: int) -> None:
    if n < 1:
        raise ValueError("level must be >= 1")
    if n > cap:
        raise ResourceCapError(f"level {n} exceeds cap {cap}")


def build_word_graph(n: int, cap: int = MAX_WORD_LEVEL) -> LevelGraph:
    """``G_n`` from the group-form relation, edges tagged by block ``F_k``."""
    _check_cap(n, cap)
    blocks = edge_blocks(n)
    tags = np.concatenate([np.full(len(b), k, dtype=np.int8) for k, b in enumerate(blocks, start=1)])
    return LevelGraph.from_edges(n, np.concatenate(blocks), tags, "word-built")


def family_tags(n: int, edges: np.ndarray) -> np.ndarray:
    """Tag edges by family tree: 1 for siblings, ``m + 2`` when the deepest
    common ancestor sits at level ``m`` (cross-parent edges)."""
    u, v = edges[:, 0], edges[:, 1]
    tags = np.zeros(len(edges), dtype=np.int8)
    for m in range(n - 1, -1, -1):
        same = (u // 6 ** (n - m)) == (v // 6 ** (n - m))
        hit = same & (tags == 0)
        tags[hit] = 1 if m == n - 1 else m + 2
    return tags


def build_geometry_graph(n: int, cap: int = MAX_GEOMETRY_LEVEL, root=None) -> LevelGraph:
    """Adjacency graph of the level-``n`` subdivision, vertices = labels."""
    _check_cap(n, cap)
    level = build_level(n, root, cap=cap)
    edges = geometric_edges(level)
    return LevelGraph.from_edges(n, edges, family_tags(n, edges), "geometry-built")


@dataclass
class IsomorphismReport:
    n: int
    equal_edge_sets: bool
    mismatches: list[tuple[str, str, str]]  # (u, v, which side has it)
    tags_agree: bool


def _edge_keys(g: LevelGraph) -> np.ndarray:
    return g.edges[:, 0] * g.vertex_count + g.edges[:, 1]


def compare_graphs(a: LevelGraph, b: LevelGraph) -> IsomorphismReport:
    if a.n != b.n:
        raise ValueError("graphs from different levels")
    ka, kb = _edge_keys(a), _edge_keys(b)
    mismatches = []
    for keys, other, name in ((ka, kb, a.provenance), (kb, ka, b.provenance)):
        only = keys[~np.isin(keys, other)]
        for key in only:
            u, v = divmod(int(key), a.vertex_count)
            mismatches.append((a.word(u), a.word(v), f"only {name}"))
    equal = not mismatches
    tags_agree = equal and bool(np.array_equal(a.tags, b.tags))
    return IsomorphismReport(a.n, equal, sorted(mismatches), tags_agree)


def verify_isomorphism(
    n: int, word_graph: Optional[LevelGraph] = None, geometry_graph: Optional[LevelGraph] = None
) -> IsomorphismReport:
    """Check that the labeling carries subdivision adjacency onto ``E_n`` exactly."""
    wg = word_graph if word_graph is not None else build_word_graph(n)
    gg = geometry_graph if geometry_graph is not None else build_geometry_graph(n)
    return compare_graphs(wg, gg)


def is_connected(g: LevelGraph) -> bool:
    dist = _kernels.bfs_distances(g.indptr, g.indices, 0)
    return bool((dist >= 0).all())


@dataclass
class Census:
    n: int
    class_sizes: list[int]
    block_sizes: list[int]
    edge_count: int
    degree_histogram: dict[int, int]
    connected: bool
    matches: dict[str, bool]


def census(g: LevelGraph) -> Census:
    n = g.n
    cls = partition_classes(n)
    class_sizes = np.bincount(cls, minlength=n + 1)[1:].tolist()
    block_sizes = np.bincount(g.tags, minlength=n + 1)[1:].tolist()
    deg = g.degrees()
    hist = {int(d): int(c) for d, c in zip(*np.unique(deg, return_counts=True))}
    connected = is_connected(g)
    expected_hist = {2: 3 * 2**n, 3: 6**n - 3 * 2**n}
    matches = {
        "class_sizes": class_sizes == expected_class_sizes(n),
        "block_sizes": block_sizes == expected_block_sizes(n),
        "edge_count": g.edge_count == expected_edge_count(n),
        "degree_histogram": {k: v for k, v in expected_hist.items() if v} == hist,
        "connected": connected,
    }
    return Census(n, class_sizes, block_sizes, g.edge_count, hist, connected, matches)


def hole_cycle(n: int, g: Optional[LevelGraph] = None) -> list[str]:
    """Central-hole words in cycle order, starting from the smallest word.

    Raises if the words do not induce a single cycle in ``G_n``.
    """
    g = g if g is not None else build_word_graph(n)
    return induced_cycle(g, np.array([word_index(w) for w in hole_words(n)]))


def induced_cycle(g: LevelGraph, members: np.ndarray) -> list[str]:
    """Walk the subgraph induced by ``members``; it must be one simple cycle."""
    members = np.unique(np.asarray(members, dtype=np.int64))
    inside = np.zeros(g.vertex_count, dtype=bool)
    inside[members] = True
    adj = {int(v): [int(w) for w in g.neighbors(v) if inside[w]] for v in members}
    if any(len(nb) != 2 for nb in adj.values()):
        raise ValueError("induced subgraph is not 2-regular")
    start = int(members[0])
    order = [start]
    prev, cur = start, min(adj[start])
    while cur != start:
        order.append(cur)
        a, b = adj[cur]
        prev, cur = cur, (b if a == prev else a)
    if len(order) != len(members):
        raise ValueError("induced subgraph is not connected")
    return [g.word(v) for v in order]


def inner_cycle_geometric(n: int, level=None, g=None) -> list[str]:
    """Cycle through the triangles having the root barycentre as a corner.

    ``level`` and ``g`` may be passed in to reuse work already done.
    """
    level = build_level(n) if level is None else level
    g = build_word_graph(n) if g is None else g
    return induced_cycle(g, np.nonzero(barycenter_mask(level))[0])


def outer_cycle_geometric(n: int, level=None, g=None) -> list[str]:
    """Cycle through the boundary layer ``Y_n`` together with ``Z_n``."""
    level = build_level(n) if level is None else level
    in_y, in_z = boundary_masks(level)
    g = build_word_graph(n) if g is None else g
    return induced_cycle(g, np.nonzero(in_y | in_z)[0])


# -- serialization ------------------------------------------------------------


def edge_list_text(g: LevelGraph) -> str:
    buf = io.StringIO()
    n = g.n
    for (u, v), k in zip(g.edges.tolist(), g.tags.tolist()):
        buf.write(f"{format_word(index_word(u, n))} {format_word(index_word(v, n))} {k}\n")
    return buf.getvalue()


def write_edge_list(g: LevelGraph, path) -> dict:
    """Write a JSON header line followed by ``u_word v_word k`` lines.

    The header carries a sha256 of the body so a re-read can detect damage.
    """
    body = edge_list_text(g)
    header = {
        "level": g.n,
        "vertices": g.vertex_count,
        "edges": g.edge_count,
        "provenance": g.provenance,
        "sha256": hashlib.sha256(body.encode()).hexdigest(),
    }
    Path(path).write_text(json.dumps(header, sort_keys=True) + "\n" + body)
    return header


def read_edge_list(path) -> LevelGraph:
    text = Path(path).read_text()
    first, _, body = text.partition("\n")
    try:
        header = json.loads(first)
    except json.JSONDecodeError as exc:
        raise ChecksumError("unreadable header") from exc
    if hashlib.sha256(body.encode()).hexdigest() != header.get("sha256"):
        raise ChecksumError(f"checksum mismatch in {path}")
    n = int(header["level"])
    rows = [line.split() for line in body.splitlines() if line]
    edges = np.array([[word_index(a), word_index(b)] for a, b, _ in rows], dtype=np.int64).reshape(-1, 2)
    tags = np.array([int(k) for _, _, k in rows], dtype=np.int8)
    if len(edges) != header["edges"]:
        raise ChecksumError("edge count disagrees with header")
    return LevelGraph.from_edges(n, edges, tags, header.get("provenance", "file"))
