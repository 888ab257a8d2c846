# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled traversal and walk kernels over CSR adjacency."""

import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free

cnp.import_array()

ctypedef cnp.int64_t i64
ctypedef cnp.int32_t i32


cdef i32 _bfs(const i64[::1] indptr, const i32[::1] indices, i64 source,
              i32[::1] dist, i32* queue) noexcept nogil:
    cdef i64 n = dist.shape[0]
    cdef i64 head = 0, tail = 0, p, v, w
    cdef i32 d = 0
    for v in range(n):
        dist[v] = -1
    dist[source] = 0
    queue[tail] = <i32>source
    tail += 1
    while head < tail:
        v = queue[head]
        head += 1
        d = dist[v]
        for p in range(indptr[v], indptr[v + 1]):
            w = indices[p]
            if dist[w] < 0:
                dist[w] = d + 1
                queue[tail] = <i32>w
                tail += 1
    return d


def bfs_distances(const i64[::1] indptr, const i32[::1] indices, i64 source):
    """Hop distances from ``source``; unreachable vertices get -1."""
    cdef i64 n = indptr.shape[0] - 1
    if source < 0 or source >= n:
        raise IndexError(f"source {source} out of range")
    dist = np.empty(n, dtype=np.int32)
    cdef i32[::1] dview = dist
    cdef i32* queue = <i32*>malloc(n * sizeof(i32))
    if queue == NULL:
        raise MemoryError()
    try:
        with nogil:
            _bfs(indptr, indices, source, dview, queue)
    finally:
        free(queue)
    return dist


def eccentricities(const i64[::1] indptr, const i32[::1] indices, const i64[::1] sources):
    """Eccentricity of each source; -1 marks a source that does not reach every vertex."""
    cdef i64 n = indptr.shape[0] - 1
    cdef i64 m = sources.shape[0], s, v
    cdef i32 e
    cdef bint complete
    out = np.empty(m, dtype=np.int32)
    cdef i32[::1] oview = out
    dist = np.empty(n, dtype=np.int32)
    cdef i32[::1] dview = dist
    cdef i32* queue = <i32*>malloc(max(n, 1) * sizeof(i32))
    if queue == NULL:
        raise MemoryError()
    try:
        with nogil:
            for s in range(m):
                e = _bfs(indptr, indices, sources[s], dview, queue)
                complete = True
                for v in range(n):
                    if dview[v] < 0:
                        complete = False
                        break
                oview[s] = e if complete else -1
    finally:
        free(queue)
    return out


def walk_returns(const i64[::1] indptr, const i32[::1] indices, i64[::1] pos,
                 const cnp.float64_t[:, ::1] draws, i64 target):
    """Advance walkers one step per row of ``draws``; count walkers at ``target``.

    ``draws[t, w]`` in [0, 1) picks neighbour ``floor(draws * degree)``.
    ``pos`` is updated in place.  Returns an int64 array of length ``draws.shape[0]``.
    """
    cdef i64 steps = draws.shape[0], walkers = draws.shape[1]
    cdef i64 t, w, v, deg, hits
    counts = np.zeros(steps, dtype=np.int64)
    cdef i64[::1] cview = counts
    if walkers != pos.shape[0]:
        raise ValueError("draws and positions disagree on walker count")
    with nogil:
        for t in range(steps):
            hits = 0
            for w in range(walkers):
                v = pos[w]
                deg = indptr[v + 1] - indptr[v]
                v = indices[indptr[v] + <i64>(draws[t, w] * deg)]
                pos[w] = v
                if v == target:
                    hits += 1
            cview[t] = hits
    return counts
