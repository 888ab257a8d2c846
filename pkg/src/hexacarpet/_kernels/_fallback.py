"""Pure numpy versions of the compiled kernels, same signatures and results."""

import numpy as np


def bfs_distances(indptr, indices, source):
    n = len(indptr) - 1
    if source < 0 or source >= n:
        raise IndexError(f"source {source} out of range")
    dist = np.full(n, -1, dtype=np.int32)
    dist[source] = 0
    frontier = np.array([source], dtype=np.int64)
    d = 0
    while frontier.size:
        d += 1
        starts = indptr[frontier]
        counts = indptr[frontier + 1] - starts
        # gather all neighbours of the frontier
        offs = np.repeat(starts - np.cumsum(counts) + counts, counts) + np.arange(counts.sum())
        nbrs = indices[offs]
        nbrs = np.unique(nbrs[dist[nbrs] < 0])
        dist[nbrs] = d
        frontier = nbrs.astype(np.int64)
    return dist


def eccentricities(indptr, indices, sources):
    out = np.empty(len(sources), dtype=np.int32)
    for s, src in enumerate(sources):
        dist = bfs_distances(indptr, indices, int(src))
        out[s] = -1 if (dist < 0).any() else dist.max()
    return out


def walk_returns(indptr, indices, pos, draws, target):
    walkers = draws.shape[1]
    if walkers != pos.shape[0]:
        raise ValueError("draws and positions disagree on walker count")
    counts = np.zeros(draws.shape[0], dtype=np.int64)
    for t in range(draws.shape[0]):
        start = indptr[pos]
        deg = indptr[pos + 1] - start
        pos[:] = indices[start + (draws[t] * deg).astype(np.int64)]
        counts[t] = np.count_nonzero(pos == target)
    return counts
