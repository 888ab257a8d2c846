"""Simple random walks on ``G_n`` (or any CSR graph).

Return probabilities ``p_t(x, x)`` are computed exactly by pushing a
distribution through ``P = D^-1 A`` and estimated by Monte Carlo with the
compiled walk kernel.  Everything here is evidence about the scaling of the
walk; nothing in this module proves anything about a limit process.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Protocol

import numpy as np

from . import _kernels
from .graphs import LevelGraph

MAX_EXACT_LEVEL = 6
MC_CHUNK = 1 << 16
RHO_DEFAULT = 1.3064
TAU_DEFAULT = 6 * RHO_DEFAULT


class CSRGraph(Protocol):
    indptr: np.ndarray
    indices: np.ndarray


@dataclass(frozen=True, eq=False)
class SimpleGraph:
    """Bare CSR graph, used for stand-ins such as cycles and complete graphs."""

    indptr: np.ndarray
    indices: np.ndarray
    n: int = 0

    @classmethod
    def from_edges(cls, nv: int, edges) -> "SimpleGraph":
        e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        src = np.concatenate([e[:, 0], e[:, 1]])
        dst = np.concatenate([e[:, 1], e[:, 0]])
        order = np.lexsort((dst, src))
        indptr = np.zeros(nv + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=nv), out=indptr[1:])
        return cls(indptr, dst[order].astype(np.int32))

    @property
    def vertex_count(self) -> int:
        return len(self.indptr) - 1

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)


def cycle_graph(m: int) -> SimpleGraph:
    return SimpleGraph.from_edges(m, [(i, (i + 1) % m) for i in range(m)])


def complete_graph(m: int) -> SimpleGraph:
    return SimpleGraph.from_edges(m, [(i, j) for i in range(m) for j in range(i + 1, m)])


def _vertex_count(g) -> int:
    return len(g.indptr) - 1


def _degrees(g) -> np.ndarray:
    return np.diff(g.indptr).astype(np.float64)


def _adjacency(g):
    from scipy.sparse import csr_array

    nv = _vertex_count(g)
    data = np.ones(len(g.indices), dtype=np.float64)
    return csr_array((data, g.indices, g.indptr), shape=(nv, nv))


@dataclass
class WalkStats:
    n: int
    start: int
    t_max: int
    return_prob: np.ndarray
    stderr: Optional[np.ndarray]  # None for exact sequences
    trials: Optional[int]
    seed: Optional[int]
    method: str
    d_s_estimate: Optional[float] = None
    d_s_band: Optional[tuple[float, float]] = None
    label: str = "evidence"

    def csv_rows(self):
        se = self.stderr if self.stderr is not None else np.zeros_like(self.return_prob)
        for t, (p, s) in enumerate(zip(self.return_prob, se)):
            yield t, float(p), float(s)

    def to_dict(self) -> dict:
        return {
            "level": self.n,
            "start": self.start,
            "t_max": self.t_max,
            "method": self.method,
            "trials": self.trials,
            "seed": self.seed,
            "return_prob": self.return_prob.tolist(),
            "stderr": None if self.stderr is None else self.stderr.tolist(),
            "d_s_estimate": self.d_s_estimate,
            "d_s_band": None if self.d_s_band is None else list(self.d_s_band),
            "label": self.label,
        }


def _check_exact_cap(g, cap: int) -> None:
    n = getattr(g, "n", 0)
    if n > cap:
        from .graphs import ResourceCapError

        raise ResourceCapError(f"exact walk at level {n} exceeds cap {cap}")


def transition_powers(g, x: int, t_max: int):
    """Yield the distributions ``e_x P^t`` for ``t = 0 .. t_max``."""
    A = _adjacency(g)
    deg = _degrees(g)
    mu = np.zeros(_vertex_count(g))
    mu[x] = 1.0
    yield mu
    for _ in range(t_max):
        mu = A @ (mu / deg)
        yield mu


def exact_return_probability(g, x: int, t_max: int, cap: int = MAX_EXACT_LEVEL) -> WalkStats:
    """``p_t(x, x)`` for ``t = 0 .. t_max`` by repeated sparse transitions."""
    _check_exact_cap(g, cap)
    if not 0 <= x < _vertex_count(g):
        raise IndexError(f"vertex {x} out of range")
    p = np.array([mu[x] for mu in transition_powers(g, x, t_max)])
    return WalkStats(getattr(g, "n", 0), x, t_max, p, None, None, None, "exact")


def _mc_chunk(g, x: int, t_max: int, walkers: int, seq: np.random.SeedSequence) -> np.ndarray:
    rng = np.random.Generator(np.random.PCG64(seq))
    draws = rng.random((t_max, walkers))
    pos = np.full(walkers, x, dtype=np.int64)
    return _kernels.walk_returns(g.indptr, g.indices, pos, draws, x)


def monte_carlo_walk(g, x: int, t_max: int, trials: int, seed: int = 0, threads: int = 1,
                     chunk: int = MC_CHUNK) -> WalkStats:
    """Fraction of ``trials`` independent walkers sitting at ``x`` after each step.

    Walkers are split into fixed-size chunks and chunk ``i`` draws from the
    ``i``-th child of ``SeedSequence(seed)``, so the estimate depends only on
    ``(seed, trials, chunk)`` and not on ``threads``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not 0 <= x < _vertex_count(g):
        raise IndexError(f"vertex {x} out of range")
    sizes = [chunk] * (trials // chunk) + ([trials % chunk] if trials % chunk else [])
    children = np.random.SeedSequence(seed).spawn(len(sizes))
    jobs = list(zip(sizes, children))
    if threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(threads) as pool:
            parts = list(pool.map(lambda job: _mc_chunk(g, x, t_max, *job), jobs))
    else:
        parts = [_mc_chunk(g, x, t_max, *job) for job in jobs]
    hits = np.sum(parts, axis=0) if t_max else np.zeros(0, dtype=np.int64)
    p = np.concatenate([[1.0], hits / trials])
    se = np.sqrt(p * (1.0 - p) / trials)
    return WalkStats(getattr(g, "n", 0), x, t_max, p, se, trials, seed, "monte-carlo")


def estimate_ds(stats: WalkStats, fit_window: tuple[int, int], bootstrap: int = 0,
                seed: int = 0) -> float:
    """``-2 * slope`` of ``log p_t`` against ``log t`` on even ``t`` in the window.

    With ``bootstrap > 0`` the residuals are resampled to attach a 95% band to
    ``stats.d_s_band``.  The estimate is also stored on ``stats``.
    """
    lo, hi = fit_window
    if lo < 1 or hi > stats.t_max or lo > hi:
        raise ValueError(f"window {fit_window} outside 1..{stats.t_max}")
    t = np.arange(lo + (lo % 2), hi + 1, 2)
    p = stats.return_prob[t]
    keep = p > 0
    t, p = t[keep], p[keep]
    if len(t) < 5:
        raise ValueError("fit window holds fewer than 5 usable points")
    lx, ly = np.log(t), np.log(p)
    slope, icpt = np.polyfit(lx, ly, 1)
    d_s = -2.0 * float(slope)
    stats.d_s_estimate = d_s
    if bootstrap:
        rng = np.random.default_rng(seed)
        fit = slope * lx + icpt
        resid = ly - fit
        boots = [-2.0 * np.polyfit(lx, fit + rng.choice(resid, len(resid)), 1)[0] for _ in range(bootstrap)]
        stats.d_s_band = (float(np.percentile(boots, 2.5)), float(np.percentile(boots, 97.5)))
    return d_s


def stationary_measure(g) -> np.ndarray:
    deg = _degrees(g)
    return deg / deg.sum()


def _smoothed(p: np.ndarray) -> np.ndarray:
    # average consecutive steps so period-two wobble does not dominate the comparison
    return 0.5 * (p[:-1] + p[1:])


@dataclass
class CrossingReport:
    levels: tuple[int, int]
    tau: float
    window: tuple[int, int]
    sup_distance: float
    curve_coarse: np.ndarray = field(repr=False)
    curve_fine: np.ndarray = field(repr=False)
    label: str = "evidence"


def renormalized_crossing(g_n, g_next, tau: float = TAU_DEFAULT, x: int = 0, x_next: int = 0,
                          window: Optional[tuple[int, int]] = None, burn_in: int = 10) -> CrossingReport:
    """Compare ``p^(n)_t`` with ``p^(n+1)_{floor(tau t)}`` on a common scale.

    Each sequence is divided by the stationary mass of its start vertex, so
    both curves decay towards 1.  The reported number is the largest value of
    ``|log(a_t / b_t)|`` between the parity-smoothed curves over the window.
    A log-ratio is used because the normalised curves grow roughly like
    ``6^n`` at short times, so an absolute gap is not comparable across levels.
    """
    if window is None:
        window = (burn_in, max(burn_in + 1, 6 ** max(getattr(g_n, "n", 1), 1) // 6))
    lo, hi = window
    t_fine = int(math.floor(tau * hi)) + 1
    coarse = exact_return_probability(g_n, x, hi + 1).return_prob
    fine = exact_return_probability(g_next, x_next, t_fine + 1).return_prob
    qc = _smoothed(coarse) / stationary_measure(g_n)[x]
    qf = _smoothed(fine) / stationary_measure(g_next)[x_next]
    ts = np.arange(lo, hi + 1)
    a = qc[ts]
    b = qf[np.floor(tau * ts).astype(np.int64)]
    levels = (getattr(g_n, "n", 0), getattr(g_next, "n", 0))
    return CrossingReport(levels, tau, (lo, hi), float(np.max(np.abs(np.log(a / b)))), a, b)


def default_start_vertices(g: LevelGraph) -> dict[str, int]:
    """Word ``00...0`` (a degree-2 corner) and word ``33...3``."""
    n = g.n
    interior = sum(3 * 6**i for i in range(n))
    return {"boundary": 0, "interior": interior}
