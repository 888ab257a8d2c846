"""Laplacian spectra of ``G_n``: eigensolves, renormalized tables, resistance
scaling estimates, counting functions and eigenfunction coordinates."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import ArpackNoConvergence, eigsh

from .graphs import LevelGraph, build_word_graph

DEFAULT_TOL = 1e-10
DEFAULT_SHIFT = -1e-9
DEFAULT_SEED = 0


class SpectralError(RuntimeError):
    pass


class ConvergenceError(SpectralError):
    def __init__(self, message: str, eigenvalues: np.ndarray, residuals: np.ndarray):
        super().__init__(message)
        self.eigenvalues = eigenvalues
        self.residuals = residuals


@dataclass(eq=False)
class LaplacianOperator:
    """``u -> deg(x) u(x) - sum over neighbours u(y)`` as a sparse matrix."""

    n: int
    matrix: sp.csr_array

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def matvec(self, u: np.ndarray) -> np.ndarray:
        return self.matrix @ u

    def quadratic_form(self, u: np.ndarray) -> float:
        return float(u @ (self.matrix @ u))

    def dense(self) -> np.ndarray:
        return self.matrix.toarray()


def assemble_laplacian(g: LevelGraph) -> LaplacianOperator:
    deg = g.degrees().astype(np.float64)
    adj = g.to_scipy()
    lap = (sp.diags_array(deg, format="csr") - adj).tocsr()
    lap.sort_indices()
    return LaplacianOperator(g.n, lap)


@dataclass
class Eigenpairs:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns, orthonormal
    residuals: np.ndarray
    tol: float
    seed: int


def smallest_eigenpairs(L: LaplacianOperator, k: int, tol: float = DEFAULT_TOL, seed: int = DEFAULT_SEED,
                        shift: float = DEFAULT_SHIFT, maxiter: Optional[int] = None) -> Eigenpairs:
    """The ``k`` smallest eigenpairs, ascending.

    Shift-invert Lanczos (ARPACK) about a small negative shift, started from a
    seeded Gaussian vector.  Operators too small for a Krylov solve (``k``
    close to the dimension) are diagonalised densely.  Every pair is checked
    against ``||L v - lam v|| <= tol * max(1, lam)``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    dim = L.dimension
    if not 1 <= k <= dim:
        raise ValueError(f"k={k} outside 1..{dim}")
    if k >= dim - 1 or dim <= 64:
        vals, vecs = np.linalg.eigh(L.dense())
        vals, vecs = vals[:k], vecs[:, :k]
    else:
        v0 = np.random.default_rng(seed).standard_normal(dim)
        budget = maxiter if maxiter is not None else 50 * k
        try:
            vals, vecs = eigsh(L.matrix.tocsc(), k=k, sigma=shift, which="LM", v0=v0,
                               tol=tol * 1e-2, maxiter=budget)
        except ArpackNoConvergence as exc:
            part = np.sort(exc.eigenvalues)
            raise ConvergenceError(f"ARPACK stopped with {len(part)} of {k} pairs", part,
                                   np.array([])) from exc
        order = np.argsort(vals)
        vals, vecs = vals[order], vecs[:, order]
        # re-orthonormalise degenerate blocks; ARPACK vectors are already close
        vecs, _ = np.linalg.qr(vecs)
        vals = np.einsum("ij,ij->j", vecs, L.matrix @ vecs)
        order = np.argsort(vals)
        vals, vecs = vals[order], vecs[:, order]
    res = np.linalg.norm(L.matrix @ vecs - vecs * vals, axis=0)
    bad = res > tol * np.maximum(1.0, np.abs(vals))
    if bad.any():
        raise ConvergenceError(f"{bad.sum()} pairs miss the residual bound", vals, res)
    return Eigenpairs(vals, vecs, res, tol, seed)


def dense_spectrum(L: LaplacianOperator) -> np.ndarray:
    return np.linalg.eigvalsh(L.dense())


@dataclass
class SpectralReport:
    n: int
    k: int
    eigenvalues: np.ndarray
    renormalized: np.ndarray
    residual_norms: np.ndarray
    tol: float
    seed: int
    rho_table: Optional[dict] = None
    tau: Optional[float] = None
    d_s: Optional[float] = None
    counting_gaps: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "level": self.n,
            "k": self.k,
            "tol": self.tol,
            "seed": self.seed,
            "eigenvalues": self.eigenvalues.tolist(),
            "renormalized": self.renormalized.tolist(),
            "residual_norms": self.residual_norms.tolist(),
            "rho_table": self.rho_table,
            "tau": self.tau,
            "d_s": self.d_s,
            "counting_gaps": [list(g) for g in self.counting_gaps],
        }


def level_eigenpairs(n: int, k: int, tol: float = DEFAULT_TOL, seed: int = DEFAULT_SEED) -> Eigenpairs:
    L = assemble_laplacian(build_word_graph(n))
    return smallest_eigenpairs(L, min(k, L.dimension), tol=tol, seed=seed)


def renormalize(eigenvalues: np.ndarray) -> np.ndarray:
    """Divide by the first nonzero eigenvalue (``lambda_2``)."""
    if len(eigenvalues) < 2 or eigenvalues[1] <= 0:
        raise SpectralError("need a positive second eigenvalue")
    out = eigenvalues / eigenvalues[1]
    out[0] = 0.0 if abs(out[0]) < 1e-9 else out[0]
    out[1] = 1.0
    return out


def renormalized_spectrum(n: int, k: int, tol: float = DEFAULT_TOL, seed: int = DEFAULT_SEED) -> SpectralReport:
    pairs = level_eigenpairs(n, k, tol, seed)
    vals = pairs.eigenvalues
    gaps = counting_function(renormalize(vals)).gaps
    return SpectralReport(n, len(vals), vals, renormalize(vals), pairs.residuals, tol, seed, counting_gaps=gaps)


def rho_from_spectra(spectra: dict[int, np.ndarray], k: int) -> dict[int, dict[int, float]]:
    """``rho[j][n] = lam_j(n) / (6 lam_j(n+1))`` for ``2 <= j <= k``, matched by index."""
    table: dict[int, dict[int, float]] = {}
    levels = sorted(spectra)
    for n in levels:
        if n + 1 not in spectra:
            continue
        lo, hi = spectra[n], spectra[n + 1]
        for j in range(2, k + 1):
            if j > len(lo) or j > len(hi):
                continue
            denom = hi[j - 1]
            if denom <= 0:
                continue
            table.setdefault(j, {})[n] = float(lo[j - 1] / (6.0 * denom))
    return table


@dataclass
class RhoEstimates:
    table: dict[int, dict[int, float]]
    spectra: dict[int, np.ndarray]
    headline: float
    tau: float
    d_s: float


def rho_estimates(n_max: int, k: int, tol: float = DEFAULT_TOL, seed: int = DEFAULT_SEED) -> RhoEstimates:
    """Resistance-scaling estimates for levels ``1 .. n_max - 1``.

    The headline value uses ``lambda_2`` at the two finest levels.
    """
    if n_max < 2:
        raise ValueError("need at least two levels")
    spectra = {n: level_eigenpairs(n, k, tol, seed).eigenvalues for n in range(1, n_max + 1)}
    table = rho_from_spectra(spectra, k)
    headline = table[2][n_max - 1]
    return RhoEstimates(table, spectra, headline, 6.0 * headline, spectral_dimension(headline))


def spectral_dimension(rho: float) -> float:
    """``2 log 6 / log(6 rho)``."""
    if rho <= 1.0 / 6.0:
        raise ValueError("rho must exceed 1/6")
    return 2.0 * math.log(6.0) / math.log(6.0 * rho)


@dataclass
class CountingFunction:
    steps: list[tuple[float, int]]  # (lambda, N(lambda)) at each jump
    gaps: list[tuple[float, float]]
    gap_ratio: float

    def __call__(self, lam: float) -> int:
        n = 0
        for value, count in self.steps:
            if value <= lam:
                n = count
        return n


def counting_function(eigs: Sequence[float], gap_ratio: float = 1.5, zero_tol: float = 1e-9) -> CountingFunction:
    """``N(lambda) = #{lambda_j <= lambda}`` and its flat stretches.

    A gap is a pair of consecutive positive eigenvalues whose ratio is at
    least ``gap_ratio``.
    """
    vals = np.asarray(eigs, dtype=np.float64)
    if np.any(np.diff(vals) < -zero_tol):
        raise ValueError("eigenvalues must be ascending")
    steps = []
    for j, v in enumerate(vals, start=1):
        if steps and abs(steps[-1][0] - v) <= zero_tol * max(1.0, abs(v)):
            steps[-1] = (steps[-1][0], j)
        else:
            steps.append((float(v), j))
    gaps = []
    for a, b in zip(vals, vals[1:]):
        if a > zero_tol and b / a >= gap_ratio:
            gaps.append((float(a), float(b)))
    return CountingFunction(steps, gaps, gap_ratio)


def canonical_basis(vecs: np.ndarray, vals: np.ndarray, rel_tol: float = 1e-8) -> np.ndarray:
    """Fix sign and, inside degenerate clusters, the rotation of eigenvectors.

    Within a cluster the basis is rebuilt by Gram-Schmidt on the cluster rows
    taken in ascending vertex order, so the first vector is the projection of
    the lowest-index vertex with a nonzero component, and so on.  Each vector
    is then signed so its entry at vertex 0 is positive, or, if that entry
    vanishes, its first nonzero entry.
    """
    vecs = vecs.copy()
    j = 0
    m = len(vals)
    while j < m:
        e = j + 1
        while e < m and abs(vals[e] - vals[j]) <= rel_tol * abs(vals[j]) + 1e-14:
            e += 1
        if e - j > 1:
            block = vecs[:, j:e]
            basis: list[np.ndarray] = []
            for row in block:
                r = row.copy()
                for b in basis:
                    r -= (r @ b) * b
                nr = np.linalg.norm(r)
                if nr > 1e-8:
                    basis.append(r / nr)
                if len(basis) == e - j:
                    break
            rot = np.stack(basis, axis=1)
            vecs[:, j:e] = block @ rot
        j = e
    for c in range(vecs.shape[1]):
        col = vecs[:, c]
        nz = np.nonzero(np.abs(col) > 1e-12)[0]
        if len(nz) and col[nz[0]] < 0:
            vecs[:, c] = -col
    return vecs


def eigenmap_coords(n: int, indices: Sequence[int], k: Optional[int] = None, tol: float = DEFAULT_TOL,
                    seed: int = DEFAULT_SEED, pairs: Optional[Eigenpairs] = None) -> np.ndarray:
    """Rows ``(phi_i(x), phi_j(x), ...)`` for every vertex ``x`` (1-based ``i``).

    The constant eigenfunction (index 1) is not allowed.
    """
    idx = list(indices)
    if any(i < 2 for i in idx):
        raise ValueError("index 1 is the constant eigenfunction")
    need = max(idx)
    if pairs is None:
        pairs = level_eigenpairs(n, k if k is not None else need + 2, tol, seed)
    if need > len(pairs.eigenvalues):
        raise ValueError(f"index {need} beyond the {len(pairs.eigenvalues)} computed pairs")
    vecs = canonical_basis(pairs.eigenvectors, pairs.eigenvalues)
    return vecs[:, [i - 1 for i in idx]]
