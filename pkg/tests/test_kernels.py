"""The compiled core and the numpy fallback must agree bit for bit."""

import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hexacarpet import _kernels
from hexacarpet.walks import SimpleGraph

py = _kernels.python_backend
cc = _kernels.compiled_backend
backends = [py] + ([cc] if cc is not None else [])


@st.composite
def graphs(draw):
    nv = draw(st.integers(1, 30))
    pairs = draw(st.lists(st.tuples(st.integers(0, nv - 1), st.integers(0, nv - 1)), max_size=3 * nv))
    edges = sorted({(min(a, b), max(a, b)) for a, b in pairs if a != b})
    return SimpleGraph.from_edges(nv, edges if edges else np.zeros((0, 2)))


def test_compiled_core_is_built():
    assert cc is not None, "extension missing; reinstall with `pip install -e . --no-build-isolation`"


@pytest.mark.parametrize("mod", backends, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
def test_bfs_path_graph(mod):
    g = SimpleGraph.from_edges(5, [(0, 1), (1, 2), (2, 3)])
    assert mod.bfs_distances(g.indptr, g.indices, 0).tolist() == [0, 1, 2, 3, -1]


@pytest.mark.parametrize("mod", backends, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
def test_bad_source(mod):
    g = SimpleGraph.from_edges(3, [(0, 1)])
    with pytest.raises(IndexError):
        mod.bfs_distances(g.indptr, g.indices, 3)


@pytest.mark.skipif(cc is None, reason="no compiled core")
@settings(max_examples=80, deadline=None)
@given(graphs(), st.integers(0, 10**6))
def test_backends_agree(g, seed):
    nv = g.vertex_count
    src = seed % nv
    assert np.array_equal(py.bfs_distances(g.indptr, g.indices, src), cc.bfs_distances(g.indptr, g.indices, src))
    sources = np.arange(nv, dtype=np.int64)
    assert np.array_equal(py.eccentricities(g.indptr, g.indices, sources),
                          cc.eccentricities(g.indptr, g.indices, sources))
    deg = np.diff(g.indptr)
    if deg[src] == 0:
        return
    draws = np.random.default_rng(seed).random((12, 50))
    pa = np.full(50, src, dtype=np.int64)
    pb = pa.copy()
    assert np.array_equal(py.walk_returns(g.indptr, g.indices, pa, draws, src),
                          cc.walk_returns(g.indptr, g.indices, pb, draws, src))
    assert np.array_equal(pa, pb)


def test_backend_switch():
    env = dict(os.environ, HEXACARPET_BACKEND="python")
    out = subprocess.run([sys.executable, "-c", "import hexacarpet; print(hexacarpet.BACKEND)"],
                         capture_output=True, text=True, env=env, check=True)
    assert out.stdout.strip() == "python"
