"""Hot kernels: compiled Cython core with a numpy fallback chosen at import.

Set ``HEXACARPET_BACKEND=python`` to force the fallback.
"""

import os

from . import _fallback

python_backend = _fallback

try:
    if os.environ.get("HEXACARPET_BACKEND", "").lower() == "python":
        raise ImportError("fallback requested")
    from . import _core as compiled_backend
except ImportError:
    compiled_backend = None

backend = compiled_backend if compiled_backend is not None else python_backend
BACKEND = "compiled" if compiled_backend is not None else "python"

bfs_distances = backend.bfs_distances
eccentricities = backend.eccentricities
walk_returns = backend.walk_returns

__all__ = ["BACKEND", "bfs_distances", "eccentricities", "walk_returns", "compiled_backend", "python_backend"]
