"""Hexacarpet approximation graphs.

``G_n`` has the ``6^n`` words of length ``n`` over ``{0..5}`` as vertices.  It
is built two ways (symbolic edge rules and labelled barycentric subdivision),
and the package measures its distances, Laplacian spectrum and random walks.
"""

__version__ = "0.1.0"

from ._kernels import BACKEND
from .graphs import LevelGraph, build_geometry_graph, build_word_graph, census, verify_isomorphism
from .metrics import radius_diameter
from .spectral import assemble_laplacian, renormalized_spectrum, smallest_eigenpairs
from .walks import exact_return_probability, monte_carlo_walk

__all__ = [
    "BACKEND",
    "LevelGraph",
    "build_word_graph",
    "build_geometry_graph",
    "census",
    "verify_isomorphism",
    "radius_diameter",
    "assemble_laplacian",
    "smallest_eigenpairs",
    "renormalized_spectrum",
    "exact_return_probability",
    "monte_carlo_walk",
]
