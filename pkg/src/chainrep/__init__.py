"""Exact tools for minimal faithful complex representation dimensions
of Heisenberg, unitriangular, affine and general two-step nilpotent
groups over finite chain rings."""

__version__ = "0.1.0"

from .chain_ring import INF, RingSpec, make_ring

__all__ = ["INF", "RingSpec", "make_ring", "__version__"]
