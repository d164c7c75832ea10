"""Exact charts, torus degenerations and delta-matroid polytopes for Richardson
varieties in the maximal odd orthogonal Grassmannian OG(n, 2n+1)."""

__version__ = "0.1.0"
