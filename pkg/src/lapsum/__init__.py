"""Interlacing bounds on sums of Laplacian eigenvalues, with exact small-graph oracles."""

__version__ = "0.1.0"
