"""Optimal linking for PageRank: visit vectors, rank-one link updates,
optimal structure certificates, brute-force oracles and surfer simulation."""

__version__ = "0.1.0"
