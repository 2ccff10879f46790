"""Artificial-noise-aided beam focusing for near-field THz wiretap links."""

__version__ = "0.1.0"
