"""Quantum locally recoverable codes: GF(2) algebra, Tanner graphs, availability
bounds, randomized recovery-set constructions and product-code certification."""

from __future__ import annotations

__version__ = "0.1.0"
