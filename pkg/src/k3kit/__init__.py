"""Exact-arithmetic lattice invariants of elliptically fibred K3 surfaces."""

__version__ = "0.1.0"
