"""Exact engine for weight modules over the unrolled quantum group of sl(2) at a root of unity."""

__version__ = "0.1.0"

__all__ = ["scalar", "linalg", "modules", "structure", "ribbon", "mtrace", "decomp", "quiver", "verify", "cli"]
