"""Exact computations for finite-dimensional algebras, symplectic fermions
and modular data audits."""
from __future__ import annotations

__version__ = "0.1.0"
