"""Exact fiber algebra, Pin(2) symmetry, index and K-degree bookkeeping for the
Rarita-Schwinger monopole equations, plus a floating-point Kuranishi sandbox."""

__version__ = "0.1.0"
