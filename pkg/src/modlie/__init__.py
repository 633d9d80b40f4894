"""Exact modular Lie algebra cohomology and deformation engine.

All computations run over prime fields F_p with arbitrary-precision
integer arithmetic reduced mod p; there are no floating-point numbers
anywhere, so every dimension, rank, and verification is exact.
"""

__version__ = "0.1.0"
