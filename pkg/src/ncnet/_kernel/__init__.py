"""Polynomial kernel: dict-based multivariate integer polynomials.

The arithmetic primitives come from the compiled Cython module when it was
built, otherwise from the pure-Python mirror (see ``backend``).  The gcd
layer is shared.
"""

from .backend import (
    BACKEND,
    NVARS,
    ZERO_EXP,
    deglex_key,
    p_add,
    p_divexact,
    p_lead,
    p_mul,
    p_mul_int,
    p_neg,
    p_sub,
)
from .gcd import int_content, p_gcd

__all__ = [
    "BACKEND",
    "NVARS",
    "ZERO_EXP",
    "deglex_key",
    "p_add",
    "p_divexact",
    "p_lead",
    "p_mul",
    "p_mul_int",
    "p_neg",
    "p_sub",
    "p_gcd",
    "int_content",
]
