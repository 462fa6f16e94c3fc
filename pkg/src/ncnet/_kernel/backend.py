"""Kernel backend selection: compiled Cython module if built, else pure Python."""

try:
    from ._cypoly import (  # type: ignore[attr-defined]
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

    BACKEND = "cython"
except ImportError:
    from .pypoly import (
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

    BACKEND = "python"

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
]
