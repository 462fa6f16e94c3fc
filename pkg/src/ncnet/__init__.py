"""ncnet: exact double-bracket calculus on perfect planar and cylindrical networks."""

from ._kernel import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"

__all__ = ["KERNEL_BACKEND", "__version__"]
