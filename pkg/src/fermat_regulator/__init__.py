"""Jacobi sums, Jacobi-sum L-values and regulator constants of Fermat curves."""
from ._kernels import USE_NUMBA

__version__ = "0.1.0"

__all__ = ["USE_NUMBA", "__version__"]
