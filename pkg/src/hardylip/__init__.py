"""Hardy-space computations on domains above Lipschitz graph curves.

Curves are piecewise-linear graphs; the region above one is conformally
identified with the upper half plane, and the package verifies the kernel,
isomorphism, factorization, boundary-limit and reproduction identities of
that correspondence by adaptive contour quadrature.
"""

__version__ = "0.1.0"

from ._kernels import backend_name

__all__ = ["__version__", "backend_name"]
