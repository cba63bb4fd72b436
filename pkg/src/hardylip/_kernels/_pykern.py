"""NumPy implementations of the numeric hot spots.

These four kernels sit in the innermost loops of every quadrature panel and
Newton iteration, so they also exist as a compiled Cython module
(``_ckern``).  The two backends are interchangeable; ``_kernels.__init__``
picks one at import time.  Signatures and edge-case conventions (right-limit
slopes, principal logarithms) must stay in lockstep with ``_ckern.pyx``.
"""

from __future__ import annotations

import numpy as np


def pwl_values(u, knots_u, knots_a, left_slope, right_slope):
    """Evaluate the piecewise-linear interpolant through the knots at ``u``.

    Outside the knot range the interpolant continues with the end slopes.
    """
    u = np.asarray(u, dtype=np.float64)
    knots_u = np.asarray(knots_u, dtype=np.float64)
    knots_a = np.asarray(knots_a, dtype=np.float64)
    out = np.empty(u.shape, dtype=np.float64)

    left = u < knots_u[0]
    right = u >= knots_u[-1]
    mid = ~(left | right)

    out[left] = knots_a[0] + left_slope * (u[left] - knots_u[0])
    out[right] = knots_a[-1] + right_slope * (u[right] - knots_u[-1])
    if mid.any():
        j = np.searchsorted(knots_u, u[mid], side="right") - 1
        du = knots_u[j + 1] - knots_u[j]
        t = (u[mid] - knots_u[j]) / du
        out[mid] = knots_a[j] * (1.0 - t) + knots_a[j + 1] * t
    return out


def pwl_slopes(u, knots_u, knots_a, left_slope, right_slope):
    """Right-limit slope of the piecewise-linear interpolant at ``u``."""
    u = np.asarray(u, dtype=np.float64)
    knots_u = np.asarray(knots_u, dtype=np.float64)
    knots_a = np.asarray(knots_a, dtype=np.float64)
    out = np.empty(u.shape, dtype=np.float64)

    left = u < knots_u[0]
    right = u >= knots_u[-1]
    mid = ~(left | right)

    out[left] = left_slope
    out[right] = right_slope
    if mid.any():
        j = np.searchsorted(knots_u, u[mid], side="right") - 1
        out[mid] = (knots_a[j + 1] - knots_a[j]) / (knots_u[j + 1] - knots_u[j])
    return out


def sc_log_deriv(z, prevertices, exponents):
    """Sum of ``-beta_k * Log(z - x_k)`` with principal logarithms.

    This is the logarithm of the half-plane map derivative up to the constant
    multiplier term.  For points in the closed upper half plane every factor
    ``z - x_k`` has argument in [0, pi], so the principal branch is the
    boundary limit from above.
    """
    z = np.asarray(z, dtype=np.complex128)
    x = np.asarray(prevertices, dtype=np.float64)
    b = np.asarray(exponents, dtype=np.float64)
    if x.size == 0:
        return np.zeros(z.shape, dtype=np.complex128)
    diff = z[..., None] - x
    return -(np.log(diff) @ b.astype(np.complex128))


def straddle_kernel(zeta, zeta0, z):
    """Two-pole difference kernel ``z / (pi*i * ((zeta-zeta0)^2 - z^2))``."""
    zeta = np.asarray(zeta, dtype=np.complex128)
    d = zeta - zeta0
    return (z / (1j * np.pi)) / (d * d - z * z)


def blaschke_half_plane(z, zeros, prefactors, m_at_i):
    """Finite upper-half-plane Blaschke product with zeros at ``zeros``.

    ``zeros`` excludes the distinguished point i, whose multiplicity enters
    through ``m_at_i`` and the Moebius factor ((z-i)/(z+i))^m.  ``prefactors``
    are the per-zero unimodular constants.
    """
    z = np.asarray(z, dtype=np.complex128)
    out = np.ones(z.shape, dtype=np.complex128)
    if m_at_i:
        out *= ((z - 1j) / (z + 1j)) ** m_at_i
    zeros = np.asarray(zeros, dtype=np.complex128)
    prefactors = np.asarray(prefactors, dtype=np.complex128)
    for zn, cn in zip(zeros, prefactors):
        out *= cn * (z - zn) / (z - np.conj(zn))
    return out
