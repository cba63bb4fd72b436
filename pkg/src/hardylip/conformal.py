"""Conformal maps from the upper half plane onto the region above a
piecewise-linear Lipschitz graph.

The map derivative has the product form ``C * prod (z - x_k)^(-beta_k)`` with
one real prevertex per kink and exponents given by the turning angle over pi.
Construction fixes ``x_1 = -1``, unit multiplier modulus, and matches the
image of ``x_1`` to the first kink; the remaining prevertex gaps solve a
side-length matching problem.  Evaluation integrates the derivative along
kink-avoiding paths: a Gauss-Jacobi leg absorbs the endpoint singularity at
the anchoring prevertex, and Gauss-Legendre panels kept shorter than their
distance to the nearest singularity cover the rest.

The derivative argument stays within ``[-arctan M, arctan M]`` on the closed
half plane (bounded harmonic extension of the boundary tangent angle), so
principal logarithms give one global analytic branch for every fractional
power used here.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.optimize import least_squares
from scipy.special import roots_jacobi

from ._kernels import sc_log_deriv
from .curve import LipschitzGraph, eval_zeta

__all__ = [
    "ConformalError",
    "ConformalSolveError",
    "InverseError",
    "CrowdingWarning",
    "SolverOptions",
    "SchwarzChristoffelMap",
    "sc_solve",
    "phi",
    "phi_prime",
    "log_phi_prime",
    "phi_prime_power",
    "psi",
    "psi_prime",
    "psi_boundary",
    "map_to_dict",
    "load_map",
]


class ConformalError(RuntimeError):
    """Map construction or evaluation failed."""


class ConformalSolveError(ConformalError):
    """The prevertex parameter problem did not converge."""


class InverseError(ConformalError):
    """Newton inversion of the map did not converge."""


class CrowdingWarning(UserWarning):
    """Adjacent prevertices are nearly coincident; expect precision loss."""


@dataclass(frozen=True)
class SolverOptions:
    tol: float = 1e-10
    quad_nodes: int = 48
    crowding_gap: float = 1e-12


_GL24_NODES, _GL24_WEIGHTS = leggauss(24)


@lru_cache(maxsize=256)
def _jacobi_rule(n: int, alpha: float, beta: float):
    return roots_jacobi(n, alpha, beta)


@dataclass(frozen=True)
class SchwarzChristoffelMap:
    """Solved half-plane map; immutable, safe to share between workers."""

    graph: LipschitzGraph
    prevertices: np.ndarray
    exponents: np.ndarray
    multiplier: complex
    offset: complex
    vertex_images: np.ndarray = field(repr=False, compare=False)
    seed_z: np.ndarray = field(repr=False, compare=False)
    seed_w: np.ndarray = field(repr=False, compare=False)
    boundary_x: np.ndarray = field(repr=False, compare=False)
    boundary_u: np.ndarray = field(repr=False, compare=False)
    anchor_tables: tuple = field(default=(), repr=False, compare=False)
    far_field: tuple = field(default=(), repr=False, compare=False)
    quad_nodes: int = 48

    @property
    def kink_count(self) -> int:
        return len(self.prevertices)

    @property
    def exponent_sum(self) -> float:
        return float(np.sum(self.exponents))


def _as_batch(v):
    """(flattened complex array, original ndarray or None-if-scalar)."""
    arr = np.asarray(v, dtype=np.complex128)
    return np.atleast_1d(arr).ravel(), arr


def _restore(flat: np.ndarray, orig: np.ndarray):
    if orig.ndim == 0:
        return complex(flat[0])
    return flat.reshape(orig.shape)


# ---------------------------------------------------------------------------
# derivative and its logarithm


def _log_deriv_raw(z, x, beta, C):
    return sc_log_deriv(z, x, beta) + cmath.log(C)


def log_phi_prime(m: SchwarzChristoffelMap, z):
    """Analytic logarithm of the map derivative (principal branch)."""
    return _log_deriv_raw(np.asarray(z, dtype=np.complex128), m.prevertices, m.exponents, m.multiplier)


def phi_prime(m: SchwarzChristoffelMap, z):
    """Map derivative ``C * prod (z - x_k)^(-beta_k)``; rejected at prevertices."""
    flat, orig = _as_batch(z)
    if m.kink_count and np.any(np.isclose(flat[:, None], m.prevertices[None, :], atol=1e-14)):
        raise ConformalError("derivative evaluation at a prevertex")
    out = np.exp(_log_deriv_raw(flat, m.prevertices, m.exponents, m.multiplier))
    return _restore(out, orig)


def phi_prime_power(m: SchwarzChristoffelMap, z, p: float):
    """Analytic branch of the 1/p power of the derivative.

    Valid because the derivative argument never leaves (-pi/2, pi/2); a
    violation indicates a broken map and is reported as such.
    """
    flat, orig = _as_batch(z)
    lp = _log_deriv_raw(flat, m.prevertices, m.exponents, m.multiplier)
    if np.any(np.abs(lp.imag) >= math.pi / 2 - 1e-8):
        raise ConformalError("sector violation: derivative argument reached pi/2")
    return _restore(np.exp(lp / p), orig)


# ---------------------------------------------------------------------------
# forward evaluation


def _march_integral(x, beta, starts, ends, max_steps: int = 500):
    """Integral of the derivative product along straight segments,
    vectorized over endpoints.

    Greedy lockstep march: each step extends at most half the distance to
    the nearest prevertex, so every Gauss-Legendre panel sits well inside
    the integrand's analyticity region.
    """
    total = np.zeros(starts.shape, dtype=np.complex128)
    cur = starts.astype(np.complex128).copy()
    active = np.abs(ends - cur) > 0
    for _ in range(max_steps):
        if not active.any():
            return total
        rem = ends[active] - cur[active]
        rem_len = np.abs(rem)
        u_hat = rem / rem_len
        dist = np.min(np.abs(cur[active][:, None] - x[None, :]), axis=1)
        step = np.minimum(rem_len, 0.75 * dist)
        nodes = cur[active][:, None] + (0.5 * (_GL24_NODES + 1.0))[None, :] * (step * u_hat)[:, None]
        vals = np.exp(sc_log_deriv(nodes.ravel(), x, beta)).reshape(nodes.shape)
        total[active] += (0.5 * step * u_hat) * (vals @ _GL24_WEIGHTS)
        finished = step >= rem_len
        moved = cur[active] + step * u_hat
        moved[finished] = ends[active][finished]
        cur[active] = moved
        idx = np.flatnonzero(active)
        active[idx[finished]] = False
    raise ConformalError("path integration failed to terminate")


def _anchored_integral(m: SchwarzChristoffelMap, k: int, pts: np.ndarray) -> np.ndarray:
    """Integral of the derivative product from prevertex k to each point."""
    x = m.prevertices
    beta = m.exponents
    others, obeta, safe = m.anchor_tables[k]

    out = np.zeros(pts.shape, dtype=np.complex128)
    dist = np.abs(pts - x[k])
    moving = dist > 0
    if not moving.any():
        return out
    p = pts[moving]
    d = dist[moving]
    u_hat = (p - x[k]) / d
    ang = np.angle(u_hat)
    t1 = np.minimum(d, safe)

    bk = beta[k]
    tq, wq = _jacobi_rule(m.quad_nodes, 0.0, -bk)
    s = t1[:, None] * (0.5 * (1.0 + tq))[None, :]
    zeta = x[k] + s * u_hat[:, None]
    # non-anchor factors summed directly: reconstructing the anchor factor
    # from zeta - x[k] would cancel catastrophically for tiny s
    log_rest = -(np.log(zeta[..., None] - others) @ obeta)
    res = (0.5 * t1) ** (1.0 - bk) * (np.exp(log_rest) @ wq) * np.exp(1j * (1.0 - bk) * ang)

    needs_march = t1 < d
    if needs_march.any():
        starts = x[k] + t1[needs_march] * u_hat[needs_march]
        res[needs_march] += _march_integral(x, beta, starts, p[needs_march])
    out[moving] = res
    return out


def _far_primitive(m: SchwarzChristoffelMap, z: np.ndarray) -> np.ndarray:
    """Antiderivative of the derivative product from its Laurent-type tail
    expansion; valid (to machine precision) for |z| >= the far-field radius."""
    _, coeffs, exps, log_term = m.far_field[:4]
    lz = np.log(z)
    out = np.zeros(z.shape, dtype=np.complex128)
    for aj, ej, is_log in zip(coeffs, exps, log_term):
        if is_log:
            out += aj * lz
        else:
            out += (aj / ej) * np.exp(ej * lz)
    return out


def phi(m: SchwarzChristoffelMap, z):
    """Evaluate the map on the closed upper half plane."""
    flat, orig = _as_batch(z)
    n = m.kink_count
    if n == 0:
        out = m.offset + m.multiplier * flat
    elif n == 1:
        nu = 1.0 - m.exponents[0]
        out = m.offset + (m.multiplier / nu) * (flat - m.prevertices[0]) ** nu
    else:
        out = np.empty(flat.shape, dtype=np.complex128)
        far = np.zeros(flat.shape, dtype=bool)
        if m.far_field:
            far = np.abs(flat) >= m.far_field[0]
            if far.any():
                out[far] = m.far_field[4] + m.multiplier * _far_primitive(m, flat[far])
        near = ~far
        if near.any():
            pts = flat[near]
            res = np.empty(pts.shape, dtype=np.complex128)
            anchors = np.argmin(np.abs(pts[:, None] - m.prevertices[None, :]), axis=1)
            for k in np.unique(anchors):
                sel = anchors == k
                res[sel] = m.vertex_images[k] + m.multiplier * _anchored_integral(m, int(k), pts[sel])
            out[near] = res
    return _restore(out, orig)


# ---------------------------------------------------------------------------
# inverse evaluation


def _rotated_root(w: np.ndarray, nu: float) -> np.ndarray:
    # principal 1/nu power on the image wedge arg in (0, nu*pi)
    rot = cmath.exp(-1j * nu * math.pi / 2.0)
    return np.exp((np.log(w * rot) + 1j * nu * math.pi / 2.0) / nu)


def psi(m: SchwarzChristoffelMap, w, *, rtol: float = 1e-12):
    """Inverse map on the region above the graph.

    Closed forms for zero or one kink; otherwise seeded, damped Newton with
    residual target ``|phi(psi(w)) - w| <= rtol * (1 + |w|)``.
    """
    flat, orig = _as_batch(w)
    n = m.kink_count
    if n == 0:
        out = (flat - m.offset) / m.multiplier
    elif n == 1:
        nu = 1.0 - m.exponents[0]
        out = m.prevertices[0] + _rotated_root(nu * (flat - m.offset) / m.multiplier, nu)
    else:
        out = _psi_newton(m, flat, rtol)
    return _restore(out, orig)


def _psi_newton(m: SchwarzChristoffelMap, w: np.ndarray, rtol: float) -> np.ndarray:
    target = rtol * (1.0 + np.abs(w))
    accept = 1e-10 * (1.0 + np.abs(w))
    order = np.argsort(np.abs(m.seed_w[None, :] - w[:, None]), axis=1)

    best_z = m.seed_z[order[:, 0]].astype(np.complex128)
    best_res = np.full(w.shape, np.inf)

    for attempt in range(min(4, order.shape[1])):
        work = np.flatnonzero(best_res > target)
        if work.size == 0:
            break
        z = m.seed_z[order[work, attempt]].astype(np.complex128)
        ww = w[work]
        for _ in range(60):
            fz = phi(m, z)
            res = np.abs(fz - ww)
            improved = res < best_res[work]
            idx = work[improved]
            best_res[idx] = res[improved]
            best_z[idx] = z[improved]
            live = res > target[work]
            if not live.any():
                break
            work = work[live]
            z = z[live]
            ww = ww[live]
            step = (fz[live] - ww) / np.exp(
                _log_deriv_raw(z, m.prevertices, m.exponents, m.multiplier)
            )
            lam = np.ones(step.shape)
            z_new = z - lam * step
            for _ in range(40):
                bad = z_new.imag <= 0.0
                if not bad.any():
                    break
                lam[bad] *= 0.5
                z_new = z - lam * step
            z = z_new
    if np.any(best_res > accept):
        worst = int(np.argmax(best_res / (1.0 + np.abs(w))))
        raise InverseError(
            f"Newton failed at w={w[worst]:.6g} with residual {best_res[worst]:.3e}"
        )
    return best_z


def psi_prime(m: SchwarzChristoffelMap, w):
    """Derivative of the inverse map, via the exact reciprocal identity."""
    flat, orig = _as_batch(w)
    z = np.atleast_1d(np.asarray(psi(m, flat), dtype=np.complex128))
    out = np.exp(-_log_deriv_raw(z, m.prevertices, m.exponents, m.multiplier))
    return _restore(out, orig)


def psi_boundary(m: SchwarzChristoffelMap, u):
    """Real preimage of the boundary point with abscissa ``u``.

    Solves ``Re phi(x) = u`` by bracketed Newton; the boundary trace of the
    map is an increasing homeomorphism, so the real part is strictly
    monotone.
    """
    arr = np.asarray(u, dtype=np.float64)
    flat = np.atleast_1d(arr).ravel()
    n = m.kink_count
    if n == 0:
        out = ((flat + 1j * m.graph.height(flat) - m.offset) / m.multiplier).real
    elif n == 1:
        nu = 1.0 - m.exponents[0]
        w = flat + 1j * m.graph.height(flat)
        out = (m.prevertices[0] + _rotated_root(nu * (w - m.offset) / m.multiplier, nu)).real
    else:
        out = _psi_boundary_newton(m, flat)
    if arr.ndim == 0:
        return float(out[0])
    return out.reshape(arr.shape)


def _re_phi_real(m: SchwarzChristoffelMap, x: np.ndarray) -> np.ndarray:
    return np.real(phi(m, x.astype(np.complex128)))


def _psi_boundary_newton(m: SchwarzChristoffelMap, u: np.ndarray) -> np.ndarray:
    bx, bu = m.boundary_x, m.boundary_u
    idx = np.clip(np.searchsorted(bu, u) - 1, 0, len(bx) - 2)
    lo = bx[idx].copy()
    hi = bx[idx + 1].copy()

    for mask, forward in ((u > bu[-1], True), (u < bu[0], False)):
        if not mask.any():
            continue
        anchor = bx[-1] if forward else bx[0]
        edge = np.full(int(mask.sum()), anchor, dtype=np.float64)
        step = np.full(edge.shape, max(1.0, abs(anchor)))
        cand = edge + step if forward else edge - step
        for _ in range(200):
            vals = _re_phi_real(m, cand)
            ok = (vals >= u[mask]) if forward else (vals <= u[mask])
            if ok.all():
                break
            edge = np.where(ok, edge, cand)
            step = np.where(ok, step, 4.0 * step)
            cand = np.where(ok, cand, edge + step if forward else edge - step)
        else:
            raise InverseError("boundary bracket expansion failed")
        if forward:
            lo[mask] = edge
            hi[mask] = cand
        else:
            hi[mask] = edge
            lo[mask] = cand

    x = np.clip(np.interp(u, bu, bx), lo, hi)
    tol = 1e-12 * (1.0 + np.abs(u))
    fx = np.zeros(u.shape)
    work = np.arange(len(u))
    for _ in range(200):
        fx[work] = _re_phi_real(m, x[work]) - u[work]
        # a bracket ground down to machine width is as good as double allows
        exhausted = (hi[work] - lo[work]) <= 4e-16 * (1.0 + np.abs(x[work]))
        live = (np.abs(fx[work]) > tol[work]) & ~exhausted
        work = work[live]
        if work.size == 0:
            break
        above = fx[work] > 0
        hi[work] = np.where(above, x[work], hi[work])
        lo[work] = np.where(above, lo[work], x[work])
        deriv = np.exp(
            _log_deriv_raw(x[work].astype(np.complex128), m.prevertices, m.exponents, m.multiplier)
        ).real
        good = np.isfinite(deriv) & (deriv > 0)
        step = np.where(good, fx[work] / np.where(good, deriv, 1.0), 0.0)
        x_new = x[work] - step
        fallback = ~np.isfinite(x_new) | (x_new <= lo[work]) | (x_new >= hi[work]) | ~good
        x[work] = np.where(fallback, 0.5 * (lo[work] + hi[work]), x_new)
    if np.any(np.abs(fx) > 1e-8 * (1.0 + np.abs(u))):
        raise InverseError("boundary inversion did not converge")
    return x


# ---------------------------------------------------------------------------
# construction


def _kink_data(g: LipschitzGraph):
    us = np.asarray(g.kink_abscissas, dtype=np.float64)
    betas = np.asarray(g.kink_turnings, dtype=np.float64) / math.pi
    kinks = np.asarray([eval_zeta(g, u) for u in us], dtype=np.complex128)
    return us, betas, kinks


def _side_integrals(x: np.ndarray, beta: np.ndarray, nq: int) -> np.ndarray:
    """Complex integrals of the derivative product over the finite intervals
    between consecutive prevertices (boundary values from above)."""
    n = len(x)
    sides = np.empty(n - 1, dtype=np.complex128)
    for k in range(n - 1):
        a, b = x[k], x[k + 1]
        h = 0.5 * (b - a)
        tq, wq = _jacobi_rule(nq, -beta[k + 1], -beta[k])
        xs = (0.5 * (a + b) + h * tq).astype(np.complex128)
        others = np.delete(x, (k, k + 1))
        obeta = np.delete(beta, (k, k + 1)).astype(np.complex128)
        smooth = -(np.log(xs[:, None] - others) @ obeta) if others.size else np.zeros(xs.shape, dtype=np.complex128)
        sides[k] = (
            cmath.exp(-1j * math.pi * beta[k + 1])
            * h ** (1.0 - beta[k] - beta[k + 1])
            * complex(np.exp(smooth) @ wq)
        )
    return sides


def _assemble(
    g: LipschitzGraph,
    x: np.ndarray,
    beta: np.ndarray,
    C: complex,
    A: complex,
    nq: int,
) -> SchwarzChristoffelMap:
    n = len(x)
    if n >= 2:
        sides = _side_integrals(x, beta, nq)
        vertex_images = A + C * np.concatenate([[0.0], np.cumsum(sides)])
    elif n == 1:
        vertex_images = np.array([A], dtype=np.complex128)
    else:
        vertex_images = np.zeros(0, dtype=np.complex128)

    anchor_tables = tuple(
        (
            np.delete(x, k),
            np.delete(beta, k).astype(np.complex128),
            0.45
            * min(
                x[k] - x[k - 1] if k > 0 else math.inf,
                x[k + 1] - x[k] if k < n - 1 else math.inf,
            ),
        )
        for k in range(n)
    )
    empty_c = np.zeros(0, dtype=np.complex128)
    empty_f = np.zeros(0, dtype=np.float64)
    core = SchwarzChristoffelMap(
        graph=g,
        prevertices=x,
        exponents=beta,
        multiplier=C,
        offset=A,
        vertex_images=vertex_images,
        seed_z=empty_c,
        seed_w=empty_c,
        boundary_x=empty_f,
        boundary_u=empty_f,
        anchor_tables=anchor_tables,
        quad_nodes=nq,
    )
    if n < 2:
        return core

    # tail expansion of the derivative product: prod (z-x_k)^(-beta_k) =
    # z^(-S) * exp(sum_m b_m z^(-m)); integrates termwise to a closed form
    S = float(np.sum(beta))
    depth = 18
    bm = np.array([float(np.sum(beta * x**mm)) / mm for mm in range(1, depth + 1)])
    coeffs = np.zeros(depth + 1)
    coeffs[0] = 1.0
    for j in range(1, depth + 1):
        coeffs[j] = float(np.sum(np.arange(1, j + 1) * bm[:j] * coeffs[j - 1 :: -1][:j])) / j
    exps = 1.0 - S - np.arange(depth + 1, dtype=np.float64)
    log_term = np.abs(exps) < 1e-12
    r_far = 8.0 * max(1.0, float(np.max(np.abs(x))))

    def primitive(zz: np.ndarray) -> np.ndarray:
        lz = np.log(zz)
        acc = np.zeros(zz.shape, dtype=np.complex128)
        for aj, ej, is_log in zip(coeffs, exps, log_term):
            acc += aj * lz if is_log else (aj / ej) * np.exp(ej * lz)
        return acc

    z_cal = np.array([1j * r_far, r_far * np.exp(2.4j)])
    exact = phi(core, z_cal)
    a_far = complex(exact[0] - C * primitive(z_cal[:1])[0])
    check = abs(exact[1] - (a_far + C * primitive(z_cal[1:])[0]))
    if not check <= 1e-8 * (1.0 + abs(exact[1])):
        raise ConformalSolveError(f"far-field expansion mismatch {check:.3e}")
    far_field = (r_far, coeffs.astype(np.complex128), exps, log_term, a_far)
    core = replace(core, far_field=far_field)

    span = max(float(x[-1] - x[0]), 1.0)
    re = np.linspace(x[0] - 3.0 * span, x[-1] + 3.0 * span, 17)
    im = np.geomspace(0.02 * span, 40.0 * span, 11)
    grid = (re[:, None] + 1j * im[None, :]).ravel()
    radii = np.geomspace(r_far, 1e10, 14)
    angles = np.linspace(0.06 * math.pi, 0.94 * math.pi, 9)
    ring = (radii[:, None] * np.exp(1j * angles)[None, :]).ravel()
    grid = np.concatenate([grid, ring])
    seed_w = phi(core, grid)

    pieces = [np.asarray(x, dtype=np.float64)]
    for k in range(n):
        gl = x[k] - x[k - 1] if k > 0 else 2.0 * span
        gr = x[k + 1] - x[k] if k < n - 1 else 2.0 * span
        pieces.append(x[k] + gr * np.geomspace(1e-8, 0.49, 10))
        pieces.append(x[k] - gl * np.geomspace(1e-8, 0.49, 10))
    pieces.append(x[0] - span * np.geomspace(0.5, 1e12, 40))
    pieces.append(x[-1] + span * np.geomspace(0.5, 1e12, 40))
    bx = np.unique(np.concatenate(pieces))
    bu = _re_phi_real(core, bx)
    keep = np.concatenate([[True], np.diff(bu) > 0])
    return replace(core, seed_z=grid, seed_w=seed_w, boundary_x=bx[keep], boundary_u=bu[keep])


def sc_solve(g: LipschitzGraph, options: SolverOptions | None = None) -> SchwarzChristoffelMap:
    """Solve the prevertex parameter problem for the graph ``g``.

    Zero kinks give the exact affine map.  One kink needs no parameters (the
    image is a wedge; the multiplier modulus is normalized to one).  With
    ``n`` kinks the ``n - 1`` prevertex gaps are solved by damped
    Gauss-Newton on logarithmic side-length residuals, after which the
    achieved side lengths are verified against ``options.tol``.
    """
    options = options or SolverOptions()
    us, beta, kinks = _kink_data(g)
    n = len(us)

    if n == 0:
        slope = g.right_slope
        return _assemble(
            g,
            np.zeros(0),
            np.zeros(0),
            1.0 + 1j * slope,
            1j * float(g.height(0.0)),
            options.quad_nodes,
        )

    if np.any(np.abs(beta) >= 1.0):
        raise ConformalSolveError("turning exponent magnitude reached 1; not a graph domain")

    C = cmath.exp(1j * math.atan(g.right_slope))
    A = complex(kinks[0])

    if n == 1:
        return _assemble(g, np.array([-1.0]), beta, C, A, options.quad_nodes)

    lengths = np.abs(np.diff(kinks))

    def residual(lam: np.ndarray) -> np.ndarray:
        gaps = np.exp(lam)
        xs = -1.0 + np.concatenate([[0.0], np.cumsum(gaps)])
        return np.log(np.abs(_side_integrals(xs, beta, options.quad_nodes)) / lengths)

    lam0 = np.log(lengths / np.exp(np.mean(np.log(lengths))))
    sol = least_squares(residual, lam0, method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15)
    gaps = np.exp(sol.x)
    if np.min(gaps) < options.crowding_gap:
        warnings.warn(
            f"prevertex gap {np.min(gaps):.3e} below {options.crowding_gap:.0e}",
            CrowdingWarning,
        )
    x = -1.0 + np.concatenate([[0.0], np.cumsum(gaps)])
    sides = _side_integrals(x, beta, options.quad_nodes)
    err = float(np.max(np.abs(np.abs(sides) - lengths) / np.maximum(1.0, lengths)))
    if not err <= options.tol:
        raise ConformalSolveError(f"side-length residual {err:.3e} exceeds {options.tol:.0e}")

    m = _assemble(g, x, beta, C, A, options.quad_nodes)
    img_err = float(np.max(np.abs(m.vertex_images - kinks)))
    if not img_err <= 1e3 * options.tol * max(1.0, float(np.max(np.abs(kinks)))):
        raise ConformalSolveError(f"vertex image mismatch {img_err:.3e}")
    return m


# ---------------------------------------------------------------------------
# serialization


def map_to_dict(m: SchwarzChristoffelMap) -> dict:
    return {
        "prevertices": [float(v) for v in m.prevertices],
        "exponents": [float(v) for v in m.exponents],
        "C": [m.multiplier.real, m.multiplier.imag],
        "A": [m.offset.real, m.offset.imag],
    }


def load_map(data: dict, g: LipschitzGraph, quad_nodes: int = 48) -> SchwarzChristoffelMap:
    """Rebuild a solved map from its serialized parameters and its curve."""
    x = np.asarray(data["prevertices"], dtype=np.float64)
    beta = np.asarray(data["exponents"], dtype=np.float64)
    C = complex(data["C"][0], data["C"][1])
    A = complex(data["A"][0], data["A"][1])
    m = _assemble(g, x, beta, C, A, quad_nodes)
    if len(x) >= 1:
        _, _, kinks = _kink_data(g)
        if len(kinks) != len(x) or np.max(np.abs(m.vertex_images - kinks)) > 1e-6 * max(
            1.0, float(np.max(np.abs(kinks)))
        ):
            raise ConformalError("serialized map does not match the curve")
    return m
