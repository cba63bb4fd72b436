"""Adaptive contour integration over graph curves, their vertical translates
and the real line.

Integrals are parametrized by the abscissa u, so an integrand is a callable
receiving curve points ``zeta(u) + i*tau`` together with ``zeta'(u)`` and
returning the full du-integrand.  Truncation of the infinite parameter range
is certificate-driven: the caller certifies a power-law tail bound and the
engine picks the cut so the discarded mass stays below half the tolerance.

Panels use 16-node Gauss-Legendre with an 8-node comparison rule for the
error estimate; panel boundaries always include graph kinks and the
abscissas of known singularities, and panels near a singularity are bisected
until their length drops below half their distance to it.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss

from .curve import LipschitzGraph

__all__ = [
    "ContourIntegrand",
    "QuadratureResult",
    "QuadratureError",
    "TailCertificateError",
    "integrate_curve",
    "integrate_real_line",
    "lp_norm_on_shifted_curve",
]


class QuadratureError(RuntimeError):
    """Panel budget exhausted before reaching the requested tolerance."""


class TailCertificateError(ValueError):
    """The decay certificate cannot bound the truncated tail."""


@dataclass(frozen=True)
class ContourIntegrand:
    """Integrand with a certified power-law tail.

    ``evaluator(zeta, dzeta_du)`` returns the du-integrand at curve points
    ``zeta`` (complex array).  The certificate states
    ``|evaluator(zeta(u), zeta'(u))| <= tail_coefficient * |u|**(-decay_exponent)``
    for ``|u| >= tail_start``, uniformly over the vertical shifts in use.
    ``singular_points`` are known singularities near (never on) the contour.
    """

    evaluator: Callable[[np.ndarray, np.ndarray], np.ndarray]
    decay_exponent: float
    tail_coefficient: float
    tail_start: float
    singular_points: tuple[complex, ...] = ()

    def __post_init__(self) -> None:
        if not (math.isfinite(self.tail_coefficient) and self.tail_coefficient > 0):
            raise TailCertificateError("tail coefficient must be finite and positive")
        if not (math.isfinite(self.tail_start) and self.tail_start > 0):
            raise TailCertificateError("tail start must be finite and positive")


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    abs_error_estimate: float
    panels_used: int
    tail_bound: float


_FLAT = LipschitzGraph(((0.0, 0.0),), 0.0, 0.0)

_NODES_HI, _WEIGHTS_HI = leggauss(16)
_NODES_LO, _WEIGHTS_LO = leggauss(8)

# floor keeping the reported estimate honest against double roundoff
_ROUNDOFF = 5e-16


def _segment_distance(p: complex, a: complex, b: complex) -> float:
    ab = b - a
    denom = (ab * ab.conjugate()).real
    if denom == 0.0:
        return abs(p - a)
    t = min(1.0, max(0.0, ((p - a) * ab.conjugate()).real / denom))
    return abs(p - (a + t * ab))


class _Panel:
    __slots__ = ("a", "b", "value", "error", "magnitude")

    def __init__(self, a, b, value, error, magnitude):
        self.a = a
        self.b = b
        self.value = value
        self.error = error
        self.magnitude = magnitude


def _eval_panel(g: LipschitzGraph, tau: float, f: ContourIntegrand, a: float, b: float) -> _Panel:
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    u_hi = mid + half * _NODES_HI
    u_lo = mid + half * _NODES_LO
    u = np.concatenate([u_hi, u_lo])
    zeta = u + 1j * (g.height(u) + tau)
    dzeta = 1.0 + 1j * g.slope(u)
    vals = np.asarray(f.evaluator(zeta, dzeta), dtype=np.complex128)
    hi = half * np.dot(_WEIGHTS_HI, vals[:16])
    lo = half * np.dot(_WEIGHTS_LO, vals[16:])
    mag = half * float(np.dot(_WEIGHTS_HI, np.abs(vals[:16])))
    return _Panel(a, b, hi, abs(hi - lo), mag)


def _choose_truncation(f: ContourIntegrand, density_bound: float, tol: float) -> tuple[float, float]:
    s = f.decay_exponent
    if s <= 1.0:
        raise TailCertificateError(f"decay exponent {s} <= 1: tail not absolutely convergent")
    coeff = f.tail_coefficient * density_bound / (s - 1.0)
    # both tails together must fit in tol/2
    cut = (4.0 * coeff / tol) ** (1.0 / (s - 1.0))
    cut = max(cut, f.tail_start, 1.0)
    if not math.isfinite(cut) or cut > 1e13:
        raise TailCertificateError(
            f"certified decay |u|^(-{s:.3g}) needs truncation at {cut:.3g}; "
            "tighten the certificate or the tolerance"
        )
    tail = 2.0 * coeff * cut ** (1.0 - s)
    return cut, tail


def integrate_curve(
    g: LipschitzGraph,
    tau: float,
    f: ContourIntegrand,
    tol: float,
    *,
    max_panels: int = 6000,
) -> QuadratureResult:
    """Approximate the integral of ``f`` along the curve shifted by ``i*tau``.

    The reported ``abs_error_estimate`` is the panel estimate plus the
    certified tail bound; a result is only returned once it drops below
    ``tol``.  Raises ``QuadratureError`` when ``max_panels`` panels are not
    enough and ``TailCertificateError`` when the certificate cannot produce a
    finite tail.
    """
    if not tol > 0:
        raise ValueError("tolerance must be positive")
    density_bound = math.sqrt(1.0 + g.lipschitz_bound**2)
    cut, tail_bound = _choose_truncation(f, density_bound, tol)

    breaks = {-cut, cut, 0.0}
    for uk in g.kink_abscissas:
        if -cut < uk < cut:
            breaks.add(float(uk))
    for sp in f.singular_points:
        x = float(np.real(sp))
        if -cut < x < cut:
            breaks.add(x)
    # geometric ladder so distant tail panels cannot hide local features
    r = max(min(f.tail_start, cut / 2.0), 1e-3)
    while r < cut:
        breaks.add(r)
        breaks.add(-r)
        r *= 4.0
    edges = sorted(breaks)

    sing = np.asarray(f.singular_points, dtype=np.complex128)

    def near_singularity_split(a: float, b: float) -> bool:
        if sing.size == 0:
            return False
        pa = complex(a + 1j * (float(g.height(a)) + tau))
        pb = complex(b + 1j * (float(g.height(b)) + tau))
        length = abs(pb - pa)
        dist = min(_segment_distance(p, pa, pb) for p in sing)
        return length >= 0.5 * dist

    panels: list[_Panel] = []
    pending = [(edges[i], edges[i + 1]) for i in range(len(edges) - 1)]
    while pending:
        a, b = pending.pop()
        if near_singularity_split(a, b) and len(panels) + len(pending) < max_panels:
            m = 0.5 * (a + b)
            pending.append((a, m))
            pending.append((m, b))
        else:
            panels.append(_eval_panel(g, tau, f, a, b))

    heap = [(-p.error, i) for i, p in enumerate(panels)]
    heapq.heapify(heap)
    store = {i: p for i, p in enumerate(panels)}
    next_id = len(panels)
    budget = max(tol - tail_bound, 0.25 * tol)
    total_error = sum(p.error for p in store.values())

    while total_error > budget:
        if len(store) >= max_panels or not heap:
            raise QuadratureError(
                f"panel budget exhausted: estimate {total_error:.3e} > {budget:.3e}"
            )
        _, idx = heapq.heappop(heap)
        if idx not in store:
            continue
        p = store.pop(idx)
        total_error -= p.error
        m = 0.5 * (p.a + p.b)
        for a, b in ((p.a, m), (m, p.b)):
            child = _eval_panel(g, tau, f, a, b)
            store[next_id] = child
            total_error += child.error
            heapq.heappush(heap, (-child.error, next_id))
            next_id += 1

    final = sorted(store.values(), key=lambda p: p.a)
    value = complex(sum(p.value for p in final))
    magnitude = sum(p.magnitude for p in final)
    panel_error = sum(p.error for p in final) + _ROUNDOFF * magnitude
    return QuadratureResult(
        value=value,
        abs_error_estimate=panel_error + tail_bound,
        panels_used=len(final),
        tail_bound=tail_bound,
    )


def integrate_real_line(f: ContourIntegrand, tol: float, **kwargs) -> QuadratureResult:
    """``integrate_curve`` specialized to the flat curve a(u) = 0."""
    return integrate_curve(_FLAT, 0.0, f, tol, **kwargs)


def lp_norm_on_shifted_curve(g: LipschitzGraph, tau: float, F, p: float, tol: float) -> float:
    """p-th root of the arclength integral of |F|^p on the shifted curve.

    ``F`` must carry a decay certificate (see
    ``hardy.AnalyticTestFunction``); the integrand certificate requires
    ``p * F.decay_exponent > 1``.  The result has relative error about
    ``tol``.
    """
    if not p > 0:
        raise ValueError("p must be positive")
    d = p * F.decay_exponent
    if d <= 1.0:
        raise TailCertificateError(
            f"|F|^p decays like |u|^(-{d:.3g}): certificate insufficient for p={p}"
        )

    def evaluator(zeta, dzeta):
        return np.abs(F(zeta)) ** p * np.abs(dzeta)

    integrand = ContourIntegrand(
        evaluator=evaluator,
        decay_exponent=d,
        tail_coefficient=max(F.decay_coefficient, 1e-300) ** p * math.sqrt(1.0 + g.lipschitz_bound**2),
        tail_start=F.decay_start,
    )
    rough = integrate_curve(g, tau, integrand, tol=max(tol, 1e-3), max_panels=6000)
    scale = max(abs(rough.value), rough.abs_error_estimate)
    if scale == 0.0:
        return 0.0
    fine = integrate_curve(g, tau, integrand, tol=0.5 * p * tol * scale, max_panels=6000)
    return float(np.real(fine.value)) ** (1.0 / p)
