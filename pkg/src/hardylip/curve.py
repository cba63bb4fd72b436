"""Piecewise-linear Lipschitz graph curves and the half-domains they bound.

A curve is the graph of a piecewise-linear function ``a(u)`` with finitely
many kinks and constant end slopes.  It splits the plane into the open region
above the graph and the open region below; membership tests, the arclength
density, vertical translates and non-tangential approach cones all live here.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from ._kernels import pwl_slopes, pwl_values

__all__ = [
    "GeometryError",
    "Side",
    "LipschitzGraph",
    "Cone",
    "eval_zeta",
    "arc_measure_density",
    "classify",
    "signed_height",
    "make_cone",
    "shifted_point",
    "load_graph",
    "graph_to_dict",
]

DEFAULT_ON_TOLERANCE = 1e-12

# slope changes below this are not counted as kinks
_KINK_SLOPE_TOL = 1e-13


class GeometryError(ValueError):
    """A curve or cone construction is geometrically inconsistent."""


class Side(enum.Enum):
    ABOVE = "above"
    BELOW = "below"
    ON = "on"


@dataclass(frozen=True)
class LipschitzGraph:
    """Graph of a piecewise-linear function with bounded slopes.

    ``breakpoints`` are the interpolation knots ``(u_k, a_k)`` with strictly
    increasing abscissas; beyond the first/last knot the function continues
    with ``left_slope`` / ``right_slope``.  The Lipschitz constant is always
    recomputed as the tight maximum absolute slope.
    """

    breakpoints: tuple[tuple[float, float], ...]
    left_slope: float
    right_slope: float
    lipschitz_bound: float = field(init=False, compare=False)

    def __post_init__(self) -> None:
        if not self.breakpoints:
            raise GeometryError("at least one breakpoint is required")
        us = np.array([p[0] for p in self.breakpoints], dtype=np.float64)
        has = np.array([p[1] for p in self.breakpoints], dtype=np.float64)
        if not np.all(np.isfinite(us)) or not np.all(np.isfinite(has)):
            raise GeometryError("breakpoints must be finite")
        if us.size > 1 and not np.all(np.diff(us) > 0):
            raise GeometryError("breakpoint abscissas must be strictly increasing")
        for s in (self.left_slope, self.right_slope):
            if not math.isfinite(s):
                raise GeometryError("end slopes must be finite")
        slopes = [self.left_slope, self.right_slope]
        if us.size > 1:
            slopes.extend(np.diff(has) / np.diff(us))
        object.__setattr__(self, "lipschitz_bound", float(np.max(np.abs(slopes))))
        object.__setattr__(self, "_knots_u", us)
        object.__setattr__(self, "_knots_a", has)

    # -- sampling ---------------------------------------------------------

    def height(self, u):
        """a(u), vectorized."""
        return pwl_values(u, self._knots_u, self._knots_a, self.left_slope, self.right_slope)

    def slope(self, u):
        """Right-limit slope a'(u+), vectorized."""
        return pwl_slopes(u, self._knots_u, self._knots_a, self.left_slope, self.right_slope)

    # -- kinks ------------------------------------------------------------

    @property
    def kink_abscissas(self) -> tuple[float, ...]:
        """Abscissas where the slope actually changes."""
        out = []
        us = self._knots_u
        has = self._knots_a
        for j, u in enumerate(us):
            before = self.left_slope if j == 0 else (has[j] - has[j - 1]) / (us[j] - us[j - 1])
            after = self.right_slope if j == len(us) - 1 else (has[j + 1] - has[j]) / (us[j + 1] - us[j])
            if abs(after - before) > _KINK_SLOPE_TOL:
                out.append(float(u))
        return tuple(out)

    @property
    def kink_turnings(self) -> tuple[float, ...]:
        """Direction-angle change (left turn positive) at each kink."""
        out = []
        us = self._knots_u
        has = self._knots_a
        for j, u in enumerate(us):
            before = self.left_slope if j == 0 else (has[j] - has[j - 1]) / (us[j] - us[j - 1])
            after = self.right_slope if j == len(us) - 1 else (has[j + 1] - has[j]) / (us[j + 1] - us[j])
            if abs(after - before) > _KINK_SLOPE_TOL:
                out.append(math.atan(after) - math.atan(before))
        return tuple(out)

    def is_kink_abscissa(self, u: float, tol: float = 1e-12) -> bool:
        return any(abs(u - uk) <= tol * max(1.0, abs(uk)) for uk in self.kink_abscissas)

    # -- segment geometry (used by cone construction) ----------------------

    def _segments(self, ray_length: float = 1e9):
        """Curve as a list of straight segments; end rays truncated far out."""
        us = self._knots_u
        pts = us + 1j * self._knots_a
        segs = []
        first = pts[0]
        segs.append((first + (-ray_length) * (1 + 1j * self.left_slope), first))
        for j in range(len(us) - 1):
            segs.append((pts[j], pts[j + 1]))
        last = pts[-1]
        segs.append((last, last + ray_length * (1 + 1j * self.right_slope)))
        return segs


@dataclass(frozen=True)
class Cone:
    """Truncated non-tangential approach cone at a boundary point.

    Directions are ``theta`` with ``theta - tangent_angle`` in
    ``(half_angle_param, pi - half_angle_param)``.  Within ``safety_radius``
    of the vertex, every cone displacement ``z`` satisfies
    ``vertex + z`` above the curve and ``vertex - z`` below it.
    """

    vertex: complex
    tangent_angle: float
    half_angle_param: float
    safety_radius: float

    @property
    def direction_interval(self) -> tuple[float, float]:
        return (
            self.tangent_angle + self.half_angle_param,
            self.tangent_angle + math.pi - self.half_angle_param,
        )

    def contains_direction(self, theta: float) -> bool:
        lo, hi = self.direction_interval
        return 0.0 < (theta - lo) % (2 * math.pi) < hi - lo

    def sample_displacements(self, rng: np.random.Generator, count: int, r_min_frac: float = 1e-3) -> np.ndarray:
        """Random cone displacements with radii in [r_min_frac, 1] * safety_radius."""
        lo, hi = self.direction_interval
        theta = rng.uniform(lo, hi, size=count)
        r = self.safety_radius * rng.uniform(r_min_frac, 1.0, size=count)
        return r * np.exp(1j * theta)


# ---------------------------------------------------------------------------
# operations


def eval_zeta(g: LipschitzGraph, u):
    """Boundary parametrization u + i*a(u)."""
    u_arr = np.asarray(u, dtype=np.float64)
    z = u_arr + 1j * g.height(u_arr)
    return complex(z) if np.isscalar(u) or u_arr.ndim == 0 else z


def arc_measure_density(g: LipschitzGraph, u):
    """Arclength density sqrt(1 + a'(u)^2), right limit at kinks.

    The value lies in [1, sqrt(1 + M^2)] with M the Lipschitz bound.  A kink
    abscissa is a measure-zero sample; call ``g.is_kink_abscissa`` to detect
    one (signal, not failure).
    """
    s = g.slope(u)
    d = np.sqrt(1.0 + s * s)
    return float(d) if np.isscalar(u) or np.asarray(u).ndim == 0 else d


def signed_height(g: LipschitzGraph, w):
    """Im w - a(Re w), vectorized; positive above the curve."""
    w_arr = np.asarray(w, dtype=np.complex128)
    return w_arr.imag - g.height(w_arr.real)


def classify(g: LipschitzGraph, w: complex, tol_on: float = DEFAULT_ON_TOLERANCE) -> Side:
    """Above / Below / On with a classification band ``tol_on`` around the curve."""
    h = float(signed_height(g, complex(w)))
    if h > tol_on:
        return Side.ABOVE
    if h < -tol_on:
        return Side.BELOW
    return Side.ON


def shifted_point(w, tau: float):
    """Vertical translate w + i*tau (the parametrization of shifted curves)."""
    return w + 1j * tau


# ---------------------------------------------------------------------------
# cone construction


def _sector_distance(vertex: complex, lo: float, hi: float, segments) -> float:
    """Distance from ``vertex`` to curve points whose direction from the
    vertex lies in the closed angular sector [lo, hi].

    Exact for straight segments: candidate minimizers are segment endpoints,
    the perpendicular foot, and intersections with the sector edge rays.
    """
    width = hi - lo

    def in_sector(p: complex) -> bool:
        d = p - vertex
        if abs(d) == 0.0:
            return False
        rel = (math.atan2(d.imag, d.real) - lo) % (2 * math.pi)
        # roundoff can land an edge direction at 2*pi - eps
        return rel <= width + 1e-12 or rel >= 2 * math.pi - 1e-12

    best = math.inf
    for a, b in segments:
        ab = b - a
        seg_len2 = (ab * ab.conjugate()).real
        candidates = [a, b]
        if seg_len2 > 0:
            t = ((vertex - a) * ab.conjugate()).real / seg_len2
            if 0.0 < t < 1.0:
                candidates.append(a + t * ab)
            # intersections with the two sector edge rays
            for theta in (lo, hi):
                e = complex(math.cos(theta), math.sin(theta))
                denom = (e * ab.conjugate()).imag
                if abs(denom) > 1e-300:
                    s = ((a - vertex) * ab.conjugate()).imag / denom
                    t2 = ((a - vertex) * e.conjugate()).imag / denom
                    if s > 0.0 and 0.0 <= t2 <= 1.0:
                        candidates.append(vertex + s * e)
        for p in candidates:
            if in_sector(p):
                best = min(best, abs(p - vertex))
    return best


def make_cone(
    g: LipschitzGraph,
    u0: float,
    phi: float,
    *,
    delta_max: float = 100.0,
    margin: float = 0.9,
    validation_samples: int = 512,
    rng: np.random.Generator | None = None,
) -> Cone:
    """Construct the approach cone at ``zeta(u0)`` with aperture parameter ``phi``.

    The vertex must not be a kink (the tangent direction has to exist).  The
    safety radius is the exact largest radius at which the cone sector and its
    reflection avoid the curve, shrunk by ``margin``.  With
    ``validation_samples > 0`` the construction additionally rejection-samples
    the cone and raises ``GeometryError`` on any misclassified point.
    """
    if not 0.0 < phi < math.pi / 2:
        raise GeometryError("aperture parameter must lie in (0, pi/2)")
    if g.is_kink_abscissa(u0):
        raise GeometryError(f"u0={u0} is a kink abscissa; no tangent direction")

    vertex = complex(eval_zeta(g, u0))
    phi0 = math.atan(float(g.slope(u0)))
    lo = phi0 + phi
    hi = phi0 + math.pi - phi
    segments = g._segments()

    d_plus = _sector_distance(vertex, lo, hi, segments)
    d_minus = _sector_distance(vertex, lo + math.pi, hi + math.pi, segments)
    delta = min(margin * min(d_plus, d_minus), delta_max)
    if not delta > 0.0:
        raise GeometryError("cone is not strictly interior: curve reaches the vertex")
    cone = Cone(vertex=vertex, tangent_angle=phi0, half_angle_param=phi, safety_radius=delta)

    if validation_samples > 0:
        rng = rng if rng is not None else np.random.default_rng(0)
        z = cone.sample_displacements(rng, validation_samples)
        if np.any(signed_height(g, vertex + z) <= 0.0) or np.any(signed_height(g, vertex - z) >= 0.0):
            raise GeometryError("cone validation failed: sampled point on the wrong side")
    return cone


# ---------------------------------------------------------------------------
# JSON interface


def load_graph(source) -> LipschitzGraph:
    """Load a curve from a dict, a JSON string, or a path to a JSON file.

    Schema: ``{"breakpoints": [[u, a], ...], "left_slope": s, "right_slope": s}``.
    """
    if isinstance(source, (str, Path)) and Path(str(source)).exists():
        data = json.loads(Path(source).read_text())
    elif isinstance(source, str):
        data = json.loads(source)
    else:
        data = source
    try:
        bps = tuple((float(u), float(a)) for u, a in data["breakpoints"])
        return LipschitzGraph(bps, float(data["left_slope"]), float(data["right_slope"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise GeometryError(f"invalid curve description: {exc}") from exc


def graph_to_dict(g: LipschitzGraph) -> dict:
    return {
        "breakpoints": [[u, a] for u, a in g.breakpoints],
        "left_slope": g.left_slope,
        "right_slope": g.right_slope,
    }
