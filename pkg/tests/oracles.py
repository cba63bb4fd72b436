"""Independent reference values for quadrature tests.

Everything here is closed-form: residue sums for rational integrands over
the curve (closing the contour above or below), plus a few hand integrals.
These never touch the adaptive engine they are used to check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from hardylip.curve import LipschitzGraph, signed_height
from hardylip.quadrature import ContourIntegrand


@dataclass(frozen=True)
class RationalCase:
    """Sum of simple and double poles with overall quadratic decay.

    ``simple`` maps pole -> coefficient with coefficients summing to zero
    (otherwise the contour integral would not converge absolutely);
    ``double`` poles are unconstrained since their residues vanish.
    """

    simple: tuple[tuple[complex, complex], ...]
    double: tuple[tuple[complex, complex], ...]
    label: str = ""

    def evaluate(self, zeta: np.ndarray) -> np.ndarray:
        out = np.zeros(zeta.shape, dtype=np.complex128)
        for pole, coeff in self.simple:
            out += coeff / (zeta - pole)
        for pole, coeff in self.double:
            out += coeff / (zeta - pole) ** 2
        return out

    def contour_truth(self, g: LipschitzGraph) -> complex:
        """Closing above: twice pi i times the residues above the curve."""
        total = 0j
        for pole, coeff in self.simple:
            if float(signed_height(g, pole)) > 0:
                total += coeff
        return 2j * math.pi * total

    def integrand(self, g: LipschitzGraph) -> ContourIntegrand:
        poles = [p for p, _ in self.simple] + [p for p, _ in self.double]
        pole_scale = max(abs(p) for p in poles)
        coeff_scale = sum(abs(c) for _, c in self.simple) * (2.0 + 2.0 * pole_scale)
        coeff_scale += 4.0 * sum(abs(c) for _, c in self.double)
        density = math.sqrt(1.0 + g.lipschitz_bound**2)
        return ContourIntegrand(
            evaluator=lambda zeta, dzeta: self.evaluate(zeta) * dzeta,
            decay_exponent=2.0,
            tail_coefficient=4.0 * coeff_scale * density,
            tail_start=4.0 * (1.0 + pole_scale),
            singular_points=tuple(poles),
        )


def random_rational_case(rng: np.random.Generator, g: LipschitzGraph, label: str) -> RationalCase:
    """Pole placements at healthy distance from the curve, zero-sum simple
    coefficients so the tail decays quadratically."""
    n_simple = int(rng.integers(2, 5))
    simple = []
    for _ in range(n_simple):
        u = float(rng.uniform(-3, 3))
        h = float(rng.uniform(0.4, 3.0)) * (1 if rng.random() < 0.5 else -1)
        pole = complex(u, float(g.height(u)) + h)
        coeff = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        simple.append((pole, coeff))
    balance = -sum(c for _, c in simple[:-1])
    simple[-1] = (simple[-1][0], balance)
    double = []
    if rng.random() < 0.5:
        u = float(rng.uniform(-3, 3))
        h = float(rng.uniform(0.4, 3.0)) * (1 if rng.random() < 0.5 else -1)
        double.append((complex(u, float(g.height(u)) + h), complex(rng.uniform(-2, 2), rng.uniform(-2, 2))))
    return RationalCase(simple=tuple(simple), double=tuple(double), label=label)


def split_pole_truth(a: complex, b: complex) -> complex:
    """Integral of 1/((z-a)(z-b)) over the curve when a sits above and b
    below: the residue at a closing upward."""
    return 2j * math.pi / (a - b)


def real_line_lorentzian_truth(center: float, width: float) -> float:
    """Integral of 1/((x-center)^2 + width^2) over the real line."""
    return math.pi / width
