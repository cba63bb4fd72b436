"""Config-driven verification harness.

Each suite checks one family of identities on a chosen curve and returns
records ``(suite, key, anchor, metric, value, tolerance, pass)``.  Anchors
come from a fixed registry naming the identity a record verifies.  Suites
run in a worker pool but draw their randomness from per-suite seed streams
and are assembled in sorted order, so report bytes never depend on
scheduling.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import __version__
from . import hardy as hp
from .curve import LipschitzGraph, eval_zeta, load_graph, make_cone, signed_height
from .conformal import SchwarzChristoffelMap, load_map, sc_solve
from .hardy import (
    AnalyticTestFunction,
    BlaschkeData,
    DivergenceSignal,
    half_plane_generator,
    transform_T,
    transform_T_inv,
)

__all__ = [
    "ConfigError",
    "PRESETS",
    "preset_graph",
    "TauGridSpec",
    "ProbeCounts",
    "ExperimentConfig",
    "Record",
    "ExperimentReport",
    "SUITE_NAMES",
    "ANCHORS",
    "load_config",
    "run",
    "emit_csv",
    "emit_convergence_plotdata",
    "write_report_json",
]


class ConfigError(ValueError):
    """The experiment configuration is malformed."""


PRESETS: dict[str, dict] = {
    "flat": {"breakpoints": [[0.0, 0.0]], "left_slope": 0.0, "right_slope": 0.0},
    "vee": {"breakpoints": [[0.0, 0.0]], "left_slope": -1.0, "right_slope": 1.0},
    "threekink": {
        "breakpoints": [[-1.0, 0.0], [0.0, 0.75], [1.0, 0.0]],
        "left_slope": -0.75,
        "right_slope": 0.75,
    },
}


def preset_graph(name: str) -> LipschitzGraph:
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    return load_graph(PRESETS[name])


@dataclass(frozen=True)
class TauGridSpec:
    minimum: float = 1e-4
    maximum: float = 1e2
    count: int = 25

    def __post_init__(self) -> None:
        if not (0 < self.minimum < self.maximum and self.count >= 2):
            raise ConfigError("tau grid needs 0 < min < max and count >= 2")

    def values(self) -> np.ndarray:
        return np.geomspace(self.minimum, self.maximum, self.count)


@dataclass(frozen=True)
class ProbeCounts:
    interior: int = 1000
    alphas: int = 20
    nt_points: int = 5
    deflation_cases: int = 5
    pairing_pairs: int = 5
    reconstruction_points: int = 10


SUITE_NAMES = (
    "kernel",
    "isomorphism",
    "blaschke",
    "cauchy",
    "boundary",
    "membership",
    "pairing",
    "decay",
    "upgrade",
)

# fixed registry of identity anchors; every record cites one
ANCHORS: dict[str, str] = {
    "kernel.unit-mass": "straddling kernel integrates to one over the curve",
    "kernel.same-side": "kernel with both poles on one side integrates to zero",
    "kernel.two-pole-identity": "product form equals the difference-of-poles form",
    "kernel.bound-constant": "kernel dominated by a scaled Poisson-type bound",
    "isomorphism.contraction": "norm does not grow under the half-plane pushforward",
    "isomorphism.round-trip": "forward and inverse pushforwards compose to identity",
    "isomorphism.inverse-ratio": "inverse pushforward norm ratio recorded finite",
    "blaschke.zeros": "product vanishes exactly at the prescribed zeros",
    "blaschke.interior-modulus": "product modulus below one inside the domain",
    "blaschke.boundary-modulus": "product modulus unimodular at the boundary",
    "blaschke.deflation-order": "deflating zeros cannot shrink the norm",
    "cauchy.interior": "Cauchy integral of the trace reproduces interior values",
    "cauchy.exterior": "Cauchy integral of the trace vanishes below the curve",
    "cauchy.kernel-agreement": "kernel reproduction matches direct evaluation",
    "cauchy.kernel-vs-cauchy": "kernel and Cauchy reproductions agree",
    "boundary.nt-spread": "non-tangential cone values collapse to a limit",
    "boundary.lp-convergence": "shifted traces converge to the boundary trace",
    "membership.trace-pass": "Hardy traces annihilate poles below the curve",
    "membership.pole-control": "non-trace data fails the moment test with margin",
    "pairing.annihilation": "conjugate-exponent trace pairing vanishes",
    "decay.strip-sup": "strip suprema decay along the curve",
    "upgrade.exponent": "trace integrability upgrades the membership exponent",
}


@dataclass(frozen=True)
class ExperimentConfig:
    curve: str | dict = "flat"
    p_values: tuple[float, ...] = (0.5, 1.0, 2.0, 4.0)
    tolerance: float = 1e-7
    tau_grid: TauGridSpec = field(default_factory=TauGridSpec)
    probes: ProbeCounts = field(default_factory=ProbeCounts)
    suites: tuple[str, ...] = SUITE_NAMES
    seed: int = 0
    map_file: str | None = None

    def __post_init__(self) -> None:
        if any(p <= 0 for p in self.p_values):
            raise ConfigError("p values must be positive")
        unknown = set(self.suites) - set(SUITE_NAMES)
        if unknown:
            raise ConfigError(f"unknown suites: {sorted(unknown)}")
        if not self.tolerance > 0:
            raise ConfigError("tolerance must be positive")


def load_config(source) -> ExperimentConfig:
    """Build a config from a dict, a JSON string, or a path to JSON."""
    if isinstance(source, ExperimentConfig):
        return source
    if isinstance(source, (str, Path)) and Path(str(source)).exists():
        data = json.loads(Path(source).read_text())
    elif isinstance(source, str):
        try:
            data = json.loads(source)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
    else:
        data = dict(source)
    try:
        kwargs: dict = {}
        if "curve" in data:
            kwargs["curve"] = data["curve"]
        if "p_values" in data:
            kwargs["p_values"] = tuple(float(p) for p in data["p_values"])
        if "tolerance" in data:
            kwargs["tolerance"] = float(data["tolerance"])
        if "tau_grid" in data:
            tg = data["tau_grid"]
            kwargs["tau_grid"] = TauGridSpec(
                float(tg.get("min", 1e-4)), float(tg.get("max", 1e2)), int(tg.get("count", 25))
            )
        if "probes" in data:
            kwargs["probes"] = ProbeCounts(**{k: int(v) for k, v in data["probes"].items()})
        if "suites" in data:
            kwargs["suites"] = tuple(data["suites"])
        if "seed" in data:
            kwargs["seed"] = int(data["seed"])
        if "map_file" in data:
            kwargs["map_file"] = data["map_file"]
        return ExperimentConfig(**kwargs)
    except (TypeError, ValueError, KeyError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"invalid config: {exc}") from exc


@dataclass(frozen=True)
class Record:
    suite: str
    key: str
    anchor: str
    metric: str
    value: float
    tolerance: float
    passed: bool
    inputs: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class ConvergenceTable:
    kind: str  # "nt" | "lp"
    key: str
    rows: tuple[tuple[float, str, float], ...]  # (radius_or_tau, direction, value)


@dataclass
class ExperimentReport:
    records: list[Record]
    tables: list[ConvergenceTable]
    environment: dict
    config: dict

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)


def _le(suite, key, metric, value, tol, inputs=None) -> Record:
    anchor = ANCHORS[f"{suite}.{key.split('|')[0]}"]
    return Record(suite, key, anchor, metric, float(value), float(tol), bool(value <= tol), inputs or {})


def _ge(suite, key, metric, value, tol, inputs=None) -> Record:
    anchor = ANCHORS[f"{suite}.{key.split('|')[0]}"]
    return Record(suite, key, anchor, metric, float(value), float(tol), bool(value >= tol), inputs or {})


@dataclass(frozen=True)
class SuiteContext:
    graph: LipschitzGraph
    curve_name: str
    cmap: SchwarzChristoffelMap
    config: ExperimentConfig
    rng: np.random.Generator

    def generator_pair(self, p: float):
        f = half_plane_generator(p)
        return f, transform_T_inv(f, p, self.cmap)

    def nonkink_abscissas(self, count: int, lo: float = -2.5, hi: float = 2.5) -> list[float]:
        kinks = self.graph.kink_abscissas
        out: list[float] = []
        grid = np.linspace(lo, hi, count + 2)[1:-1]
        for u in grid:
            nudged = float(u)
            while self.graph.is_kink_abscissa(nudged, tol=1e-9) or any(
                abs(nudged - k) < 0.15 for k in kinks
            ):
                nudged += 0.17
            out.append(nudged)
        return out


# ---------------------------------------------------------------------------
# suites


def _suite_kernel(ctx: SuiteContext) -> tuple[list[Record], list[ConvergenceTable]]:
    g, rng = ctx.graph, ctx.rng
    records = []
    base_points = ctx.nonkink_abscissas(3)
    for tau in (0.1, 1.0, 10.0):
        for u0 in base_points:
            zeta0 = complex(eval_zeta(g, u0))
            val = hp.kernel_normalization(g, zeta0, 1j * tau, tol=2e-9)
            records.append(
                _le(
                    "kernel",
                    f"unit-mass|tau={tau:g}|u0={u0:.3g}",
                    "abs_err",
                    abs(val - 1.0),
                    1e-8,
                    {"tau": tau, "u0": u0, "curve": ctx.curve_name},
                )
            )
    # both displaced points above: mass zero
    u0 = base_points[0]
    zeta0 = complex(eval_zeta(g, u0)) + 2j
    val = hp.kernel_normalization(g, zeta0, 0.5j, tol=2e-9)
    records.append(_le("kernel", "same-side", "abs_val", abs(val), 1e-8, {"u0": u0}))

    # product form vs difference form
    n = max(ctx.config.probes.interior, 10)
    zeta = rng.uniform(-5, 5, n) + 1j * rng.uniform(-5, 5, n)
    zeta0s = rng.uniform(-3, 3, n) + 1j * rng.uniform(-3, 3, n)
    zs = rng.uniform(-2, 2, n) + 1j * rng.uniform(-2, 2, n)
    prod = (zs / (1j * np.pi)) / ((zeta - zeta0s) ** 2 - zs**2)
    diff = (1.0 / (2j * np.pi)) * (
        1.0 / (zeta - (zeta0s + zs)) - 1.0 / (zeta - (zeta0s - zs))
    )
    rel = np.abs(prod - diff) / np.maximum(np.abs(prod), 1e-300)
    records.append(_le("kernel", "two-pole-identity", "max_rel_err", float(np.max(rel)), 1e-13))

    # Poisson-type bound: fitted constant stable in tau
    u0 = base_points[1]
    zeta0 = complex(eval_zeta(g, u0))
    taus = np.geomspace(0.1, 10.0, 7)
    offsets = np.concatenate([np.geomspace(1e-2, 1e2, 60), -np.geomspace(1e-2, 1e2, 60)])
    samples = np.asarray(eval_zeta(g, u0 + offsets))
    fit = hp.kernel_bound_check(g, zeta0, taus, samples)
    per = np.array([c for _, c in fit.per_tau])
    # locally scale-invariant presets keep the fitted constant nearly flat in
    # tau; curves mixing kink scales drift by up to sec(arctan M) between the
    # straight-line and far-wedge regimes, so only boundedness is checked
    scale_invariant = ctx.curve_name in ("flat", "vee")
    records.append(
        _le(
            "kernel",
            "bound-constant|stability",
            "rel_spread",
            float(per.max() / per.min() - 1.0),
            0.05 if scale_invariant else 0.5,
            {"constant": fit.constant, "per_tau": [list(r) for r in fit.per_tau]},
        )
    )
    records.append(_le("kernel", "bound-constant|finite", "constant", fit.constant, 1e3))
    return records, []


def _suite_isomorphism(ctx: SuiteContext) -> tuple[list[Record], list[ConvergenceTable]]:
    g, rng = ctx.graph, ctx.rng
    taus = ctx.config.tau_grid.values()
    tol = ctx.config.tolerance
    records = []
    zs = rng.uniform(-3, 3, 100) + 1j * rng.uniform(0.05, 8.0, 100)
    ws_u = rng.uniform(-3, 3, 50)
    ws = np.asarray(eval_zeta(g, ws_u)) + 1j * rng.uniform(0.1, 6.0, 50)
    for p in ctx.config.p_values:
        f, F = ctx.generator_pair(p)
        TF = transform_T(F, p, ctx.cmap)
        nF = hp.hardy_norm(F, p, g, tau_grid=taus, tol=tol).value
        nTF = hp.hardy_norm(TF, p, None, tau_grid=taus, tol=tol).value
        records.append(
            _le(
                "isomorphism",
                f"contraction|p={p:g}",
                "norm_ratio",
                nTF / nF,
                1.0 + 5e-6,
                {"norm_domain": nF, "norm_half_plane": nTF},
            )
        )
        rt_half = float(np.max(np.abs(TF(zs) - f(zs))))
        F_back = transform_T_inv(transform_T(F, p, ctx.cmap), p, ctx.cmap)
        rt_domain = float(np.max(np.abs(F_back(ws) - F(ws))))
        records.append(
            _le(
                "isomorphism",
                f"round-trip|p={p:g}",
                "max_pointwise_err",
                max(rt_half, rt_domain),
                1e-8,
            )
        )
        nf = hp.hardy_norm(f, p, None, tau_grid=taus, tol=tol).value
        ratio = nF / nf
        records.append(
            Record(
                "isomorphism",
                f"inverse-ratio|p={p:g}",
                ANCHORS["isomorphism.inverse-ratio"],
                "norm_ratio",
                float(ratio),
                math.inf,
                bool(math.isfinite(ratio)),
                {"norm_half_plane": nf},
            )
        )
    return records, []


def _suite_blaschke(ctx: SuiteContext) -> tuple[list[Record], list[ConvergenceTable]]:
    g, rng = ctx.graph, ctx.rng
    records = []
    count = ctx.config.probes.interior

    zero_sets = []
    for _ in range(max(ctx.config.probes.deflation_cases, 1)):
        k = int(rng.integers(1, 4))
        us = rng.uniform(-1.5, 1.5, k)
        heights = rng.uniform(0.6, 2.5, k)
        zero_sets.append([complex(eval_zeta(g, u)) + 1j * h for u, h in zip(us, heights)])

    B = hp.blaschke_domain(zero_sets[0], ctx.cmap)
    zero_err = max(abs(B(w)) for w in zero_sets[0])
    records.append(_le("blaschke", "zeros", "max_abs_at_zero", zero_err, 1e-10))

    us = rng.uniform(-6, 6, count)
    pts = np.asarray(eval_zeta(g, us)) + 1j * rng.uniform(0.02, 8.0, count)
    records.append(
        _le("blaschke", "interior-modulus", "max_abs", float(np.max(np.abs(B(pts)))), 1.0 - 1e-12)
    )
    us_b = rng.uniform(-4, 4, 100)
    near = np.asarray(eval_zeta(g, us_b)) + 1e-6j
    mod = np.abs(B(near))
    records.append(
        _le("blaschke", "boundary-modulus", "max_dev_from_one", float(np.max(np.abs(1.0 - mod))), 1e-4)
    )

    taus = ctx.config.tau_grid.values()
    for i, zeros in enumerate(zero_sets):
        p = [0.5, 1.0, 2.0][i % 3]
        _, G = ctx.generator_pair(p)
        Bz = hp.blaschke_domain(zeros, ctx.cmap)
        F = hp.function_product(Bz, G)
        nF = hp.hardy_norm(F, p, g, tau_grid=taus, tol=ctx.config.tolerance).value
        deflated = hp.deflate_zeros(F, zeros, ctx.cmap)
        nG = hp.hardy_norm(deflated, p, g, tau_grid=taus, tol=ctx.config.tolerance).value
        records.append(
            _le(
                "blaschke",
                f"deflation-order|case={i}",
                "norm_gap",
                nF - nG,
                1e-6,
                {"p": p, "zeros": [[z.real, z.imag] for z in zeros]},
            )
        )
    return records, []


def _suite_cauchy(ctx: SuiteContext) -> tuple[list[Record], list[ConvergenceTable]]:
    g, rng = ctx.graph, ctx.rng
    records = []
    npts = ctx.config.probes.reconstruction_points
    for p in (1.0, 2.0):
        _, F = ctx.generator_pair(p)
        us = rng.uniform(-2.5, 2.5, npts)
        above = np.asarray(eval_zeta(g, us)) + 1j * rng.uniform(0.5, 4.0, npts)
        below = np.asarray(eval_zeta(g, us)) - 1j * rng.uniform(0.5, 4.0, npts)
        rel = 0.0
        for w in above:
            got = hp.cauchy_reconstruct(g, F, complex(w), tol=1e-9)
            want = F(complex(w))
            rel = max(rel, abs(got - want) / abs(want))
        records.append(_le("cauchy", f"interior|p={p:g}", "max_rel_err", rel, 1e-6))
        norm = hp.hardy_norm(F, p, g, tol=ctx.config.tolerance).value
        ext = max(abs(hp.cauchy_reconstruct(g, F, complex(w), tol=1e-9)) for w in below)
        records.append(_le("cauchy", f"exterior|p={p:g}", "abs_over_norm", ext / norm, 1e-6))

        pairs = list(zip(rng.uniform(-2.0, 2.0, npts), rng.uniform(0.3, 3.0, npts)))
        relk = 0.0
        agree = 0.0
        for u0, tau in pairs[: max(npts // 2, 3)]:
            zeta0 = complex(eval_zeta(g, float(u0)))
            got = hp.ktau_reconstruct(g, F, zeta0, float(tau), tol=1e-9)
            want = F(zeta0 + 1j * tau)
            relk = max(relk, abs(got - want) / abs(want))
            via_cauchy = hp.cauchy_reconstruct(g, F, zeta0 + 1j * tau, tol=1e-9)
            agree = max(agree, abs(got - via_cauchy))
        records.append(_le("cauchy", f"kernel-agreement|p={p:g}", "max_rel_err", relk, 1e-6))
        records.append(_le("cauchy", f"kernel-vs-cauchy|p={p:g}", "max_abs_diff", agree, 1e-9))
    return records, []


def _suite_boundary(ctx: SuiteContext) -> tuple[list[Record], list[ConvergenceTable]]:
    g = ctx.graph
    records = []
    tables = []
    _, F = ctx.generator_pair(2.0)
    for u0 in ctx.nonkink_abscissas(ctx.config.probes.nt_points):
        cone = make_cone(g, u0, math.pi / 3)
        radii = [f * cone.safety_radius for f in (0.3, 0.1, 0.03, 0.01)]
        radii.append(min(1e-4, 0.003 * cone.safety_radius))
        res = hp.nontangential_limit(F, cone, radii)
        key = f"nt-spread|u0={u0:.3g}"
        flagged = res.spreads[-1] if res.converged else 1.0
        records.append(
            _le(
                "boundary",
                key,
                "final_spread_flagged",
                flagged,
                1e-3,
                {"u0": u0, "delta": cone.safety_radius, "monotone": res.converged},
            )
        )
        rows = []
        names = ("edge-low", "bisector", "edge-high")
        for r, spread, vals in zip(res.radii, res.spreads, res.values):
            for name, v in zip(names, vals):
                rows.append((float(r), name, float(abs(v))))
            rows.append((float(r), "spread", float(spread)))
        tables.append(ConvergenceTable("nt", key, tuple(rows)))

    tau_list = (0.5, 0.2, 0.08, 0.03, 0.012)
    for p in (0.5, 1.0, 2.0):
        _, Fp = ctx.generator_pair(p)
        tbl = hp.boundary_lp_convergence(Fp, g, p, tau_list, tol=1e-7)
        vals = [v for _, v in tbl]
        worst = max(vals[i + 1] / vals[i] for i in range(len(vals) - 1))
        key = f"lp-convergence|p={p:g}"
        records.append(_le("boundary", key, "max_step_ratio", worst, 1.0 - 1e-9))
        tables.append(
            ConvergenceTable("lp", key, tuple((float(t), f"p={p:g}", float(v)) for t, v in tbl))
        )
    return records, tables


def _suite_membership(ctx: SuiteContext) -> tuple[list[Record], list[ConvergenceTable]]:
    g, rng = ctx.graph, ctx.rng
    records = []
    _, F = ctx.generator_pair(1.0)
    us = rng.uniform(-3.0, 3.0, ctx.config.probes.alphas)
    depths = rng.uniform(0.5, 3.0, ctx.config.probes.alphas)
    alphas = [complex(eval_zeta(g, u)) - 1j * d for u, d in zip(us, depths)]
    res = hp.membership_test(g, F, alphas, tol=1e-7)
    records.append(
        _le(
            "membership",
            "trace-pass",
            "max_moment",
            res.max_moment + (0.0 if res.verdict == "PASS" else 1.0),
            1e-7,
            {"alphas": len(alphas)},
        )
    )

    w_plus = complex(eval_zeta(g, 0.4)) + 1.3j
    control = AnalyticTestFunction(
        evaluator=lambda z, _w=w_plus: 1.0 / (z - _w),
        graph=g,
        decay_exponent=1.0,
        decay_coefficient=2.0,
        decay_start=2.0 * (abs(w_plus) + 1.0),
        trace_evaluator=lambda u, _w=w_plus: 1.0 / (u + 1j * g.height(u) - _w),
        label="interior-pole-control",
    )
    alpha = alphas[0]
    ctrl = hp.membership_test(g, control, [alpha], tol=1e-7)
    oracle = abs(2j * math.pi / (w_plus - alpha))
    records.append(_ge("membership", "pole-control|margin", "abs_moment", ctrl.max_moment, 1e-3))
    records.append(
        _le(
            "membership",
            "pole-control|oracle",
            "abs_err_vs_residue",
            abs(ctrl.max_moment - oracle),
            1e-6,
            {"oracle": oracle},
        )
    )
    return records, []


def _suite_pairing(ctx: SuiteContext) -> tuple[list[Record], list[ConvergenceTable]]:
    g = ctx.graph
    records = []
    pairs = [(2.0, 2.0), (4.0, 4.0 / 3.0), (3.0, 1.5), (1.5, 3.0), (1.0, math.inf)]
    pairs = pairs[: max(ctx.config.probes.pairing_pairs, 1)]
    for p, q in pairs:
        _, F = ctx.generator_pair(p)
        if math.isinf(q):
            alpha = complex(eval_zeta(g, -0.7)) - 1.5j
            G = AnalyticTestFunction(
                evaluator=lambda z, _a=alpha: 1.0 / (z - _a),
                graph=g,
                decay_exponent=1.0,
                decay_coefficient=2.0,
                decay_start=2.0 * (abs(alpha) + 1.0),
                trace_evaluator=lambda u, _a=alpha: 1.0 / (u + 1j * g.height(u) - _a),
                label="bounded-pole-below",
            )
        else:
            _, G = ctx.generator_pair(q)
        val = abs(hp.annihilation_pairing(g, F, G, tol=1e-8))
        records.append(
            _le("pairing", f"annihilation|p={p:g}|q={q:g}", "abs_integral", val, 1e-7)
        )
    return records, []


def _suite_decay(ctx: SuiteContext) -> tuple[list[Record], list[ConvergenceTable]]:
    g = ctx.graph
    records = []
    _, F = ctx.generator_pair(1.0)
    u_grid = [0.0, 3.0, 8.0, 20.0, 50.0, 120.0]
    sup_by_u = []
    for u in u_grid:
        both = hp.strip_decay_probe(F, g, 0.5, 3.0, 0.5, [u, -u])
        sup_by_u.append(max(v for _, v in both))
    worst_step = max(sup_by_u[i + 1] - sup_by_u[i] for i in range(len(sup_by_u) - 1))
    records.append(_le("decay", "strip-sup|monotone", "max_increase", worst_step, 1e-12))
    records.append(
        _le(
            "decay",
            "strip-sup|far-field",
            "far_over_near",
            sup_by_u[-1] / sup_by_u[0],
            1e-3,
            {"u_far": u_grid[-1]},
        )
    )
    return records, []


def _suite_upgrade(ctx: SuiteContext) -> tuple[list[Record], list[ConvergenceTable]]:
    g = ctx.graph
    records = []
    _, F = ctx.generator_pair(1.0)
    verdict, norm = hp.hp_upgrade_check(F, g, 1.0, 2.0, tol=ctx.config.tolerance)
    records.append(
        _le(
            "upgrade",
            "exponent|positive",
            "verdict_mismatch",
            0.0 if verdict == "PASS" else 1.0,
            0.5,
            {"q_norm": norm},
        )
    )
    # boundary-singular control on the flat curve: slice norms blow up near it
    flat = preset_graph("flat")
    neg = AnalyticTestFunction(
        evaluator=lambda z: z ** (-0.5) * (z + 1j) ** (-2.0),
        graph=None,
        decay_exponent=2.5,
        decay_coefficient=1.0,
        decay_start=2.0,
        label="boundary-singular-control",
    )
    verdict2, _ = hp.hp_upgrade_check(neg, flat, 1.0, 4.0, tol=ctx.config.tolerance)
    records.append(
        _le(
            "upgrade",
            "exponent|negative-control",
            "verdict_mismatch",
            0.0 if verdict2 == "FAIL" else 1.0,
            0.5,
        )
    )
    return records, []


_SUITE_FUNCS: dict[str, Callable] = {
    "kernel": _suite_kernel,
    "isomorphism": _suite_isomorphism,
    "blaschke": _suite_blaschke,
    "cauchy": _suite_cauchy,
    "boundary": _suite_boundary,
    "membership": _suite_membership,
    "pairing": _suite_pairing,
    "decay": _suite_decay,
    "upgrade": _suite_upgrade,
}


# ---------------------------------------------------------------------------
# runner


def _resolve_graph(config: ExperimentConfig) -> tuple[LipschitzGraph, str]:
    if isinstance(config.curve, str):
        return preset_graph(config.curve), config.curve
    try:
        return load_graph(config.curve), "custom"
    except Exception as exc:
        raise ConfigError(f"invalid curve: {exc}") from exc


def run(config: ExperimentConfig | dict | str) -> ExperimentReport:
    """Execute the selected suites; per-suite failures are recorded, never
    abort the remaining suites."""
    config = load_config(config)
    graph, curve_name = _resolve_graph(config)
    if config.map_file:
        cmap = load_map(json.loads(Path(config.map_file).read_text()), graph)
    else:
        cmap = sc_solve(graph)

    started = time.monotonic()
    selected = [s for s in SUITE_NAMES if s in config.suites]

    def run_suite(item):
        index, name = item
        ctx = SuiteContext(
            graph=graph,
            curve_name=curve_name,
            cmap=cmap,
            config=config,
            rng=np.random.default_rng([config.seed, index]),
        )
        try:
            return _SUITE_FUNCS[name](ctx)
        except Exception as exc:  # recorded, not fatal
            rec = Record(
                suite=name,
                key="suite-error",
                anchor=f"suite {name} raised",
                metric="exception",
                value=math.inf,
                tolerance=0.0,
                passed=False,
                inputs={"error": f"{type(exc).__name__}: {exc}"},
            )
            return [rec], []

    indexed = [(SUITE_NAMES.index(s), s) for s in selected]
    if len(indexed) > 1:
        with ThreadPoolExecutor(max_workers=min(4, len(indexed))) as pool:
            outcomes = list(pool.map(run_suite, indexed))
    else:
        outcomes = [run_suite(item) for item in indexed]

    records: list[Record] = []
    tables: list[ConvergenceTable] = []
    for recs, tabs in outcomes:
        records.extend(recs)
        tables.extend(tabs)
    records.sort(key=lambda r: (r.suite, r.key, r.metric))
    tables.sort(key=lambda t: (t.kind, t.key))

    env = {
        "version": __version__,
        "seed": config.seed,
        "wall_time": round(time.monotonic() - started, 3),
    }
    cfg_dict = json.loads(json.dumps(asdict(config), default=str))
    return ExperimentReport(records=records, tables=tables, environment=env, config=cfg_dict)


# ---------------------------------------------------------------------------
# emission


def emit_csv(report: ExperimentReport, path) -> None:
    """One row per record: suite, anchor, metric, value, tolerance, pass."""
    lines = ["suite,anchor,metric,value,tolerance,pass"]
    for r in report.records:
        metric = f"{r.key}.{r.metric}" if r.key else r.metric
        lines.append(
            f"{r.suite},{r.anchor.replace(',', ';')},{metric},{r.value!r},{r.tolerance!r},{str(r.passed).lower()}"
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def emit_convergence_plotdata(report: ExperimentReport, path) -> None:
    """Long-form CSV for the limit tables: series, radius_or_tau, direction,
    value; the radius column decreases within each series."""
    lines = ["series,radius_or_tau,direction,value"]
    for t in report.tables:
        rows = sorted(t.rows, key=lambda row: (-row[0], row[1]))
        for x, direction, v in rows:
            lines.append(f"{t.kind}:{t.key},{x!r},{direction},{v!r}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_report_json(report: ExperimentReport, path) -> None:
    payload = {
        "environment": report.environment,
        "config": report.config,
        "passed": report.passed,
        "records": [asdict(r) for r in report.records],
        "tables": [
            {"kind": t.kind, "key": t.key, "rows": [list(row) for row in t.rows]}
            for t in report.tables
        ],
    }
    Path(path).write_text(json.dumps(payload, indent=2, default=str) + "\n", encoding="utf-8")
