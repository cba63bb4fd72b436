import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hardylip.curve import (
    Cone,
    GeometryError,
    LipschitzGraph,
    Side,
    arc_measure_density,
    classify,
    eval_zeta,
    graph_to_dict,
    load_graph,
    make_cone,
    shifted_point,
    signed_height,
)


class TestEvalZeta:
    def test_flat_identity(self, flat):
        assert eval_zeta(flat, 2.0) == 2.0 + 0.0j

    def test_vee_absolute_value(self, vee):
        assert eval_zeta(vee, -3.0) == -3.0 + 3.0j

    def test_interpolation_between_breakpoints(self):
        g = LipschitzGraph(((-1.0, 0.0), (0.0, 1.0), (1.0, 0.0)), -1.0, 1.0)
        assert eval_zeta(g, 0.5) == pytest.approx(0.5 + 0.5j)

    def test_vectorized(self, vee):
        u = np.array([-1.0, 0.0, 2.0])
        np.testing.assert_allclose(eval_zeta(vee, u), [-1 + 1j, 0j, 2 + 2j])


class TestArcMeasureDensity:
    def test_flat_is_one(self, flat):
        assert arc_measure_density(flat, 1.23) == 1.0

    def test_vee_sqrt_two(self, vee):
        assert arc_measure_density(vee, 2.0) == pytest.approx(math.sqrt(2.0))

    def test_upper_bound_attained_on_steepest_segment(self):
        g = LipschitzGraph(((0.0, 0.0), (1.0, 3.0)), 0.5, 0.5)
        assert g.lipschitz_bound == 3.0
        assert arc_measure_density(g, 0.5) == pytest.approx(math.sqrt(10.0))

    def test_kink_gives_right_limit_and_flag(self, vee):
        assert arc_measure_density(vee, 0.0) == pytest.approx(math.sqrt(2.0))
        assert vee.is_kink_abscissa(0.0)
        assert not vee.is_kink_abscissa(0.5)

    def test_bounds_hold_everywhere(self, threekink, rng):
        u = rng.uniform(-20, 20, 1000)
        d = arc_measure_density(threekink, u)
        assert np.all(d >= 1.0)
        assert np.all(d <= math.sqrt(1.0 + threekink.lipschitz_bound**2) + 1e-15)


class TestClassify:
    def test_above(self, flat):
        assert classify(flat, 1j) is Side.ABOVE

    def test_below(self, vee):
        assert classify(vee, 1.0 + 0.5j) is Side.BELOW

    def test_on(self, vee):
        assert classify(vee, 1.0 + 1.0j) is Side.ON

    def test_shifted_curve_points(self, threekink, rng):
        u = rng.uniform(-5, 5, 300)
        zeta = eval_zeta(threekink, u)
        assert np.all(signed_height(threekink, zeta + 1e-6j) > 0)
        assert np.all(signed_height(threekink, zeta - 1e-6j) < 0)


class TestShiftedPoint:
    def test_basic(self):
        assert shifted_point(1 + 1j, 2.0) == 1 + 3j

    def test_zero_shift(self):
        assert shifted_point(0.7, 0.0) == 0.7

    @given(
        st.complex_numbers(max_magnitude=1e6, allow_nan=False, allow_infinity=False),
        st.floats(-1e6, 1e6),
        st.floats(-1e6, 1e6),
    )
    def test_additivity(self, w, t1, t2):
        assert shifted_point(shifted_point(w, t1), t2) == shifted_point(w, t1 + t2)


@settings(max_examples=50, deadline=None)
@given(
    knots=st.lists(
        st.tuples(st.floats(-10, 10), st.floats(-5, 5)), min_size=1, max_size=5
    ),
    slopes=st.tuples(st.floats(-3, 3), st.floats(-3, 3)),
    u1=st.floats(-30, 30),
    u2=st.floats(-30, 30),
)
def test_lipschitz_parametrization_bound(knots, slopes, u1, u2):
    us = sorted(set(round(u, 6) for u, _ in knots))
    if len(us) < 1:
        return
    bps = tuple((u, a) for u, (_, a) in zip(us, knots))
    g = LipschitzGraph(bps, slopes[0], slopes[1])
    bound = math.sqrt(1.0 + g.lipschitz_bound**2) * abs(u1 - u2)
    assert abs(complex(eval_zeta(g, u1)) - complex(eval_zeta(g, u2))) <= bound * (1 + 1e-12) + 1e-12


class TestGraphValidation:
    def test_rejects_unsorted(self):
        with pytest.raises(GeometryError):
            LipschitzGraph(((1.0, 0.0), (0.0, 1.0)), 0.0, 0.0)

    def test_rejects_empty(self):
        with pytest.raises(GeometryError):
            LipschitzGraph((), 0.0, 0.0)

    def test_tight_bound_recomputed(self):
        g = LipschitzGraph(((0.0, 0.0), (2.0, 1.0)), 0.25, -0.125)
        assert g.lipschitz_bound == 0.5

    def test_kink_detection(self, threekink):
        assert threekink.kink_abscissas == (-1.0, 0.0, 1.0)
        turns = threekink.kink_turnings
        expected = 2.0 * math.atan(0.75)
        assert turns[0] == pytest.approx(expected)
        assert turns[1] == pytest.approx(-expected)
        assert turns[2] == pytest.approx(expected)


class TestMakeCone:
    def test_flat_cone_hits_cap(self, flat):
        cone = make_cone(flat, 0.0, math.pi / 4)
        assert cone.tangent_angle == 0.0
        assert cone.safety_radius == 100.0

    def test_vee_cone_truncated_by_kink(self, vee):
        cone = make_cone(vee, 1.0, math.pi / 3)
        assert cone.tangent_angle == pytest.approx(math.pi / 4)
        assert 0.0 < cone.safety_radius < 10.0

    def test_rejects_kink_vertex(self, vee):
        with pytest.raises(GeometryError):
            make_cone(vee, 0.0, math.pi / 4)

    def test_rejects_bad_aperture(self, vee):
        with pytest.raises(GeometryError):
            make_cone(vee, 1.0, 0.0)
        with pytest.raises(GeometryError):
            make_cone(vee, 1.0, math.pi / 2)

    @pytest.mark.parametrize("u0", [-1.6666666666666665, -0.5, 0.17, 0.75, 2.4])
    @pytest.mark.parametrize("aperture", [math.pi / 8, math.pi / 4, math.pi / 3])
    def test_rejection_sampling_both_sides(self, threekink, u0, aperture, rng):
        cone = make_cone(threekink, u0, aperture)
        z = cone.sample_displacements(rng, 10_000)
        assert np.all(signed_height(threekink, cone.vertex + z) > 0)
        assert np.all(signed_height(threekink, cone.vertex - z) < 0)

    def test_wide_cone_on_vee_still_valid(self, vee, rng):
        # every aperture admits a positive safety radius at a non-kink point
        cone = make_cone(vee, 1.0, math.pi / 8)
        z = cone.sample_displacements(rng, 10_000)
        assert np.all(signed_height(vee, cone.vertex + z) > 0)
        assert np.all(signed_height(vee, cone.vertex - z) < 0)


class TestJsonInterface:
    def test_round_trip(self, threekink, tmp_path):
        d = graph_to_dict(threekink)
        g2 = load_graph(d)
        assert g2 == threekink
        path = tmp_path / "curve.json"
        import json

        path.write_text(json.dumps(d))
        g3 = load_graph(path)
        assert g3 == threekink
        assert g3.lipschitz_bound == 0.75

    def test_rejects_malformed(self):
        with pytest.raises(GeometryError):
            load_graph({"breakpoints": [[0, 0], [0, 1]], "left_slope": 0, "right_slope": 0})
        with pytest.raises(GeometryError):
            load_graph({"left_slope": 0.0})
