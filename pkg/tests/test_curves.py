"""Tests for the performance curve families and 1-D search helpers."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from edgesplit.curves import (
    BlendCurve,
    ExpSaturationBlend,
    ExpSaturationCurve,
    IdentityBlend,
    LogSaturationCurve,
    PowerBlend,
    QuadraticCurve,
    TabulatedCurve,
    blend_curve_from_config,
    uplink_curve_from_config,
)
from edgesplit.search import bisect_sign_change, golden_section_max


class TestGoldenSection:
    """Tests for golden_section_max."""

    def test_interior_maximum(self) -> None:
        """Test an interior peak is located to the tolerance."""
        result = golden_section_max(lambda x: -((x - 0.3) ** 2), 0.0, 1.0, 1e-10)
        assert result.argmax == pytest.approx(0.3, abs=1e-9)
        assert result.maximum == pytest.approx(0.0, abs=1e-15)

    def test_boundary_maximum_is_exact(self) -> None:
        """Test a maximum on the right end is returned exactly."""
        result = golden_section_max(lambda x: x, 2.0, 5.0, 1e-8)
        assert result.argmax == 5.0
        assert result.maximum == 5.0

    def test_flat_function_prefers_smaller_argument(self) -> None:
        """Test ties go to the smaller argument."""
        result = golden_section_max(lambda x: 1.0, 0.0, 1.0, 1e-6)
        assert result.argmax == 0.0

    def test_narrow_bracket(self) -> None:
        """Test a bracket already narrower than the tolerance is not searched."""
        result = golden_section_max(lambda x: x, 1.0, 1.0 + 1e-12, 1e-6)
        assert result.evaluations == 2
        assert result.argmax == 1.0 + 1e-12

    def test_reversed_bracket(self) -> None:
        """Test bounds given in reverse order."""
        result = golden_section_max(lambda x: -abs(x - 2.0), 3.0, 1.0, 1e-9)
        assert result.argmax == pytest.approx(2.0, abs=1e-8)


class TestBisect:
    """Tests for bisect_sign_change."""

    def test_root(self) -> None:
        """Test the root of a line is found to the tolerance."""
        root = bisect_sign_change(lambda x: x - 0.7, 0.0, 1.0, 1e-12)
        assert root == pytest.approx(0.7, abs=1e-12)

    def test_decreasing_function(self) -> None:
        """Test a sign change from positive to negative."""
        root = bisect_sign_change(lambda x: 1.0 - x * x, 0.0, 3.0, 1e-12)
        assert root == pytest.approx(1.0, abs=1e-11)


class TestQuadraticCurve:
    """Tests for QuadraticCurve."""

    def test_evaluate(self) -> None:
        """Test scalar and array evaluation."""
        g = QuadraticCurve(0.5, 0.3, 0.1)
        assert float(g(0.0)) == 0.5
        assert float(g(1.0)) == pytest.approx(0.7)
        np.testing.assert_allclose(g(np.array([0.0, 0.5])), [0.5, 0.625])

    def test_argmax_clipped(self) -> None:
        """Test the vertex 1.5 is clipped to 1."""
        assert QuadraticCurve(0.5, 0.3, 0.1).argmax() == 1.0

    def test_argmax_interior(self) -> None:
        """Test an interior vertex."""
        assert QuadraticCurve(0.2, 0.4, 0.5).argmax() == pytest.approx(0.4)

    def test_argmax_linear(self) -> None:
        """Test linear curves peak at an end."""
        assert QuadraticCurve(0.5, 0.2).argmax() == 1.0
        assert QuadraticCurve(0.5, -0.2).argmax() == 0.0
        assert QuadraticCurve(0.6, 0.0).argmax() == 0.0

    def test_concave(self) -> None:
        """Test the midpoint concavity test passes."""
        assert QuadraticCurve(0.5, 0.3, 0.1).concavity_defect() <= 1e-12

    def test_convex_detected(self) -> None:
        """Test a convex quadratic has a positive defect."""
        assert QuadraticCurve(0.5, 0.3, -0.1).concavity_defect() > 1e-9


class TestSaturationCurves:
    """Tests for the log and exponential saturation families."""

    def test_log_saturation_ends(self) -> None:
        """Test g(0) = m0 and g(1) = m0 + a."""
        g = LogSaturationCurve(m0=0.3, a=0.4, k=9.0)
        assert float(g(0.0)) == pytest.approx(0.3)
        assert float(g(1.0)) == pytest.approx(0.7)
        assert g.argmax() == 1.0

    def test_exp_saturation_ends(self) -> None:
        """Test g(0) = m0 and g(1) = m0 + a(1 - e^-k)."""
        g = ExpSaturationCurve(m0=0.2, a=0.5, k=3.0)
        assert float(g(0.0)) == pytest.approx(0.2)
        assert float(g(1.0)) == pytest.approx(0.2 + 0.5 * (1 - math.exp(-3.0)))

    @pytest.mark.parametrize(
        "curve",
        [LogSaturationCurve(0.3, 0.4, 50.0), ExpSaturationCurve(0.2, 0.5, 8.0)],
    )
    def test_concave(self, curve: LogSaturationCurve | ExpSaturationCurve) -> None:
        """Test both families pass the concavity test."""
        assert curve.concavity_defect() <= 1e-12


class TestTabulatedCurve:
    """Tests for TabulatedCurve."""

    def test_interpolation(self) -> None:
        """Test straight lines between points."""
        g = TabulatedCurve(((0.0, 0.5), (0.5, 0.7), (1.0, 0.8)))
        assert float(g(0.25)) == pytest.approx(0.6)
        assert float(g(0.75)) == pytest.approx(0.75)

    def test_nonconcave_points(self) -> None:
        """Test slopes 0.2 then 0.6 are flagged."""
        g = TabulatedCurve(((0.0, 0.5), (0.5, 0.6), (1.0, 0.9)))
        assert g.concavity_defect() == pytest.approx(0.4)

    def test_two_points_always_concave(self) -> None:
        """Test a single segment has no concavity defect."""
        assert TabulatedCurve(((0.0, 0.1), (1.0, 0.9))).concavity_defect() < 0

    def test_argmax_at_peak_point(self) -> None:
        """Test the maximiser is the highest point."""
        g = TabulatedCurve(((0.0, 0.5), (0.4, 0.8), (1.0, 0.6)))
        assert g.argmax() == 0.4
        assert g.value_range() == (0.5, 0.8)


class TestBlendCurves:
    """Tests for the fusion blend families."""

    @pytest.mark.parametrize(
        "phi",
        [PowerBlend(2.0), PowerBlend(0.5), ExpSaturationBlend(3.0), IdentityBlend()],
    )
    def test_end_points(self, phi: BlendCurve) -> None:
        """Test phi(0) = 0 and phi(1) = 1 exactly."""
        assert float(phi(0.0)) == 0.0
        assert float(phi(1.0)) == 1.0

    def test_square_is_increasing(self) -> None:
        """Test phi(u) = u^2 is strictly increasing."""
        assert PowerBlend(2.0).smallest_step() > 0

    def test_exp_saturation_values(self) -> None:
        """Test the normalised saturation formula."""
        phi = ExpSaturationBlend(2.0)
        expected = (1 - math.exp(-1.0)) / (1 - math.exp(-2.0))
        assert float(phi(0.5)) == pytest.approx(expected)


class TestFromConfig:
    """Tests for building curves from document form."""

    def test_round_trip_uplink(self) -> None:
        """Test as_config feeds back into the factory."""
        for curve in (
            QuadraticCurve(0.5, 0.3, 0.1),
            LogSaturationCurve(0.3, 0.4, 9.0),
            ExpSaturationCurve(0.2, 0.5, 3.0),
            TabulatedCurve(((0.0, 0.5), (1.0, 0.7))),
        ):
            assert uplink_curve_from_config(curve.as_config()) == curve

    def test_round_trip_blend(self) -> None:
        """Test blend curves rebuild from their document form."""
        for phi in (PowerBlend(2.0), ExpSaturationBlend(3.0), IdentityBlend()):
            assert blend_curve_from_config(phi.as_config()) == phi


@settings(max_examples=50, deadline=None)
@given(
    a=st.floats(0.0, 0.4),
    c=st.floats(0.0, 0.4),
    d=st.floats(0.0, 0.4),
    pairs=st.lists(
        st.tuples(st.floats(0.0, 1.0), st.floats(0.0, 1.0)), min_size=1, max_size=50
    ),
)
def test_quadratic_midpoint_concavity(
    a: float, c: float, d: float, pairs: list[tuple[float, float]]
) -> None:
    """Test g((r1+r2)/2) >= (g(r1)+g(r2))/2 - 1e-9 on random pairs."""
    g = QuadraticCurve(a, c, d)
    for r1, r2 in pairs:
        mid = float(g(0.5 * (r1 + r2)))
        assert mid >= 0.5 * (float(g(r1)) + float(g(r2))) - 1e-9
