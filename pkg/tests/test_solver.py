"""Tests for the allocation solver."""

from __future__ import annotations

import logging
from typing import Any

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from edgesplit.config import SolverOptions, parse_instance, validate_instance
from edgesplit.envelope import build_envelope
from edgesplit.model import DomainError, ProblemInstance, check_feasible
from edgesplit.oracle import GridSpec, brute_force, grid_tolerance
from edgesplit.scenarios import reference_channel
from edgesplit.solver import AllocationResult, objective, solve

from .common import build, random_validated


class TestObjective:
    """Tests for objective."""

    def test_zero_parameters(self, reference_instance: ProblemInstance) -> None:
        """Test f(0, L(0)) = mAP_pre."""
        envelope = build_envelope(reference_instance)
        assert objective(0.0, envelope, reference_instance.fusion) == 0.4

    def test_full_model(self, reference_instance: ProblemInstance) -> None:
        """Test f(M_max, L(M_max)) = L(M_max) when the model fits."""
        envelope = build_envelope(reference_instance)
        value = objective(1e6, envelope, reference_instance.fusion)
        assert value == envelope.evaluate(1e6).value

    def test_half_model(self, reference_instance: ProblemInstance) -> None:
        """Test 0.4 + 0.3 * 0.5 = 0.55 for the identity blend."""
        envelope = build_envelope(reference_instance)
        value = objective(5e5, envelope, reference_instance.fusion)
        assert value == pytest.approx(0.55)

    def test_outside_domain(self, reference_instance: ProblemInstance) -> None:
        """Test M beyond M_hi is a domain error."""
        envelope = build_envelope(reference_instance)
        with pytest.raises(DomainError):
            objective(1.5e6, envelope, reference_instance.fusion)


class TestSolve:
    """Tests for solve."""

    def test_reference_channel(self, reference_instance: ProblemInstance) -> None:
        """Test the whole model is sent with full upload at q=8."""
        result = solve(reference_instance)
        assert result.m_opt == 1e6
        assert result.m_opt_int == 1_000_000
        assert result.q_opt == 8.0
        assert result.rho_opt == 1.0
        assert result.t_d_opt == pytest.approx(8.0)
        assert result.t_u_opt == pytest.approx(2.0)
        assert result.map_opt == pytest.approx(0.7)
        assert result.map_star_opt == pytest.approx(0.7)
        assert not result.diagnostics.no_downlink
        assert result.diagnostics.map_at_ceil == pytest.approx(0.7)

    def test_unlimited_bandwidth(self) -> None:
        """Test with slack constraints the optimum is M_max at rho_best."""
        result = solve(build(reference_channel(B=1e12)))
        assert result.m_opt == 1e6
        assert result.rho_opt == 1.0
        assert result.map_opt == pytest.approx(0.7)

    def test_interior_optimum(self, interior_instance: ProblemInstance) -> None:
        """Test a falling envelope gives an interior optimum the grid agrees with."""
        result = solve(interior_instance)
        assert 25_000 < result.m_opt < 125_000
        assert result.diagnostics.envelope_below_pre is False

        grid = GridSpec(400, 400)
        oracle = brute_force(interior_instance, grid)
        tolerance = grid_tolerance(interior_instance, grid)
        assert oracle.best.map_value <= result.map_opt + 1e-6
        assert oracle.best.map_value >= result.map_opt - tolerance

    def test_interior_is_stationary(self, interior_instance: ProblemInstance) -> None:
        """Test nearby parameter counts do no better."""
        result = solve(interior_instance)
        envelope = build_envelope(interior_instance)
        fusion = interior_instance.fusion
        for delta in (-500.0, -50.0, 50.0, 500.0):
            assert objective(result.m_opt + delta, envelope, fusion) <= (
                result.map_opt + 1e-12
            )

    def test_time_split(self, interior_instance: ProblemInstance) -> None:
        """Test T_d carries exactly M_opt parameters and T_u takes the rest."""
        result = solve(interior_instance)
        params = interior_instance.params
        capacity = params.bandwidth * params.downlink_efficiency
        assert result.t_d_opt == pytest.approx(
            result.m_opt * params.param_bits / capacity
        )
        assert result.t_u_opt + result.t_d_opt == pytest.approx(params.total_time)

    def test_floor_report(self, interior_instance: ProblemInstance) -> None:
        """Test the integer report brackets the continuous optimum."""
        result = solve(interior_instance)
        diagnostics = result.diagnostics
        assert result.m_opt_int <= result.m_opt < result.m_opt_int + 1
        assert diagnostics.map_at_floor is not None
        assert diagnostics.map_at_floor <= result.map_opt + 1e-12
        assert diagnostics.floor_delta == pytest.approx(
            result.map_opt - diagnostics.map_at_floor
        )

    def test_two_levels(self, two_level_instance: ProblemInstance) -> None:
        """Test the solver stays on the envelope with two levels."""
        result = solve(two_level_instance)
        envelope = build_envelope(two_level_instance)
        assert result.map_star_opt == pytest.approx(
            envelope.evaluate(result.m_opt).value, abs=1e-9
        )
        assert check_feasible(
            result.m_opt,
            result.rho_opt,
            result.q_opt,
            result.t_u_opt,
            result.t_d_opt,
            two_level_instance,
        )

    def test_no_downlink(self, degenerate_document: dict[str, Any]) -> None:
        """Test an empty domain returns M=0 and mAP_pre with a flag."""
        instance = validate_instance(parse_instance(degenerate_document))
        result = solve(instance)
        assert result.diagnostics.no_downlink
        assert result.m_opt == 0.0
        assert result.map_opt == 0.4
        assert result.t_u_opt == 10.0
        assert result.t_d_opt == 0.0

    def test_envelope_below_pre_warns(
        self, caplog: pytest.LogCaptureFixture
    ) -> None:
        """Test a warning when the envelope dips under mAP_pre."""
        instance = build(reference_channel(B=1e5, map_pre=0.6))
        with caplog.at_level(logging.WARNING):
            result = solve(instance)
        assert result.diagnostics.envelope_below_pre
        assert "below mAP_pre" in caplog.text

    def test_deterministic(self, two_level_instance: ProblemInstance) -> None:
        """Test identical inputs give identical results."""
        assert solve(two_level_instance) == solve(two_level_instance)

    def test_options(self, interior_instance: ProblemInstance) -> None:
        """Test coarser sampling still finds the optimum."""
        fine = solve(interior_instance)
        coarse = solve(interior_instance, SolverOptions(segment_samples=8))
        assert coarse.map_opt == pytest.approx(fine.map_opt, abs=1e-9)

    def test_result_dict_round_trip(self, two_level_instance: ProblemInstance) -> None:
        """Test the JSON form uses the published names and rebuilds the result."""
        result = solve(two_level_instance)
        data = result.as_dict()
        assert list(data) == [
            "M_opt",
            "M_opt_int",
            "q_opt",
            "rho_opt",
            "T_u_opt",
            "T_d_opt",
            "mAP_star_opt",
            "mAP_opt",
            "diagnostics",
        ]
        assert AllocationResult.from_dict(data) == result


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_random_instances(seed: int) -> None:
    """Test feasibility, the boundary property and grid agreement."""
    instance = random_validated(seed)
    result = solve(instance)
    envelope = build_envelope(instance)

    assert check_feasible(
        result.m_opt,
        result.rho_opt,
        result.q_opt,
        result.t_u_opt,
        result.t_d_opt,
        instance,
    )
    assert abs(result.map_star_opt - envelope.evaluate(result.m_opt).value) <= 1e-9
    assert result.t_u_opt + result.t_d_opt == pytest.approx(
        instance.params.total_time, rel=1e-12
    )

    grid = GridSpec(200, 200)
    oracle = brute_force(instance, grid)
    tolerance = grid_tolerance(instance, grid)
    assert result.map_opt >= oracle.best.map_value - 1e-6
    assert result.map_opt <= oracle.best.map_value + tolerance + 1e-6


def test_bandwidth_sweep_is_monotone() -> None:
    """Test mAP_opt never falls as bandwidth grows."""
    values = [
        solve(build(reference_channel(B=float(b)))).map_opt
        for b in np.geomspace(5e4, 4e6, 20)
    ]
    assert all(b >= a - 1e-9 for a, b in zip(values, values[1:], strict=False))
    assert values[-1] > values[0]
