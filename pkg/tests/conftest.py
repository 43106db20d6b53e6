"""Pytest fixtures for edgesplit tests."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np
import pytest
from dotenv import load_dotenv

from edgesplit.model import ProblemInstance
from edgesplit.scenarios import quadratic, reference_channel

from .common import build

# Load environment variables from .env file
load_dotenv()


@pytest.fixture
def reference_document() -> dict[str, Any]:
    """Single-level reference channel document: q=8, g = 0.5 + 0.3 rho - 0.1 rho^2."""
    return reference_channel()


@pytest.fixture
def reference_instance(reference_document: dict[str, Any]) -> ProblemInstance:
    """Validated single-level reference channel instance."""
    return build(reference_document)


@pytest.fixture
def two_level_document() -> dict[str, Any]:
    """Reference channel with a second level q=16 and M_max = T*B*S_d/b."""
    return reference_channel(
        [
            (8.0, quadratic(0.5, 0.3, 0.1)),
            (16.0, quadratic(0.5, 0.5, 0.2)),
        ],
        M_max=1.25e6,
    )


@pytest.fixture
def two_level_instance(two_level_document: dict[str, Any]) -> ProblemInstance:
    """Validated two-level instance whose level boundaries cross."""
    return build(two_level_document)


@pytest.fixture
def interior_instance() -> ProblemInstance:
    """Reference channel at B=1e5, where the optimum is interior."""
    return build(reference_channel(B=1e5))


@pytest.fixture
def degenerate_document() -> dict[str, Any]:
    """Positive parameters whose downlink capacity underflows to zero."""
    return reference_channel(B=5e-324, S_d=1e-10)


@pytest.fixture
def instance_file(tmp_path: Path, reference_document: dict[str, Any]) -> Path:
    """Reference channel document written to disk."""
    path = tmp_path / "reference_channel.json"
    path.write_text(json.dumps(reference_document), encoding="utf-8")
    return path


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded random generator."""
    return np.random.default_rng(20240601)
