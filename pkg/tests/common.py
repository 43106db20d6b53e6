"""Helpers shared by the edgesplit tests."""

from __future__ import annotations

from typing import Any

import numpy as np

from edgesplit.config import parse_instance, validate_instance
from edgesplit.model import ProblemInstance
from edgesplit.scenarios import random_instance


def build(document: dict[str, Any]) -> ProblemInstance:
    """Parse and validate an instance document."""
    return validate_instance(parse_instance(document))


def random_validated(seed: int, max_levels: int = 4) -> ProblemInstance:
    """Validated random instance drawn from ``seed``."""
    return build(random_instance(np.random.default_rng(seed), max_levels))
