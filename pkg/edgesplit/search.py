"""One-dimensional search helpers."""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass

INV_PHI = (math.sqrt(5) - 1) / 2  # 1 / phi
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2  # 1 / phi^2


@dataclass(frozen=True)
class SearchResult:
    """Outcome of a bracketed maximisation."""

    argmax: float
    maximum: float
    evaluations: int


def golden_section_max(
    func: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float,
) -> SearchResult:
    """Maximise a unimodal function on [lo, hi] by golden-section search.

    The bracket is shrunk until it is no wider than ``tol``. Both endpoints
    are evaluated too, so a maximum sitting on the boundary is returned
    exactly rather than approximated from inside. Ties go to the smaller
    argument.
    """
    lo, hi = min(lo, hi), max(lo, hi)
    f_lo = func(lo)
    f_hi = func(hi)
    evaluations = 2
    best_x, best_f = (lo, f_lo) if f_lo >= f_hi else (hi, f_hi)

    h = hi - lo
    if h <= tol:
        return SearchResult(best_x, best_f, evaluations)

    # Required steps to achieve tolerance
    steps = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))

    a, b = lo, hi
    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    yc = func(c)
    yd = func(d)
    evaluations += 2

    for _ in range(steps - 1):
        if yc >= yd:
            b = d
            d = c
            yd = yc
            h = INV_PHI * h
            c = a + INV_PHI_SQUARE * h
            yc = func(c)
        else:
            a = c
            c = d
            yc = yd
            h = INV_PHI * h
            d = a + INV_PHI * h
            yd = func(d)
        evaluations += 1

    inner_x, inner_f = (c, yc) if yc >= yd else (d, yd)
    if inner_f > best_f or (inner_f == best_f and inner_x < best_x):
        best_x, best_f = inner_x, inner_f
    return SearchResult(best_x, best_f, evaluations)


def bisect_sign_change(
    func: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float,
) -> float:
    """Locate a sign change of ``func`` inside [lo, hi] to width ``tol``.

    ``func(lo)`` and ``func(hi)`` must have opposite signs.
    """
    f_lo = func(lo)
    sign_lo = math.copysign(1.0, f_lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        f_mid = func(mid)
        if f_mid == 0.0:
            return mid
        if math.copysign(1.0, f_mid) == sign_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
