"""
One-dimensional maximization helpers.
"""

import math
from typing import Callable, Tuple

from src.config.constants import GOLDEN_SECTION_TOLERANCE

INV_PHI = (math.sqrt(5) - 1) / 2  # 1 / phi
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2  # 1 / phi^2


def golden_section_max(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = GOLDEN_SECTION_TOLERANCE,
) -> Tuple[float, float]:
    """
    Golden-section search for the maximum of a unimodal function on [a, b].

    Args:
        f: Objective function
        a: Left end of the bracket
        b: Right end of the bracket
        tol: Final bracket width

    Returns:
        (x, f(x)) at the best of the two endpoints and the bracket midpoint
    """
    a, b = min(a, b), max(a, b)
    h = b - a
    if h <= tol:
        x = 0.5 * (a + b)
        return x, f(x)

    # Required steps to achieve tolerance
    n = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))

    lo, hi = a, b
    c = lo + INV_PHI_SQUARE * h
    d = lo + INV_PHI * h
    yc = f(c)
    yd = f(d)

    for _ in range(n - 1):
        if yc > yd:
            hi = d
            d = c
            yd = yc
            h = INV_PHI * h
            c = lo + INV_PHI_SQUARE * h
            yc = f(c)
        else:
            lo = c
            c = d
            yc = yd
            h = INV_PHI * h
            d = lo + INV_PHI * h
            yd = f(d)

    # Boundary maxima never get sampled by the interior evaluations
    candidates = [(x, f(x)) for x in (a, 0.5 * (lo + hi), b)]
    return max(candidates, key=lambda item: item[1])
