__all__ = ["eoc"]

import math

from src.exceptions import InvalidArgument


def eoc(errors: list[float], levels: list[int] | None = None) -> list[float | None]:
    """
    Experimental orders of convergence log2(e_prev / e_L) / (L - prev) under halving of h and tau.

    `levels` defaults to consecutive levels. The first level has no predecessor and gets None.
    """
    for level, error in enumerate(errors):
        if not error > 0 or not math.isfinite(error):
            raise InvalidArgument(f"Errors must be positive and finite, got {error} at level {level}")
    if levels is None:
        levels = list(range(len(errors)))
    if len(levels) != len(errors):
        raise InvalidArgument(f"Got {len(errors)} errors for {len(levels)} levels")
    if any(fine <= coarse for coarse, fine in zip(levels, levels[1:])):
        raise InvalidArgument(f"Levels must be strictly increasing, got {levels}")
    return [None] + [
        math.log2(e_coarse / e_fine) / (l_fine - l_coarse)
        for e_coarse, e_fine, l_coarse, l_fine in zip(errors, errors[1:], levels, levels[1:])
    ]
