"""Bisection with bracket expansion for the monotone scalar solves.

All constraint inversions in the toolkit (flow from pressure, flow from pump
power, plenum pressure from total flow) have residuals monotone in the
unknown, so plain bisection is robust; speed is irrelevant at these sizes.
"""

from __future__ import annotations

from typing import Callable

from .errors import InfeasibleError

MAX_ITER = 200
REL_TOL = 1e-9
MAX_EXPANSIONS = 120


def bisect_monotone(func: Callable[[float], float], target: float,
                    guess: float, what: str = "target",
                    rel_tol: float = REL_TOL,
                    max_iter: int = MAX_ITER) -> float:
    """Solve func(x) = target for x > 0 with func strictly monotone.

    Brackets by repeated doubling/halving from ``guess``, then bisects until
    the residual normalized by the target magnitude drops below ``rel_tol``
    (absolute tolerance on the normalized residual) or the interval
    collapses. Raises InfeasibleError when no bracket exists within the
    expansion budget.
    """
    if guess <= 0:
        raise InfeasibleError(f"{what}: need a positive initial guess")
    scale = abs(target) if target != 0 else 1.0

    f_guess = func(guess)
    if abs(f_guess - target) <= rel_tol * scale:
        return guess
    probe = func(guess * 1.25)
    increasing = probe >= f_guess

    # grow the side of the bracket that still misses the target
    lo, hi = guess, guess
    f_lo = f_hi = f_guess
    for _ in range(MAX_EXPANSIONS):
        if (f_lo - target) * (f_hi - target) <= 0 and lo < hi:
            break
        need_higher_x = (f_hi < target) == increasing
        if need_higher_x:
            hi *= 2.0
            f_hi = func(hi)
        else:
            lo *= 0.5
            f_lo = func(lo)
    else:
        raise InfeasibleError(f"{what}: could not bracket the target")

    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        f_mid = func(mid)
        if abs(f_mid - target) <= rel_tol * scale:
            return mid
        if (f_lo - target) * (f_mid - target) <= 0:
            hi = mid
        else:
            lo, f_lo = mid, f_mid
        if hi - lo <= 1e-15 * mid:
            return mid
    return 0.5 * (lo + hi)
