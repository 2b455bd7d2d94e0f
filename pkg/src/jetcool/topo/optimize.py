"""Projected-gradient descent with move limits and a volume constraint."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ..errors import InvalidInputError
from .grid import DensityField
from .objective import gradient, objective
from .problem import TopoProblem
from .solver import StokesOperator

MOVE_LIMIT = 0.2
BACKTRACK_TRIES = 10
FLAT_REL_TOL = 1e-6
FLAT_RUN = 5


class HistoryRow(NamedTuple):
    iteration: int
    J: float
    J1: float
    J2: float
    volume: float


@dataclass
class OptimizeResult:
    eps: DensityField
    history: list[HistoryRow]
    status: str                      # converged | max_iters | stationary
    warnings: tuple[str, ...] = ()

    @property
    def objective_values(self) -> list[float]:
        return [row.J for row in self.history]


def _project(candidate: np.ndarray, previous: np.ndarray,
             volume_fraction: float, move_limit: float) -> np.ndarray:
    """Project onto {move limit} ∩ {box} ∩ {volume}: the volume constraint is
    met by bisecting an additive shift before the combined clip, so all three
    hold simultaneously at the returned point."""
    lo_bound = np.maximum(previous - move_limit, 0.0)
    hi_bound = np.minimum(previous + move_limit, 1.0)
    clipped = np.clip(candidate, lo_bound, hi_bound)
    if clipped.mean() <= volume_fraction + 1e-15:
        return clipped
    lo, hi = -1.0, 0.0   # additive shift; -1 empties the field entirely
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        vol = np.clip(candidate + mid, lo_bound, hi_bound).mean()
        if vol > volume_fraction:
            hi = mid
        else:
            lo = mid
    return np.clip(candidate + lo, lo_bound, hi_bound)


def optimize(problem: TopoProblem, eps0: DensityField | None = None,
             max_iters: int = 100, move_limit: float = MOVE_LIMIT,
             q_schedule: tuple[float, ...] = ()) -> OptimizeResult:
    """Minimize the weighted objective over the density field.

    Steps are accepted only when J decreases (halving backtracking); the box
    and volume constraints hold at every accepted iterate; terminates on
    max_iters, on |dJ|/J < 1e-6 over 5 consecutive iterations, or with a
    warning when no descent step exists at the smallest trial step.

    A non-empty q_schedule runs a penalization continuation (e.g. (0.01,
    0.1)): each stage starts from the previous stage's design, sharpening
    intermediate densities toward 0/1.
    """
    if q_schedule:
        import dataclasses
        eps = eps0
        histories: list[HistoryRow] = []
        offset = 0
        result = None
        for q in q_schedule:
            stage = dataclasses.replace(problem, q=q)
            result = optimize(stage, eps, max_iters=max_iters,
                              move_limit=move_limit)
            histories.extend(HistoryRow(r.iteration + offset, r.J, r.J1,
                                        r.J2, r.volume)
                             for r in result.history)
            offset += len(result.history)
            eps = result.eps
        return OptimizeResult(eps=result.eps, history=histories,
                              status=result.status, warnings=result.warnings)
    grid = problem.grid
    if eps0 is None:
        eps0 = DensityField.uniform(grid, problem.volume_fraction)
    if eps0.eps.shape != (grid.nx, grid.ny):
        raise InvalidInputError(
            f"eps0 shape {eps0.eps.shape} != grid {(grid.nx, grid.ny)}")

    op = StokesOperator(grid, problem.mu)
    eps = _project(eps0.eps, eps0.eps, problem.volume_fraction, 1.0)

    def evaluate(e: np.ndarray):
        field = DensityField(e)
        sol = op.solve(problem.alpha(e).ravel(), problem.body_force)
        return field, sol, objective(problem, field, sol)

    field, sol, val = evaluate(eps)
    history = [HistoryRow(0, val.J, val.J1, val.J2, float(eps.mean()))]
    warnings: list[str] = []
    status = "max_iters"
    flat = 0

    for it in range(1, max_iters + 1):
        grad = gradient(problem, field, sol)
        g_max = float(np.abs(grad).max())
        if g_max == 0.0:
            status = "converged"
            break
        step = move_limit / g_max
        accepted = False
        for _ in range(BACKTRACK_TRIES):
            cand = _project(eps - step * grad, eps,
                            problem.volume_fraction, move_limit)
            if np.array_equal(cand, eps):
                step *= 0.5
                continue
            c_field, c_sol, c_val = evaluate(cand)
            if c_val.J < val.J:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            # converged-with-warning: no descent step at the smallest trial
            status = "stationary"
            warnings.append("no_descent_step_available")
            break
        rel_drop = abs(val.J - c_val.J) / max(abs(val.J), 1e-300)
        eps, field, sol, val = cand, c_field, c_sol, c_val
        history.append(HistoryRow(it, val.J, val.J1, val.J2, float(eps.mean())))
        flat = flat + 1 if rel_drop < FLAT_REL_TOL else 0
        if flat >= FLAT_RUN:
            status = "converged"
            break

    return OptimizeResult(eps=DensityField(eps), history=history,
                          status=status, warnings=tuple(warnings))
