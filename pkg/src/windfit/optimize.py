"""Nelder-Mead simplex minimization."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

REFLECT = 1.0
EXPAND = 2.0
CONTRACT = 0.5
SHRINK = 0.5


@dataclass(frozen=True)
class SimplexResult:
    x: np.ndarray
    fun: float
    converged: bool
    iterations: int
    evaluations: int
    restarts: int = 0


def _initial_simplex(x0: np.ndarray, step: np.ndarray) -> np.ndarray:
    simplex = np.tile(x0, (x0.size + 1, 1))
    for i in range(x0.size):
        simplex[i + 1, i] += step[i]
    return simplex


def _run(
    f: Callable[[np.ndarray], float],
    x0: np.ndarray,
    step: np.ndarray,
    tol: float,
    max_iter: int,
) -> SimplexResult:
    n = x0.size
    simplex = _initial_simplex(x0, step)
    fvals = np.array([f(v) for v in simplex])
    evals = n + 1
    converged = False
    iterations = 0
    while True:
        order = np.argsort(fvals, kind="stable")
        simplex, fvals = simplex[order], fvals[order]
        # diameter measured from the best vertex, max-norm
        if np.max(np.abs(simplex[1:] - simplex[0])) <= tol:
            converged = True
            break
        if iterations >= max_iter:
            break
        iterations += 1

        centroid = simplex[:-1].mean(axis=0)
        worst = simplex[-1]
        xr = centroid + REFLECT * (centroid - worst)
        fr = f(xr)
        evals += 1
        if fr < fvals[0]:
            xe = centroid + EXPAND * (xr - centroid)
            fe = f(xe)
            evals += 1
            if fe < fr:
                simplex[-1], fvals[-1] = xe, fe
            else:
                simplex[-1], fvals[-1] = xr, fr
            continue
        if fr < fvals[-2]:
            simplex[-1], fvals[-1] = xr, fr
            continue
        if fr < fvals[-1]:
            xc = centroid + CONTRACT * (xr - centroid)
            fc = f(xc)
            evals += 1
            if fc <= fr:
                simplex[-1], fvals[-1] = xc, fc
                continue
        else:
            xc = centroid + CONTRACT * (worst - centroid)
            fc = f(xc)
            evals += 1
            if fc < fvals[-1]:
                simplex[-1], fvals[-1] = xc, fc
                continue
        simplex[1:] = simplex[0] + SHRINK * (simplex[1:] - simplex[0])
        fvals[1:] = [f(v) for v in simplex[1:]]
        evals += n
    return SimplexResult(
        x=simplex[0].copy(),
        fun=float(fvals[0]),
        converged=converged,
        iterations=iterations,
        evaluations=evals,
    )


def nelder_mead(
    f: Callable[[np.ndarray], float],
    x0: Sequence[float],
    step: float | Sequence[float] = 0.1,
    tol: float = 1e-9,
    max_iter: int = 20_000,
    restarts: int = 1,
) -> SimplexResult:
    """Minimize ``f`` starting from ``x0``.

    Converges when every vertex lies within ``tol`` (max-norm) of the best one.
    The search is then restarted ``restarts`` times from the best point with a
    fresh simplex, which guards against collapse onto a non-stationary point;
    the reported ``converged`` flag belongs to the last run.  ``max_iter``
    limits each run separately.
    """
    x = np.asarray(x0, dtype=float).copy()
    steps = np.broadcast_to(np.asarray(step, dtype=float), x.shape).copy()
    result = _run(f, x, steps, tol, max_iter)
    iterations, evaluations = result.iterations, result.evaluations
    for _ in range(restarts):
        # the old best is vertex 0 of the new simplex, so this never loses ground
        result = _run(f, result.x, steps, tol, max_iter)
        iterations += result.iterations
        evaluations += result.evaluations
    return SimplexResult(
        x=result.x,
        fun=result.fun,
        converged=result.converged,
        iterations=iterations,
        evaluations=evaluations,
        restarts=restarts,
    )
