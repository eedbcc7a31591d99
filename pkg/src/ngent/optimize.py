"""Multi-start derivative-free local search."""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial

import numpy as np
from scipy.optimize import minimize

from .errors import OptimizationError


@dataclass
class StartOutcome:
    x0: np.ndarray
    x: np.ndarray
    fun: float
    nfev: int


@dataclass
class MultiStartResult:
    x: np.ndarray
    fun: float
    nfev: int
    starts: list = field(default_factory=list)

    @property
    def per_start_values(self) -> list[float]:
        return [s.fun for s in self.starts]


def _simplex(x0, step, bounds):
    n = x0.size
    simplex = np.tile(x0, (n + 1, 1))
    for i in range(n):
        lo, hi = bounds[i] if bounds is not None else (None, None)
        s = step
        if hi is not None and x0[i] + s > hi:
            s = -step
        if lo is not None and x0[i] + s < lo:
            s = 0.5 * (hi - x0[i]) if hi is not None else step
        simplex[i + 1, i] += s
    return simplex


def local_search(fun, x0, *, bounds, max_evals, fatol, xatol, simplex_step) -> StartOutcome:
    """Nelder-Mead, restarted from its own result until it stops improving.

    Restarts rebuild a fresh simplex, which counters the simplex collapse
    that stalls plain Nelder-Mead on kinked objectives. Restart simplices
    shrink; once they stop helping, one full-size restart must also fail
    before the point is accepted.
    """
    x = np.asarray(x0, dtype=float)
    best, used, step = np.inf, 0, simplex_step
    probed = False
    while used < max_evals:
        res = minimize(
            fun,
            x,
            method="Nelder-Mead",
            bounds=bounds,
            options={
                "maxfev": max_evals - used,
                "fatol": fatol,
                "xatol": xatol,
                "initial_simplex": _simplex(x, step, bounds),
                "adaptive": True,
            },
        )
        used += int(res.nfev)
        improved = best - float(res.fun)
        if float(res.fun) < best:
            best, x = float(res.fun), np.asarray(res.x)
        if improved > fatol:
            step = max(0.2 * step, 10 * xatol)
            probed = False
        elif probed or step == simplex_step:
            break
        else:
            step, probed = simplex_step, True
    return StartOutcome(np.asarray(x0, dtype=float), x, best, used)


def multistart_minimize(
    fun,
    starts,
    *,
    bounds=None,
    max_evals: int = 2000,
    fatol: float = 1e-7,
    xatol: float = 1e-6,
    simplex_step: float = 0.3,
    feasible_below: float = np.inf,
    workers: int = 1,
) -> MultiStartResult:
    """Run a restarted Nelder-Mead from every start and keep the lowest value.

    ``max_evals`` is the budget per start. Starts whose final value is not
    below ``feasible_below`` count as failed; if all fail an
    ``OptimizationError`` is raised. With ``workers > 1`` starts run in
    separate processes; results do not depend on the worker count.
    """
    run = partial(
        local_search, fun, bounds=bounds, max_evals=max_evals, fatol=fatol, xatol=xatol, simplex_step=simplex_step
    )
    starts = list(starts)
    if workers > 1 and len(starts) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(starts))) as pool:
            outcomes = list(pool.map(run, starts))
    else:
        outcomes = [run(x0) for x0 in starts]
    nfev = sum(o.nfev for o in outcomes)
    ok = [o for o in outcomes if o.fun < feasible_below]
    if not ok:
        raise OptimizationError(f"all {len(outcomes)} starts ended in the infeasible region")
    best = min(ok, key=lambda o: o.fun)
    return MultiStartResult(best.x, best.fun, nfev, outcomes)
