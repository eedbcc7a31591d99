"""Parameter and time scans producing flat rows for CSV output."""
from __future__ import annotations

import csv
import io

import numpy as np

from .distillation import DEFAULT_M_GRID, optimize_distillation
from .dynamics import IntegratorConfig, KerrParams, LossParams, PurePropagator, kerr_hamiltonian, lindblad_trajectory
from .errors import ValidationError
from .fock import TruncationPolicy, _as_policy, leakage, to_density
from .states import vacuum
from .witnesses import OptimizerConfig, fG_bounds, fG_search, witness_E, witness_ENG

KERR_COLUMNS = ["chi", "delta_a", "t", "kappa_a", "E", "E_NG", "d", "leakage", "evals"]
LOSS_COLUMNS = ["gamma_l", "t", "E", "E_NG", "d", "E_distilled", "leakage"]
NOON_COLUMNS = ["N", "f_G", "lower_bound", "upper_bound", "raw_value", "evals"]


def time_grid(t_max: float = 2.0, step: float = 0.1) -> list[float]:
    if t_max < 0 or step <= 0:
        raise ValidationError("need t_max >= 0 and step > 0")
    n = int(round(t_max / step))
    return [round(k * step, 10) for k in range(n + 1)]


def _warm(previous) -> tuple:
    return () if previous is None else (previous,)


def kerr_scan(
    chis,
    deltas,
    *,
    t: float = 1.0,
    kappa_a: float = 1.0,
    trunc=TruncationPolicy(20),
    cfg: OptimizerConfig | None = None,
) -> list[dict]:
    """E and E_NG of the pure squeezed-Kerr state over a (chi, delta) grid."""
    cfg = cfg or OptimizerConfig()
    trunc = _as_policy(trunc)
    psi0 = vacuum(trunc)
    rows = []
    for chi in chis:
        for delta in deltas:
            p = KerrParams(delta_a=float(delta), chi=float(chi), kappa_a=kappa_a)
            psi = PurePropagator(kerr_hamiltonian(p, trunc)).evolve(t, psi0)
            res = witness_ENG(psi, cfg)
            rows.append(
                {
                    "chi": float(chi),
                    "delta_a": float(delta),
                    "t": t,
                    "kappa_a": kappa_a,
                    "E": witness_E(psi),
                    "E_NG": res.value,
                    "d": res.d,
                    "leakage": leakage(psi),
                    "evals": res.evals,
                }
            )
    return rows


def pure_kerr_series(
    params: KerrParams, times, *, trunc=TruncationPolicy(20), cfg: OptimizerConfig | None = None, chain: bool = True
) -> list[dict]:
    """E(t) and E_NG(t) for the closed evolution from vacuum.

    With ``chain`` on, the best parameters at each time seed the search at the next.
    """
    cfg = cfg or OptimizerConfig()
    trunc = _as_policy(trunc)
    prop = PurePropagator(kerr_hamiltonian(params, trunc))
    psi0, prev, rows = vacuum(trunc), None, []
    for t in times:
        psi = prop.evolve(t, psi0)
        res = witness_ENG(psi, cfg, extra_starts=_warm(prev))
        prev = res.best_params if chain else None
        rows.append(
            {"gamma_l": 0.0, "t": float(t), "E": witness_E(psi), "E_NG": res.value, "d": res.d,
             "E_distilled": None, "leakage": leakage(psi), "params": res.best_params}
        )
    return rows


def eng_peak_search(states: dict, cfg: OptimizerConfig, *, coarse_step: float = 0.2, warm: dict | None = None) -> dict:
    """E_NG on a coarse subset of ``states`` (keyed by time), refined around the maximum.

    Evaluates every ``coarse_step`` first, then keeps adding grid neighbours of
    the current best time until both are evaluated. Each search is seeded with
    the best parameters of the previously evaluated time and ``warm[t]`` if given.
    Returns ``{t: WitnessResult}`` for the evaluated times only.
    """
    times = sorted(states)
    if not times:
        return {}
    spacing = min(np.diff(times)) if len(times) > 1 else 1.0
    stride = max(1, int(round(coarse_step / spacing)))
    order = times[::stride]
    if order[-1] != times[-1]:
        order.append(times[-1])
    warm = warm or {}
    done: dict = {}
    last = None

    def evaluate(t):
        nonlocal last
        seeds = [p for p in (last, warm.get(t)) if p is not None]
        done[t] = witness_ENG(states[t], cfg, extra_starts=seeds)
        last = done[t].best_params

    for t in order:
        evaluate(t)
    while True:
        best = max(done, key=lambda t: done[t].value)
        i = times.index(best)
        todo = [times[j] for j in (i - 1, i + 1) if 0 <= j < len(times) and times[j] not in done]
        if not todo:
            return done
        last = done[best].best_params
        for t in todo:
            evaluate(t)


def loss_scan(
    gammas,
    times,
    *,
    params: KerrParams = KerrParams(0.0, 1.0, 1.0),
    trunc=TruncationPolicy(20),
    cfg: OptimizerConfig | None = None,
    integrator: IntegratorConfig | None = None,
    eng_times=None,
    eng_peak_only: bool = False,
    distill_dim: int | None = None,
    distill_cfg: OptimizerConfig | None = None,
    m_grid=DEFAULT_M_GRID,
) -> list[dict]:
    """E, E_NG and optionally distilled E along the lossy trajectory, per loss rate.

    E_NG is computed at ``eng_times`` (default: all times), or only around its
    maximum with ``eng_peak_only``; other rows carry ``None``. Searches are
    warm-started from neighbouring times. Distillation inputs are regenerated
    at ``distill_dim`` levels per mode.
    """
    cfg = cfg or OptimizerConfig()
    trunc = _as_policy(trunc)
    times = [float(t) for t in times]
    eng_set = set(times if eng_times is None else (float(t) for t in eng_times))
    rows = []
    for gamma in gammas:
        loss = LossParams.equal(float(gamma))
        H = kerr_hamiltonian(params, trunc)
        traj = lindblad_trajectory(H, loss, to_density(vacuum(trunc)), times, integrator)
        small = None
        if distill_dim is not None:
            ts = TruncationPolicy(distill_dim, leak_tol=1.0)
            small = lindblad_trajectory(
                kerr_hamiltonian(params, ts), loss, to_density(vacuum(ts)), times, integrator
            )
        if eng_peak_only:
            eng = eng_peak_search(dict(zip(times, traj)), cfg)
        else:
            eng = {}
            prev = None
            for t, rho in zip(times, traj):
                if t in eng_set:
                    eng[t] = witness_ENG(rho, cfg, extra_starts=_warm(prev))
                    prev = eng[t].best_params
        for i, (t, rho) in enumerate(zip(times, traj)):
            res = eng.get(t)
            rows.append(
                {
                    "gamma_l": float(gamma),
                    "t": t,
                    "E": witness_E(rho),
                    "E_NG": None if res is None else res.value,
                    "d": None if res is None else res.d,
                    "E_distilled": None if small is None else optimize_distillation(
                        small[i], distill_cfg or cfg, m_grid
                    ).E_out,
                    "leakage": leakage(rho),
                }
            )
    return rows


def noon_threshold_table(n_min: int, n_max: int, cfg: OptimizerConfig | None = None, dim: int | None = None):
    if not 1 <= n_min <= n_max:
        raise ValidationError("need 1 <= n_min <= n_max")
    rows = []
    for N in range(n_min, n_max + 1):
        trunc = None if dim is None else TruncationPolicy(dim)
        res = fG_search(N, cfg, trunc)
        lo, hi = fG_bounds(N)
        rows.append({"N": N, "f_G": res.value, "lower_bound": lo, "upper_bound": hi,
                     "raw_value": res.raw_value, "evals": res.evals})
    return rows


def peak(rows: list[dict], key: str) -> tuple[float, float]:
    """(argmax t, max value) of ``key`` over rows where it is defined."""
    pts = [(r[key], r["t"]) for r in rows if r[key] is not None]
    if not pts:
        raise ValidationError(f"no values for {key!r}")
    val, t = max(pts)
    return t, val


def rows_to_csv(rows: list[dict], columns: list[str], header_lines=()) -> str:
    """CSV text with stable column order; ``header_lines`` become leading ``#`` comments."""
    buf = io.StringIO()
    for line in header_lines:
        buf.write(f"# {line}\n")
    w = csv.DictWriter(buf, fieldnames=columns, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: _fmt(r.get(k)) for k in columns})
    return buf.getvalue()


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return v


__all__ = [
    "KERR_COLUMNS",
    "LOSS_COLUMNS",
    "NOON_COLUMNS",
    "kerr_scan",
    "eng_peak_search",
    "loss_scan",
    "noon_threshold_table",
    "peak",
    "pure_kerr_series",
    "rows_to_csv",
    "time_grid",
]
