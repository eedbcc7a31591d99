"""Entanglement witnesses: E, E_NG, the hierarchy level d, and the NOON witness.

E_NG is the smallest trace norm of the partial transpose found over the
seven-parameter effective Gaussian family. Reported values are best-found
minima of a multi-start local search, not certified global optima.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import ValidationError
from .fock import MixedState, PureState, State, TruncationPolicy, _as_policy, edge_mass, partial_transpose, trace_norm
from .gaussian import GaussianParams7, effective_family
from .optimize import multistart_minimize
from .states import noon

D_GUARD = 1e-6
PENALTY = 1e3


@dataclass(frozen=True)
class OptimizerConfig:
    n_starts: int = 32
    seed: int = 0
    max_evals: int = 2000
    obj_tol: float = 1e-7
    x_tol: float = 1e-6
    r_max: float = 2.0
    init_r_width: float = 0.5
    simplex_step: float = 0.3
    include_identity_start: bool = True
    pad_pure: int = 10
    pad_mixed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.n_starts < 1:
            raise ValidationError("n_starts must be >= 1")
        if self.max_evals < 1:
            raise ValidationError("max_evals must be >= 1")
        if self.r_max <= 0:
            raise ValidationError("r_max must be positive")
        if self.pad_pure < 0 or self.pad_mixed < 0:
            raise ValidationError("padding must be nonnegative")

    def starts(self, extra=()) -> list[np.ndarray]:
        """Identity (optional), then caller-supplied, then seeded random starts."""
        rng = np.random.default_rng(self.seed)
        out = [np.zeros(7)] if self.include_identity_start else []
        out += [_as_array(p) for p in extra]
        width = min(self.init_r_width, self.r_max)
        while len(out) < max(self.n_starts, 1):
            x = np.empty(7)
            x[:6] = rng.uniform(0, 2 * np.pi, 6)
            x[6] = rng.uniform(-width, width)
            out.append(x)
        return out

    def bounds(self):
        return [(None, None)] * 6 + [(-self.r_max, self.r_max)]


def _as_array(p) -> np.ndarray:
    return p.to_array() if isinstance(p, GaussianParams7) else np.asarray(p, dtype=float)


@dataclass
class WitnessResult:
    value: float
    best_params: GaussianParams7
    d: int
    evals: int
    per_start_values: list = field(default_factory=list)
    raw_value: float = float("nan")
    leakage: float = 0.0

    def to_dict(self) -> dict:
        out = asdict(self)
        out["best_params"] = self.best_params.to_array().tolist()
        return out


# --- E ------------------------------------------------------------------

def pure_trace_norm_pt(C: np.ndarray) -> float:
    """``||(|psi><psi|)^{T_A}||_1 = (sum of Schmidt coefficients)^2``."""
    return float(np.sum(np.linalg.svd(C, compute_uv=False)) ** 2)


def witness_E(state: State) -> float:
    if isinstance(state, PureState):
        return pure_trace_norm_pt(state.coeffs)
    return trace_norm(partial_transpose(state))


def dimension_d(value: float) -> int:
    if not value >= 1 - 1e-9:
        raise ValidationError(f"witness value {value} is below 1")
    return max(1, math.ceil(value - D_GUARD))


def learning_bound(d: int, D: int) -> int:
    """Lower bound on real parameters needed to learn a pure state of level d."""
    if not 1 <= d <= D:
        raise ValidationError(f"need 1 <= d <= D, got d={d}, D={D}")
    return 2 * d * (2 * D - d) - 2


# --- E_NG ---------------------------------------------------------------

def _density_factor(rho: np.ndarray) -> np.ndarray:
    w, V = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    keep = w > 1e-14 * max(w[-1], 1.0)
    return V[:, keep] * np.sqrt(w[keep])


def embed_columns(X: np.ndarray, D: int, pad: int) -> np.ndarray:
    """Zero-pad two-mode column vectors from D to D + pad levels per mode."""
    if pad == 0:
        return X
    k = X.shape[1]
    Dp = D + pad
    out = np.zeros((Dp, Dp, k), dtype=complex)
    out[:D, :D] = X.reshape(D, D, k)
    return out.reshape(Dp * Dp, k)


class _ENGObjective:
    """Trace norm of the partial transpose after the family unitary, with a leakage screen.

    The family acts in a working space padded by ``pad`` levels per mode, which
    keeps truncation artifacts of strong squeezers away from the state.
    """

    def __init__(self, state: State, pre_unitary=None, pad: int = 0):
        self.pure = isinstance(state, PureState)
        X = state.vector.reshape(-1, 1) if self.pure else _density_factor(state.rho)
        if pre_unitary is not None:
            X = np.asarray(pre_unitary) @ X
        self.D = state.dim + pad
        self.X = embed_columns(X, state.dim, pad)
        self.leak_tol = state.trunc.leak_tol
        self.family = effective_family(self.D)

    def transformed(self, x) -> np.ndarray:
        return self.family.apply(x, self.X)

    def evaluate(self, x) -> tuple[float, float]:
        D = self.D
        Y = self.transformed(x)
        pops = np.sum(np.abs(Y) ** 2, axis=1).reshape(D, D)
        lk = edge_mass(pops)
        if self.pure:
            val = pure_trace_norm_pt(Y.reshape(D, D))
        else:
            val = trace_norm(partial_transpose(Y @ Y.conj().T, D))
        return val, lk

    def __call__(self, x) -> float:
        val, lk = self.evaluate(x)
        if lk > self.leak_tol:
            return PENALTY * (1.0 + lk)
        return val


def witness_ENG(
    state: State,
    cfg: OptimizerConfig | None = None,
    *,
    extra_starts=(),
    pre_unitary=None,
) -> WitnessResult:
    """Best-found minimum of ``||(U rho U^dag)^{T_A}||_1`` over the effective family.

    ``pre_unitary`` composes a fixed unitary before the family, so the search
    runs over ``U(p) @ pre_unitary``. Parameter points whose transformed state
    leaks beyond ``state.trunc.leak_tol`` are rejected.
    """
    cfg = cfg or OptimizerConfig()
    pad = cfg.pad_pure if isinstance(state, PureState) else cfg.pad_mixed
    obj = _ENGObjective(state, pre_unitary, pad)
    res = multistart_minimize(
        obj,
        cfg.starts(extra_starts),
        bounds=cfg.bounds(),
        max_evals=cfg.max_evals,
        fatol=cfg.obj_tol,
        xatol=cfg.x_tol,
        simplex_step=cfg.simplex_step,
        feasible_below=PENALTY,
        workers=cfg.workers,
    )
    raw, lk = obj.evaluate(res.x)
    value = max(1.0, raw)
    return WitnessResult(
        value=value,
        best_params=GaussianParams7.from_array(res.x).wrapped(),
        d=dimension_d(value),
        evals=res.nfev,
        per_start_values=res.per_start_values,
        raw_value=raw,
        leakage=lk,
    )


def core_state(state: PureState, params: GaussianParams7, pad: int = 0) -> PureState:
    """The state after the (best-found) family unitary, in the padded working space."""
    D = state.dim + pad
    C = embed_columns(state.vector.reshape(-1, 1), state.dim, pad).reshape(D, D)
    C = effective_family(D).apply_pure(params, C)
    return PureState(C / np.linalg.norm(C), TruncationPolicy(D, state.trunc.leak_tol))


# --- NOON-type witness --------------------------------------------------

def _noon_indices(N: int, D: int) -> tuple[int, int]:
    if not 1 <= N <= D - 1:
        raise ValidationError(f"NOON order N={N} needs 1 <= N <= D-1 = {D - 1}")
    return N, N * D  # |0,N>, |N,0>


def noon_witness_f(state: State, N: int) -> float:
    """``Tr[F rho]`` with F the NOON projector-plus-coherences operator."""
    i, j = _noon_indices(N, state.dim)
    if isinstance(state, PureState):
        v = state.vector
        block = np.outer(v[[i, j]], v[[i, j]].conj())
    else:
        block = state.rho[np.ix_([i, j], [i, j])]
    return float(0.5 * np.real(block.sum()))


def fG_bounds(N: int) -> tuple[float, float]:
    if N < 1:
        raise ValidationError("N must be >= 1")
    return max(0.5, 2.0 ** (1 - N) * math.comb(N, N // 2)), 1.0


@dataclass
class ThresholdResult:
    value: float
    raw_value: float
    best_params: GaussianParams7
    evals: int
    per_start_values: list = field(default_factory=list)


class _TopSchmidtObjective:
    def __init__(self, psi: PureState, pad: int = 0):
        self.D = psi.dim + pad
        self.C = embed_columns(psi.vector.reshape(-1, 1), psi.dim, pad).reshape(self.D, self.D)
        self.leak_tol = psi.trunc.leak_tol
        self.family = effective_family(self.D)

    def evaluate(self, x) -> tuple[float, float]:
        C = self.family.apply_pure(x, self.C)
        return float(np.linalg.norm(C, 2) ** 2), edge_mass(np.abs(C) ** 2)

    def __call__(self, x) -> float:
        val, lk = self.evaluate(x)
        if lk > self.leak_tol:
            return PENALTY * (1.0 + lk)
        return -val


def fG_search(N: int, cfg: OptimizerConfig | None = None, trunc=None) -> ThresholdResult:
    cfg = cfg or OptimizerConfig()
    trunc = _as_policy(trunc if trunc is not None else TruncationPolicy(max(N + 6, 12)))
    obj = _TopSchmidtObjective(noon(N, trunc), cfg.pad_pure)
    res = multistart_minimize(
        obj,
        cfg.starts(),
        bounds=cfg.bounds(),
        max_evals=cfg.max_evals,
        fatol=cfg.obj_tol,
        xatol=cfg.x_tol,
        simplex_step=cfg.simplex_step,
        feasible_below=PENALTY,
        workers=cfg.workers,
    )
    raw, _ = obj.evaluate(res.x)
    lo, hi = fG_bounds(N)
    return ThresholdResult(
        value=float(np.clip(raw, lo, hi)),
        raw_value=raw,
        best_params=GaussianParams7.from_array(res.x).wrapped(),
        evals=res.nfev,
        per_start_values=[-v for v in res.per_start_values],
    )


def noon_threshold_fG(N: int, cfg: OptimizerConfig | None = None, trunc=None) -> float:
    """Largest squared top Schmidt coefficient of ``U|NOON_N>`` found over the family."""
    return fG_search(N, cfg, trunc).value
