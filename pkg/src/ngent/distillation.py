"""Two-copy Gaussian distillation with equal-outcome homodyne conditioning.

Copy 1 of the input lives on modes (A, C), copy 2 on (B, D). Alice applies
``U`` to (A, B) and Bob applies the same ``U`` to (C, D); both then project
their second mode (B and D) onto the quadrature eigenfunctional ``<m_phi|``.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .errors import NumericalError, ValidationError
from .fock import MixedState
from .gaussian import entangling_unitary
from .optimize import multistart_minimize
from .witnesses import OptimizerConfig, witness_E

WEIGHT_FLOOR = 1e-12
PENALTY = 1e3
DEFAULT_M_GRID = tuple(np.round(np.arange(-3.0, 3.0 + 1e-9, 0.5), 10))


def hermite_functions(m: float, D: int) -> np.ndarray:
    """``psi_n(m) = pi^(-1/4) (2^n n!)^(-1/2) H_n(m) exp(-m^2/2)`` for n < D."""
    psi = np.zeros(D)
    psi[0] = np.pi**-0.25 * np.exp(-0.5 * m * m)
    if D > 1:
        psi[1] = np.sqrt(2.0) * m * psi[0]
    for n in range(1, D - 1):
        psi[n + 1] = np.sqrt(2.0 / (n + 1)) * m * psi[n] - np.sqrt(n / (n + 1)) * psi[n - 1]
    return psi


def homodyne_functional(phi: float, m: float, D: int) -> np.ndarray:
    """Components ``<m_phi|n>`` of the rotated-quadrature eigenfunctional.

    ``M(phi) = cos(phi) X + sin(phi) P = R(phi) X R(phi)^dag`` with
    ``R(phi) = exp(-i phi n)``, hence ``<m_phi|n> = exp(-i n phi) psi_n(m)``.
    """
    if not (np.isfinite(phi) and np.isfinite(m)):
        raise ValidationError("homodyne angle and outcome must be finite")
    return np.exp(-1j * phi * np.arange(D)) * hermite_functions(m, D)


@dataclass(frozen=True)
class DistillationParams:
    theta1: float = 0.0
    theta2: float = 0.0
    xi: float = 0.0
    phi_m: float = 0.0
    m: float = 0.0

    def __post_init__(self):
        if not np.all(np.isfinite([self.theta1, self.theta2, self.xi, self.phi_m, self.m])):
            raise ValidationError("distillation parameters must be finite")

    def check(self, r_max: float) -> "DistillationParams":
        if abs(self.xi) > r_max:
            raise ValidationError(f"|xi|={abs(self.xi)} exceeds r_max={r_max}")
        return self

    def to_dict(self) -> dict:
        return asdict(self)


def _density_factor(rho: np.ndarray) -> np.ndarray:
    w, V = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    keep = w > 1e-14 * max(w[-1], 1.0)
    return V[:, keep] * np.sqrt(w[keep])


def _kraus(U: np.ndarray, h: np.ndarray, D: int) -> np.ndarray:
    """``K[x2, x, y] = sum_y2 h[y2] U[(x2, y2), (x, y)]``: apply U, then project the second mode."""
    return np.einsum("j,ijkl->ikl", h, U.reshape(D, D, D, D))


def conditional_state(rho_ac: np.ndarray, rho_bd: np.ndarray, U: np.ndarray, h: np.ndarray, D: int):
    """Unnormalized conditional state on (A, C) for arbitrary copies and Kraus data."""
    K = _kraus(U, h, D)
    W1 = _density_factor(rho_ac).T.reshape(-1, D, D)  # [s, a, c]
    W2 = _density_factor(rho_bd).T.reshape(-1, D, D)  # [t, b, d]
    # Z[s, t, a2, c2] = sum K[a2, a, b] K[c2, c, d] W1[s, a, c] W2[t, b, d]
    Y = np.einsum("xab,sac,tbd->stxcd", K, W1, W2, optimize=True)
    Z = np.einsum("ycd,stxcd->stxy", K, Y, optimize=True).reshape(-1, D * D)
    return Z.T @ Z.conj()


def two_copy_protocol(rho: MixedState, p: DistillationParams) -> tuple[MixedState, float]:
    """Normalized conditional state on (A, C) and the outcome weight (a density in m)."""
    D = rho.dim
    U = entangling_unitary(p.theta1, p.theta2, p.xi, D)
    h = homodyne_functional(p.phi_m, p.m, D)
    out = conditional_state(rho.rho, rho.rho, U, h, D)
    weight = float(np.trace(out).real)
    if not weight > WEIGHT_FLOOR:
        raise NumericalError(f"outcome weight {weight:.3e} is below {WEIGHT_FLOOR:.0e}")
    out = out / weight
    return MixedState(0.5 * (out + out.conj().T), rho.trunc), weight


@dataclass
class DistillationResult:
    params: DistillationParams
    rho_d: MixedState
    weight: float
    E_in: float
    E_out: float
    gain: float
    evals: int
    per_m: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "best_params": self.params.to_dict(),
            "E_in": self.E_in,
            "E_out": self.E_out,
            "gain": self.gain,
            "weight": self.weight,
            "evals": self.evals,
            "per_m": self.per_m,
        }


class _ProtocolObjective:
    """Negative output E at fixed outcome m, with a weight screen."""

    def __init__(self, rho: MixedState, m: float):
        self.rho, self.m = rho, m

    def params(self, x) -> DistillationParams:
        return DistillationParams(x[0], x[1], x[2], x[3], self.m)

    def __call__(self, x) -> float:
        try:
            rho_d, _ = two_copy_protocol(self.rho, self.params(x))
        except NumericalError:
            return PENALTY
        return -witness_E(rho_d)


def _starts(cfg: OptimizerConfig, rng: np.random.Generator) -> list[np.ndarray]:
    out = [np.zeros(4)] if cfg.include_identity_start else []
    width = min(cfg.init_r_width, cfg.r_max)
    while len(out) < cfg.n_starts:
        x = rng.uniform(0, 2 * np.pi, 4)
        x[2] = rng.uniform(-width, width)
        out.append(x)
    return out


def optimize_distillation(
    rho: MixedState, cfg: OptimizerConfig | None = None, m_grid=DEFAULT_M_GRID
) -> DistillationResult:
    """Grid over the shared outcome m, multi-start local search over (theta1, theta2, xi, phi_m)."""
    cfg = cfg or OptimizerConfig()
    m_grid = list(m_grid)
    if not m_grid:
        raise ValidationError("m_grid must not be empty")
    rng = np.random.default_rng(cfg.seed)
    bounds = [(None, None), (None, None), (-cfg.r_max, cfg.r_max), (None, None)]
    E_in = witness_E(rho)
    best, evals, per_m = None, 0, []
    for m in m_grid:
        obj = _ProtocolObjective(rho, float(m))
        try:
            res = multistart_minimize(
                obj,
                _starts(cfg, rng),
                bounds=bounds,
                max_evals=cfg.max_evals,
                fatol=cfg.obj_tol,
                xatol=cfg.x_tol,
                simplex_step=cfg.simplex_step,
                feasible_below=PENALTY,
                workers=cfg.workers,
            )
        except NumericalError:
            per_m.append({"m": float(m), "E_out": None})
            continue
        evals += res.nfev
        per_m.append({"m": float(m), "E_out": -res.fun})
        if best is None or res.fun < best[0]:
            best = (res.fun, obj.params(res.x))
    if best is None:
        raise NumericalError("every outcome on the m grid failed the weight screen")
    # only the homodyne phase is exactly periodic at finite truncation
    p = replace(best[1], phi_m=float(np.mod(best[1].phi_m, 2 * np.pi)))
    rho_d, weight = two_copy_protocol(rho, p)
    E_out = witness_E(rho_d)
    return DistillationResult(p, rho_d, weight, E_in, E_out, E_out - E_in, evals, per_m)
