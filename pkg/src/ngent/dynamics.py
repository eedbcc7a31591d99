"""Squeezed-Kerr Hamiltonian, closed evolution and lossy Lindblad evolution."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import NumericalError, ValidationError
from .fock import MixedState, PureState, _as_policy
from .gaussian import mode_operators


@dataclass(frozen=True)
class KerrParams:
    delta_a: float = 0.0
    chi: complex = 0.0
    kappa_a: float = 0.0

    def __post_init__(self):
        if not all(np.isfinite([self.delta_a, self.chi, self.kappa_a])):
            raise ValidationError("Kerr parameters must be finite")


@dataclass(frozen=True)
class LossParams:
    gamma_a: float = 0.0
    gamma_b: float = 0.0

    def __post_init__(self):
        if self.gamma_a < 0 or self.gamma_b < 0:
            raise ValidationError("loss rates must be nonnegative")

    @classmethod
    def equal(cls, gamma: float) -> "LossParams":
        return cls(gamma, gamma)


@dataclass(frozen=True)
class IntegratorConfig:
    dt: float = 1e-3
    trace_tol: float = 1e-8
    hermitize_each_step: bool = True
    psd_tol: float = -1e-6

    def __post_init__(self):
        if not self.dt > 0:
            raise ValidationError("dt must be positive")


def kerr_hamiltonian(p: KerrParams, trunc) -> np.ndarray:
    """``Delta a^dag a + chi a^dag b^dag + chi^* a b - K a^dag^2 a^2``."""
    D = _as_policy(trunc).D
    a, b = mode_operators(D)
    ad = a.T
    H = p.delta_a * (ad @ a) + p.chi * (ad @ b.T) + np.conj(p.chi) * (a @ b) - p.kappa_a * (ad @ ad @ a @ a)
    return 0.5 * (H + H.conj().T)


class PurePropagator:
    """``exp(-iHt)`` from a single Hermitian eigendecomposition."""

    def __init__(self, H: np.ndarray):
        H = np.asarray(H)
        if np.max(np.abs(H - H.conj().T)) > 1e-12:
            raise ValidationError("Hamiltonian is not Hermitian")
        try:
            self.w, self.V = np.linalg.eigh(H)
        except np.linalg.LinAlgError as exc:
            raise NumericalError(f"eigensolver failed: {exc}") from exc

    def evolve(self, t: float, psi0: PureState) -> PureState:
        c = self.V.conj().T @ psi0.vector
        v = self.V @ (np.exp(-1j * self.w * t) * c)
        return PureState.from_vector(v, psi0.trunc, normalize=True)


def evolve_pure(H: np.ndarray, t: float, psi0: PureState) -> PureState:
    return PurePropagator(H).evolve(t, psi0)


class LindbladRHS:
    """``drho/dt = -i[H, rho] + sum_k (L rho L^dag - 1/2 {L^dag L, rho})``, L in {sqrt(g_A) a, sqrt(g_B) b}.

    Jump terms act through index shifts on the ``(D, D, D, D)`` tensor view;
    the Hamiltonian is applied as a sparse matrix.
    """

    def __init__(self, H: np.ndarray, loss: LossParams, D: int):
        self.D = D
        self.H = sp.csr_matrix(H)
        self.ga, self.gb = loss.gamma_a, loss.gamma_b
        n = np.arange(D, dtype=float)
        na = np.repeat(n, D)
        nb = np.tile(n, D)
        self.anti = 0.5 * (
            self.ga * (na[:, None] + na[None, :]) + self.gb * (nb[:, None] + nb[None, :])
        )
        s = np.sqrt(np.arange(1, D, dtype=float))
        self.shift = s[:, None] * s[None, :]  # sqrt(i+1) sqrt(k+1)

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        D = self.D
        Hr = self.H @ rho
        rH = (self.H @ rho.conj().T).conj().T
        out = -1j * (Hr - rH) - self.anti * rho
        r4 = rho.reshape(D, D, D, D)
        jump = np.zeros_like(r4)
        if self.ga:
            jump[:-1, :, :-1, :] += self.ga * self.shift[:, None, :, None] * r4[1:, :, 1:, :]
        if self.gb:
            jump[:, :-1, :, :-1] += self.gb * self.shift[None, :, None, :] * r4[:, 1:, :, 1:]
        return out + jump.reshape(D * D, D * D)


def _rk4_step(f, rho, h):
    k1 = f(rho)
    k2 = f(rho + 0.5 * h * k1)
    k3 = f(rho + 0.5 * h * k2)
    k4 = f(rho + h * k3)
    return rho + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def _finalize(rho: np.ndarray, trunc, cfg: IntegratorConfig, t: float) -> MixedState:
    rho = 0.5 * (rho + rho.conj().T)
    tr = np.trace(rho).real
    if abs(tr - 1) > cfg.trace_tol:
        raise NumericalError(f"trace drifted to {tr!r} at t={t}")
    w, V = np.linalg.eigh(rho)
    if w[0] < cfg.psd_tol:
        raise NumericalError(f"density matrix eigenvalue {w[0]:.2e} at t={t}")
    if w[0] < 0:
        # roundoff-level negativity: project onto the PSD cone
        w = np.clip(w, 0, None)
        rho = (V * (w / w.sum())) @ V.conj().T
        rho = 0.5 * (rho + rho.conj().T)
    return MixedState(rho, trunc)


def lindblad_trajectory(H, loss: LossParams, rho0: MixedState, times, cfg: IntegratorConfig | None = None):
    """States at each of ``times`` (nondecreasing, >= 0) from one fixed-step RK4 run.

    Each interval between requested times is split into equal steps no
    longer than ``cfg.dt``.
    """
    cfg = cfg or IntegratorConfig()
    times = np.asarray(times, dtype=float)
    if times.size and (times[0] < 0 or np.any(np.diff(times) < 0)):
        raise ValidationError("times must be nonnegative and nondecreasing")
    f = LindbladRHS(H, loss, rho0.dim)
    rho = rho0.rho.astype(complex)
    t_now, out = 0.0, []
    for t in times:
        span = t - t_now
        n = int(np.ceil(span / cfg.dt - 1e-9)) if span > 0 else 0
        for _ in range(n):
            rho = _rk4_step(f, rho, span / n)
            if cfg.hermitize_each_step:
                rho = 0.5 * (rho + rho.conj().T)
        t_now = t
        out.append(_finalize(rho, rho0.trunc, cfg, t))
    return out


def lindblad_evolve(H, loss: LossParams, rho0: MixedState, t: float, cfg: IntegratorConfig | None = None) -> MixedState:
    if t < 0:
        raise ValidationError("t must be nonnegative")
    return lindblad_trajectory(H, loss, rho0, [t], cfg)[0]
