"""Gaussian gates on the truncated Fock space.

Generators are truncated first and then exponentiated, so every gate is
exactly unitary on the computational space. Conventions::

    R(theta)      = exp(-i theta a^dag a)
    S(r)          = exp(r/2 (a^2 - a^dag^2))
    D(alpha)      = exp(alpha a^dag - alpha^* a)
    U_BS(theta)   = exp(theta (a^dag b - a b^dag))
    S_AB(xi)      = exp(xi a^dag b^dag - xi^* a b)
"""
from __future__ import annotations

from dataclasses import astuple, dataclass, fields
from functools import lru_cache

import numpy as np

from .errors import ValidationError

ANTIHERMITIAN_TOL = 1e-10


def annihilation(D: int) -> np.ndarray:
    if int(D) != D or D < 2:
        raise ValidationError(f"D must be an integer >= 2, got {D}")
    return np.diag(np.sqrt(np.arange(1, D, dtype=float)), 1)


def number_op(D: int) -> np.ndarray:
    return np.diag(np.arange(D, dtype=float))


@lru_cache(maxsize=None)
def _mode_ops(D: int):
    a1 = annihilation(D)
    eye = np.eye(D)
    a = np.kron(a1, eye)
    b = np.kron(eye, a1)
    for m in (a1, a, b):
        m.setflags(write=False)
    return a1, a, b


def mode_operators(D: int):
    """Return ``(a, b)`` as D^2 x D^2 matrices in flattened ordering."""
    _, a, b = _mode_ops(D)
    return a, b


def _hermitian_eig(G: np.ndarray):
    """Eigendecomposition of ``K = iG`` for anti-Hermitian ``G``."""
    K = 1j * G
    K = 0.5 * (K + K.conj().T)
    return np.linalg.eigh(K)


def expm_antihermitian(G: np.ndarray) -> np.ndarray:
    """``exp(G)`` for anti-Hermitian ``G`` via the eigenbasis of ``iG``."""
    G = np.asarray(G, dtype=complex)
    if G.ndim != 2 or G.shape[0] != G.shape[1]:
        raise ValidationError("generator must be a square matrix")
    if np.max(np.abs(G + G.conj().T), initial=0.0) > ANTIHERMITIAN_TOL:
        raise ValidationError("generator is not anti-Hermitian")
    w, V = _hermitian_eig(G)
    # exp(G) = exp(-i K)
    return (V * np.exp(-1j * w)) @ V.conj().T


def rotation(theta: float, D: int) -> np.ndarray:
    return expm_antihermitian(-1j * theta * number_op(D))


def squeeze_single(r: float, D: int) -> np.ndarray:
    a = annihilation(D)
    return expm_antihermitian(0.5 * r * (a @ a - a.T @ a.T))


def displacement(alpha: complex, D: int) -> np.ndarray:
    a = annihilation(D)
    return expm_antihermitian(alpha * a.T - np.conj(alpha) * a)


def beam_splitter(theta: float, D: int) -> np.ndarray:
    a, b = mode_operators(D)
    return expm_antihermitian(theta * (a.T @ b - a @ b.T))


def two_mode_squeeze(xi: complex, D: int) -> np.ndarray:
    a, b = mode_operators(D)
    return expm_antihermitian(xi * (a.T @ b.T) - np.conj(xi) * (a @ b))


def on_mode_a(op: np.ndarray) -> np.ndarray:
    return np.kron(op, np.eye(op.shape[0]))


def on_mode_b(op: np.ndarray) -> np.ndarray:
    return np.kron(np.eye(op.shape[0]), op)


def is_unitary(U: np.ndarray, tol: float = 1e-10) -> bool:
    return bool(np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0]))) <= tol)


ROTATION_SLOTS = [0, 2, 3, 4]


@dataclass(frozen=True)
class GaussianParams7:
    """Parameters of the effective family, in serialization order."""

    theta_I0: float = 0.0
    theta_I: float = 0.0
    theta_I1: float = 0.0
    theta_I2: float = 0.0
    theta_II0: float = 0.0
    theta_II: float = 0.0
    r: float = 0.0

    def __post_init__(self):
        if not np.all(np.isfinite(astuple(self))):
            raise ValidationError("Gaussian parameters must be finite")

    def to_array(self) -> np.ndarray:
        return np.array(astuple(self), dtype=float)

    @classmethod
    def from_array(cls, x) -> "GaussianParams7":
        x = np.asarray(x, dtype=float).reshape(-1)
        if x.size != 7:
            raise ValidationError(f"expected 7 parameters, got {x.size}")
        return cls(*map(float, x))

    def check(self, r_max: float = 2.0) -> "GaussianParams7":
        if abs(self.r) > r_max:
            raise ValidationError(f"|r| = {abs(self.r)} exceeds r_max = {r_max}")
        return self

    def wrapped(self) -> "GaussianParams7":
        """Rotation angles reduced mod 2 pi.

        Beam-splitter angles are left as found: a truncated beam-splitter
        generator has non-integer spectrum in blocks with ``n_a + n_b >= D``,
        so ``U_BS(theta + 2 pi)`` differs from ``U_BS(theta)`` there.
        """
        x = self.to_array()
        x[ROTATION_SLOTS] = np.mod(x[ROTATION_SLOTS], 2 * np.pi)
        return GaussianParams7.from_array(x)

    @staticmethod
    def names() -> list[str]:
        return [f.name for f in fields(GaussianParams7)]


def build_effective_unitary(p: GaussianParams7, D: int) -> np.ndarray:
    """``U_BS(th_II) [R_A(th_II0) S_A(r) R_A(th_I1) x R_B(th_I2)] U_BS(th_I) R_A(th_I0)``."""
    local_a = rotation(p.theta_II0, D) @ squeeze_single(p.r, D) @ rotation(p.theta_I1, D)
    local = np.kron(local_a, rotation(p.theta_I2, D))
    return (
        beam_splitter(p.theta_II, D)
        @ local
        @ beam_splitter(p.theta_I, D)
        @ on_mode_a(rotation(p.theta_I0, D))
    )


def entangling_unitary(theta1: float, theta2: float, xi: complex, D: int) -> np.ndarray:
    """``U_BS(theta1) S_AB(xi) U_BS(theta2)^dag``."""
    return beam_splitter(theta1, D) @ two_mode_squeeze(xi, D) @ beam_splitter(theta2, D).conj().T


class EffectiveFamily:
    """Fast application of the effective unitary for repeated evaluation.

    The beam splitter conserves ``n_a + n_b``, so its generator is diagonalized
    block by block (blocks padded to a common size for batched products).
    The single-mode squeezer is diagonalized once. Results agree with
    :func:`build_effective_unitary` to roundoff.
    """

    def __init__(self, D: int):
        self.D = D
        a1, a, b = _mode_ops(D)
        self.n = np.arange(D, dtype=float)
        gen = a.T @ b - a @ b.T
        n_blocks = 2 * D - 1
        gather = np.full((n_blocks, D), D * D)  # D*D is a zero dummy slot
        self.bs_w = np.zeros((n_blocks, D))
        self.bs_V = np.zeros((n_blocks, D, D), dtype=complex)
        for N in range(n_blocks):
            na = np.arange(max(0, N - D + 1), min(N, D - 1) + 1)
            idx = na * D + (N - na)
            m = idx.size
            gather[N, :m] = idx
            w, V = _hermitian_eig(gen[np.ix_(idx, idx)])
            self.bs_w[N, :m] = w
            self.bs_V[N, :m, :m] = V
            self.bs_V[N, m:, m:] = np.eye(D - m)
        self.bs_Vh = np.conj(np.swapaxes(self.bs_V, 1, 2))
        self.gather = gather.reshape(-1)
        self.valid = self.gather < D * D
        self.sq_w, self.sq_V = _hermitian_eig(0.5 * (a1 @ a1 - a1.T @ a1.T))
        self.sq_Vh = self.sq_V.conj().T

    def _bs(self, theta, X):
        D = self.D
        k = X.shape[1]
        padded = np.concatenate([X, np.zeros((1, k), dtype=X.dtype)])
        Xb = padded[self.gather].reshape(2 * D - 1, D, k)
        Yb = self.bs_V @ (np.exp(-1j * theta * self.bs_w)[:, :, None] * (self.bs_Vh @ Xb))
        out = np.empty((D * D, k), dtype=complex)
        out[self.gather[self.valid]] = Yb.reshape(-1, k)[self.valid]
        return out

    def squeeze(self, r) -> np.ndarray:
        return (self.sq_V * np.exp(-1j * r * self.sq_w)) @ self.sq_Vh

    def apply(self, p, X: np.ndarray) -> np.ndarray:
        """Apply ``U(p)`` to the columns of ``X`` (shape ``(D^2, k)``)."""
        x = p.to_array() if isinstance(p, GaussianParams7) else np.asarray(p, dtype=float)
        th_I0, th_I, th_I1, th_I2, th_II0, th_II, r = x
        D, n = self.D, self.n
        k = X.shape[1]
        Y = X.reshape(D, D, k) * np.exp(-1j * th_I0 * n)[:, None, None]
        Y = self._bs(th_I, Y.reshape(D * D, k)).reshape(D, D, k)
        Y = Y * np.exp(-1j * th_I1 * n)[:, None, None]
        Y = np.tensordot(self.squeeze(r), Y, axes=(1, 0))
        Y = Y * np.exp(-1j * th_II0 * n)[:, None, None] * np.exp(-1j * th_I2 * n)[None, :, None]
        return self._bs(th_II, Y.reshape(D * D, k))

    def apply_pure(self, p, C: np.ndarray) -> np.ndarray:
        D = self.D
        return self.apply(p, C.reshape(D * D, 1)).reshape(D, D)

    def unitary(self, p) -> np.ndarray:
        return self.apply(p, np.eye(self.D * self.D, dtype=complex))


@lru_cache(maxsize=16)
def effective_family(D: int) -> EffectiveFamily:
    return EffectiveFamily(D)
