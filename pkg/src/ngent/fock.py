"""Truncated two-mode Fock space.

Every two-mode object uses the flattened index ``(n_a, n_b) -> n_a * D + n_b``,
which is exactly numpy's C-order reshape of a ``(D, D)`` coefficient matrix.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

import numpy as np

from .errors import ValidationError

NORM_TOL = 1e-10
HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-9
PSD_TOL = -1e-8
RANK_TOL = 1e-9


@dataclass(frozen=True)
class TruncationPolicy:
    """Fock levels ``0 .. dim_per_mode - 1`` on each mode."""

    dim_per_mode: int
    leak_tol: float = 1e-6

    def __post_init__(self):
        if int(self.dim_per_mode) != self.dim_per_mode or self.dim_per_mode < 2:
            raise ValidationError(f"dim_per_mode must be an integer >= 2, got {self.dim_per_mode}")
        if not self.leak_tol >= 0:
            raise ValidationError(f"leak_tol must be nonnegative, got {self.leak_tol}")

    @property
    def D(self) -> int:
        return self.dim_per_mode


def _as_policy(trunc: TruncationPolicy | int) -> TruncationPolicy:
    return trunc if isinstance(trunc, TruncationPolicy) else TruncationPolicy(int(trunc))


@dataclass(frozen=True)
class PureState:
    coeffs: np.ndarray
    trunc: TruncationPolicy

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        D = self.trunc.D
        if c.shape != (D, D):
            raise ValidationError(f"coefficient matrix must be {D}x{D}, got {c.shape}")
        norm = np.sum(np.abs(c) ** 2)
        if abs(norm - 1) > NORM_TOL:
            raise ValidationError(f"pure state not normalized: sum|C|^2 = {norm:.3e}")
        object.__setattr__(self, "coeffs", c)

    @property
    def dim(self) -> int:
        return self.trunc.D

    @property
    def vector(self) -> np.ndarray:
        return self.coeffs.reshape(-1)

    @classmethod
    def from_vector(cls, vec, trunc, normalize=False) -> "PureState":
        trunc = _as_policy(trunc)
        v = np.asarray(vec, dtype=complex).reshape(trunc.D, trunc.D)
        if normalize:
            n = np.linalg.norm(v)
            if n < 1e-300:
                raise ValidationError("cannot normalize a zero vector")
            v = v / n
        return cls(v, trunc)


@dataclass(frozen=True)
class MixedState:
    rho: np.ndarray
    trunc: TruncationPolicy

    def __post_init__(self):
        r = np.asarray(self.rho, dtype=complex)
        n = self.trunc.D ** 2
        if r.shape != (n, n):
            raise ValidationError(f"density matrix must be {n}x{n}, got {r.shape}")
        if np.max(np.abs(r - r.conj().T)) > HERMITIAN_TOL:
            raise ValidationError("density matrix is not Hermitian")
        tr = np.trace(r).real
        if abs(tr - 1) > TRACE_TOL:
            raise ValidationError(f"density matrix trace is {tr!r}, expected 1")
        lo = np.linalg.eigvalsh(0.5 * (r + r.conj().T))[0]
        if lo < PSD_TOL:
            raise ValidationError(f"density matrix has eigenvalue {lo:.3e} below {PSD_TOL}")
        object.__setattr__(self, "rho", r)

    @property
    def dim(self) -> int:
        return self.trunc.D


State = Union[PureState, MixedState]


@dataclass(frozen=True)
class SchmidtDecomposition:
    lambdas: np.ndarray
    left_basis: np.ndarray  # columns u_i on mode A
    right_basis: np.ndarray  # columns v_i on mode B
    rank_tol: float = field(default=RANK_TOL)

    @property
    def rank(self) -> int:
        return int(np.count_nonzero(self.lambdas > self.rank_tol))

    def reconstruct(self) -> np.ndarray:
        return (self.left_basis * self.lambdas) @ self.right_basis.T


def _check_unit(v: np.ndarray, name: str) -> np.ndarray:
    v = np.asarray(v, dtype=complex).reshape(-1)
    n = np.linalg.norm(v)
    if abs(n * n - 1) > NORM_TOL:
        raise ValidationError(f"{name} is not normalized (norm^2 = {n * n:.3e})")
    return v


def tensor_product(psi_a, psi_b, trunc: TruncationPolicy | None = None) -> PureState:
    a = _check_unit(psi_a, "psi_a")
    b = _check_unit(psi_b, "psi_b")
    if a.size != b.size:
        raise ValidationError(f"mode dimensions differ: {a.size} vs {b.size}")
    trunc = trunc or TruncationPolicy(a.size)
    if trunc.D != a.size:
        raise ValidationError(f"vectors have length {a.size}, truncation is {trunc.D}")
    return PureState(np.outer(a, b), trunc)


def to_density(psi: PureState) -> MixedState:
    v = psi.vector
    return MixedState(np.outer(v, v.conj()), psi.trunc)


def as_density(state: State) -> MixedState:
    return to_density(state) if isinstance(state, PureState) else state


def partial_transpose(rho: MixedState | np.ndarray, D: int | None = None) -> np.ndarray:
    """Transpose on mode A: ``<i,j|out|k,l> = <k,j|rho|i,l>``."""
    if isinstance(rho, MixedState):
        D, r = rho.dim, rho.rho
    else:
        r = np.asarray(rho)
        if D is None:
            D = int(round(np.sqrt(r.shape[0])))
    return r.reshape(D, D, D, D).transpose(2, 1, 0, 3).reshape(D * D, D * D)


def trace_norm(H: np.ndarray) -> float:
    """Sum of absolute eigenvalues of a Hermitian operator."""
    H = np.asarray(H)
    if np.max(np.abs(H - H.conj().T)) > 1e-8:
        raise ValidationError("trace_norm expects a Hermitian operator")
    mu = np.linalg.eigvalsh(0.5 * (H + H.conj().T))
    return float(np.sum(np.abs(mu)))


def schmidt(psi: PureState, rank_tol: float = RANK_TOL) -> SchmidtDecomposition:
    u, s, vh = np.linalg.svd(psi.coeffs)
    return SchmidtDecomposition(s, u, vh.T, rank_tol)


def partial_trace(rho: MixedState, mode: str) -> np.ndarray:
    """Reduced single-mode density matrix; ``mode`` is the mode traced OUT."""
    D = rho.dim
    r = rho.rho.reshape(D, D, D, D)
    mode = mode.upper()
    if mode == "B":
        return np.einsum("ijkj->ik", r)
    if mode == "A":
        return np.einsum("ijil->jl", r)
    raise ValidationError(f"mode must be 'A' or 'B', got {mode!r}")


def populations(state: State) -> np.ndarray:
    """Joint photon-number distribution ``P[n_a, n_b]``."""
    D = state.dim
    if isinstance(state, PureState):
        return np.abs(state.coeffs) ** 2
    return np.real(np.diag(state.rho)).reshape(D, D)


def edge_mass(pops: np.ndarray) -> float:
    D = pops.shape[0]
    mask = np.zeros((D, D), dtype=bool)
    mask[D - 2:, :] = True
    mask[:, D - 2:] = True
    return float(np.clip(pops[mask].sum(), 0.0, 1.0))


def leakage(state: State) -> float:
    """Population in the top two Fock levels of either mode."""
    return edge_mass(populations(state))


# --- JSON state files -----------------------------------------------------

def _encode(arr: np.ndarray) -> list:
    return np.stack([arr.real, arr.imag], axis=-1).tolist()


def _decode(data) -> np.ndarray:
    a = np.asarray(data, dtype=float)
    if a.shape[-1] != 2:
        raise ValidationError("state data entries must be [re, im] pairs")
    return a[..., 0] + 1j * a[..., 1]


def state_to_dict(state: State, metadata: dict | None = None) -> dict:
    kind = "pure" if isinstance(state, PureState) else "mixed"
    arr = state.coeffs if kind == "pure" else state.rho
    out = {"dim": state.dim, "kind": kind, "data": _encode(arr)}
    if metadata is not None:
        out["metadata"] = metadata
    return out


def state_from_dict(d: dict, leak_tol: float = 1e-6) -> State:
    try:
        D = int(d["dim"])
        kind = d["kind"]
        arr = _decode(d["data"])
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed state file: {exc}") from exc
    trunc = TruncationPolicy(D, leak_tol)
    if kind == "pure":
        return PureState(arr, trunc)
    if kind == "mixed":
        return MixedState(arr, trunc)
    raise ValidationError(f"unknown state kind {kind!r}")


def save_state(state: State, path, metadata: dict | None = None) -> None:
    Path(path).write_text(json.dumps(state_to_dict(state, metadata)))


def load_state(path, leak_tol: float = 1e-6) -> State:
    try:
        d = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read state file {path}: {exc}") from exc
    return state_from_dict(d, leak_tol)
