"""Generators for the named two-mode states.

Every generator checks the truncation edge and raises ``LeakageError``
rather than silently renormalizing a clipped state.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial

import numpy as np

from . import gaussian as G
from .errors import LeakageError, ValidationError
from .fock import MixedState, PureState, TruncationPolicy, _as_policy, edge_mass, leakage


def fock_vector(n: int, D: int) -> np.ndarray:
    if not 0 <= n < D:
        raise ValidationError(f"Fock level {n} outside 0..{D - 1}")
    v = np.zeros(D, dtype=complex)
    v[n] = 1.0
    return v


def coherent_tail(alpha: complex, D: int) -> float:
    """Poisson weight of a coherent state above level ``D - 1``."""
    mean = abs(alpha) ** 2
    head = sum(np.exp(-mean) * mean**n / factorial(n) for n in range(D))
    return max(0.0, 1.0 - head)


def coherent_vector(alpha: complex, D: int) -> np.ndarray:
    return G.displacement(alpha, D)[:, 0]


def _checked(state: PureState, what: str) -> PureState:
    lk = leakage(state)
    if lk > state.trunc.leak_tol:
        raise LeakageError(
            f"{what}: leakage {lk:.2e} exceeds tolerance {state.trunc.leak_tol:.1e} at D={state.dim}"
        )
    return state


def _vacuum_vec(D: int) -> np.ndarray:
    v = np.zeros(D * D, dtype=complex)
    v[0] = 1.0
    return v


def vacuum(trunc) -> PureState:
    trunc = _as_policy(trunc)
    return PureState.from_vector(_vacuum_vec(trunc.D), trunc)


def fock_product(n_a: int, n_b: int, trunc) -> PureState:
    trunc = _as_policy(trunc)
    D = trunc.D
    return PureState(np.outer(fock_vector(n_a, D), fock_vector(n_b, D)), trunc)


def noon(N: int, trunc) -> PureState:
    trunc = _as_policy(trunc)
    D = trunc.D
    if not 1 <= N <= D - 1:
        raise ValidationError(f"NOON order N={N} needs 1 <= N <= D-1 = {D - 1}")
    C = np.zeros((D, D), dtype=complex)
    C[N, 0] = C[0, N] = 1 / np.sqrt(2)
    return PureState(C, trunc)


def tmsv(xi: complex, trunc) -> PureState:
    trunc = _as_policy(trunc)
    v = G.two_mode_squeeze(xi, trunc.D)[:, 0]
    return _checked(PureState.from_vector(v, trunc, normalize=True), f"TMSV(xi={xi})")


def stmsv(r: float, trunc) -> PureState:
    """Normalized ``(S_AB(r) + S_AB(-r))|0,0>``."""
    trunc = _as_policy(trunc)
    plus, minus = tmsv(r, trunc), tmsv(-r, trunc)
    return PureState.from_vector(plus.vector + minus.vector, trunc, normalize=True)


def three_spdc(g: float, trunc) -> PureState:
    """``exp(g (a^dag b^dag^2 - a b^2))|0,0>``."""
    trunc = _as_policy(trunc)
    a, b = G.mode_operators(trunc.D)
    gen = g * (a.T @ b.T @ b.T - a @ b @ b)
    v = G.expm_antihermitian(gen) @ _vacuum_vec(trunc.D)
    return _checked(PureState.from_vector(v, trunc, normalize=True), f"3-SPDC(g={g})")


def two_mode_cat(alpha: float, trunc) -> PureState:
    """``c (|alpha, alpha> + |-alpha, -alpha>)``."""
    trunc = _as_policy(trunc)
    D = trunc.D
    tail = coherent_tail(alpha, D)
    if tail > trunc.leak_tol:
        raise LeakageError(f"cat(alpha={alpha}): coherent tail {tail:.2e} beyond D={D}")
    p, m = coherent_vector(alpha, D), coherent_vector(-alpha, D)
    C = np.outer(p, p) + np.outer(m, m)
    return _checked(PureState.from_vector(C, trunc, normalize=True), f"cat(alpha={alpha})")


def tmsv_mixture(p: float, xi1: complex, xi2: complex, trunc) -> MixedState:
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"mixing weight p={p} outside [0, 1]")
    trunc = _as_policy(trunc)
    v1, v2 = tmsv(xi1, trunc).vector, tmsv(xi2, trunc).vector
    rho = p * np.outer(v1, v1.conj()) + (1 - p) * np.outer(v2, v2.conj())
    return MixedState(0.5 * (rho + rho.conj().T), trunc)


def hom_state(trunc) -> PureState:
    """Balanced beam splitter acting on ``|1,1>``."""
    trunc = _as_policy(trunc)
    v = G.beam_splitter(np.pi / 4, trunc.D) @ fock_product(1, 1, trunc).vector
    return PureState.from_vector(v, trunc, normalize=True)


# --- gate programs --------------------------------------------------------

SINGLE_MODE = {"rotation": G.rotation, "squeeze": G.squeeze_single, "displacement": G.displacement}
TWO_MODE = {"beam_splitter": G.beam_splitter, "two_mode_squeeze": G.two_mode_squeeze}


@dataclass(frozen=True)
class Gate:
    name: str
    param: complex
    mode: str = "A"

    def __post_init__(self):
        if self.name not in SINGLE_MODE and self.name not in TWO_MODE:
            raise ValidationError(f"unknown gate {self.name!r}")
        if self.name in SINGLE_MODE and self.mode not in ("A", "B"):
            raise ValidationError(f"gate mode must be 'A' or 'B', got {self.mode!r}")
        if not np.isfinite(self.param):
            raise ValidationError("gate parameter must be finite")

    def matrix(self, D: int) -> np.ndarray:
        if self.name in TWO_MODE:
            return TWO_MODE[self.name](self.param, D)
        m = SINGLE_MODE[self.name](self.param, D)
        return G.on_mode_a(m) if self.mode == "A" else G.on_mode_b(m)

    def to_dict(self) -> dict:
        p = complex(self.param)
        param = p.real if p.imag == 0 else [p.real, p.imag]
        return {"name": self.name, "param": param, "mode": self.mode}

    @classmethod
    def from_dict(cls, d: dict) -> "Gate":
        p = d["param"]
        p = complex(p[0], p[1]) if isinstance(p, (list, tuple)) else p
        return cls(d["name"], p, d.get("mode", "A"))


@dataclass(frozen=True)
class GateProgram:
    """Gates applied in list order (first entry acts first)."""

    gates: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))

    def unitary(self, D: int) -> np.ndarray:
        U = np.eye(D * D, dtype=complex)
        for g in self.gates:
            U = g.matrix(D) @ U
        return U

    def to_list(self) -> list:
        return [g.to_dict() for g in self.gates]

    @classmethod
    def from_list(cls, items) -> "GateProgram":
        return cls(tuple(Gate.from_dict(d) for d in items))


def photon_subtracted(k: int, prog: GateProgram, trunc) -> PureState:
    """Normalized ``a^k U_prog |0,0>``."""
    trunc = _as_policy(trunc)
    if k < 0:
        raise ValidationError("number of subtracted photons must be >= 0")
    D = trunc.D
    v = prog.unitary(D) @ _vacuum_vec(D)
    lk = edge_mass(np.abs(v.reshape(D, D)) ** 2)
    if lk > trunc.leak_tol:
        raise LeakageError(f"Gaussian program output leaks {lk:.2e} at D={D}")
    a, _ = G.mode_operators(D)
    for _ in range(k):
        v = a @ v
    norm = np.linalg.norm(v)
    if norm <= 1e-12:
        raise ValidationError("photon subtraction annihilated the state")
    return PureState.from_vector(v / norm, trunc)


GENERATORS = {
    "vacuum": vacuum,
    "noon": noon,
    "tmsv": tmsv,
    "stmsv": stmsv,
    "three-spdc": three_spdc,
    "cat": two_mode_cat,
    "tmsv-mixture": tmsv_mixture,
    "photon-subtracted": photon_subtracted,
    "hom": hom_state,
}
