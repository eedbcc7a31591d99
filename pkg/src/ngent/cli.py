"""Command-line driver: ``ngent <subcommand> ...``.

Exit status: 0 on success, 2 on invalid input, 3 on numerical failure.
Outputs are deterministic for fixed flags (no timestamps, sorted JSON keys).
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import states as S
from .distillation import DEFAULT_M_GRID, optimize_distillation
from .dynamics import KerrParams
from .errors import NumericalError, ValidationError
from .fock import PureState, TruncationPolicy, as_density, leakage, load_state, state_to_dict
from .scans import (
    KERR_COLUMNS,
    LOSS_COLUMNS,
    NOON_COLUMNS,
    kerr_scan,
    loss_scan,
    noon_threshold_table,
    rows_to_csv,
    time_grid,
)
from .witnesses import OptimizerConfig, dimension_d, learning_bound, noon_witness_f, witness_E, witness_ENG


@dataclass
class RunConfig:
    subcommand: str
    dim: int | None
    seed: int
    n_starts: int
    leak_tol: float
    out: str | None
    options: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def _grid(lo: float, hi: float, step: float) -> list[float]:
    if step <= 0 or hi < lo:
        raise ValidationError(f"bad grid {lo}:{hi}:{step}")
    n = int(round((hi - lo) / step))
    return [round(lo + k * step, 10) for k in range(n + 1)]


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise ValidationError(f"expected comma-separated numbers, got {text!r}") from exc


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _optimizer(args) -> OptimizerConfig:
    return OptimizerConfig(n_starts=args.starts, seed=args.seed, max_evals=args.max_evals, workers=args.workers)


def _trunc(args, default: int) -> TruncationPolicy:
    return TruncationPolicy(args.dim or default, args.leak_tol)


# --- subcommands ------------------------------------------------------------

def _gen_state(args, rc: RunConfig) -> None:
    trunc = _trunc(args, 20)
    kind = args.kind
    if kind == "noon":
        params = {"n": args.n}
        state = S.noon(args.n, trunc)
    elif kind == "tmsv":
        params = {"xi": args.xi}
        state = S.tmsv(args.xi, trunc)
    elif kind == "stmsv":
        params = {"r": args.r}
        state = S.stmsv(args.r, trunc)
    elif kind == "three-spdc":
        params = {"g": args.g}
        state = S.three_spdc(args.g, trunc)
    elif kind == "cat":
        params = {"alpha": args.alpha}
        state = S.two_mode_cat(args.alpha, trunc)
    elif kind == "tmsv-mixture":
        params = {"p": args.p, "xi1": args.xi1, "xi2": args.xi2}
        state = S.tmsv_mixture(args.p, args.xi1, args.xi2, trunc)
    elif kind == "photon-subtracted":
        prog = S.GateProgram.from_list(json.loads(args.program)) if args.program else S.GateProgram(
            (S.Gate("two_mode_squeeze", args.xi),)
        )
        params = {"k": args.k, "program": prog.to_list()}
        state = S.photon_subtracted(args.k, prog, trunc)
    elif kind == "hom":
        params = {}
        state = S.hom_state(trunc)
    else:  # vacuum
        params = {}
        state = S.vacuum(trunc)
    meta = {"generator": kind, "params": params, "dim": trunc.D, "leakage": leakage(state), "run_config": rc.to_dict()}
    _emit(_dump(state_to_dict(state, meta)), args.out)


def _witness(args, rc: RunConfig) -> None:
    state = load_state(args.input, args.leak_tol)
    out = {"witness": args.which, "dim": state.dim, "kind": "pure" if isinstance(state, PureState) else "mixed"}
    if args.which == "e":
        value = witness_E(state)
        out.update(value=value, d=dimension_d(value))
    elif args.which == "e-ng":
        res = witness_ENG(state, _optimizer(args))
        out.update(res.to_dict())
        out["learning_bound"] = learning_bound(min(res.d, state.dim), state.dim)
    else:
        if args.n is None:
            raise ValidationError("witness f needs --n")
        out.update(value=noon_witness_f(state, args.n), n=args.n)
    out["run_config"] = rc.to_dict()
    _emit(_dump(out), args.out)


def _noon_threshold(args, rc: RunConfig) -> None:
    rows = noon_threshold_table(args.n_min, args.n_max, _optimizer(args), args.dim)
    _emit(rows_to_csv(rows, NOON_COLUMNS, [f"run_config: {json.dumps(rc.to_dict(), sort_keys=True)}"]), args.out)


def _kerr_scan(args, rc: RunConfig) -> None:
    rows = kerr_scan(
        _grid(args.chi_min, args.chi_max, args.chi_step),
        _grid(args.delta_min, args.delta_max, args.delta_step),
        t=args.t,
        kappa_a=args.kappa,
        trunc=_trunc(args, 20),
        cfg=_optimizer(args),
    )
    _emit(rows_to_csv(rows, KERR_COLUMNS, [f"run_config: {json.dumps(rc.to_dict(), sort_keys=True)}"]), args.out)


def _loss_scan(args, rc: RunConfig) -> None:
    rows = loss_scan(
        _floats(args.gammas),
        time_grid(args.t_max, args.t_step),
        params=KerrParams(args.delta, args.chi, args.kappa),
        trunc=_trunc(args, 20),
        cfg=_optimizer(args),
        eng_times=None if args.eng_times is None else _floats(args.eng_times),
        eng_peak_only=args.eng_peak_only,
        distill_dim=args.distill_dim,
    )
    _emit(rows_to_csv(rows, LOSS_COLUMNS, [f"run_config: {json.dumps(rc.to_dict(), sort_keys=True)}"]), args.out)


def _distill(args, rc: RunConfig) -> None:
    state = load_state(args.input, args.leak_tol)
    grid = DEFAULT_M_GRID if args.m_grid is None else _floats(args.m_grid)
    res = optimize_distillation(as_density(state), _optimizer(args), grid)
    out = res.to_dict()
    out["run_config"] = rc.to_dict()
    _emit(_dump(out), args.out)


# --- parser -------------------------------------------------------------------

def _common(p: argparse.ArgumentParser, starts: int = 32) -> None:
    p.add_argument("--dim", type=int, default=None, help="Fock levels per mode")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--starts", type=int, default=starts, help="optimizer starts")
    p.add_argument("--max-evals", type=int, default=2000, help="objective evaluations per start")
    p.add_argument("--workers", type=int, default=1, help="processes for independent starts")
    p.add_argument("--leak-tol", type=float, default=1e-6)
    p.add_argument("--out", default=None, help="output path (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ngent", description="Non-Gaussian entanglement witnesses.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    g = sub.add_parser("gen-state", help="write a named state as JSON")
    g.add_argument("kind", choices=sorted(S.GENERATORS))
    g.add_argument("--n", type=int, default=1, help="NOON order")
    g.add_argument("--xi", type=float, default=0.5, help="two-mode squeezing")
    g.add_argument("--r", type=float, default=0.5, help="sTMSV squeezing")
    g.add_argument("--g", type=float, default=0.1, help="3-SPDC coupling")
    g.add_argument("--alpha", type=float, default=1.0, help="cat amplitude")
    g.add_argument("--p", type=float, default=0.5, help="mixture weight")
    g.add_argument("--xi1", type=float, default=0.4)
    g.add_argument("--xi2", type=float, default=-0.4)
    g.add_argument("--k", type=int, default=1, help="photons subtracted from mode A")
    g.add_argument("--program", default=None, help="gate program as a JSON list")
    _common(g)

    w = sub.add_parser("witness", help="evaluate E, E_NG or the NOON witness f")
    w.add_argument("which", choices=["e", "e-ng", "f"])
    w.add_argument("--in", dest="input", required=True)
    w.add_argument("--n", type=int, default=None, help="NOON order for f")
    _common(w)

    n = sub.add_parser("noon-threshold", help="CSV of f_G(N)")
    n.add_argument("--n-min", type=int, default=1)
    n.add_argument("--n-max", type=int, default=10)
    _common(n)

    k = sub.add_parser("kerr-scan", help="CSV of E_NG over (chi, delta) at fixed t")
    k.add_argument("--chi-min", type=float, default=0.0)
    k.add_argument("--chi-max", type=float, default=1.0)
    k.add_argument("--chi-step", type=float, default=0.25)
    k.add_argument("--delta-min", type=float, default=-2.0)
    k.add_argument("--delta-max", type=float, default=2.0)
    k.add_argument("--delta-step", type=float, default=1.0)
    k.add_argument("--t", type=float, default=1.0)
    k.add_argument("--kappa", type=float, default=1.0)
    _common(k)

    ls = sub.add_parser("loss-scan", help="CSV of E, E_NG (and distilled E) along lossy trajectories")
    ls.add_argument("--gammas", default="0,0.1,0.5")
    ls.add_argument("--t-max", type=float, default=2.0)
    ls.add_argument("--t-step", type=float, default=0.1)
    ls.add_argument("--eng-times", default=None, help="comma-separated subset of times for E_NG")
    ls.add_argument("--eng-peak-only", action="store_true", help="compute E_NG only around its maximum")
    ls.add_argument("--chi", type=float, default=1.0)
    ls.add_argument("--delta", type=float, default=0.0)
    ls.add_argument("--kappa", type=float, default=1.0)
    ls.add_argument("--distill-dim", type=int, default=None, help="also distill, regenerating inputs at this D")
    _common(ls)

    d = sub.add_parser("distill", help="optimize the two-copy protocol for a state JSON")
    d.add_argument("--in", dest="input", required=True)
    d.add_argument("--m-grid", default=None, help="comma-separated outcomes m")
    _common(d, starts=8)
    return parser


HANDLERS = {
    "gen-state": _gen_state,
    "witness": _witness,
    "noon-threshold": _noon_threshold,
    "kerr-scan": _kerr_scan,
    "loss-scan": _loss_scan,
    "distill": _distill,
}
_BASE = {"subcommand", "dim", "seed", "starts", "leak_tol", "out"}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    options = {k: v for k, v in sorted(vars(args).items()) if k not in _BASE}
    rc = RunConfig(args.subcommand, args.dim, args.seed, args.starts, args.leak_tol, args.out, options)
    try:
        HANDLERS[args.subcommand](args, rc)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NumericalError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
