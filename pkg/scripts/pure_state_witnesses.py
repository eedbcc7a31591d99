"""E and E_NG for NOON, superposed-TMSV and three-photon SPDC states, plus the GE examples."""
import numpy as np

from _common import optimizer, parser, write
from ngent import states as S
from ngent.fock import TruncationPolicy, leakage
from ngent.witnesses import witness_E, witness_ENG

COLUMNS = ["family", "param", "E", "E_NG", "d", "leakage"]


def row(family, param, state, cfg):
    res = witness_ENG(state, cfg)
    return {"family": family, "param": param, "E": witness_E(state), "E_NG": res.value,
            "d": res.d, "leakage": leakage(state)}


def main():
    p = parser(__doc__)
    p.add_argument("--noon-max", type=int, default=6)
    p.add_argument("--r-values", default="0.2,0.4,0.6,0.8,1.0")
    p.add_argument("--g-values", default="0.05,0.1,0.15")
    args = p.parse_args()
    cfg, T = optimizer(args), TruncationPolicy(args.dim)

    rows = [row("noon", N, S.noon(N, T), cfg) for N in range(1, args.noon_max + 1)]
    write(args, "noon.csv", rows, COLUMNS)

    rs = [float(x) for x in args.r_values.split(",")]
    write(args, "stmsv.csv", [row("stmsv", r, S.stmsv(r, T), cfg) for r in rs], COLUMNS)

    gs = [float(x) for x in args.g_values.split(",")]
    write(args, "three_spdc.csv", [row("three-spdc", g, S.three_spdc(g, T), cfg) for g in gs], COLUMNS)

    psub = S.photon_subtracted(1, S.GateProgram((S.Gate("two_mode_squeeze", 0.5),)), T)
    ge = [
        row("cat", 0.5, S.two_mode_cat(0.5, T), cfg),
        row("cat", 1.0, S.two_mode_cat(1.0, T), cfg),
        row("tmsv-mixture", 0.4, S.tmsv_mixture(0.5, 0.4, -0.4, T), cfg),
        row("photon-subtracted", 0.5, psub, cfg),
        row("hom", np.nan, S.hom_state(T), cfg),
    ]
    write(args, "ge_examples.csv", ge, COLUMNS)


if __name__ == "__main__":
    main()
