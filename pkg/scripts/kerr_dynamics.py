"""Squeezed-Kerr states: E_NG over (chi, delta) at fixed t, and E / E_NG / distilled E versus t under loss."""
from _common import optimizer, parser, write
from ngent.dynamics import KerrParams
from ngent.fock import TruncationPolicy
from ngent.scans import KERR_COLUMNS, LOSS_COLUMNS, kerr_scan, loss_scan, time_grid
from ngent.witnesses import OptimizerConfig


def grid(text):
    lo, hi, step = (float(x) for x in text.split(":"))
    n = int(round((hi - lo) / step))
    return [round(lo + k * step, 10) for k in range(n + 1)]


def main():
    p = parser(__doc__)
    p.add_argument("--chi", default="0:1:0.25", help="lo:hi:step")
    p.add_argument("--delta", default="-2:2:1", help="lo:hi:step")
    p.add_argument("--gammas", default="0,0.1,0.5")
    p.add_argument("--lossy-dim", type=int, default=18)
    p.add_argument("--distill-dim", type=int, default=6)
    p.add_argument("--skip-grid", action="store_true")
    p.add_argument("--skip-loss", action="store_true")
    args = p.parse_args()
    cfg = optimizer(args)

    if not args.skip_grid:
        rows = kerr_scan(grid(args.chi), grid(args.delta), t=1.0, kappa_a=1.0,
                         trunc=TruncationPolicy(args.dim), cfg=cfg)
        write(args, "kerr_grid.csv", rows, KERR_COLUMNS)

    if not args.skip_loss:
        rows = loss_scan(
            [float(g) for g in args.gammas.split(",")],
            time_grid(2.0, 0.1),
            params=KerrParams(0.0, 1.0, 1.0),
            trunc=TruncationPolicy(args.lossy_dim),
            cfg=cfg,
            eng_peak_only=True,
            distill_dim=args.distill_dim,
            distill_cfg=OptimizerConfig(n_starts=4, seed=args.seed, max_evals=300, workers=args.workers),
        )
        write(args, "kerr_loss.csv", rows, LOSS_COLUMNS)


if __name__ == "__main__":
    main()
