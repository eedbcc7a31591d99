"""Gaussian-entanglable threshold f_G(N) of the NOON-type witness."""
from _common import optimizer, parser, write
from ngent.scans import NOON_COLUMNS, noon_threshold_table


def main():
    p = parser(__doc__)
    p.add_argument("--n-max", type=int, default=10)
    args = p.parse_args()
    # the search picks its own cutoff per N unless --dim is given explicitly
    rows = noon_threshold_table(1, args.n_max, optimizer(args), None)
    write(args, "noon_threshold.csv", rows, NOON_COLUMNS)


if __name__ == "__main__":
    main()
