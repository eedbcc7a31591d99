"""Lower bound on the number of real parameters needed to learn a state of witnessed dimension d."""
from _common import parser, write
from ngent.witnesses import learning_bound


def main():
    args = parser(__doc__).parse_args()
    rows = [{"d": d, "D": args.dim, "bound": learning_bound(d, args.dim), "full_tomography": 2 * args.dim**2 - 2}
            for d in range(1, args.dim + 1)]
    write(args, "learning_bound.csv", rows, ["d", "D", "bound", "full_tomography"])


if __name__ == "__main__":
    main()
