import argparse
import json
from pathlib import Path

from ngent.scans import rows_to_csv
from ngent.witnesses import OptimizerConfig


def parser(description: str, dim: int = 20, starts: int = 32) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(description=description)
    p.add_argument("--dim", type=int, default=dim)
    p.add_argument("--starts", type=int, default=starts)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-evals", type=int, default=2000)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default="results")
    return p


def optimizer(args) -> OptimizerConfig:
    return OptimizerConfig(n_starts=args.starts, seed=args.seed, max_evals=args.max_evals, workers=args.workers)


def write(args, name: str, rows, columns) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / name
    header = [f"args: {json.dumps(vars(args), sort_keys=True)}"]
    path.write_text(rows_to_csv(rows, columns, header))
    print(f"wrote {path} ({len(rows)} rows)")
    return path
