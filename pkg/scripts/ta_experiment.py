"""Task-augmentation experiment on the synthetic corpus.

Trains with and without the semantic-table task for each seed and prints
top-1 accuracy and variable-usage F1 on the held-out-identifier test split.

    python scripts/ta_experiment.py --seeds 0 1 2 --epochs 100
"""
import argparse
import json
import logging
import statistics

import torch

from jsgen.experiments import ta_experiment
from jsgen.neural import ModelConfig, TrainConfig


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--seeds", type=int, nargs="+", default=[0, 1, 2])
    p.add_argument("--epochs", type=int, default=100)
    p.add_argument("--hidden", type=int, default=64)
    p.add_argument("--embed", type=int, default=64)
    p.add_argument("--lr", type=float, default=2e-3)
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--json", help="write per-run results here")
    p.add_argument("-v", "--verbose", action="store_true")
    args = p.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    torch.set_num_threads(1)

    model_cfg = ModelConfig(args.hidden, args.embed)
    train_cfg = TrainConfig(batch_size=args.batch_size, epochs=args.epochs, lr=args.lr)
    rows = []
    for seed in args.seeds:
        for mode in ("off", "mix"):
            r = ta_experiment(seed, mode, model_cfg, train_cfg)
            rows.append({"seed": seed, "mode": mode, "acc_1": r.report.acc_1, "var_f1": r.report.var_f1,
                         "seconds": round(r.seconds, 1)})
            print(f"seed {seed} {mode:>4}: acc_1 {r.report.acc_1:6.2f}  var_f1 {r.report.var_f1:6.2f}  "
                  f"({r.seconds:.0f}s)", flush=True)
    for metric in ("acc_1", "var_f1"):
        gains = [next(r[metric] for r in rows if r["seed"] == s and r["mode"] == "mix")
                 - next(r[metric] for r in rows if r["seed"] == s and r["mode"] == "off") for s in args.seeds]
        print(f"mean {metric} gain: {statistics.mean(gains):+.2f}")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
