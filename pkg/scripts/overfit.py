"""Overfit a small synthetic corpus and report train-set top-1 exact match.

    python scripts/overfit.py --examples 50
"""
import argparse
import time

import torch

from jsgen.experiments import overfit_experiment
from jsgen.neural import ModelConfig, TrainConfig


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--examples", type=int, default=50)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--epochs", type=int, default=300)
    p.add_argument("--hidden", type=int, default=64)
    p.add_argument("--lr", type=float, default=2e-3)
    args = p.parse_args(argv)
    torch.set_num_threads(1)
    start = time.perf_counter()
    acc, epochs = overfit_experiment(args.examples, args.seed, ModelConfig(args.hidden, args.hidden),
                                     TrainConfig(epochs=args.epochs, lr=args.lr, seed=args.seed, target_loss=0.01))
    print(f"train top-1 {acc:.1f}% after {epochs} epochs ({time.perf_counter() - start:.0f}s)")


if __name__ == "__main__":
    main()
