"""How many ciphertexts does the attack need as the fault count grows?

Few corrupted entries mean a weak bias that takes many ciphertexts to detect;
very many corrupted entries mean the four last-round lookups almost never all
land on clean entries, which starves the distinguisher too. In between sits a
sweet spot. A closed-form signal model predicts the U-shape; the sweep
measures it with the full needed-N protocol (checkpoint stride 250, success =
true hypothesis strictly first and stable for two further checkpoints).
"""

import argparse

from spfa import experiment

parser = argparse.ArgumentParser(description=__doc__)
parser.add_argument("--seed", type=int, default=1)
parser.add_argument("--trials", type=int, default=3)
parser.add_argument(
    "--faults", type=int, nargs="+", default=[2, 8, 16, 32, 64],
    help="effective fault counts to measure",
)
args = parser.parse_args()

cfg = experiment.ExperimentConfig(
    cipher="AES128",
    master_seed=args.seed,
    trials=args.trials,
    fault_counts=tuple(args.faults),
)

print(f"{args.trials} trials per fault count, stride {cfg.stride}")
print()
result = experiment.sweep_fault_counts(
    cfg, log=lambda msg: print("  " + msg, flush=True)
)
print()
print(f"{'f':>5} {'median N':>10} {'min':>8} {'max':>8} {'model':>8}")
for row in result.summary():
    print(
        f"{row['f_target']:>5} {row['needed_n_median']:>10.0f} "
        f"{row['needed_n_min']:>8.0f} {row['needed_n_max']:>8.0f} "
        f"{row['model_estimate']:>8.0f}"
    )
