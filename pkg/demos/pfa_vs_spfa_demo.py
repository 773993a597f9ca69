"""Counting attack versus SEI attack on the same single-fault batch.

With exactly one corrupted entry of known original value, the classical
counting attack reads each key byte as v xor (the ciphertext value that never
occurs). The SEI attack does not need to know the fault at all: it ranks key
hypotheses by the imbalance of partially decrypted values. The price is more
ciphertexts at f=1; the payoff is that it keeps working when many unknown
entries are corrupted, where the counting argument falls apart.
"""

import argparse

import numpy as np

from spfa import aes, attack, experiment, faults
from spfa.ciphers import AES128

parser = argparse.ArgumentParser(description=__doc__)
parser.add_argument("--seed", type=int, default=5)
parser.add_argument("--max-n", type=int, default=40000)
args = parser.parse_args()

rng = np.random.default_rng(args.seed)
key = rng.integers(0, 256, 16).astype(np.uint8)
k10 = aes.key_schedule(key)[aes.ROUNDS]

# one corrupted entry, both its index and old value known to the baseline
spec = faults.single_entry_fault(aes.AES_SBOX, rng)
idx, new = spec.entries[0]
faulted, _ = faults.apply_fault(aes.AES_SBOX, spec)
print(f"fault: S[{idx:#04x}] = {aes.AES_SBOX[idx]:#04x} -> {new:#04x}")

batch = experiment.collect("AES128", key, faulted, args.max_n, seed=int(rng.integers(2**63)))

# counting attack: scan checkpoints until all 16 bytes are unambiguous+correct
scan = experiment.pfa_needed_n(batch, idx, k10, stride=250, max_n=args.max_n)
print(f"counting attack: needed-N {scan.needed_n} (all 16 bytes of k10)")

# SEI attack on group 0, two bytes pinned: needs no knowledge of the fault
truth = attack.true_group_value(AES128, key, 0)
fixed = {s: (truth >> (8 * (3 - s))) & 0xFF for s in (2, 3)}
search = attack.prepare_search(batch, attack.AttackTarget("AES128", group=0), fixed=fixed)
sei_scan = attack.scan_needed_n(search, truth, stride=250, max_n=args.max_n)
print(f"SEI attack:      needed-N {sei_scan.needed_n} (one group, fault unknown)")

# where the counting attack loses its footing: 16 unknown corrupted entries
spec16 = faults.exact_count_fault(aes.AES_SBOX, 16, rng)
faulted16, _ = faults.apply_fault(aes.AES_SBOX, spec16)
batch16 = experiment.collect("AES128", key, faulted16, 8000, seed=int(rng.integers(2**63)))
search16 = attack.prepare_search(batch16, attack.AttackTarget("AES128", group=0), fixed=fixed)
scan16 = attack.scan_needed_n(search16, truth, stride=250, max_n=8000)
print(f"SEI at f=16:     needed-N {scan16.needed_n} "
      f"(fewer ciphertexts than either f=1 attack)")
