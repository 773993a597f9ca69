"""Persistent-fault attack laboratory for SPN block ciphers.

The package simulates lasting corruption of a cipher's substitution table,
collects ciphertexts computed through the corrupted table, and recovers key
material by ranking key hypotheses with the square Euclidean imbalance of
partially decrypted values. It covers AES-128 and LED-64 end to end, a
16-bit toy SPN small enough for exhaustive ground truth, value-level and
gate-level fault models, and seeded experiment protocols with CSV output.

Typical flow:

    >>> import numpy as np
    >>> from spfa import aes, attack, experiment, faults
    >>> rng = np.random.default_rng(1)
    >>> key = rng.integers(0, 256, 16).astype(np.uint8)
    >>> spec = faults.exact_count_fault(aes.AES_SBOX, 16, rng)
    >>> faulted, report = faults.apply_fault(aes.AES_SBOX, spec)
    >>> batch = experiment.collect("AES128", key, faulted, 4000, seed=2)
    >>> target = attack.AttackTarget("AES128", group=0)
    >>> true = attack.true_group_value(attack.AES128, key, 0)
    >>> fixed = {s: (true >> (8 * (3 - s))) & 0xFF for s in (2, 3)}
    >>> ranking = attack.run_attack(batch, target, fixed=fixed)
    >>> ranking.best == true
    True
"""

from . import aes, attack, ciphers, experiment, faults, fullsearch, gf
from . import led, netlist, qm, sbox, sei, toyspn
from .attack import (
    AttackTarget,
    SeiRanking,
    led_key_recover,
    pfa_baseline,
    run_attack,
    scan_needed_n,
    true_group_value,
)
from .ciphers import AES128, LED64, CiphertextBatch, get_cipher, load_batch, save_batch
from .errors import ConfigurationError, ContractViolation, UnsupportedConfiguration
from .faults import (
    BitFlips,
    FaultReport,
    NetlistFaults,
    ReplaceEntries,
    ReplaceRows,
    SwapPair,
    apply_fault,
    load_spec,
    save_spec,
)
from .sbox import Sbox, load_sbox

__version__ = "0.1.0"

__all__ = [
    "AES128",
    "AttackTarget",
    "BitFlips",
    "CiphertextBatch",
    "ConfigurationError",
    "ContractViolation",
    "FaultReport",
    "LED64",
    "NetlistFaults",
    "ReplaceEntries",
    "ReplaceRows",
    "Sbox",
    "SeiRanking",
    "SwapPair",
    "UnsupportedConfiguration",
    "aes",
    "apply_fault",
    "attack",
    "ciphers",
    "experiment",
    "faults",
    "fullsearch",
    "get_cipher",
    "gf",
    "led",
    "led_key_recover",
    "load_batch",
    "load_sbox",
    "load_spec",
    "netlist",
    "pfa_baseline",
    "qm",
    "run_attack",
    "save_batch",
    "save_spec",
    "sbox",
    "scan_needed_n",
    "sei",
    "toyspn",
    "true_group_value",
    "__version__",
]
