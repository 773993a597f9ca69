"""Shared fixtures: small seeded batches reused across test modules."""

import numpy as np
import pytest

from spfa import aes, experiment, faults, led


def make_aes_batch(master_seed, n, fault_count, include_true_key=False):
    """Seeded AES batch plus everything a test needs to check an attack."""
    key_seed, fault_seed, collect_seed = experiment.child_seeds(master_seed, 0)
    key = np.random.default_rng(key_seed).integers(0, 256, 16, dtype=np.int64).astype(np.uint8)
    spec_f = faults.exact_count_fault(aes.AES_SBOX, fault_count, np.random.default_rng(fault_seed))
    faulted, report = faults.apply_fault(aes.AES_SBOX, spec_f)
    batch = experiment.collect(
        "AES128", key, faulted, n, collect_seed, include_true_key=include_true_key
    )
    return batch, key, spec_f, report


def make_led_batch(master_seed, n):
    key_seed, fault_seed, collect_seed = experiment.child_seeds(master_seed, 0)
    key = np.random.default_rng(key_seed).integers(0, 16, 16, dtype=np.int64).astype(np.uint8)
    spec_f = faults.single_entry_fault(led.PRESENT_SBOX, np.random.default_rng(fault_seed))
    faulted, report = faults.apply_fault(led.PRESENT_SBOX, spec_f)
    batch = experiment.collect("LED64", key, faulted, n, collect_seed)
    return batch, key, spec_f, report


@pytest.fixture(scope="session")
def aes_batch_f32():
    """One AES batch with a 32-entry fault, shared by the attack tests."""
    return make_aes_batch(101, 3000, 32)


@pytest.fixture(scope="session")
def led_batch_1000():
    return make_led_batch(202, 1000)
