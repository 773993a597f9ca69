"""Tour of the fault models and their measured effect on a table.

Every fault spec is a small JSON-serializable value; apply_fault returns the
corrupted table plus a report of what actually changed. The effective count
is measured by diffing tables, never assumed: a replacement can coincide with
the original entry, and a pair swap always changes exactly two entries while
keeping the table a bijection (which is why it feeds the key search nothing).
"""

import json

import numpy as np

from spfa import aes, faults, led

rng = np.random.default_rng(7)

# swap two entries: bijective, two entries differ, output histogram unchanged
spec = faults.SwapPair(i=0x12, j=0xA7)
faulted, report = faults.apply_fault(aes.AES_SBOX, spec)
print(f"swap_pair        effective={report.effective_fault_count} "
      f"bijective={report.bijective}")

# overwrite entries with chosen values; one collides with the original
spec = faults.ReplaceEntries(entries=((0, aes.AES_SBOX[0]), (1, 0xFF), (2, 0x00)))
faulted, report = faults.apply_fault(aes.AES_SBOX, spec)
print(f"replace_entries  effective={report.effective_fault_count} "
      f"(one replacement was the original value)")

# overwrite two whole 16-entry rows with seeded random bytes
spec = faults.ReplaceRows(rows=(3, 9), seed=11)
faulted, report = faults.apply_fault(aes.AES_SBOX, spec)
print(f"replace_rows     effective={report.effective_fault_count} "
      f"ineffectiveness={report.ineffectiveness_ratio}")

# xor chosen entries with masks
spec = faults.BitFlips(flips=((5, 0x01), (6, 0x80)))
faulted, report = faults.apply_fault(aes.AES_SBOX, spec)
print(f"bit_flips        effective={report.effective_fault_count}")

# a stuck-at fault in the synthesized circuit of the LED Sbox
spec = faults.NetlistFaults(faults=(faults.GateFault("or_y0", None, 1),))
faulted, report = faults.apply_fault(led.PRESENT_SBOX, spec)
print(f"netlist          effective={report.effective_fault_count} of 16 "
      f"(output bit 0 stuck at 1)")

# helpers that sample until a target severity is hit
spec = faults.exact_count_fault(aes.AES_SBOX, 32, rng)
faulted, report = faults.apply_fault(aes.AES_SBOX, spec)
print(f"exact_count(32)  effective={report.effective_fault_count}")

spec, report = faults.find_gate_fault(
    aes.AES_SBOX, rng, min_count=60, max_count=64, max_tries=5000, fanin2=True
)
g = spec.faults[0]
print(f"gate search      {g.gate} stuck-at-{g.stuck} "
      f"effective={report.effective_fault_count}")

# every spec round-trips through JSON, so experiments can be replayed
text = json.dumps(faults.spec_to_dict(spec))
again = faults.spec_from_dict(json.loads(text))
print(f"json roundtrip   {'ok' if again == spec else 'BROKEN'}")
print(f"table digest     {report.table_sha256[:16]}...")
