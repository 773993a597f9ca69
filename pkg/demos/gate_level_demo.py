"""From substitution table to gate netlist and back, with stuck-at faults.

The synthesizer builds a two-level sum-of-products circuit per output bit
(Quine-McCluskey prime implicants, greedy cover). expand_fanin maps it to
2-input gates, which matters for fault injection: a flat wide gate only
offers all-or-one-term failure modes, while the balanced trees expose every
intermediate severity. The netlist text format survives a save/load
roundtrip, and derive_table checks the circuit against the original table
over all inputs.
"""

import numpy as np

from spfa import aes, led, netlist as nl, qm

# synthesize both tables and check them exhaustively
for name, sbox in (("LED", led.PRESENT_SBOX), ("AES", aes.AES_SBOX)):
    net = qm.synthesize_sop(sbox)
    exact = np.array_equal(nl.derive_table(net), sbox.table)
    print(f"{name}: {net.stats()} exact={exact}")

# bounded fan-in mapping of the AES circuit
net = qm.synthesize_sop(aes.AES_SBOX)
net2 = nl.expand_fanin(net)
print(f"2-input mapping: {net2.stats()} "
      f"exact={np.array_equal(nl.derive_table(net2), aes.AES_SBOX.table)}")

# single stuck-at faults and their footprint on the table
clean = nl.derive_table(net2)
for gate, pin, stuck in (("or_y7", None, 1), ("t0", None, 0), ("or_y0.t3", None, 0)):
    faulted = nl.inject_gate_fault(net2, nl.GateFault(gate, pin, stuck))
    diff = int(np.count_nonzero(nl.derive_table(faulted) != clean))
    where = "output" if pin is None else f"pin {pin}"
    print(f"stuck-at-{stuck} on {gate} ({where}): {diff}/256 entries corrupted")

# the text format is the exchange format for the CLI circuit commands
text = nl.format_netlist(qm.synthesize_sop(led.PRESENT_SBOX))
parsed = nl.parse_netlist(text)
print(f"text roundtrip: {'ok' if parsed == qm.synthesize_sop(led.PRESENT_SBOX) else 'BROKEN'}")
print()
print("\n".join(text.splitlines()[:10]))
print(f"... {len(text.splitlines())} lines total")
