"""Combinational gate netlists for substitution tables, plus stuck-at faults.

Text format, one statement per line (# starts a comment):

    input x3
    gate n3 NOT x3
    gate t0 AND x3 n3 x1
    output y3 = t0

Wires are input names, gate ids, or the reserved constant wires "0" and "1".
Every gate may only reference wires defined on earlier lines, so a parsed
netlist is acyclic by construction. Inputs and outputs are listed most
significant bit first; evaluating on an n-bit integer assigns bit n-1 to the
first input.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError

GATE_ARITY = {
    "NOT": (1, 1),
    "BUF": (1, 1),
    "AND": (2, None),
    "OR": (2, None),
    "XOR": (2, None),
    "NAND": (2, None),
    "NOR": (2, None),
}

CONST_WIRES = ("0", "1")


@dataclass(frozen=True)
class Gate:
    gid: str
    kind: str
    inputs: tuple


@dataclass(frozen=True)
class GateFault:
    """Stuck-at fault on one gate: pin k forces input k, pin None forces the output."""

    gate: str
    pin: int | None
    stuck: int

    def __post_init__(self):
        if self.stuck not in (0, 1):
            raise ConfigurationError(f"stuck value must be 0 or 1, got {self.stuck}")


@dataclass(frozen=True)
class Netlist:
    inputs: tuple
    gates: tuple
    outputs: tuple  # (name, wire) pairs

    def __post_init__(self):
        defined = set(CONST_WIRES)
        for name in self.inputs:
            _check_name(name)
            if name in defined:
                raise ConfigurationError(f"duplicate wire name {name!r}")
            defined.add(name)
        for g in self.gates:
            _check_name(g.gid)
            if g.kind not in GATE_ARITY:
                raise ConfigurationError(f"gate {g.gid}: unknown kind {g.kind!r}")
            lo, hi = GATE_ARITY[g.kind]
            if len(g.inputs) < lo or (hi is not None and len(g.inputs) > hi):
                raise ConfigurationError(
                    f"gate {g.gid}: {g.kind} takes {lo}{'+' if hi is None else ''} inputs, got {len(g.inputs)}"
                )
            for w in g.inputs:
                if w not in defined:
                    raise ConfigurationError(f"gate {g.gid}: wire {w!r} used before definition")
            if g.gid in defined:
                raise ConfigurationError(f"duplicate wire name {g.gid!r}")
            defined.add(g.gid)
        seen_out = set()
        for name, wire in self.outputs:
            _check_name(name)
            if name in seen_out:
                raise ConfigurationError(f"duplicate output {name!r}")
            seen_out.add(name)
            if wire not in defined:
                raise ConfigurationError(f"output {name}: undefined wire {wire!r}")

    def gate_map(self) -> dict:
        return {g.gid: g for g in self.gates}

    def stats(self) -> dict:
        counts = {}
        for g in self.gates:
            counts[g.kind] = counts.get(g.kind, 0) + 1
        counts["total"] = len(self.gates)
        return counts


def _check_name(name: str) -> None:
    if not name or name in CONST_WIRES or any(ch.isspace() for ch in name) or name == "=":
        raise ConfigurationError(f"bad wire name {name!r}")


def _apply_kind(kind, args):
    # negation via xor-with-True keeps python bools and numpy bool arrays on one path
    if kind == "NOT":
        return args[0] ^ True
    if kind == "BUF":
        return args[0]
    acc = args[0]
    for a in args[1:]:
        if kind in ("AND", "NAND"):
            acc = acc & a
        elif kind in ("OR", "NOR"):
            acc = acc | a
        else:
            acc = acc ^ a
    if kind in ("NAND", "NOR"):
        acc = acc ^ True
    return acc


def _wire_values(net: Netlist, seed_values: dict) -> dict:
    values = dict(seed_values)
    for g in net.gates:
        values[g.gid] = _apply_kind(g.kind, [values[w] for w in g.inputs])
    return values


def evaluate(net: Netlist, x: int) -> int:
    """Apply the circuit to one integer input, reading inputs MSB first."""
    n = len(net.inputs)
    if not 0 <= x < (1 << n):
        raise ConfigurationError(f"input {x} out of range for {n} input wires")
    seed = {"0": False, "1": True}
    for i, name in enumerate(net.inputs):
        seed[name] = bool((x >> (n - 1 - i)) & 1)
    values = _wire_values(net, seed)
    y = 0
    m = len(net.outputs)
    for j, (_, wire) in enumerate(net.outputs):
        y |= int(values[wire]) << (m - 1 - j)
    return y


def derive_table(net: Netlist) -> np.ndarray:
    """Truth table over all 2^n inputs, vectorized; returns uint8 values."""
    n = len(net.inputs)
    if len(net.outputs) > 8:
        raise ConfigurationError("derive_table supports at most 8 output bits")
    xs = np.arange(1 << n, dtype=np.uint32)
    seed = {
        "0": np.zeros(1 << n, dtype=bool),
        "1": np.ones(1 << n, dtype=bool),
    }
    for i, name in enumerate(net.inputs):
        seed[name] = ((xs >> (n - 1 - i)) & 1).astype(bool)
    values = _wire_values(net, seed)
    m = len(net.outputs)
    table = np.zeros(1 << n, dtype=np.uint8)
    for j, (_, wire) in enumerate(net.outputs):
        table |= values[wire].astype(np.uint8) << (m - 1 - j)
    return table


def expand_fanin(net: Netlist, max_inputs: int = 2) -> Netlist:
    """Rewrite wide gates as balanced trees of gates with at most max_inputs
    inputs (technology mapping to bounded fan-in).

    Intermediate wires are named {gid}.t{k}; the tree root keeps the original
    gid so outputs and downstream gates are untouched. For NAND/NOR the tree
    reduces with AND/OR and only the root inverts, preserving the function.
    """
    if max_inputs < 2:
        raise ConfigurationError("max_inputs must be >= 2")
    new_gates = []
    for g in net.gates:
        if len(g.inputs) <= max_inputs:
            new_gates.append(g)
            continue
        reduce_kind = {"NAND": "AND", "NOR": "OR"}.get(g.kind, g.kind)
        level = list(g.inputs)
        k = 0
        while len(level) > max_inputs:
            nxt = []
            for lo in range(0, len(level), max_inputs):
                chunk = level[lo : lo + max_inputs]
                if len(chunk) == 1:
                    nxt.append(chunk[0])
                    continue
                wire = f"{g.gid}.t{k}"
                k += 1
                new_gates.append(Gate(wire, reduce_kind, tuple(chunk)))
                nxt.append(wire)
            level = nxt
        new_gates.append(Gate(g.gid, g.kind, tuple(level)))
    return Netlist(net.inputs, tuple(new_gates), net.outputs)


def inject_gate_fault(net: Netlist, fault: GateFault) -> Netlist:
    """Return a copy of the netlist with one stuck-at fault rewritten in."""
    gmap = net.gate_map()
    if fault.gate not in gmap:
        raise ConfigurationError(f"no gate named {fault.gate!r}")
    const = CONST_WIRES[fault.stuck]
    new_gates = []
    for g in net.gates:
        if g.gid != fault.gate:
            new_gates.append(g)
            continue
        if fault.pin is None:
            new_gates.append(Gate(g.gid, "BUF", (const,)))
        else:
            if not 0 <= fault.pin < len(g.inputs):
                raise ConfigurationError(
                    f"gate {g.gid} has {len(g.inputs)} input pins, no pin {fault.pin}"
                )
            wires = list(g.inputs)
            wires[fault.pin] = const
            new_gates.append(Gate(g.gid, g.kind, tuple(wires)))
    return Netlist(net.inputs, tuple(new_gates), net.outputs)


def save_netlist(net: Netlist, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_netlist(net))


def format_netlist(net: Netlist) -> str:
    lines = [f"input {name}" for name in net.inputs]
    lines += [f"gate {g.gid} {g.kind} " + " ".join(g.inputs) for g in net.gates]
    lines += [f"output {name} = {wire}" for name, wire in net.outputs]
    return "\n".join(lines) + "\n"


def parse_netlist(text: str) -> Netlist:
    inputs, gates, outputs = [], [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        try:
            if tokens[0] == "input" and len(tokens) == 2:
                inputs.append(tokens[1])
            elif tokens[0] == "gate" and len(tokens) >= 4:
                gates.append(Gate(tokens[1], tokens[2], tuple(tokens[3:])))
            elif tokens[0] == "output" and len(tokens) == 4 and tokens[2] == "=":
                outputs.append((tokens[1], tokens[3]))
            else:
                raise ConfigurationError(f"unrecognized statement {line!r}")
        except ConfigurationError as e:
            raise ConfigurationError(f"line {lineno}: {e}") from None
    try:
        return Netlist(tuple(inputs), tuple(gates), tuple(outputs))
    except ConfigurationError as e:
        raise ConfigurationError(f"invalid netlist: {e}") from None


def load_netlist(path) -> Netlist:
    with open(path) as fh:
        return parse_netlist(fh.read())
