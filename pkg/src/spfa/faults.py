"""Persistent fault models for substitution tables.

A fault spec is a small declarative object (JSON-serializable) describing how
to corrupt a table; apply_fault turns a clean Sbox into the faulted one plus a
FaultReport with the measured effect. Applying the same spec to the same table
always yields the same result: randomized kinds carry their own seed.

Value-level kinds: swap_pair, replace_entries, replace_rows, bit_flips.
Gate-level kind: netlist (stuck-at faults in the canonical synthesized
sum-of-products circuit of the table).
"""

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import netlist as nl
from . import qm
from .errors import ConfigurationError
from .netlist import GateFault
from .sbox import Sbox

RNG_FAMILY = "numpy-pcg64"


@dataclass(frozen=True)
class SwapPair:
    """Exchange entries i and j. Keeps the table bijective: a control fault
    that leaves ciphertexts uniform and therefore gives the key search no
    signal."""

    i: int
    j: int
    kind = "swap_pair"


@dataclass(frozen=True)
class ReplaceEntries:
    """Overwrite chosen entries with fixed values; entries is ((index, value), ...)."""

    entries: tuple
    kind = "replace_entries"

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple((int(i), int(v)) for i, v in self.entries))


@dataclass(frozen=True)
class ReplaceRows:
    """Overwrite whole 16-entry rows with seeded uniform random values
    (collisions with the original entries allowed; the report carries the
    effective count)."""

    rows: tuple
    seed: int
    kind = "replace_rows"

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(int(r) for r in self.rows))


@dataclass(frozen=True)
class BitFlips:
    """XOR chosen entries with fixed masks; flips is ((index, mask), ...)."""

    flips: tuple
    kind = "bit_flips"

    def __post_init__(self):
        object.__setattr__(self, "flips", tuple((int(i), int(m)) for i, m in self.flips))


@dataclass(frozen=True)
class NetlistFaults:
    """Stuck-at faults applied to the canonical synthesized circuit of the
    table. fanin2 first maps the circuit to 2-input gates, whose internal tree
    nodes expose the mid-size fault severities flat wide gates cannot."""

    faults: tuple
    fanin2: bool = False
    kind = "netlist"

    def __post_init__(self):
        object.__setattr__(self, "faults", tuple(self.faults))


FAULT_KINDS = {
    "swap_pair": SwapPair,
    "replace_entries": ReplaceEntries,
    "replace_rows": ReplaceRows,
    "bit_flips": BitFlips,
    "netlist": NetlistFaults,
}


@dataclass(frozen=True)
class FaultReport:
    kind: str
    sbox_size: int
    effective_fault_count: int
    fault_indices: tuple
    bijective: bool
    table_sha256: str
    rng: str | None = None
    seed: int | None = None

    @property
    def ineffectiveness_ratio(self) -> Fraction:
        return ineffectiveness_ratio(self.sbox_size, self.effective_fault_count)


def ineffectiveness_ratio(sbox_size: int, effective_fault_count: int) -> Fraction:
    """Probability that one substitution lookup misses every faulted entry, exact."""
    if not 0 <= effective_fault_count <= sbox_size:
        raise ConfigurationError("effective fault count out of range")
    return Fraction(sbox_size - effective_fault_count, sbox_size)


def table_digest(table: np.ndarray) -> str:
    return hashlib.sha256(np.asarray(table, dtype=np.uint8).tobytes()).hexdigest()


def _validate_index(i: int, size: int, what: str) -> None:
    if not 0 <= i < size:
        raise ConfigurationError(f"{what} {i} out of range for {size}-entry sbox")


def _faulted_table(clean: Sbox, spec) -> tuple[np.ndarray, dict]:
    size = clean.size
    table = clean.table.copy()
    extra = {}
    if isinstance(spec, SwapPair):
        _validate_index(spec.i, size, "index")
        _validate_index(spec.j, size, "index")
        if spec.i == spec.j:
            raise ConfigurationError("swap_pair needs two distinct indices")
        table[[spec.i, spec.j]] = table[[spec.j, spec.i]]
    elif isinstance(spec, ReplaceEntries):
        if not spec.entries:
            raise ConfigurationError("replace_entries needs at least one entry")
        seen = set()
        for i, v in spec.entries:
            _validate_index(i, size, "index")
            _validate_index(v, size, "value")
            if i in seen:
                raise ConfigurationError(f"index {i} replaced twice")
            seen.add(i)
            table[i] = v
    elif isinstance(spec, ReplaceRows):
        n_rows = size // 16
        if not spec.rows:
            raise ConfigurationError("replace_rows needs at least one row")
        if len(set(spec.rows)) != len(spec.rows):
            raise ConfigurationError("duplicate row index")
        for r in spec.rows:
            if not 0 <= r < n_rows:
                raise ConfigurationError(f"row {r} out of range for {n_rows} rows")
        rng = np.random.default_rng(spec.seed)
        for r in sorted(spec.rows):
            table[16 * r : 16 * r + 16] = rng.integers(0, size, 16, dtype=np.int64)
        extra = {"rng": RNG_FAMILY, "seed": int(spec.seed)}
    elif isinstance(spec, BitFlips):
        if not spec.flips:
            raise ConfigurationError("bit_flips needs at least one flip")
        seen = set()
        for i, m in spec.flips:
            _validate_index(i, size, "index")
            if not 0 < m < size:
                raise ConfigurationError(f"flip mask {m} out of range")
            if i in seen:
                raise ConfigurationError(f"index {i} flipped twice")
            seen.add(i)
            table[i] ^= m
    elif isinstance(spec, NetlistFaults):
        if not spec.faults:
            raise ConfigurationError("netlist fault spec needs at least one fault")
        net = qm.synthesize_sop(clean)
        if spec.fanin2:
            net = nl.expand_fanin(net)
        for f in spec.faults:
            net = nl.inject_gate_fault(net, f)
        table = nl.derive_table(net)
    else:
        raise ConfigurationError(f"unknown fault spec {spec!r}")
    return table, extra


def apply_fault(clean: Sbox, spec) -> tuple[Sbox, FaultReport]:
    table, extra = _faulted_table(clean, spec)
    faulted = Sbox(table)
    indices = clean.diff_indices(faulted)
    report = FaultReport(
        kind=spec.kind,
        sbox_size=clean.size,
        effective_fault_count=int(indices.size),
        fault_indices=tuple(int(i) for i in indices),
        bijective=faulted.is_bijection(),
        table_sha256=table_digest(table),
        **extra,
    )
    return faulted, report


def spec_to_dict(spec) -> dict:
    if isinstance(spec, SwapPair):
        return {"kind": spec.kind, "i": spec.i, "j": spec.j}
    if isinstance(spec, ReplaceEntries):
        return {"kind": spec.kind, "entries": [[i, v] for i, v in spec.entries]}
    if isinstance(spec, ReplaceRows):
        return {"kind": spec.kind, "rows": list(spec.rows), "seed": spec.seed}
    if isinstance(spec, BitFlips):
        return {"kind": spec.kind, "flips": [[i, m] for i, m in spec.flips]}
    if isinstance(spec, NetlistFaults):
        return {
            "kind": spec.kind,
            "fanin2": spec.fanin2,
            "faults": [
                {"gate": f.gate, "pin": f.pin, "stuck": f.stuck} for f in spec.faults
            ],
        }
    raise ConfigurationError(f"unknown fault spec {spec!r}")


def _as_int(v, what: str) -> int:
    if isinstance(v, str):
        try:
            return int(v, 0)
        except ValueError:
            raise ConfigurationError(f"bad {what} {v!r}") from None
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigurationError(f"bad {what} {v!r}")
    return v


def spec_from_dict(data: dict):
    if not isinstance(data, dict) or "kind" not in data:
        raise ConfigurationError("fault spec must be an object with a 'kind' field")
    kind = data["kind"]
    try:
        if kind == "swap_pair":
            return SwapPair(i=_as_int(data["i"], "index"), j=_as_int(data["j"], "index"))
        if kind == "replace_entries":
            return ReplaceEntries(
                entries=tuple(
                    (_as_int(i, "index"), _as_int(v, "value")) for i, v in data["entries"]
                )
            )
        if kind == "replace_rows":
            return ReplaceRows(
                rows=tuple(_as_int(r, "row") for r in data["rows"]),
                seed=_as_int(data["seed"], "seed"),
            )
        if kind == "bit_flips":
            return BitFlips(
                flips=tuple((_as_int(i, "index"), _as_int(m, "mask")) for i, m in data["flips"])
            )
        if kind == "netlist":
            return NetlistFaults(
                faults=tuple(
                    GateFault(
                        gate=str(f["gate"]),
                        pin=None if f.get("pin") is None else _as_int(f["pin"], "pin"),
                        stuck=_as_int(f["stuck"], "stuck value"),
                    )
                    for f in data["faults"]
                ),
                fanin2=bool(data.get("fanin2", False)),
            )
    except (KeyError, TypeError) as e:
        raise ConfigurationError(f"malformed {kind} fault spec: {e}") from None
    raise ConfigurationError(f"unknown fault kind {kind!r}")


def save_spec(spec, path) -> None:
    with open(path, "w") as fh:
        json.dump(spec_to_dict(spec), fh, indent=2)
        fh.write("\n")


def load_spec(path):
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as e:
            raise ConfigurationError(f"{path}: invalid JSON ({e})") from None
    return spec_from_dict(data)


def exact_count_fault(clean: Sbox, count: int, rng: np.random.Generator) -> ReplaceEntries:
    """Random replacement fault with effective count exactly `count`.

    Picks `count` distinct indices and draws each replacement uniformly from
    the values different from the original entry.
    """
    if not 1 <= count <= clean.size:
        raise ConfigurationError(f"fault count {count} out of range")
    idx = np.sort(rng.choice(clean.size, size=count, replace=False))
    entries = []
    for i in idx:
        v = int(rng.integers(0, clean.size - 1))
        if v >= int(clean.table[i]):
            v += 1
        entries.append((int(i), v))
    return ReplaceEntries(entries=tuple(entries))


def single_entry_fault(clean: Sbox, rng: np.random.Generator) -> ReplaceEntries:
    """One random entry overwritten with a random different value: the table
    loses one output value and doubles another."""
    return exact_count_fault(clean, 1, rng)


def find_gate_fault(
    clean: Sbox,
    rng: np.random.Generator,
    min_count: int = 1,
    max_count: int | None = None,
    max_tries: int = 1000,
    fanin2: bool = False,
) -> tuple[NetlistFaults, FaultReport]:
    """Draw random single stuck-at faults on the synthesized circuit until one
    corrupts between min_count and max_count entries.

    The flat two-level circuit only offers small severities (a product term)
    or large ones (an output line); pass fanin2=True to search the 2-input
    mapping, whose tree nodes cover the mid range as well.
    """
    net = qm.synthesize_sop(clean)
    if fanin2:
        net = nl.expand_fanin(net)
    if max_count is None:
        max_count = clean.size
    for _ in range(max_tries):
        g = net.gates[int(rng.integers(0, len(net.gates)))]
        pin = int(rng.integers(0, len(g.inputs) + 1)) - 1
        fault = GateFault(
            gate=g.gid, pin=None if pin < 0 else pin, stuck=int(rng.integers(0, 2))
        )
        table = nl.derive_table(nl.inject_gate_fault(net, fault))
        count = int(np.count_nonzero(table != clean.table))
        if min_count <= count <= max_count:
            spec = NetlistFaults(faults=(fault,), fanin2=fanin2)
            return spec, apply_fault(clean, spec)[1]
    raise ConfigurationError(
        f"no single stuck-at fault with {min_count}..{max_count} corrupted entries "
        f"found in {max_tries} tries"
    )
