import numpy as np
import pytest

from spfa import led, netlist, qm
from spfa.errors import ConfigurationError
from spfa.netlist import Gate, GateFault, Netlist

HANDMADE = """\
# two outputs over three inputs, one gate of every family
input a
input b
input c
gate na NOT a
gate w1 AND a b c
gate w2 OR na c
gate w3 XOR w1 w2 b
gate w4 NAND w3 c
gate w5 NOR w1 na
gate w6 BUF w4
output hi = w6
output lo = w5
"""


def _reference_eval(x):
    a, b, c = (x >> 2) & 1, (x >> 1) & 1, x & 1
    na = 1 - a
    w1 = a & b & c
    w2 = na | c
    w3 = w1 ^ w2 ^ b
    w4 = 1 - (w3 & c)
    w5 = 1 - (w1 | na)
    return (w4 << 1) | w5


def test_evaluate_matches_reference():
    net = netlist.parse_netlist(HANDMADE)
    for x in range(8):
        assert netlist.evaluate(net, x) == _reference_eval(x)


def test_derive_table_matches_evaluate():
    net = netlist.parse_netlist(HANDMADE)
    table = netlist.derive_table(net)
    assert table.dtype == np.uint8 and table.shape == (8,)
    assert [netlist.evaluate(net, x) for x in range(8)] == list(table)


def test_const_wires():
    net = netlist.parse_netlist("input a\ngate g OR a 1\noutput y = g\noutput z = 0\n")
    assert list(netlist.derive_table(net)) == [2, 2]


def test_format_parse_round_trip():
    net = netlist.parse_netlist(HANDMADE)
    again = netlist.parse_netlist(netlist.format_netlist(net))
    assert again == net


def test_parse_rejects_bad_lines():
    bad = (
        "flip a\n",
        "input\n",
        "output y w1\n",
        "gate g1 AND\n",
    )
    for text in bad:
        with pytest.raises(ConfigurationError):
            netlist.parse_netlist("input a\n" + text)


def test_validation_errors():
    a = ("a",)
    with pytest.raises(ConfigurationError):  # undefined wire
        Netlist(a, (Gate("g", "AND", ("a", "q")),), (("y", "g"),))
    with pytest.raises(ConfigurationError):  # duplicate name
        Netlist(a, (Gate("a", "NOT", ("a",)),), (("y", "a"),))
    with pytest.raises(ConfigurationError):  # unknown kind
        Netlist(a, (Gate("g", "XNOR", ("a", "a")),), (("y", "g"),))
    with pytest.raises(ConfigurationError):  # NOT takes one input
        Netlist(a, (Gate("g", "NOT", ("a", "a")),), (("y", "g"),))
    with pytest.raises(ConfigurationError):  # AND needs two inputs
        Netlist(a, (Gate("g", "AND", ("a",)),), (("y", "g"),))
    with pytest.raises(ConfigurationError):  # gate used before definition
        Netlist(a, (Gate("g", "AND", ("a", "h")), Gate("h", "NOT", ("a",))), (("y", "g"),))
    with pytest.raises(ConfigurationError):  # undefined output wire
        Netlist(a, (), (("y", "nope"),))
    with pytest.raises(ConfigurationError):  # duplicate output name
        Netlist(a, (), (("y", "a"), ("y", "a")))


def test_gate_fault_semantics():
    net = netlist.parse_netlist("input a\ninput b\ngate g AND a b\noutput y = g\n")
    # output stuck wins regardless of inputs
    for stuck in (0, 1):
        forced = netlist.inject_gate_fault(net, GateFault("g", None, stuck))
        assert list(netlist.derive_table(forced)) == [stuck] * 4
    # pin 1 stuck at 1 turns AND(a, b) into BUF(a)
    pinned = netlist.inject_gate_fault(net, GateFault("g", 1, 1))
    assert list(netlist.derive_table(pinned)) == [0, 0, 1, 1]
    # pin 0 stuck at 0 zeroes the AND
    pinned = netlist.inject_gate_fault(net, GateFault("g", 0, 0))
    assert list(netlist.derive_table(pinned)) == [0, 0, 0, 0]


def test_gate_fault_errors():
    net = netlist.parse_netlist("input a\ninput b\ngate g AND a b\noutput y = g\n")
    with pytest.raises(ConfigurationError):
        netlist.inject_gate_fault(net, GateFault("missing", None, 0))
    with pytest.raises(ConfigurationError):
        netlist.inject_gate_fault(net, GateFault("g", 2, 0))
    with pytest.raises(ConfigurationError):
        GateFault("g", None, 5)


def test_expand_fanin_preserves_function_seeded():
    rng = np.random.default_rng(19)
    kinds = ("AND", "OR", "XOR", "NAND", "NOR")
    for _ in range(20):
        n_in = int(rng.integers(3, 7))
        inputs = tuple(f"i{k}" for k in range(n_in))
        width = int(rng.integers(3, n_in * 2 + 1))
        wires = [str(w) for w in rng.choice(inputs, size=width)]
        kind = kinds[int(rng.integers(0, len(kinds)))]
        net = Netlist(inputs, (Gate("g", kind, tuple(wires)),), (("y", "g"),))
        wide = netlist.derive_table(net)
        narrow_net = netlist.expand_fanin(net)
        assert all(len(g.inputs) <= 2 for g in narrow_net.gates)
        assert np.array_equal(netlist.derive_table(narrow_net), wide)


def test_expand_fanin_keeps_root_name_and_small_gates():
    net = netlist.parse_netlist(
        "input a\ninput b\ninput c\ninput d\n"
        "gate big NAND a b c d\ngate small AND a b\ngate top OR big small\noutput y = top\n"
    )
    out = netlist.expand_fanin(net)
    names = [g.gid for g in out.gates]
    assert "big" in names and "small" in names and "top" in names
    assert any(g.gid.startswith("big.t") for g in out.gates)
    # tree interiors reduce with AND; only the root inverts
    root = out.gate_map()["big"]
    assert root.kind == "NAND"
    for g in out.gates:
        if g.gid.startswith("big.t"):
            assert g.kind == "AND"
    with pytest.raises(ConfigurationError):
        netlist.expand_fanin(net, max_inputs=1)


def test_expand_fanin_on_synthesized_table():
    net = qm.synthesize_sop(led.PRESENT_SBOX)
    out = netlist.expand_fanin(net)
    assert np.array_equal(netlist.derive_table(out), led.PRESENT_SBOX.table)
    assert max(len(g.inputs) for g in out.gates) <= 2


def test_file_round_trip(tmp_path):
    net = netlist.parse_netlist(HANDMADE)
    path = tmp_path / "net.txt"
    netlist.save_netlist(net, path)
    assert netlist.load_netlist(path) == net


def test_stats():
    net = netlist.parse_netlist(HANDMADE)
    s = net.stats()
    assert s["NOT"] == 1 and s["AND"] == 1 and s["total"] == 7
