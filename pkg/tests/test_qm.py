import numpy as np
import pytest

from spfa import aes, led, netlist, qm
from spfa.errors import ConfigurationError
from spfa.sbox import Sbox


def test_cube_minterms():
    assert qm.cube_minterms(0b10, 0b00, 4) == frozenset({2})
    assert qm.cube_minterms(0b00, 0b101, 4) == frozenset({0, 1, 4, 5})


def test_prime_implicants_textbook_case():
    # f(x1, x0) = 1 on {1, 3}: x0 alone, one prime with x1 free
    assert qm.prime_implicants({1, 3}, 2) == {(1, 2)}
    # the full space collapses to the single all-dont-care cube
    assert qm.prime_implicants(set(range(8)), 3) == {(0, 7)}


def test_prime_implicants_cover_their_on_set():
    rng = np.random.default_rng(13)
    for _ in range(30):
        on = {int(m) for m in rng.choice(16, size=int(rng.integers(1, 16)), replace=False)}
        primes = qm.prime_implicants(on, 4)
        covered = set()
        for v, mask in primes:
            span = qm.cube_minterms(v, mask, 4)
            assert span <= on  # every implicant stays inside the function
            covered |= span
        assert covered == on


def test_minimal_cover_is_exact_seeded():
    rng = np.random.default_rng(17)
    for _ in range(40):
        on = {int(m) for m in rng.choice(16, size=int(rng.integers(0, 17)), replace=False)}
        cover = qm.minimal_cover(on, 4)
        table = qm.table_from_cover(cover, 4)
        assert set(np.flatnonzero(table)) == on


def test_minimal_cover_validation():
    assert qm.minimal_cover(set(), 4) == []
    with pytest.raises(ConfigurationError):
        qm.minimal_cover({16}, 4)


def test_synthesis_is_exact_for_reference_tables():
    for box in (led.PRESENT_SBOX, aes.AES_SBOX):
        net = qm.synthesize_sop(box)
        assert np.array_equal(netlist.derive_table(net), box.table)


def test_synthesis_is_exact_for_random_tables():
    rng = np.random.default_rng(19)
    for _ in range(30):
        table = rng.integers(0, 16, 16, dtype=np.int64).astype(np.uint8)
        box = Sbox(table)
        net = qm.synthesize_sop(box)
        assert np.array_equal(netlist.derive_table(net), table)


def test_synthesis_handles_constant_bits():
    # output bits that are constant 0 or 1 become const wires, not gates
    net = qm.synthesize_sop(Sbox([0] * 16))
    assert net.gates == ()
    assert all(wire == "0" for _, wire in net.outputs)
    net = qm.synthesize_sop(Sbox([15] * 16))
    assert all(wire == "1" for _, wire in net.outputs)
    assert np.array_equal(netlist.derive_table(net), np.full(16, 15, dtype=np.uint8))


def test_synthesis_is_deterministic():
    a = qm.synthesize_sop(aes.AES_SBOX)
    b = qm.synthesize_sop(aes.AES_SBOX)
    assert a == b


def test_synthesized_shape():
    net = qm.synthesize_sop(led.PRESENT_SBOX)
    assert net.inputs == ("x3", "x2", "x1", "x0")
    assert [name for name, _ in net.outputs] == ["y3", "y2", "y1", "y0"]
    kinds = {g.kind for g in net.gates}
    assert kinds <= {"NOT", "AND", "OR"}
