import json

import numpy as np
import pytest

from spfa import aes, attack, faults, led, sei
from spfa.attack import AttackTarget, GroupSearch, SeiRanking
from spfa.ciphers import AES128, LED64, CiphertextBatch
from spfa.errors import ConfigurationError, ContractViolation, UnsupportedConfiguration
from tests.conftest import make_aes_batch, make_led_batch


def test_target_validation():
    t = AttackTarget("AES128", group=2, row=1)
    assert t.round_index == 9
    assert t.cell == AES128.cell_index(1, 3)
    assert AttackTarget("LED64", group=0).round_index == 31
    with pytest.raises(ConfigurationError):
        AttackTarget("AES128", group=4)
    with pytest.raises(ConfigurationError):
        AttackTarget("AES128", group=0, row=-1)
    with pytest.raises(ConfigurationError):
        AttackTarget("DES", group=0)


def test_group_positions_partition_the_state():
    for spec in (AES128, LED64):
        cells = [p for g in range(4) for p in attack.group_positions(spec, g)]
        assert sorted(cells) == list(range(16))


def test_pack_unpack_round_trip():
    rng = np.random.default_rng(3)
    for spec, width in ((AES128, 32), (LED64, 16)):
        for _ in range(20):
            v = int(rng.integers(0, 1 << width))
            assert attack.pack_group(spec, attack.unpack_group(spec, v)) == v


def test_true_group_values_cover_the_key_material():
    rng = np.random.default_rng(5)
    key = rng.integers(0, 256, 16, dtype=np.int64).astype(np.uint8)
    k10 = aes.key_schedule(key)[10]
    assembled = attack.aes_last_round_key(
        {g: attack.true_group_value(AES128, key, g) for g in range(4)}
    )
    assert np.array_equal(assembled, k10)

    led_key = rng.integers(0, 16, 16, dtype=np.int64).astype(np.uint8)
    recovered = attack.led_key_recover(
        {g: attack.true_group_value(LED64, led_key, g) for g in range(4)}
    )
    assert np.array_equal(recovered, led_key)


def test_led_engine_matches_naive(led_batch_1000):
    batch, key, _, _ = led_batch_1000
    rng = np.random.default_rng(7)
    for group, row in ((0, 0), (2, 1), (3, 3)):
        target = AttackTarget("LED64", group=group, row=row)
        search = attack.prepare_search(batch, target)
        hyps = [attack.true_group_value(LED64, key, group)]
        hyps += [int(h) for h in rng.integers(0, 1 << 16, 8)]
        for h in hyps:
            eng = search.d16[search.tuples[:40] ^ h]
            ref = [attack.led_partial_decrypt(ct, h, target) for ct in batch.cells[:40]]
            assert list(eng) == ref


def test_aes_engine_matches_naive(aes_batch_f32):
    batch, key, _, _ = aes_batch_f32
    rng = np.random.default_rng(11)
    for group, row in ((0, 0), (1, 2)):
        target = AttackTarget("AES128", group=group, row=row)
        true_value = attack.true_group_value(AES128, key, group)
        tb = attack.unpack_group(AES128, true_value)
        search = attack.prepare_search(batch, target, fixed={2: tb[2], 3: tb[3]})
        coords = [search.search_index_of(true_value)]
        coords += [int(x) for x in rng.integers(0, 1 << 16, 8)]
        for x in coords:
            full = int(search.hyp_values[x])
            eng = search.d16[search.tuples[:40] ^ x] ^ search.base[:40]
            ref = [attack.aes_partial_decrypt(ct, full, target) for ct in batch.cells[:40]]
            assert list(eng) == ref


def test_fixed_slots_pin_hypothesis_bytes(aes_batch_f32):
    batch, key, _, _ = aes_batch_f32
    target = AttackTarget("AES128", group=0)
    search = attack.prepare_search(batch, target, fixed={0: 0xAB, 3: 0x01})
    sample = search.hyp_values[::4097]
    assert all((int(v) >> 24) == 0xAB for v in sample)
    assert all((int(v) & 0xFF) == 0x01 for v in sample)
    assert np.unique(search.hyp_values).size == 1 << 16


def test_omitted_key_addition_cannot_change_sei(aes_batch_f32):
    # the key addition skipped by the partial decrypt offsets every delta of
    # a candidate by one constant; SEI is exactly invariant under that
    batch, key, _, _ = aes_batch_f32
    target = AttackTarget("AES128", group=0)
    true_value = attack.true_group_value(AES128, key, 0)
    tb = attack.unpack_group(AES128, true_value)
    search = attack.prepare_search(batch, target, fixed={2: tb[2], 3: tb[3]})
    x = search.search_index_of(true_value)
    deltas = search.d16[search.tuples ^ x]
    base_score = sei.sei(np.bincount(deltas, minlength=256))
    for c in (0x01, 0x5A, 0xFF, 0x80):
        shifted = sei.sei(np.bincount(deltas ^ c, minlength=256))
        assert shifted == base_score


def test_worker_partitioning_is_bit_identical(led_batch_1000):
    batch, _, _, _ = led_batch_1000
    search = attack.prepare_search(batch, AttackTarget("LED64", group=1))
    ref = attack.compute_scores(search, n=600, workers=1)
    for workers in (2, 4):
        assert np.array_equal(attack.compute_scores(search, n=600, workers=workers), ref)


def test_compute_scores_validation(led_batch_1000):
    batch, _, _, _ = led_batch_1000
    search = attack.prepare_search(batch, AttackTarget("LED64", group=0))
    with pytest.raises(ConfigurationError):
        attack.compute_scores(search, n=0)
    with pytest.raises(ConfigurationError):
        attack.compute_scores(search, n=batch.n + 1)
    with pytest.raises(ConfigurationError):
        attack.compute_scores(search, workers=0)


def test_run_attack_recovers_group(aes_batch_f32):
    batch, key, _, _ = aes_batch_f32
    target = AttackTarget("AES128", group=0)
    true_value = attack.true_group_value(AES128, key, 0)
    tb = attack.unpack_group(AES128, true_value)
    ranking = attack.run_attack(batch, target, fixed={2: tb[2], 3: tb[3]})
    assert ranking.best == true_value
    assert ranking.rank_of(true_value) == 1
    assert ranking.gap_ratio() > 1.0
    assert ranking.scores[0] > 1.5 * sei.null_sei_mean(256, batch.n)
    assert list(ranking.scores) == sorted(ranking.scores, reverse=True)


def test_run_attack_configuration_errors(aes_batch_f32, led_batch_1000):
    aes_batch = aes_batch_f32[0]
    led_batch = led_batch_1000[0]
    with pytest.raises(UnsupportedConfiguration):
        attack.run_attack(led_batch, AttackTarget("LED64", group=0), fixed={0: 1})
    with pytest.raises(ConfigurationError):
        attack.run_attack(aes_batch, AttackTarget("AES128", group=0))
    for fixed in ({0: 1}, {0: 1, 1: 2, 2: 3}, {5: 1, 2: 2}, {0: 300, 1: 2}):
        with pytest.raises(ConfigurationError):
            attack.run_attack(aes_batch, AttackTarget("AES128", group=0), fixed=fixed)
    with pytest.raises(ConfigurationError):
        attack.run_attack(
            aes_batch, AttackTarget("AES128", group=0), fixed={2: 0, 3: 0}, full_search=True
        )
    with pytest.raises(UnsupportedConfiguration):
        attack.run_attack(led_batch, AttackTarget("LED64", group=0), full_search=True)
    with pytest.raises(ConfigurationError):
        attack.run_attack(aes_batch, AttackTarget("LED64", group=0))
    empty = CiphertextBatch(cipher="AES128", cells=np.zeros((0, 16), dtype=np.uint8))
    with pytest.raises(ConfigurationError):
        attack.run_attack(empty, AttackTarget("AES128", group=0), fixed={2: 0, 3: 0})


def test_combined_attack_sums_row_scores(led_batch_1000):
    batch, key, _, _ = led_batch_1000
    total = search = None
    for r in range(4):
        search = attack.prepare_search(batch, AttackTarget("LED64", group=1, row=r))
        scores = attack.compute_scores(search)
        total = scores if total is None else total + scores
    expected = attack.rank_hypotheses(search, total, batch.n)
    combined = attack.run_combined_attack(batch, 1)
    assert np.array_equal(combined.hypotheses, expected.hypotheses)
    assert np.array_equal(combined.scores, expected.scores)
    assert combined.rows == (0, 1, 2, 3)
    assert combined.row == 0
    assert combined.rank_of(attack.true_group_value(LED64, key, 1)) == 1
    assert attack.ranking_to_dict(combined)["rows"] == [0, 1, 2, 3]
    single = attack.run_attack(batch, AttackTarget("LED64", group=1))
    assert "rows" not in attack.ranking_to_dict(single)


def test_combined_attack_single_row_matches_run_attack(led_batch_1000):
    batch = led_batch_1000[0]
    single = attack.run_attack(batch, AttackTarget("LED64", group=2, row=3))
    combined = attack.run_combined_attack(batch, 2, rows=(3,))
    assert np.array_equal(combined.hypotheses, single.hypotheses)
    assert np.array_equal(combined.scores, single.scores)
    assert combined.rows == (3,)
    assert combined.row == 3


def test_combined_attack_aes_needs_fixed_slots(aes_batch_f32):
    batch, key, _, _ = aes_batch_f32
    with pytest.raises(ConfigurationError):
        attack.run_combined_attack(batch, 0)
    tb = attack.unpack_group(AES128, attack.true_group_value(AES128, key, 0))
    combined = attack.run_combined_attack(
        batch, 0, fixed={2: tb[2], 3: tb[3]}, rows=(0, 1)
    )
    assert combined.rows == (0, 1)
    assert combined.best == attack.true_group_value(AES128, key, 0)


def test_combined_attack_validation(led_batch_1000):
    batch = led_batch_1000[0]
    for rows in ((), (0, 0), (4,), (-1, 2)):
        with pytest.raises(ConfigurationError):
            attack.run_combined_attack(batch, 0, rows=rows)
    empty = CiphertextBatch(cipher="LED64", cells=np.zeros((0, 16), dtype=np.uint8))
    with pytest.raises(ConfigurationError):
        attack.run_combined_attack(empty, 0)


def test_prepare_search_rejects_bad_reference_tables(aes_batch_f32):
    batch = aes_batch_f32[0]
    target = AttackTarget("AES128", group=0)
    with pytest.raises(ConfigurationError):
        attack.prepare_search(batch, target, clean_sbox=led.PRESENT_SBOX, fixed={2: 0, 3: 0})
    broken, _ = faults.apply_fault(aes.AES_SBOX, faults.ReplaceEntries(entries=((0, 0x7C),)))
    with pytest.raises(ContractViolation):
        attack.prepare_search(batch, target, clean_sbox=broken, fixed={2: 0, 3: 0})


def test_ranking_ignores_batch_metadata(aes_batch_f32):
    batch, key, _, _ = aes_batch_f32
    stripped = CiphertextBatch(cipher=batch.cipher, cells=batch.cells.copy(), metadata={})
    target = AttackTarget("AES128", group=0)
    tb = attack.unpack_group(AES128, attack.true_group_value(AES128, key, 0))
    a = attack.run_attack(batch, target, fixed={2: tb[2], 3: tb[3]})
    b = attack.run_attack(stripped, target, fixed={2: tb[2], 3: tb[3]})
    assert np.array_equal(a.hypotheses, b.hypotheses)
    assert np.array_equal(a.scores, b.scores)


def test_wrong_key_scores_stay_flat_without_fault():
    # clean table means every hypothesis is a null draw; the top never
    # separates from the field
    gaps = []
    for seed in range(20):
        rng = np.random.default_rng(900 + seed)
        key = rng.integers(0, 16, 16, dtype=np.int64).astype(np.uint8)
        pts = rng.integers(0, 16, (1000, 16), dtype=np.int64).astype(np.uint8)
        batch = CiphertextBatch(cipher="LED64", cells=led.encrypt(key, pts))
        ranking = attack.run_attack(batch, AttackTarget("LED64", group=0))
        gaps.append(ranking.gap_ratio())
    assert sum(g < 2.0 for g in gaps) >= 18


def test_locality_of_partial_decrypt(aes_batch_f32):
    batch, key, _, _ = aes_batch_f32
    rng = np.random.default_rng(13)
    for group in range(4):
        target = AttackTarget("AES128", group=group)
        pos = attack.group_positions(AES128, group)
        hyp = int(rng.integers(0, 1 << 32))
        ct = batch.cells[0].copy()
        ref = attack.aes_partial_decrypt(ct, hyp, target)
        scrambled = ct.copy()
        others = [p for p in range(16) if p not in pos]
        scrambled[others] = rng.integers(0, 256, len(others), dtype=np.int64)
        assert attack.aes_partial_decrypt(scrambled, hyp, target) == ref


def test_scan_protocol_on_real_attack(aes_batch_f32):
    batch, key, _, _ = aes_batch_f32
    target = AttackTarget("AES128", group=0)
    true_value = attack.true_group_value(AES128, key, 0)
    tb = attack.unpack_group(AES128, true_value)
    search = attack.prepare_search(batch, target, fixed={2: tb[2], 3: tb[3]})
    scan = attack.scan_needed_n(search, true_value, stride=250, max_n=3000)
    assert scan.success
    assert scan.needed_n % 250 == 0
    assert scan.confirmed_at == scan.needed_n + scan.stability * scan.stride
    stat = scan.stat_at(scan.needed_n)
    assert stat.true_rank1 and stat.top_hyp == true_value
    assert stat.top_score == stat.true_score >= stat.second_score
    # a full scan without early stopping agrees and covers every checkpoint
    full = attack.scan_needed_n(search, true_value, stride=250, max_n=3000, early_stop=False)
    assert full.needed_n == scan.needed_n
    assert [st.n for st in full.checkpoints] == list(range(250, 3001, 250))


def test_scan_ties_never_succeed():
    # a degenerate search where every hypothesis produces identical deltas:
    # the argmax lands somewhere, but a tie must never count as rank 1
    rng = np.random.default_rng(17)
    search = GroupSearch(
        cipher="LED64",
        group=0,
        row=0,
        nbins=16,
        d16=np.zeros(1 << 16, dtype=np.uint8),
        tuples=rng.integers(0, 1 << 16, 500).astype(np.uint16),
        base=None,
        hyp_values=np.arange(1 << 16, dtype=np.int64),
    )
    scan = attack.scan_needed_n(search, true_hyp_value=123, stride=100, max_n=500)
    assert scan.needed_n is None and scan.confirmed_at is None
    assert not scan.success
    assert all(not st.true_rank1 for st in scan.checkpoints)


def test_scan_validation(aes_batch_f32):
    batch, key, _, _ = aes_batch_f32
    tb = attack.unpack_group(AES128, attack.true_group_value(AES128, key, 0))
    search = attack.prepare_search(
        batch, AttackTarget("AES128", group=0), fixed={2: tb[2], 3: tb[3]}
    )
    with pytest.raises(ConfigurationError):
        attack.scan_needed_n(search, 0, stride=0)
    with pytest.raises(ConfigurationError):
        attack.scan_needed_n(search, 0, stride=250, max_n=batch.n + 250)
    with pytest.raises(ConfigurationError):
        attack.scan_needed_n(search, 0, stride=500, max_n=250)
    with pytest.raises(ConfigurationError):
        attack.scan_needed_n(search, (1 << 32) + 5)  # hypothesis not in the space


def test_recover_full_key_from_rankings():
    rng = np.random.default_rng(19)
    key = rng.integers(0, 256, 16, dtype=np.int64).astype(np.uint8)
    rankings = {
        g: SeiRanking(
            cipher="AES128",
            group=g,
            row=0,
            hypotheses=np.array([attack.true_group_value(AES128, key, g)]),
            scores=np.array([0.5]),
            n_used=100,
            nbins=256,
        )
        for g in range(4)
    }
    assert np.array_equal(attack.recover_full_key(rankings), key)
    assert np.array_equal(attack.recover_full_key(list(rankings.values())), key)

    led_key = rng.integers(0, 16, 16, dtype=np.int64).astype(np.uint8)
    led_rankings = [
        SeiRanking(
            cipher="LED64",
            group=g,
            row=0,
            hypotheses=np.array([attack.true_group_value(LED64, led_key, g)]),
            scores=np.array([0.5]),
            n_used=100,
            nbins=16,
        )
        for g in range(4)
    ]
    assert np.array_equal(attack.recover_full_key(led_rankings), led_key)

    with pytest.raises(ConfigurationError):
        attack.recover_full_key(led_rankings[:3])
    mixed = list(led_rankings)
    mixed[0] = rankings[0]
    with pytest.raises(ConfigurationError):
        attack.recover_full_key(mixed)


def test_counting_baseline_on_synthetic_batch():
    # per position j the value w_j never occurs; candidates must be v ^ w_j
    rng = np.random.default_rng(23)
    v = 0x63
    w = rng.integers(0, 256, 16, dtype=np.int64)
    cells = rng.integers(0, 256, (4000, 16), dtype=np.int64)
    for j in range(16):
        hit = cells[:, j] == w[j]
        cells[hit, j] = (w[j] + 1) % 256
    batch = CiphertextBatch(cipher="AES128", cells=cells.astype(np.uint8))
    res = attack.pfa_baseline(batch, fault_value=v)
    assert not res.ambiguous
    assert res.min_counts == [0] * 16
    assert np.array_equal(res.key(), (v ^ w).astype(np.uint8))


def test_counting_baseline_recovers_real_key():
    batch, key, spec_f, _ = make_aes_batch(303, 3500, 1)
    res = attack.pfa_baseline(batch, fault_index=spec_f.entries[0][0])
    assert not res.ambiguous
    assert np.array_equal(res.key(), aes.key_schedule(key)[10])
    # with only a handful of ciphertexts many values are missing everywhere
    tiny = attack.pfa_baseline(batch, fault_index=spec_f.entries[0][0], n=10)
    assert tiny.ambiguous
    assert tiny.key() is None


def test_counting_baseline_validation(led_batch_1000, aes_batch_f32):
    with pytest.raises(UnsupportedConfiguration):
        attack.pfa_baseline(led_batch_1000[0], fault_value=3)
    batch = aes_batch_f32[0]
    with pytest.raises(ConfigurationError):
        attack.pfa_baseline(batch)
    with pytest.raises(ConfigurationError):
        attack.pfa_baseline(batch, fault_value=256)
    with pytest.raises(ConfigurationError):
        attack.pfa_baseline(batch, fault_value=0, n=0)


def test_earlier_round_faults_carry_no_signal():
    # faulting every round versus only the two last rounds must lead the
    # ranking to the same winner: rounds 1..8 only scramble plaintexts
    agree = both_true = 0
    trials = 20
    for t in range(trials):
        rng = np.random.default_rng(5000 + t)
        key = rng.integers(0, 256, 16, dtype=np.int64).astype(np.uint8)
        spec_f = faults.exact_count_fault(aes.AES_SBOX, 32, rng)
        faulted, _ = faults.apply_fault(aes.AES_SBOX, spec_f)
        pts = rng.integers(0, 256, (2500, 16), dtype=np.int64).astype(np.uint8)
        all_rounds = CiphertextBatch(
            cipher="AES128", cells=aes.encrypt(key, pts, sbox=faulted)
        )
        tail_only = CiphertextBatch(
            cipher="AES128",
            cells=aes.encrypt(key, pts, sbox_rounds={9: faulted, 10: faulted}),
        )
        target = AttackTarget("AES128", group=0)
        true_value = attack.true_group_value(AES128, key, 0)
        tb = attack.unpack_group(AES128, true_value)
        fixed = {2: tb[2], 3: tb[3]}
        best_a = attack.run_attack(all_rounds, target, fixed=fixed).best
        best_b = attack.run_attack(tail_only, target, fixed=fixed).best
        agree += best_a == best_b
        both_true += best_a == true_value and best_b == true_value
    assert agree >= 18
    assert both_true >= 18


def test_ranking_serialization(tmp_path, aes_batch_f32, led_batch_1000):
    batch, key, _, _ = aes_batch_f32
    tb = attack.unpack_group(AES128, attack.true_group_value(AES128, key, 0))
    ranking = attack.run_attack(
        batch, AttackTarget("AES128", group=0), fixed={2: tb[2], 3: tb[3]}
    )
    d = attack.ranking_to_dict(ranking, head=5)
    assert d["cipher"] == "AES128" and d["bins"] == 256
    assert d["searched"] == 1 << 16
    assert len(d["ranking"]) == 5
    assert all(len(e["hypothesis"]) == 8 for e in d["ranking"])
    assert d["fixed"] == {"2": tb[2], "3": tb[3]}

    led_ranking = attack.run_attack(led_batch_1000[0], AttackTarget("LED64", group=0))
    dl = attack.ranking_to_dict(led_ranking, head=3)
    assert all(len(e["hypothesis"]) == 4 for e in dl["ranking"])

    path = tmp_path / "rank.json"
    side = tmp_path / "rank.npz"
    attack.save_ranking(ranking, path, head=4, sidecar_path=side)
    data = json.loads(path.read_text())
    assert len(data["ranking"]) == 4
    assert data["full_ranking"] == str(side)
    arrays = np.load(side)
    assert np.array_equal(arrays["hypotheses"], ranking.hypotheses)
    assert np.array_equal(arrays["scores"], ranking.scores)


def test_rank_of_missing_hypothesis(aes_batch_f32):
    batch, key, _, _ = aes_batch_f32
    tb = attack.unpack_group(AES128, attack.true_group_value(AES128, key, 0))
    ranking = attack.run_attack(
        batch, AttackTarget("AES128", group=0), fixed={2: tb[2], 3: tb[3]}
    )
    outside = (tb[0] << 24) | (tb[1] << 16) | (((tb[2] ^ 1) & 0xFF) << 8) | tb[3]
    with pytest.raises(ConfigurationError):
        ranking.rank_of(outside)
