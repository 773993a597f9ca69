"""In-process exercises of every `spfa` subcommand, plus one subprocess
check that the console script is wired up."""

import json
import re
import shutil
import subprocess

import numpy as np
import pytest

from spfa import aes, attack, experiment, faults, led
from spfa import netlist as nl
from spfa.ciphers import LED64, load_batch
from spfa.cli import main
from spfa.sbox import load_sbox
from tests.conftest import make_led_batch


def test_console_script_help():
    exe = shutil.which("spfa")
    assert exe is not None
    proc = subprocess.run([exe, "--help"], capture_output=True, text=True)
    assert proc.returncode == 0
    for name in ("inject", "collect", "attack", "sweep", "circuit"):
        assert name in proc.stdout


def test_inject_writes_table_and_report(tmp_path, capsys):
    spec = faults.single_entry_fault(aes.AES_SBOX, np.random.default_rng(5))
    spec_path = tmp_path / "spec.json"
    faults.save_spec(spec, spec_path)
    out = tmp_path / "faulted.txt"
    report_path = tmp_path / "report.json"
    rc = main(
        [
            "inject",
            "--sbox", "aes",
            "--fault-spec", str(spec_path),
            "--out", str(out),
            "--report", str(report_path),
        ]
    )
    assert rc == 0
    expected, expected_report = faults.apply_fault(aes.AES_SBOX, spec)
    assert np.array_equal(load_sbox(out).table, expected.table)
    report = json.loads(report_path.read_text())
    assert report["effective_fault_count"] == 1
    assert report["table_sha256"] == expected_report.table_sha256
    captured = capsys.readouterr().out
    assert "1/256" in captured
    assert str(out) in captured


def test_inject_default_out_name(tmp_path, monkeypatch):
    spec = faults.single_entry_fault(led.PRESENT_SBOX, np.random.default_rng(6))
    spec_path = tmp_path / "spec.json"
    faults.save_spec(spec, spec_path)
    monkeypatch.chdir(tmp_path)
    rc = main(["inject", "--sbox", "led", "--fault-spec", str(spec_path)])
    assert rc == 0
    assert (tmp_path / "faulted_sbox.txt").exists()


def test_inject_bad_spec_returns_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("not a fault spec {")
    rc = main(["inject", "--sbox", "aes", "--fault-spec", str(bad)])
    assert rc == 2
    assert "error:" in capsys.readouterr().err


def test_collect_seed_flag_position(tmp_path):
    args = ["collect", "--cipher", "LED64", "--key", "0" * 16, "--sbox", "led", "-n", "40"]
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    assert main(["--seed", "7"] + args + ["--out", str(a)]) == 0
    assert main(args + ["--seed", "7", "--out", str(b)]) == 0
    assert a.read_text() == b.read_text()


def test_collect_missing_key_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["collect", "--sbox", "aes"])
    assert exc.value.code == 2


def test_led_pipeline_recovers_group(tmp_path, capsys):
    # mirror the seeded fixture batch, but drive every step through the CLI
    key_seed, fault_seed, collect_seed = experiment.child_seeds(202, 0)
    key = np.random.default_rng(key_seed).integers(0, 16, 16, dtype=np.int64).astype(np.uint8)
    spec = faults.single_entry_fault(led.PRESENT_SBOX, np.random.default_rng(fault_seed))
    spec_path = tmp_path / "spec.json"
    faults.save_spec(spec, spec_path)
    faulted_path = tmp_path / "faulted.txt"
    assert main(["inject", "--sbox", "led", "--fault-spec", str(spec_path), "--out", str(faulted_path)]) == 0

    batch_path = tmp_path / "batch.txt"
    rc = main(
        [
            "collect",
            "--cipher", "LED64",
            "--key", "".join(f"{c:x}" for c in key),
            "--sbox", str(faulted_path),
            "-n", "1000",
            "--seed", str(collect_seed),
            "--out", str(batch_path),
        ]
    )
    assert rc == 0
    assert load_batch(batch_path).n == 1000

    rank_path = tmp_path / "rank.json"
    sidecar = tmp_path / "rank.npz"
    rc = main(
        [
            "attack",
            "--batch", str(batch_path),
            "--group", "0",
            "--row", "0",
            "--top", "3",
            "--out", str(rank_path),
            "--sidecar", str(sidecar),
        ]
    )
    assert rc == 0
    truth = attack.true_group_value(LED64, key, 0)
    data = json.loads(rank_path.read_text())
    assert data["cipher"] == "LED64"
    assert data["searched"] == 1 << 16
    assert data["ranking"][0]["hypothesis"] == f"{truth:04x}"
    assert data["batch_metadata"]["seed"] == str(collect_seed)
    with np.load(sidecar) as full:
        assert full["hypotheses"].shape == (1 << 16,)
        assert int(full["hypotheses"][0]) == truth
    out = capsys.readouterr().out
    assert f"best {truth:04x}" in out


def test_attack_fix_parse_error_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["attack", "--batch", "x.txt", "--fix", "notaslot"])
    assert exc.value.code == 2


def test_attack_fix_rejected_for_led(tmp_path, capsys):
    batch, _, _, _ = make_led_batch(77, 40)
    batch_path = tmp_path / "batch.txt"
    from spfa.ciphers import save_batch

    save_batch(batch, batch_path)
    rc = main(["attack", "--batch", str(batch_path), "--fix", "0=1"])
    assert rc == 2
    assert "error:" in capsys.readouterr().err


def test_attack_missing_batch_returns_2(tmp_path, capsys):
    rc = main(["attack", "--batch", str(tmp_path / "nope.txt")])
    assert rc == 2
    assert "error:" in capsys.readouterr().err


def test_circuit_synth_fault_table(tmp_path, capsys):
    net_path = tmp_path / "net.txt"
    assert main(["circuit", "synth", "--sbox", "led", "--out", str(net_path)]) == 0
    net = nl.load_netlist(net_path)
    assert np.array_equal(nl.derive_table(net), led.PRESENT_SBOX.table)
    assert "or_y3" in {g.gid for g in net.gates}

    fnet_path = tmp_path / "fnet.txt"
    rc = main(
        [
            "circuit", "fault",
            "--netlist", str(net_path),
            "--gate", "or_y3",
            "--stuck", "1",
            "--out", str(fnet_path),
        ]
    )
    assert rc == 0
    faulted = nl.load_netlist(fnet_path)
    diff = int(np.count_nonzero(nl.derive_table(faulted) != nl.derive_table(net)))
    assert diff > 0
    out = capsys.readouterr().out
    assert f"{diff}/16 entries corrupted" in out

    tab_path = tmp_path / "table.txt"
    assert main(["circuit", "table", "--netlist", str(fnet_path), "--out", str(tab_path)]) == 0
    assert np.array_equal(load_sbox(tab_path).table, nl.derive_table(faulted))


def test_circuit_synth_fanin2(tmp_path):
    net_path = tmp_path / "net2.txt"
    assert main(["circuit", "synth", "--sbox", "led", "--fanin2", "--out", str(net_path)]) == 0
    net = nl.load_netlist(net_path)
    assert all(len(g.inputs) <= 2 for g in net.gates)
    assert np.array_equal(nl.derive_table(net), led.PRESENT_SBOX.table)


def test_pfa_baseline_on_batch(tmp_path, capsys):
    key_seed, fault_seed, collect_seed = experiment.child_seeds(303, 0)
    key = np.random.default_rng(key_seed).integers(0, 256, 16, dtype=np.int64).astype(np.uint8)
    spec = faults.exact_count_fault(aes.AES_SBOX, 1, np.random.default_rng(fault_seed))
    spec_path = tmp_path / "spec.json"
    faults.save_spec(spec, spec_path)
    faulted_path = tmp_path / "faulted.txt"
    assert main(["inject", "--sbox", "aes", "--fault-spec", str(spec_path), "--out", str(faulted_path)]) == 0
    batch_path = tmp_path / "batch.txt"
    rc = main(
        [
            "collect",
            "--key", bytes(key).hex(),
            "--sbox", str(faulted_path),
            "-n", "3500",
            "--seed", str(collect_seed),
            "--out", str(batch_path),
        ]
    )
    assert rc == 0
    rc = main(
        ["pfa-baseline", "--batch", str(batch_path), "--fault-index", str(spec.entries[0][0])]
    )
    assert rc == 0
    k10 = aes.key_schedule(key)[aes.ROUNDS]
    out = capsys.readouterr().out
    assert f"last-round key {bytes(k10).hex()}" in out


def test_pfa_baseline_trial_mode(capsys):
    rc = main(["pfa-baseline", "--seed", "15"])
    assert rc == 0
    out = capsys.readouterr().out
    assert re.search(r"needed-N \d+ \(confirmed at \d+\)", out)
    assert "true last-round key" in out


def test_sweep_cli(tmp_path, capsys):
    out_dir = tmp_path / "sw"
    rc = main(["sweep", "--seed", "4", "--trials", "1", "--faults", "32", "--out", str(out_dir)])
    assert rc == 0
    records = (out_dir / "sweep_records.csv").read_text().splitlines()
    summary = (out_dir / "sweep_summary.csv").read_text().splitlines()
    assert len(records) == 2 and len(summary) == 2
    row = dict(zip(records[0].split(","), records[1].split(",")))
    assert row["f_target"] == "32"
    assert row["needed_n"] != ""
    out = capsys.readouterr().out
    assert "f=32" in out and "1/1 trials" in out


def test_led_study_cli(tmp_path, capsys):
    out_dir = tmp_path / "study"
    rc = main(["led-study", "--seed", "6", "--keys", "1", "-n", "1000", "--out", str(out_dir)])
    assert rc == 0
    lines = (out_dir / "led_records.csv").read_text().splitlines()
    assert len(lines) == 2
    assert "1 1 1 1" in lines[1]
    assert "1/1 keys recovered at N=1000" in capsys.readouterr().out


def test_compare_cli(tmp_path, capsys, monkeypatch):
    rows = [
        {
            "fault_count": f,
            "measured_spfa_median_n": 1000.0 * (i + 1),
            "measured_pfa_median_n": 2250.0 if f == 1 else "",
            "published_pfa_n": pub["pfa_n"],
            "published_pfa_mle_n": pub["pfa_mle_n"],
            "published_spfa_n": pub["spfa_n"],
            "published_pfa_complexity": pub["pfa_complexity"],
            "published_spfa_complexity": pub["spfa_complexity"],
        }
        for i, (f, pub) in enumerate(sorted(experiment.PUBLISHED_COMPARISON.items()))
    ]
    seen = {}

    def fake_compare(cfg, log=None):
        seen["trials"] = cfg.trials
        return rows

    monkeypatch.setattr(experiment, "compare_with_pfa", fake_compare)
    out_dir = tmp_path / "cmp"
    rc = main(["compare", "--trials", "1", "--out", str(out_dir)])
    assert rc == 0
    assert seen["trials"] == 1
    lines = (out_dir / "comparison.csv").read_text().splitlines()
    assert len(lines) == 5
    assert lines[0].startswith("fault_count,")
    out = capsys.readouterr().out
    assert "15650" in out and "2273" in out
