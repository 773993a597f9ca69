"""Command-line front end.

    spfa inject       corrupt a substitution table per a fault spec
    spfa collect      encrypt random plaintexts under a (faulted) table
    spfa attack       rank key hypotheses for one diagonal group by SEI
    spfa sweep        needed-N across fault counts (AES)
    spfa led-study    full-key recovery study over many random keys (LED)
    spfa pfa-baseline classical counting attack on a single known fault
    spfa compare      measured needed-N of both attacks side by side
    spfa circuit      synthesize, fault, or tabulate gate netlists

Each subcommand writes machine-readable files (JSON/CSV/text tables) and
prints a short human summary to stdout.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import aes, attack, experiment, faults, led, netlist as nl, qm
from .ciphers import get_cipher, load_batch, save_batch
from .errors import ConfigurationError, ContractViolation, UnsupportedConfiguration
from .sbox import Sbox, dump_sbox, load_sbox

BUILTIN_SBOXES = {"aes": lambda: aes.AES_SBOX, "led": lambda: led.PRESENT_SBOX}


def _sbox_arg(text: str) -> Sbox:
    if text in BUILTIN_SBOXES:
        return BUILTIN_SBOXES[text]()
    return load_sbox(text)


def _key_arg(cipher: str, text: str):
    return get_cipher(cipher).block_from_hex(text)


def _fix_arg(text: str) -> tuple:
    try:
        slot, value = text.split("=", 1)
        return int(slot), int(value, 16)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected slot=hexvalue (e.g. 2=a1), got {text!r}"
        ) from None


def _out_path(args, default_name: str) -> Path:
    out = Path(args.out) if args.out else Path(default_name)
    if out.parent != Path("."):
        out.parent.mkdir(parents=True, exist_ok=True)
    return out


def cmd_inject(args) -> int:
    clean = _sbox_arg(args.sbox)
    spec = faults.load_spec(args.fault_spec)
    faulted, report = faults.apply_fault(clean, spec)
    out = _out_path(args, "faulted_sbox.txt")
    dump_sbox(faulted, out)
    print(
        f"{report.kind}: {report.effective_fault_count}/{report.sbox_size} entries "
        f"corrupted (ineffectiveness {report.ineffectiveness_ratio}), "
        f"bijective={report.bijective}"
    )
    print(f"wrote {out}")
    if args.report:
        with open(args.report, "w") as fh:
            d = {
                "kind": report.kind,
                "sbox_size": report.sbox_size,
                "effective_fault_count": report.effective_fault_count,
                "fault_indices": list(report.fault_indices),
                "bijective": report.bijective,
                "table_sha256": report.table_sha256,
            }
            if report.seed is not None:
                d["rng"] = report.rng
                d["seed"] = report.seed
            json.dump(d, fh, indent=2)
            fh.write("\n")
        print(f"wrote {args.report}")
    return 0


def cmd_collect(args) -> int:
    sbox = _sbox_arg(args.sbox)
    key = _key_arg(args.cipher, args.key)
    batch = experiment.collect(
        args.cipher, key, sbox, args.n, args.seed, include_true_key=args.record_key
    )
    out = _out_path(args, "batch.txt")
    save_batch(batch, out)
    print(f"{batch.n} {args.cipher} ciphertexts, seed {args.seed}")
    print(f"wrote {out}")
    return 0


def cmd_attack(args) -> int:
    batch = load_batch(args.batch)
    target = attack.AttackTarget(batch.cipher, group=args.group, row=args.row)
    fixed = dict(args.fix) if args.fix else None
    checkpoint = args.checkpoint
    progress = (lambda msg: print(msg, flush=True)) if args.progress else None
    ranking = attack.run_attack(
        batch,
        target,
        fixed=fixed,
        n=args.n,
        workers=args.workers,
        full_search=args.full_search,
        checkpoint_path=checkpoint,
        progress=progress,
    )
    spec = get_cipher(batch.cipher)
    digits = spec.cell_bits
    print(
        f"group {args.group} row {args.row}: best {ranking.best:0{digits}x} "
        f"(SEI {ranking.scores.max():.3e}, gap x{ranking.gap_ratio():.2f}, "
        f"n={ranking.n_used})"
    )
    for hyp, score in ranking.top(args.top):
        print(f"  {hyp:0{digits}x}  {score:.6e}")
    if args.out:
        data = attack.ranking_to_dict(ranking)
        data["batch_file"] = str(args.batch)
        data["batch_metadata"] = dict(batch.metadata)
        if args.sidecar:
            np.savez_compressed(
                args.sidecar, hypotheses=ranking.hypotheses, scores=ranking.scores
            )
            data["full_ranking"] = str(args.sidecar)
        with open(args.out, "w") as fh:
            json.dump(data, fh, indent=2)
            fh.write("\n")
        print(f"wrote {args.out}")
    return 0


def cmd_sweep(args) -> int:
    cfg = _load_config(args, cipher="AES128")
    out_dir = experiment.ensure_out_dir(cfg.out_dir or args.out or "sweep_out")
    result = experiment.sweep_fault_counts(cfg, log=_log(args))
    experiment.save_sweep_csv(result, out_dir / "sweep_records.csv")
    experiment.save_summary_csv(result, out_dir / "sweep_summary.csv")
    for row in result.summary():
        print(
            f"f={row['f_target']:<4d} median needed-N {row['needed_n_median']:>8.0f} "
            f"({row['successes']}/{row['trials']} trials, model {row['model_estimate']:.0f})"
        )
    print(f"wrote {out_dir}/sweep_records.csv, {out_dir}/sweep_summary.csv")
    return 0


def cmd_led_study(args) -> int:
    cfg = _load_config(args, cipher="LED64")
    out_dir = experiment.ensure_out_dir(cfg.out_dir or args.out or "led_out")
    result = experiment.reproduce_led_study(cfg, log=_log(args))
    experiment.save_led_csv(result, out_dir / "led_records.csv")
    print(
        f"{result.successes}/{len(result.records)} keys recovered at "
        f"N={cfg.n_collect}; slowest group analysis {result.max_group_wall_s:.2f}s"
    )
    print(f"wrote {out_dir}/led_records.csv")
    return 0


def cmd_pfa_baseline(args) -> int:
    if args.batch:
        batch = load_batch(args.batch)
        res = attack.pfa_baseline(
            batch, fault_index=args.fault_index, fault_value=args.fault_value, n=args.n
        )
        key = res.key()
        if res.ambiguous:
            print(f"ambiguous at n={res.n_used}: {res.ambiguous} positions unresolved")
        else:
            print(f"last-round key {bytes(key).hex()} (n={res.n_used})")
        return 0
    seeds = experiment.child_seeds(args.seed, 0)
    scan, key, spec_f = experiment.run_pfa_trial(seeds, stride=args.stride)
    k10 = aes.key_schedule(key)[aes.ROUNDS]
    print(
        f"single fault at index {spec_f.entries[0][0]:#04x}: "
        f"needed-N {scan.needed_n} (confirmed at {scan.confirmed_at})"
    )
    print(f"true last-round key {bytes(k10).hex()}")
    return 0


def cmd_compare(args) -> int:
    cfg = _load_config(args, cipher="AES128")
    out_dir = experiment.ensure_out_dir(cfg.out_dir or args.out or "compare_out")
    rows = experiment.compare_with_pfa(cfg, log=_log(args))
    experiment.save_comparison_csv(rows, out_dir / "comparison.csv")
    print(
        f"{'f':>4} {'SEI-attack meas.':>17} {'counting meas.':>15} "
        f"{'counting publ.':>15} {'SEI-attack publ.':>17}"
    )
    for row in rows:
        print(
            f"{row['fault_count']:>4} {row['measured_spfa_median_n']:>17.0f} "
            f"{str(row['measured_pfa_median_n']):>15} "
            f"{row['published_pfa_n']:>15} {row['published_spfa_n']:>17}"
        )
    print(f"wrote {out_dir}/comparison.csv")
    return 0


def cmd_circuit(args) -> int:
    if args.circuit_cmd == "synth":
        sbox = _sbox_arg(args.sbox)
        net = qm.synthesize_sop(sbox)
        if args.fanin2:
            net = nl.expand_fanin(net)
        out = _out_path(args, "netlist.txt")
        nl.save_netlist(net, out)
        print(f"{net.stats()}")
        print(f"wrote {out}")
        return 0
    if args.circuit_cmd == "fault":
        net = nl.load_netlist(args.netlist)
        fault = nl.GateFault(
            gate=args.gate, pin=args.pin, stuck=args.stuck
        )
        faulted_net = nl.inject_gate_fault(net, fault)
        out = _out_path(args, "faulted_netlist.txt")
        nl.save_netlist(faulted_net, out)
        clean_table = nl.derive_table(net)
        table = nl.derive_table(faulted_net)
        diff = int(np.count_nonzero(table != clean_table))
        print(f"stuck-at-{args.stuck} on {args.gate}"
              f"{'' if args.pin is None else f' pin {args.pin}'}: "
              f"{diff}/{table.size} entries corrupted")
        print(f"wrote {out}")
        return 0
    if args.circuit_cmd == "table":
        net = nl.load_netlist(args.netlist)
        table = nl.derive_table(net)
        out = _out_path(args, "table.txt")
        dump_sbox(Sbox(table), out)
        print(f"{table.size} entries")
        print(f"wrote {out}")
        return 0
    raise ConfigurationError(f"unknown circuit subcommand {args.circuit_cmd!r}")


def _log(args):
    return (lambda msg: print(msg, flush=True)) if args.progress else None


def _load_config(args, cipher: str) -> experiment.ExperimentConfig:
    if getattr(args, "config", None):
        cfg = experiment.config_from_json(args.config)
        if cfg.cipher != cipher:
            raise ConfigurationError(
                f"this subcommand needs a {cipher} config, got {cfg.cipher}"
            )
    else:
        cfg = experiment.ExperimentConfig(cipher=cipher)
    overrides = {
        "master_seed": "seed",
        "trials": "trials",
        "keys": "keys",
        "n_collect": "n",
        "workers": "workers",
        "out_dir": "out",
    }
    updates = {}
    for field_name, arg_name in overrides.items():
        v = getattr(args, arg_name, None)
        if v is not None:
            updates[field_name] = v
    if getattr(args, "faults", None):
        updates["fault_counts"] = tuple(args.faults)
    if updates:
        cfg = experiment.ExperimentConfig(**{**_cfg_dict(cfg), **updates})
    return cfg


def _cfg_dict(cfg) -> dict:
    from dataclasses import asdict

    return asdict(cfg)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="spfa",
        description="Persistent-fault attacks on SPN block ciphers, simulated end to end.",
    )
    p.add_argument("--seed", type=int, default=1, help="master seed (default 1)")
    p.add_argument("--workers", type=int, default=1, help="worker processes (default 1)")
    p.add_argument("--out", help="output file or directory (subcommand-specific default)")
    # the same flags parse after the subcommand too; SUPPRESS keeps the
    # subparser from clobbering a value given before it
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help=argparse.SUPPRESS)
    common.add_argument("--workers", type=int, default=argparse.SUPPRESS, help=argparse.SUPPRESS)
    common.add_argument("--out", default=argparse.SUPPRESS, help=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="cmd", required=True)

    sp = sub.add_parser(
        "inject",
        parents=[common], help="corrupt a substitution table per a fault spec")
    sp.add_argument("--sbox", required=True, help="'aes', 'led', or a table file")
    sp.add_argument("--fault-spec", required=True, help="JSON fault spec file")
    sp.add_argument("--report", help="also write a JSON fault report here")
    sp.set_defaults(fn=cmd_inject)

    sp = sub.add_parser(
        "collect",
        parents=[common], help="encrypt random plaintexts under a table")
    sp.add_argument("--cipher", default="AES128", choices=["AES128", "LED64"])
    sp.add_argument("--key", required=True, help="key as hex")
    sp.add_argument("--sbox", required=True, help="'aes', 'led', or a table file")
    sp.add_argument("-n", type=int, default=1000, help="ciphertext count (default 1000)")
    sp.add_argument(
        "--record-key", action="store_true",
        help="note the true key in the batch header (for labeled experiments)",
    )
    sp.set_defaults(fn=cmd_collect)

    sp = sub.add_parser(
        "attack",
        parents=[common], help="rank one diagonal group's key hypotheses by SEI")
    sp.add_argument("--batch", required=True, help="ciphertext batch file")
    sp.add_argument("--group", type=int, default=0, choices=range(4))
    sp.add_argument("--row", type=int, default=0, choices=range(4))
    sp.add_argument(
        "--fix", type=_fix_arg, action="append",
        help="pin a group slot to a known byte, slot=hex (AES: exactly two)",
    )
    sp.add_argument("-n", type=int, help="use only the first n ciphertexts")
    sp.add_argument(
        "--full-search", action="store_true",
        help="search all 2^32 AES group values instead of fixing two bytes",
    )
    sp.add_argument("--checkpoint", help="resumable checkpoint file for --full-search")
    sp.add_argument("--top", type=int, default=5, help="print the top K candidates")
    sp.add_argument("--sidecar", help="write full scores alongside --out (npz)")
    sp.add_argument("--progress", action="store_true")
    sp.set_defaults(fn=cmd_attack)

    sp = sub.add_parser(
        "sweep",
        parents=[common], help="needed-N across fault counts (AES)")
    sp.add_argument("--config", help="experiment config JSON")
    sp.add_argument("--trials", type=int, help="trials per fault count")
    sp.add_argument("--faults", type=int, nargs="+", help="fault counts to sweep")
    sp.add_argument("--progress", action="store_true")
    sp.set_defaults(fn=cmd_sweep)

    sp = sub.add_parser(
        "led-study",
        parents=[common], help="full-key recovery over many random keys (LED)")
    sp.add_argument("--config", help="experiment config JSON")
    sp.add_argument("--keys", type=int, help="number of random keys")
    sp.add_argument("-n", type=int, help="ciphertexts per key")
    sp.add_argument("--progress", action="store_true")
    sp.set_defaults(fn=cmd_led_study)

    sp = sub.add_parser(
        "pfa-baseline",
        parents=[common], help="classical counting attack, single known fault")
    sp.add_argument("--batch", help="attack this batch instead of a seeded trial")
    sp.add_argument("--fault-index", type=lambda s: int(s, 0))
    sp.add_argument("--fault-value", type=lambda s: int(s, 0))
    sp.add_argument("-n", type=int)
    sp.add_argument("--stride", type=int, default=250)
    sp.set_defaults(fn=cmd_pfa_baseline)

    sp = sub.add_parser(
        "compare",
        parents=[common], help="measured needed-N of both attacks side by side")
    sp.add_argument("--config", help="experiment config JSON")
    sp.add_argument("--trials", type=int, help="trials per fault count")
    sp.add_argument("--progress", action="store_true")
    sp.set_defaults(fn=cmd_compare)

    sp = sub.add_parser(
        "circuit",
        parents=[common], help="synthesize, fault, or tabulate gate netlists")
    csub = sp.add_subparsers(dest="circuit_cmd", required=True)
    c = csub.add_parser(
        "synth",
        parents=[common], help="substitution table to two-level netlist")
    c.add_argument("--sbox", required=True, help="'aes', 'led', or a table file")
    c.add_argument("--fanin2", action="store_true", help="map to 2-input gates")
    c = csub.add_parser(
        "fault",
        parents=[common], help="inject one stuck-at fault into a netlist")
    c.add_argument("--netlist", required=True)
    c.add_argument("--gate", required=True)
    c.add_argument("--pin", type=int, help="input pin index; omit for the output")
    c.add_argument("--stuck", type=int, required=True, choices=(0, 1))
    c = csub.add_parser(
        "table",
        parents=[common], help="derive the truth table of a netlist")
    c.add_argument("--netlist", required=True)
    sp.set_defaults(fn=cmd_circuit)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ConfigurationError, ContractViolation, UnsupportedConfiguration) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
