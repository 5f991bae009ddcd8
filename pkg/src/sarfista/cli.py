"""Command-line front end: single runs, seed sweeps, baseline comparisons."""

import argparse
import dataclasses
import os
import sys
from importlib import resources

from .dictionary import DictionarySpec, build_dictionary
from .harness import (
    ExperimentConfig,
    config_from_mapping,
    load_config,
    parse_config_text,
    run_experiment,
)
from .imgio import atom_gallery, fmt_float
from .metrics import Method, memory_values

_SCENE_CHOICES = ("1", "2", "3", "4")


def load_preset(scene_number):
    """Shipped per-scene configuration (sarfista/presets/scene<n>.cfg)."""
    label = str(scene_number).lower()
    if label.startswith("scene"):
        label = label[5:]
    ref = resources.files("sarfista").joinpath(f"presets/scene{int(label)}.cfg")
    return config_from_mapping(parse_config_text(ref.read_text()))


def _with_seed(cfg, seed):
    if seed is None:
        return cfg
    return dataclasses.replace(cfg, seed=int(seed))


def cmd_run(args):
    cfg = load_config(args.config)
    cfg = _with_seed(cfg, args.seed)
    out_dir = args.out
    trace = run_experiment(cfg, out_dir=out_dir)
    print(f"termination = {trace.termination_reason}")
    print(f"pulses_fired = {trace.pulses_fired}")
    print(f"final_count = {trace.final_count}")
    if trace.rows:
        print(f"snr_online_db = {fmt_float(trace.rows[-1].snr_online_db)}")
        print(f"snr_bp_db = {fmt_float(trace.rows[-1].snr_bp_db)}")
    print(f"outputs in {out_dir}")
    return 0


def cmd_sweep(args):
    scenes = _SCENE_CHOICES if args.scene == "all" else (args.scene,)
    os.makedirs(args.out, exist_ok=True)
    counts_path = os.path.join(args.out, "sweep_counts.csv")
    gain_path = os.path.join(args.out, "sweep_gain.csv")
    summary_path = os.path.join(args.out, "sweep_summary.csv")
    with open(counts_path, "w") as counts_fh, open(gain_path, "w") as gain_fh, open(
        summary_path, "w"
    ) as summary_fh:
        counts_fh.write("scene,seed,pulse_index,n_large\n")
        gain_fh.write("scene,seed,pulse_index,snr_online_db,snr_bp_db,gain_db\n")
        summary_fh.write("scene,seed,pulses_fired,final_count,termination_reason\n")
        for scene in scenes:
            base = load_preset(scene)
            for i in range(args.seeds):
                seed = args.seed_base + i
                trace = run_experiment(_with_seed(base, seed))
                for row in trace.rows:
                    counts_fh.write(f"{scene},{seed},{row.pulse_index},{row.n_large}\n")
                    gain_fh.write(
                        f"{scene},{seed},{row.pulse_index},"
                        f"{fmt_float(row.snr_online_db)},{fmt_float(row.snr_bp_db)},"
                        f"{fmt_float(row.gain_db)}\n"
                    )
                summary_fh.write(
                    f"{scene},{seed},{trace.pulses_fired},{trace.final_count},"
                    f"{trace.termination_reason}\n"
                )
                print(
                    f"scene {scene} seed {seed}: {trace.pulses_fired} pulses, "
                    f"count {trace.final_count}, {trace.termination_reason}"
                )
    print(f"outputs in {args.out}")
    return 0


def cmd_compare_bp(args):
    cfg = load_preset(args.scene)
    cfg = _with_seed(cfg, args.seed)
    cfg = dataclasses.replace(cfg, max_pulses=args.pulses)
    trace = run_experiment(cfg, out_dir=args.out, stop_on_ideal=False)
    if not trace.rows:
        raise RuntimeError("the schedule selected no pulses; try another seed")
    last = trace.rows[-1]
    gain = last.gain_db
    print(f"pulses_fired = {trace.pulses_fired}")
    print(f"snr_online_db = {fmt_float(last.snr_online_db)}")
    print(f"snr_bp_db = {fmt_float(last.snr_bp_db)}")
    print(f"gain_db = {fmt_float(gain)}")
    with open(os.path.join(args.out, "compare.txt"), "w") as fh:
        fh.write(f"pulses_fired = {trace.pulses_fired}\n")
        fh.write(f"snr_online_db = {fmt_float(last.snr_online_db)}\n")
        fh.write(f"snr_bp_db = {fmt_float(last.snr_bp_db)}\n")
        fh.write(f"gain_db = {fmt_float(gain)}\n")
    print(f"outputs in {args.out}")
    return 0


def cmd_dict_gallery(args):
    if args.scene is not None:
        cfg = ExperimentConfig(scene="scene" + args.scene, side_pixels=args.side)
        spec = cfg.dictionary_spec()
    else:
        if not args.lengths:
            raise ValueError("give --scene or an explicit --lengths list")
        import math as _math

        lengths = tuple(int(tok) for tok in args.lengths.split(","))
        rotations = tuple(
            _math.radians(float(tok)) for tok in (args.rotations_deg or "0").split(",")
        )
        spec = DictionarySpec(lengths, rotations, args.side)
    dictionary = build_dictionary(spec)
    atom_gallery(args.out, dictionary)
    print(f"M = {dictionary.m_atoms} atoms, side = {dictionary.side_pixels}")
    print(f"wrote {args.out}")
    return 0


def cmd_memory_table(args):
    online = memory_values(Method.ONLINE_FISTA, args.M, args.N, args.Nr, args.n).values_stored
    batch = memory_values(Method.BATCH_FISTA, args.M, args.N, args.Nr, args.n).values_stored
    print(f"values stored for M={args.M} N={args.N} N_r={args.Nr} n={args.n}")
    print("method          values_stored")
    print(f"online_fista    {online}")
    print(f"batch_fista     {batch}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sarfista",
        description="Streaming sparse SAR reconstruction experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one experiment from a config file")
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--seed", type=int, default=None)
    p_run.add_argument("--out", default="out")
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="seed sweep over scene presets")
    p_sweep.add_argument("--scene", choices=_SCENE_CHOICES + ("all",), default="all")
    p_sweep.add_argument("--seeds", type=int, default=10)
    p_sweep.add_argument("--seed-base", type=int, default=1)
    p_sweep.add_argument("--out", default="sweep_out")
    p_sweep.set_defaults(func=cmd_sweep)

    p_cmp = sub.add_parser("compare-bp", help="fixed-pulse-count comparison against BP")
    p_cmp.add_argument("--scene", choices=_SCENE_CHOICES, default="1")
    p_cmp.add_argument("--pulses", type=int, default=10)
    p_cmp.add_argument("--seed", type=int, default=1)
    p_cmp.add_argument("--out", default="compare_out")
    p_cmp.set_defaults(func=cmd_compare_bp)

    p_gal = sub.add_parser("dict-gallery", help="atom montage image")
    p_gal.add_argument("--scene", choices=_SCENE_CHOICES, default=None)
    p_gal.add_argument("--lengths", default=None, help="comma list, e.g. 2,4,6")
    p_gal.add_argument("--rotations-deg", default=None, help="comma list, e.g. 0,90")
    p_gal.add_argument("--side", type=int, default=16)
    p_gal.add_argument("--out", default="dict_gallery.pgm")
    p_gal.set_defaults(func=cmd_dict_gallery)

    p_mem = sub.add_parser("memory-table", help="stored-value counts for both methods")
    p_mem.add_argument("--M", type=int, required=True)
    p_mem.add_argument("--N", type=int, required=True)
    p_mem.add_argument("--Nr", type=int, required=True)
    p_mem.add_argument("--n", type=int, required=True)
    p_mem.set_defaults(func=cmd_memory_table)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
