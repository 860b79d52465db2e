"""Command-line front end: `simulate` runs a BLER campaign from a config
file; `geometry` prints the frame layout for one numerology."""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .campaign import BlerPoint, compute_bler, run_campaign
from .config import load_config
from .numerology import (
    ConfigError,
    Numerology,
    cp_samples,
    grid_geometry,
    useful_samples_tc,
)
from .results import write_results


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="v2xsim",
        description="Link-level sidelink BLER simulator (LTE and NR numerologies).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a Monte-Carlo BLER campaign")
    sim.add_argument("--config", required=True, help="key=value config file")
    sim.add_argument("--out", default="results.csv", help="output CSV path")
    sim.add_argument("--plot", default=None, help="also write an SVG BLER plot")
    sim.add_argument("--seed", type=int, default=None,
                     help="override the config seed")
    sim.add_argument("--workers", type=int, default=1,
                     help="worker processes (results are identical for any count)")

    geo = sub.add_parser("geometry", help="print the frame layout for a numerology")
    geo.add_argument("--mu", type=int, required=True, help="numerology index 0..3")
    geo.add_argument("--bw", type=float, required=True, help="bandwidth in Hz")
    geo.add_argument("--cp", choices=("normal", "extended"), default="normal")
    return parser


def _print_point(point: BlerPoint) -> None:
    print(
        f"  snr={point.snr_db:g} dB  blocks={point.blocks_tx}"
        f"  ctrl_bler={compute_bler(point, 'control'):.6f}"
        f"  data_bler={compute_bler(point, 'data'):.6f}",
        flush=True,
    )


def _cmd_simulate(args) -> int:
    try:
        cfg = load_config(args.config)
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 2
    except ConfigError as exc:
        print(f"error: {args.config}: {exc}", file=sys.stderr)
        return 2
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    if args.workers < 1:
        print("error: --workers must be >= 1", file=sys.stderr)
        return 2
    print(f"{cfg.curve_label()}: {cfg.n_subframes} blocks per point, "
          f"seed {cfg.seed}", flush=True)
    curve = run_campaign(cfg, workers=args.workers, progress=_print_point)
    write_results([curve], args.out, plot_path=args.plot)
    print(f"wrote {args.out}" + (f" and {args.plot}" if args.plot else ""))
    return 0


def _cmd_geometry(args) -> int:
    try:
        num = Numerology(args.mu, args.cp)
        geom = grid_geometry(args.bw, num)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    slot_ms = 1.0 / num.slots_per_subframe
    long_cp = cp_samples(num, 0)
    short_cp = cp_samples(num, 1)
    total_tc = sum(
        cp_samples(num, l) + useful_samples_tc(num.mu)
        for l in range(num.symbols_per_subframe)
    )
    print(f"mu: {num.mu}")
    print(f"subcarrier_spacing_khz: {num.scs_khz}")
    print(f"cyclic_prefix: {num.cp}")
    print(f"slots_per_subframe: {num.slots_per_subframe}")
    print(f"slot_duration_ms: {slot_ms:g}")
    print(f"symbols_per_slot: {num.symbols_per_slot}")
    print(f"symbols_per_subframe: {num.symbols_per_subframe}")
    print(f"cp_long_tc: {long_cp}")
    print(f"cp_short_tc: {short_cp}")
    print(f"subframe_total_tc: {total_tc}")
    print(f"n_prb: {geom.n_prb}")
    print(f"fft_size: {geom.fft_size}")
    print(f"sample_rate_hz: {geom.sample_rate}")
    print(f"subframe_samples: {geom.subframe_samples}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "simulate":
        return _cmd_simulate(args)
    return _cmd_geometry(args)


if __name__ == "__main__":
    sys.exit(main())
