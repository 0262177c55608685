"""Command-line interface: label, mine, synth, and render subcommands.

Exit codes: 0 success, 1 usage error, 2 data error. All randomness derives
from --seed, so repeated invocations with equal flags and inputs produce
byte-identical output files.
"""

from __future__ import annotations

import argparse
import csv
import os
import re
import sys

from trajmine import __version__, io
from trajmine.labeling import CourtGeometry, explain_label
from trajmine.mining import MinerConfig, mine
from trajmine.model import validate_dataset
from trajmine.render import RenderSpec, render_attack_svg
from trajmine.synth import SynthConfig, gen_null, gen_planted


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors by default; this tool reserves 2 for
    # data errors
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _add_mining_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--min-length", type=int, default=5, help="minimum window length L")
    p.add_argument("--epsilon", type=float, default=4.0, help="distance threshold")
    p.add_argument("--permutations", type=int, default=1000, help="label permutations B")
    p.add_argument("--alpha", type=float, default=0.05, help="significance level")
    p.add_argument(
        "--distance-mode", choices=["timestep", "nested"], default="timestep"
    )
    p.add_argument(
        "--base", choices=["euclidean", "manhattan", "chebyshev"], default="euclidean"
    )
    p.add_argument("--seed", type=int, default=0, help="PRNG seed")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument(
        "--no-prune", action="store_true",
        help="disable bound pruning (testing only; output is unchanged)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="trajmine", description=__doc__)
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_label = sub.add_parser(
        "label", parents=[], help="compute effective/ineffective labels from shot events"
    )
    p_label.add_argument("--events", required=True, help="shot event file")
    p_label.add_argument("--stats", required=True, help="player shot statistics file")
    p_label.add_argument("--out", required=True, help="output label file")
    p_label.add_argument(
        "--details", default=None, help="optional per-attack decision detail file"
    )
    p_label.add_argument(
        "--three-point-threshold", type=float, default=0.35,
        help="minimum adjusted three-point probability",
    )
    p_label.set_defaults(func=_cmd_label)

    p_mine = sub.add_parser("mine", help="mine significant discriminative windows")
    p_mine.add_argument("--trajectories", required=True)
    p_mine.add_argument("--labels", required=True)
    p_mine.add_argument("--out", required=True, help="output result document (JSON)")
    _add_mining_flags(p_mine)
    p_mine.set_defaults(func=_cmd_mine)

    p_synth = sub.add_parser("synth", help="generate a synthetic labelled dataset")
    p_synth.add_argument("--out-trajectories", required=True)
    p_synth.add_argument("--out-labels", required=True)
    p_synth.add_argument("--out-truth", default=None, help="planted window file")
    p_synth.add_argument("--kind", choices=["null", "planted"], default="null")
    p_synth.add_argument("--n-matrices", type=int, default=12)
    p_synth.add_argument("--n-pos", type=int, default=5)
    p_synth.add_argument("--min-len", type=int, default=8)
    p_synth.add_argument("--max-len", type=int, default=14)
    p_synth.add_argument("--agents", type=int, default=5)
    p_synth.add_argument("--step-scale", type=float, default=2.0)
    p_synth.add_argument("--motif-length", type=int, default=6)
    p_synth.add_argument("--jitter", type=float, default=0.0)
    p_synth.add_argument("--plant-rate", type=float, default=1.0)
    p_synth.add_argument("--seed", type=int, default=0)
    p_synth.set_defaults(func=_cmd_synth)

    p_render = sub.add_parser("render", help="render attacks (and windows) as SVG")
    p_render.add_argument("--trajectories", required=True)
    p_render.add_argument("--labels", required=True)
    p_render.add_argument("--results", default=None, help="mining result document")
    p_render.add_argument("--out", required=True, help="output directory")
    p_render.add_argument(
        "--attacks", default=None, help="comma-separated attack ids (default: all)"
    )
    p_render.set_defaults(func=_cmd_render)

    return parser


def _cmd_label(args) -> int:
    stats, defaults = io.read_shot_stats(args.stats)
    events = io.read_shot_events(args.events)
    geom = CourtGeometry()
    decisions = [
        explain_label(e, stats, defaults, geom, args.three_point_threshold)
        for e in events
    ]
    io.write_labels(args.out, [(d.attack_id, d.label) for d in decisions])
    if args.details:
        with open(args.details, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(
                ["attack_id", "label", "zone", "defender_category", "raw_prob", "adjusted_prob"]
            )
            for d in decisions:
                writer.writerow([
                    d.attack_id,
                    "+1" if d.label == 1 else "-1",
                    d.zone.value if d.zone else "",
                    d.category.value if d.category else "",
                    repr(d.raw_three_point_prob) if d.raw_three_point_prob is not None else "",
                    repr(d.adjusted_three_point_prob)
                    if d.adjusted_three_point_prob is not None
                    else "",
                ])
    return 0


def _cmd_mine(args) -> int:
    dataset = io.load_dataset(args.trajectories, args.labels)
    config = MinerConfig(
        min_length=args.min_length,
        epsilon=args.epsilon,
        permutations=args.permutations,
        alpha=args.alpha,
        distance_mode=args.distance_mode,
        base_distance=args.base,
        prng_seed=args.seed,
        threads=args.threads,
        prune=not args.no_prune,
    )
    skipped = [
        v.attack_id for v in validate_dataset(dataset, min_length=config.min_length)
        if v.rule == "short-attack"
    ]
    if skipped:
        print(
            f"note: {len(skipped)} attack(s) shorter than L={config.min_length} "
            f"contribute no windows: {', '.join(skipped)}",
            file=sys.stderr,
        )
    result = mine(dataset, config)
    io.write_results(result, args.out)
    print(
        f"delta*={result.delta_star!r} discoveries={len(result.discoveries)} "
        f"nodes={result.counters.nodes_visited} pruned={result.counters.nodes_pruned}"
    )
    return 0


def _cmd_synth(args) -> int:
    cfg = SynthConfig(
        n_matrices=args.n_matrices,
        n_pos=args.n_pos,
        min_length=args.min_len,
        max_length=args.max_len,
        n_agents=args.agents,
        step_scale=args.step_scale,
        motif_length=args.motif_length,
        motif_jitter=args.jitter,
        plant_rate=args.plant_rate,
        seed=args.seed,
    )
    if args.kind == "null":
        dataset = gen_null(cfg)
        truth = []
    else:
        dataset, truth = gen_planted(cfg)
    io.write_dataset(dataset, args.out_trajectories, args.out_labels)
    if args.out_truth is not None:
        io.write_ground_truth(args.out_truth, truth)
    print(f"wrote {len(dataset)} attacks ({dataset.n_pos} positive)")
    return 0


def _cmd_render(args) -> int:
    dataset = io.load_dataset(args.trajectories, args.labels)
    windows: dict[str, list] = {}
    if args.results:
        result = io.read_results(args.results)
        for d in result.discoveries:
            windows.setdefault(d.matrix_id, []).append(d)
    wanted = None
    if args.attacks:
        wanted = [a for a in args.attacks.split(",") if a]
        for attack_id in wanted:
            dataset.matrix(attack_id)  # raises KeyError for unknown ids
    os.makedirs(args.out, exist_ok=True)
    spec = RenderSpec()
    count = 0
    for matrix in dataset:
        if wanted is not None and matrix.attack_id not in wanted:
            continue
        svg = render_attack_svg(matrix, windows.get(matrix.attack_id, ()), spec)
        safe = re.sub(r"[^A-Za-z0-9._-]", "_", matrix.attack_id)
        out_path = os.path.join(args.out, f"{safe}.svg")
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(svg)
        count += 1
    print(f"wrote {count} SVG file(s) to {args.out}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, IndexError, OSError) as exc:
        message = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {message}", file=sys.stderr)
        return 2


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
