"""Command-line interface.

Subcommands: codebook, simulate, run, eval, detect, bench.
Exit codes: 0 success, 1 usage error, 2 I/O error, 3 data integrity error.
"""

from __future__ import annotations

import argparse
import sys

from .codebook import generate_codebook, load_codebook, save_codebook
from .config import SceneConfigError, load_scene_config
from .detector import detect
from .imaging import PgmFormatError, read_pgm
from .pipeline import (
    PipelineParams,
    evaluate_records,
    format_machine,
    format_table,
    measure_throughput,
    parse_track_record,
    run_frames,
)
from .sequence import SequenceError, read_sequence, read_truth, write_sequence
from .simulator import simulate

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_DATA = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); keep our code scheme
        raise UsageError(message)


def _add_param_flags(parser):
    group = parser.add_argument_group("pipeline parameters")
    group.add_argument("--binarize-threshold", type=int, default=5, help="intensity cut for the binary mask")
    group.add_argument("--area-min", type=int, default=3, help="smallest accepted proposal area (px^2)")
    group.add_argument("--area-max", type=int, default=400, help="largest accepted proposal area (px^2)")
    group.add_argument("--hu-threshold", type=float, default=0.2, help="shape gate on the Hu-moment distance")
    group.add_argument("--assoc-max-dist", type=float, default=50.0, help="association distance cap (px)")
    group.add_argument("--prune-after", type=int, default=30, help="frames a track may stay unmatched")
    group.add_argument("--window", type=int, default=7, help="decoder sliding-window length (samples)")
    group.add_argument("--k-low", type=int, default=2, help="Schmitt trigger low threshold")
    group.add_argument("--k-high", type=int, default=4, help="Schmitt trigger high threshold")


def _params(args) -> PipelineParams:
    return PipelineParams(
        binarize_threshold=args.binarize_threshold,
        area_min=args.area_min,
        area_max=args.area_max,
        hu_threshold=args.hu_threshold,
        assoc_max_dist=args.assoc_max_dist,
        prune_after=args.prune_after,
        window_len=args.window,
        k_low=args.k_low,
        k_high=args.k_high,
        bit_period_frames=args.window,
    )


def _build_parser() -> _Parser:
    parser = _Parser(prog="irbeacon", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("codebook", help="generate the identifier codebook file")
    p.add_argument("--out", default="codebook.txt", help="output path (default: codebook.txt)")

    p = sub.add_parser("simulate", help="render a synthetic sequence to disk")
    p.add_argument("--config", required=True, help="scene config path or bundled name (e.g. standstill_60m)")
    p.add_argument("--out", required=True, help="output sequence directory")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--duration", type=float, default=None, help="override the config's duration_s")

    p = sub.add_parser("run", help="run the full pipeline over a sequence directory")
    p.add_argument("--sequence", required=True, help="sequence directory")
    p.add_argument("--codebook", required=True, help="codebook file")
    p.add_argument("--records", default=None, help="write machine-readable records to this file")
    _add_param_flags(p)

    p = sub.add_parser("eval", help="re-evaluate serialized track records against ground truth")
    p.add_argument("--records", required=True, help="machine records written by 'run'")
    p.add_argument("--sequence", required=True, help="sequence directory with ground truth")

    p = sub.add_parser("detect", help="single-frame detection debug dump")
    p.add_argument("--image", required=True, help="PGM frame")
    _add_param_flags(p)

    p = sub.add_parser("bench", help="measure pipeline throughput on synthetic frames")
    p.add_argument("--scene", default="standstill_60m", help="bundled scene to render")
    p.add_argument("--frames", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    _add_param_flags(p)

    return parser


def _cmd_codebook(args) -> int:
    book = generate_codebook()
    save_codebook(book, args.out)
    print(f"wrote {len(book)} identifiers to {args.out}")
    return EXIT_OK


def _cmd_simulate(args) -> int:
    config, duration = load_scene_config(args.config)
    if args.duration is not None:
        duration = args.duration
    count = write_sequence(args.out, simulate(config, duration, args.seed))
    print(f"wrote {count} frames to {args.out} (seed {args.seed}, {duration} s)")
    return EXIT_OK


def _cmd_run(args) -> int:
    codebook = load_codebook(args.codebook)
    metrics, records = run_frames(read_sequence(args.sequence), codebook, _params(args))
    print(format_table(metrics))
    if args.records:
        with open(args.records, "w", encoding="ascii", newline="\n") as fh:
            fh.write(format_machine(metrics, records) + "\n")
    return EXIT_OK


def _cmd_eval(args) -> int:
    with open(args.records, "r", encoding="ascii") as fh:
        parsed = [parse_track_record(line) for line in fh if line.startswith("track ")]
    if not parsed:
        return EXIT_OK
    truths = read_truth(args.sequence)
    per_beacon, unmatched = evaluate_records(parsed, truths)
    for bm in per_beacon:
        print(
            f"beacon {bm.id_bits} tracks_matching {bm.tracks_matching} "
            f"bits_decoded {bm.bits_decoded} correct_bits {bm.correct_bits} error_bits {bm.error_bits}"
        )
    for track_id in unmatched:
        print(f"unmatched track {track_id}")
    return EXIT_OK


def _cmd_detect(args) -> int:
    pixels = read_pgm(args.image)
    p = _params(args)
    detections = detect(
        pixels,
        hu_threshold=p.hu_threshold,
        threshold=p.binarize_threshold,
        area_min=p.area_min,
        area_max=p.area_max,
    )
    for d in detections:
        print(f"0 {d.box.x} {d.box.y} {d.box.w} {d.box.h} {d.hu_dist:.4f}")
    return EXIT_OK


def _cmd_bench(args) -> int:
    config, _ = load_scene_config(args.scene)
    frames = [frame for frame, _ in simulate(config, args.frames / config.camera.frame_rate_hz, args.seed)]
    codebook = generate_codebook()
    fps = measure_throughput(frames, codebook, _params(args))
    w, h = config.camera.width, config.camera.height
    print(f"pipeline throughput: {fps:.1f} fps over {len(frames)} frames ({w}x{h})")
    return EXIT_OK


_COMMANDS = {
    "codebook": _cmd_codebook,
    "simulate": _cmd_simulate,
    "run": _cmd_run,
    "eval": _cmd_eval,
    "detect": _cmd_detect,
    "bench": _cmd_bench,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SceneConfigError, SequenceError, PgmFormatError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
