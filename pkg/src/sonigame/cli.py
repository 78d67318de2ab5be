"""Command-line entry points.

Subcommands:
  simulate      headless bot session -> session report JSON
  render-audio  simulated game trajectory -> WAV
  strips        WAV -> left/right PGM strip images + decoded attributes JSON
  serve         live session server over WebSocket
  validate      check a configuration document
"""

import argparse
import asyncio
import dataclasses
import json
import os
import sys

from .bot import run_headless_session, report_to_json
from .configio import ConfigError, default_config_document, load_config
from .game import current_attribute_frame, new_game, step
from .pgm import write_pgm
from .server import ServeOptions, serve_session
from .strips import analyze, decode_attributes, render_strip_image
from .synth import SynthError, mono_to_stereo, render
from .wavio import WavFormatError, read_wav, write_wav


def _load(path: str | None):
    if path is None:
        return default_config_document()
    return load_config(path)


def _trajectory_frames(doc, seconds: float, seed: int | None):
    config = doc.game
    if seed is not None:
        config = dataclasses.replace(config, rng_seed=seed)
    state = new_game(config)
    frames = [current_attribute_frame(state, config)]
    dt = 1.0 / config.frame_rate
    for _ in range(int(round(seconds * config.frame_rate))):
        step(state, dt, config)
        frames.append(current_attribute_frame(state, config))
    return frames


def _cmd_simulate(args) -> int:
    doc = _load(args.config)
    report = run_headless_session(doc.game, args.seconds, seed=args.seed)
    text = report_to_json(report)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(text)
    print(f"session: {report.hits} hits, {report.misses} misses, "
          f"{report.rate_limited} rate-limited over {report.duration_s} s "
          f"(final speed level {report.final_speed_level})")
    return 0


def _cmd_render_audio(args) -> int:
    doc = _load(args.config)
    frames = _trajectory_frames(doc, args.seconds, args.seed)
    buffer = render(frames, doc.synth)
    write_wav(buffer, args.out)
    print(f"wrote {args.out}: {buffer.duration_s:.2f} s, "
          f"{buffer.sample_rate} Hz, {buffer.channels} channel(s)")
    return 0


def _cmd_strips(args) -> int:
    doc = _load(args.config)
    buffer = read_wav(args.infile)
    if buffer.channels == 1:
        buffer = mono_to_stereo(buffer)
    frames = analyze(buffer, doc.analyzer)
    os.makedirs(args.out_dir, exist_ok=True)
    for side in ("left", "right"):
        write_pgm(os.path.join(args.out_dir, f"{side}.pgm"),
                  render_strip_image(frames, side))
    decoded = decode_attributes(frames, doc.mapping, doc.analyzer,
                                sample_rate=buffer.sample_rate)
    decoded_path = os.path.join(args.out_dir, "decoded.json")
    with open(decoded_path, "w", encoding="utf-8") as fh:
        json.dump([{"t": d.t, "pitch_hz": d.pitch_hz, "energy": d.energy}
                   for d in decoded], fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {args.out_dir}/left.pgm, right.pgm and decoded.json "
          f"({len(frames)} strip frames, {len(decoded)} decoded)")
    return 0


def _cmd_serve(args) -> int:
    doc = _load(args.config)
    options = ServeOptions(host=args.host, port=args.port,
                           duration_s=args.seconds, pacing=args.pacing)
    print(f"serving on ws://{options.host}:{options.port} "
          f"({options.duration_s} s sessions, pacing {options.pacing})", flush=True)
    try:
        asyncio.run(serve_session(doc, options))
    except KeyboardInterrupt:
        print("stopped")
    return 0


def _cmd_validate(args) -> int:
    try:
        _load(args.config)
    except ConfigError as exc:
        for problem in exc.problems:
            print(f"invalid: {problem}", file=sys.stderr)
        return 1
    print("config ok")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sonigame",
        description="Sonified target game: simulate, render, visualize, serve.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config(p):
        p.add_argument("--config", metavar="F", default=None,
                       help="configuration document (defaults built in)")

    p = sub.add_parser("simulate", help="run a headless bot session")
    add_config(p)
    p.add_argument("--seconds", type=float, default=60.0)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--report", metavar="PATH", default=None,
                   help="write the session report JSON here")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("render-audio", help="render a game trajectory to WAV")
    add_config(p)
    p.add_argument("--seconds", type=float, default=10.0)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", metavar="X.wav", required=True)
    p.set_defaults(func=_cmd_render_audio)

    p = sub.add_parser("strips", help="render WAV audio as visual strips")
    add_config(p)
    p.add_argument("--in", dest="infile", metavar="X.wav", required=True)
    p.add_argument("--out-dir", metavar="D", required=True)
    p.set_defaults(func=_cmd_strips)

    p = sub.add_parser("serve", help="serve live sessions over WebSocket")
    add_config(p)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8765)
    p.add_argument("--seconds", type=float, default=60.0)
    p.add_argument("--pacing", type=float, default=1.0,
                   help="wall seconds per simulated second (1.0 = real time)")
    p.set_defaults(func=_cmd_serve)

    p = sub.add_parser("validate", help="validate a configuration document")
    add_config(p)
    p.set_defaults(func=_cmd_validate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, WavFormatError, SynthError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
