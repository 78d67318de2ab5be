"""Headless automated player.

The bot never reads game state.  It hears exactly what a human would: the
stream of sound-attribute frames.  It inverts the mapping to estimate the
target position, estimates velocity by finite differences, and touches at a
lead-compensated aim point whenever the rate limiter allows.  A session
report from this bot is therefore evidence that the sonified channel alone
carries enough information to play.
"""

import json
import math
from dataclasses import dataclass, replace

from .game import (GameConfig, GameState, Outcome, TouchEvent, current_attribute_frame,
                   new_game, register_touch, step)
from .mapping import MappingSpec, attributes_to_position
from .synth import SoundAttributeFrame


class BotError(ValueError):
    pass


@dataclass(frozen=True)
class BotParams:
    lead_time_s: float = 0.0
    velocity_window_s: float = 0.2
    # None: game interval plus half a frame period, which keeps the bot
    # clear of float dust at the exact rate-limit boundary.
    min_interval_s: float | None = None
    # Ablation knob: quantize heard pitch to a semitone grid this coarse
    # before inverting, degrading the channel on purpose.
    pitch_quantize_semitones: float | None = None


@dataclass(frozen=True)
class TouchRecord:
    t: float
    x: float
    y: float
    outcome: str
    estimate: tuple[float, float]
    true_target: tuple[float, float]


@dataclass(frozen=True)
class SessionReport:
    duration_s: float
    touches_attempted: int
    hits: int
    misses: int
    rate_limited: int
    localization_error_mean: float | None
    localization_error_max: float | None
    final_speed_level: int
    seed: int


def report_to_json(report: SessionReport) -> str:
    """Canonical JSON serialization (stable bytes for identical reports)."""
    if report.localization_error_mean is None:
        loc = None
    else:
        loc = {"max": report.localization_error_max, "mean": report.localization_error_mean}
    doc = {
        "duration_s": report.duration_s,
        "final_speed_level": report.final_speed_level,
        "hits": report.hits,
        "localization_error": loc,
        "misses": report.misses,
        "rate_limited": report.rate_limited,
        "seed": report.seed,
        "touches_attempted": report.touches_attempted,
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def report_from_json(text: str) -> SessionReport:
    doc = json.loads(text)
    loc = doc["localization_error"]
    return SessionReport(
        duration_s=doc["duration_s"], touches_attempted=doc["touches_attempted"],
        hits=doc["hits"], misses=doc["misses"], rate_limited=doc["rate_limited"],
        localization_error_mean=None if loc is None else loc["mean"],
        localization_error_max=None if loc is None else loc["max"],
        final_speed_level=doc["final_speed_level"], seed=doc["seed"])


def quantize_pitch(pitch_hz: float, semitones: float, ref_hz: float = 220.0) -> float:
    """Snap a pitch to the nearest rung of a semitone grid."""
    steps = 12.0 * math.log2(pitch_hz / ref_hz)
    return ref_hz * 2.0 ** (semitones * round(steps / semitones) / 12.0)


def _heard(frame: SoundAttributeFrame, params: BotParams) -> SoundAttributeFrame:
    q = params.pitch_quantize_semitones
    if q is None:
        return frame
    return SoundAttributeFrame(
        t=frame.t, pitch_hz=quantize_pitch(frame.pitch_hz, q),
        amplitude=frame.amplitude, timbre=frame.timbre,
        waveshape=frame.waveshape, pan=frame.pan)


def _estimate(spec: MappingSpec, frame: SoundAttributeFrame,
              params: BotParams) -> tuple[float, float]:
    x, y = attributes_to_position(spec, _heard(frame, params))
    return (x, y)


def bot_decide(history: list[SoundAttributeFrame], spec: MappingSpec, now: float,
               last_touch_t: float | None, params: BotParams = BotParams(),
               min_interval_s: float = 1.0) -> TouchEvent | None:
    """Decide whether to touch, and where, given the heard frames.

    Returns None while the rate limiter blocks or while fewer than two
    frames are available for a velocity estimate.
    """
    if not history:
        raise BotError("empty frame history")
    gate = params.min_interval_s if params.min_interval_s is not None else min_interval_s
    if last_touch_t is not None and now - last_touch_t < gate:
        return None
    if len(history) < 2:
        return None
    latest = history[-1]
    pos = _estimate(spec, latest, params)
    past = history[0]
    for f in history:
        if f.t <= latest.t - params.velocity_window_s:
            past = f
        else:
            break
    dt = latest.t - past.t
    if dt > 0.0:
        prev = _estimate(spec, past, params)
        vel = ((pos[0] - prev[0]) / dt, (pos[1] - prev[1]) / dt)
    else:
        vel = (0.0, 0.0)
    aim_x = min(max(pos[0] + vel[0] * params.lead_time_s, 0.0), 1.0)
    aim_y = min(max(pos[1] + vel[1] * params.lead_time_s, 0.0), 1.0)
    return TouchEvent(aim_x, aim_y, t=now)


def run_headless_detailed(config: GameConfig, duration_s: float, seed: int | None = None,
                          params: BotParams = BotParams()
                          ) -> tuple[SessionReport, list[TouchRecord]]:
    """Drive a full game loop with the bot and collect a per-touch log."""
    if duration_s <= 0.0:
        raise BotError("duration_s must be > 0")
    if seed is None:
        seed = config.rng_seed
    else:
        config = replace(config, rng_seed=seed)
    dt = 1.0 / config.frame_rate
    gate = (params.min_interval_s if params.min_interval_s is not None
            else config.touch_min_interval_s + 0.5 * dt)
    effective = BotParams(
        lead_time_s=params.lead_time_s, velocity_window_s=params.velocity_window_s,
        min_interval_s=gate, pitch_quantize_semitones=params.pitch_quantize_semitones)

    state = new_game(config)
    history: list[SoundAttributeFrame] = [current_attribute_frame(state, config)]
    window_frames = max(2, int(math.ceil(params.velocity_window_s * config.frame_rate)) + 1)
    n_ticks = int(round(duration_s * config.frame_rate))
    last_touch_t: float | None = None
    records: list[TouchRecord] = []
    counts = {Outcome.HIT: 0, Outcome.MISS: 0, Outcome.RATE_LIMITED: 0}

    for _ in range(n_ticks):
        touch = bot_decide(history, config.spec, state.t, last_touch_t, effective)
        if touch is not None:
            truth = state.target
            estimate = _estimate(config.spec, history[-1], effective)
            last_touch_t = state.t
            state, outcome = register_touch(state, touch, config)
            counts[outcome.kind] += 1
            records.append(TouchRecord(
                t=touch.t, x=touch.x, y=touch.y, outcome=outcome.kind.value,
                estimate=estimate, true_target=truth))
        step(state, dt, config)
        history.append(current_attribute_frame(state, config))
        if len(history) > window_frames:
            del history[0]

    errors = [math.hypot(r.estimate[0] - r.true_target[0],
                         r.estimate[1] - r.true_target[1]) for r in records]
    report = SessionReport(
        duration_s=duration_s,
        touches_attempted=len(records),
        hits=counts[Outcome.HIT],
        misses=counts[Outcome.MISS],
        rate_limited=counts[Outcome.RATE_LIMITED],
        localization_error_mean=(sum(errors) / len(errors)) if errors else None,
        localization_error_max=max(errors) if errors else None,
        final_speed_level=state.speed_level,
        seed=seed)
    return report, records


def run_headless_session(config: GameConfig, duration_s: float, seed: int | None = None,
                         params: BotParams = BotParams()) -> SessionReport:
    report, _ = run_headless_detailed(config, duration_s, seed, params)
    return report
