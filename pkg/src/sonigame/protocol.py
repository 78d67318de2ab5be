"""Wire protocol: one JSON object per WebSocket text message.

Message types:

* frame  (server -> client): {"type":"frame","t","pitch_hz","amplitude",
  "timbre","waveshape"[,"pan"]} - one sound-attribute frame.
* touch  (client -> server): {"type":"touch","x","y","t"}.
* result (server -> client): {"type":"result","outcome","score",
  "speed_level","t"} answering one touch.
* config (server -> client): {"type":"config","config":{...}} - the full
  configuration document, sent once at session start.
* end    (server -> client): {"type":"end","report":{...},"touch_log":[...]}
  - final session report plus the per-touch ground-truth log so clients can
  reconstruct localization statistics offline.
* error  (server -> client): {"type":"error","reason"} - diagnostic for a
  malformed or dropped inbound message; the connection stays open.

Unknown message types and unknown fields are rejected.
"""

import json
import math
from dataclasses import dataclass

from .synth import SoundAttributeFrame


class ProtocolError(ValueError):
    pass


@dataclass(frozen=True)
class FrameMessage:
    t: float
    pitch_hz: float
    amplitude: float
    timbre: float
    waveshape: float
    pan: float | None = None

    def to_attribute_frame(self) -> SoundAttributeFrame:
        return SoundAttributeFrame(t=self.t, pitch_hz=self.pitch_hz,
                                   amplitude=self.amplitude, timbre=self.timbre,
                                   waveshape=self.waveshape, pan=self.pan)


@dataclass(frozen=True)
class TouchMessage:
    x: float
    y: float
    t: float


@dataclass(frozen=True)
class ResultMessage:
    outcome: str
    score: int
    speed_level: int
    t: float


@dataclass(frozen=True)
class ConfigMessage:
    config: dict


@dataclass(frozen=True)
class EndMessage:
    report: dict
    touch_log: list


@dataclass(frozen=True)
class ErrorMessage:
    reason: str


Message = FrameMessage | TouchMessage | ResultMessage | ConfigMessage | EndMessage | ErrorMessage

_OUTCOMES = ("hit", "miss", "rate_limited")


def _number(obj: dict, key: str, lo: float = -math.inf, hi: float = math.inf) -> float:
    if key not in obj:
        raise ProtocolError(f"missing field {key!r}")
    v = obj[key]
    if not isinstance(v, (int, float)) or isinstance(v, bool):
        raise ProtocolError(f"field {key!r} must be a number")
    v = float(v)
    if not math.isfinite(v):
        raise ProtocolError(f"field {key!r} must be finite")
    if not (lo <= v <= hi):
        raise ProtocolError(f"field {key!r} value {v} outside [{lo}, {hi}]")
    return v


def _check_fields(obj: dict, allowed: set[str]) -> None:
    extra = set(obj) - allowed
    if extra:
        raise ProtocolError(f"unknown fields {sorted(extra)}")


def parse_message(text: str) -> Message:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProtocolError(f"not valid JSON: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise ProtocolError("message must be a JSON object")
    mtype = obj.get("type")
    if mtype == "frame":
        _check_fields(obj, {"type", "t", "pitch_hz", "amplitude", "timbre", "waveshape", "pan"})
        pan = None
        if "pan" in obj and obj["pan"] is not None:
            pan = _number(obj, "pan", -1.0, 1.0)
        return FrameMessage(
            t=_number(obj, "t", 0.0), pitch_hz=_number(obj, "pitch_hz", 0.0),
            amplitude=_number(obj, "amplitude", 0.0, 1.0),
            timbre=_number(obj, "timbre", 0.0, 1.0),
            waveshape=_number(obj, "waveshape", 0.0, 1.0), pan=pan)
    if mtype == "touch":
        _check_fields(obj, {"type", "x", "y", "t"})
        return TouchMessage(x=_number(obj, "x", 0.0, 1.0), y=_number(obj, "y", 0.0, 1.0),
                            t=_number(obj, "t", 0.0))
    if mtype == "result":
        _check_fields(obj, {"type", "outcome", "score", "speed_level", "t"})
        outcome = obj.get("outcome")
        if outcome not in _OUTCOMES:
            raise ProtocolError(f"outcome must be one of {_OUTCOMES}, got {outcome!r}")
        score = obj.get("score")
        level = obj.get("speed_level")
        for name, v in (("score", score), ("speed_level", level)):
            if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                raise ProtocolError(f"field {name!r} must be a nonnegative integer")
        return ResultMessage(outcome=outcome, score=score, speed_level=level,
                             t=_number(obj, "t", 0.0))
    if mtype == "config":
        _check_fields(obj, {"type", "config"})
        if not isinstance(obj.get("config"), dict):
            raise ProtocolError("field 'config' must be an object")
        return ConfigMessage(config=obj["config"])
    if mtype == "end":
        _check_fields(obj, {"type", "report", "touch_log"})
        if not isinstance(obj.get("report"), dict):
            raise ProtocolError("field 'report' must be an object")
        log = obj.get("touch_log", [])
        if not isinstance(log, list):
            raise ProtocolError("field 'touch_log' must be a list")
        return EndMessage(report=obj["report"], touch_log=log)
    if mtype == "error":
        _check_fields(obj, {"type", "reason"})
        if not isinstance(obj.get("reason"), str):
            raise ProtocolError("field 'reason' must be a string")
        return ErrorMessage(reason=obj["reason"])
    raise ProtocolError(f"unknown message type {mtype!r}")


def encode_message(msg: Message) -> str:
    if isinstance(msg, FrameMessage):
        obj = {"type": "frame", "t": msg.t, "pitch_hz": msg.pitch_hz,
               "amplitude": msg.amplitude, "timbre": msg.timbre,
               "waveshape": msg.waveshape}
        if msg.pan is not None:
            obj["pan"] = msg.pan
    elif isinstance(msg, TouchMessage):
        obj = {"type": "touch", "x": msg.x, "y": msg.y, "t": msg.t}
    elif isinstance(msg, ResultMessage):
        obj = {"type": "result", "outcome": msg.outcome, "score": msg.score,
               "speed_level": msg.speed_level, "t": msg.t}
    elif isinstance(msg, ConfigMessage):
        obj = {"type": "config", "config": msg.config}
    elif isinstance(msg, EndMessage):
        obj = {"type": "end", "report": msg.report, "touch_log": msg.touch_log}
    elif isinstance(msg, ErrorMessage):
        obj = {"type": "error", "reason": msg.reason}
    else:
        raise ProtocolError(f"not a protocol message: {msg!r}")
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def frame_message(frame: SoundAttributeFrame) -> FrameMessage:
    return FrameMessage(t=frame.t, pitch_hz=frame.pitch_hz, amplitude=frame.amplitude,
                        timbre=frame.timbre, waveshape=frame.waveshape, pan=frame.pan)
