"""Versioned JSON configuration documents.

One document carries the synth, mapping, game, and analyzer settings.  A
load rejects unknown fields, requires the version marker, and reports every
invariant violation it finds rather than stopping at the first.
"""

import json
from dataclasses import dataclass, field

from .game import GameConfig
from .mapping import (ATTRIBUTES, FRAME_KINDS, DimensionMap, LinearCurve, LogCurve,
                      MappingSpec, ProximityWarp, RestValues, validate_spec)
from .strips import AnalyzerConfig
from .synth import SynthConfig

CONFIG_VERSION = 1


class ConfigError(ValueError):
    """Carries the full list of problems found in a document."""

    def __init__(self, problems: list[str]):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


@dataclass(frozen=True)
class ConfigDocument:
    version: int = CONFIG_VERSION
    synth: SynthConfig = field(default_factory=SynthConfig)
    mapping: MappingSpec = field(default_factory=lambda: _default_mapping())
    game: GameConfig = field(default_factory=lambda: GameConfig(spec=_default_mapping()))
    analyzer: AnalyzerConfig = field(default_factory=AnalyzerConfig)


def _default_mapping() -> MappingSpec:
    from .mapping import default_game_spec
    return default_game_spec()


def default_config_document() -> ConfigDocument:
    return ConfigDocument()


# --------------------------------------------------------------------------
# Serialization


def _curve_to_json(curve) -> dict:
    if isinstance(curve, ProximityWarp):
        return {"kind": "proximity-warp", "r0": curve.r0}
    return {"kind": curve.kind}


def _mapping_to_json(spec: MappingSpec) -> dict:
    return {
        "frame": spec.frame,
        "dimensions": [
            {
                "dimension": dm.dimension,
                "attribute": dm.attribute,
                "input_range": list(dm.input_range),
                "output_range": list(dm.output_range),
                "curve": _curve_to_json(dm.curve),
            }
            for dm in spec.dims
        ],
        "rest": {
            "pitch_hz": spec.rest.pitch_hz,
            "amplitude": spec.rest.amplitude,
            "timbre": spec.rest.timbre,
            "waveshape": spec.rest.waveshape,
            "pan": spec.rest.pan,
        },
    }


def document_to_json_dict(doc: ConfigDocument) -> dict:
    return {
        "version": doc.version,
        "synth": {
            "sample_rate": doc.synth.sample_rate,
            "channels": doc.synth.channels,
            "pitch_floor_hz": doc.synth.pitch_floor_hz,
            "pitch_ceil_hz": doc.synth.pitch_ceil_hz,
            "max_harmonics": doc.synth.max_harmonics,
            "ramp_ms": doc.synth.ramp_ms,
        },
        "mapping": _mapping_to_json(doc.mapping),
        "game": {
            "hit_radius": doc.game.hit_radius,
            "base_speed": doc.game.base_speed,
            "speed_multiplier": doc.game.speed_multiplier,
            "touch_min_interval_s": doc.game.touch_min_interval_s,
            "frame_rate": doc.game.frame_rate,
            "rng_seed": doc.game.rng_seed,
            "turn_std": doc.game.turn_std,
            "turn_reversion": doc.game.turn_reversion,
        },
        "analyzer": {
            "bands": doc.analyzer.bands,
            "freq_lo_hz": doc.analyzer.freq_lo_hz,
            "freq_hi_hz": doc.analyzer.freq_hi_hz,
            "frame_rate": doc.analyzer.frame_rate,
            "window": doc.analyzer.window,
            "floor_db": doc.analyzer.floor_db,
        },
    }


def save_config(doc: ConfigDocument, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(document_to_json_dict(doc), fh, indent=2, sort_keys=True)
        fh.write("\n")


# --------------------------------------------------------------------------
# Parsing with exhaustive diagnostics


def _is_number(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


class _Section:
    def __init__(self, name: str, obj, known: tuple[str, ...], problems: list[str]):
        self.name = name
        self.obj = obj if isinstance(obj, dict) else None
        self.problems = problems
        if not isinstance(obj, dict):
            problems.append(f"{name}: expected an object")
        else:
            for key in obj:
                if key not in known:
                    problems.append(f"{name}.{key}: unknown field")

    def number(self, key: str, default=None, required: bool = False):
        if self.obj is None:
            return default
        if key not in self.obj:
            if required:
                self.problems.append(f"{self.name}.{key}: missing")
            return default
        v = self.obj[key]
        if not _is_number(v):
            self.problems.append(f"{self.name}.{key}: expected a number, got {v!r}")
            return default
        return v

    def integer(self, key: str, default=None, required: bool = False):
        v = self.number(key, default, required)
        if isinstance(v, float):
            if v.is_integer():
                return int(v)
            self.problems.append(f"{self.name}.{key}: expected an integer, got {v!r}")
            return default
        return v

    def check(self, cond: bool, message: str) -> bool:
        if not cond:
            self.problems.append(message)
        return cond


def _parse_range(name: str, value, problems: list[str]) -> tuple[float, float]:
    if (isinstance(value, list) and len(value) == 2
            and all(_is_number(v) for v in value)):
        return (float(value[0]), float(value[1]))
    problems.append(f"{name}: expected [lo, hi] numbers, got {value!r}")
    return (0.0, 1.0)


def _parse_curve(name: str, value, problems: list[str]):
    if not isinstance(value, dict) or "kind" not in value:
        problems.append(f"{name}: expected an object with a 'kind'")
        return LinearCurve()
    kind = value["kind"]
    extra = set(value) - {"kind", "r0"}
    if extra:
        problems.append(f"{name}: unknown fields {sorted(extra)}")
    if kind == "linear":
        return LinearCurve()
    if kind == "log":
        return LogCurve()
    if kind == "proximity-warp":
        r0 = value.get("r0", 5.0)
        if not _is_number(r0):
            problems.append(f"{name}.r0: expected a number")
            return ProximityWarp()
        return ProximityWarp(r0=float(r0))
    problems.append(f"{name}.kind: unknown curve {kind!r}")
    return LinearCurve()


def _parse_mapping(obj, problems: list[str]) -> MappingSpec:
    sec = _Section("mapping", obj, ("frame", "dimensions", "rest"), problems)
    frame = "global-cartesian"
    dims: list[DimensionMap] = []
    rest = RestValues()
    if sec.obj is not None:
        frame = sec.obj.get("frame", frame)
        if frame not in FRAME_KINDS:
            problems.append(f"mapping.frame: must be one of {list(FRAME_KINDS)}, got {frame!r}")
            frame = "global-cartesian"
        raw_dims = sec.obj.get("dimensions", [])
        if not isinstance(raw_dims, list):
            problems.append("mapping.dimensions: expected a list")
            raw_dims = []
        for i, raw in enumerate(raw_dims):
            name = f"mapping.dimensions[{i}]"
            dsec = _Section(name, raw,
                            ("dimension", "attribute", "input_range", "output_range", "curve"),
                            problems)
            if dsec.obj is None:
                continue
            dimension = dsec.obj.get("dimension")
            attribute = dsec.obj.get("attribute")
            if not isinstance(dimension, str):
                problems.append(f"{name}.dimension: missing or not a string")
                continue
            if not isinstance(attribute, str) or attribute not in ATTRIBUTES:
                problems.append(f"{name}.attribute: must be one of {list(ATTRIBUTES)}")
                continue
            in_range = _parse_range(f"{name}.input_range",
                                    dsec.obj.get("input_range"), problems)
            out_range = _parse_range(f"{name}.output_range",
                                     dsec.obj.get("output_range"), problems)
            curve = _parse_curve(f"{name}.curve", dsec.obj.get("curve", {"kind": "linear"}),
                                 problems)
            dims.append(DimensionMap(dimension, attribute, in_range, out_range, curve))
        if "rest" in sec.obj:
            rsec = _Section("mapping.rest", sec.obj["rest"],
                            ("pitch_hz", "amplitude", "timbre", "waveshape", "pan"), problems)
            if rsec.obj is not None:
                pan = rsec.obj.get("pan")
                if pan is not None and not _is_number(pan):
                    problems.append("mapping.rest.pan: expected a number or null")
                    pan = None
                rest = RestValues(
                    pitch_hz=float(rsec.number("pitch_hz", 440.0)),
                    amplitude=float(rsec.number("amplitude", 0.8)),
                    timbre=float(rsec.number("timbre", 0.5)),
                    waveshape=float(rsec.number("waveshape", 0.5)),
                    pan=None if pan is None else float(pan))
    spec = MappingSpec(frame=frame, dims=tuple(dims), rest=rest)
    for violation in validate_spec(spec):
        problems.append(f"mapping: {violation}")
    return spec


def document_from_json_dict(doc: dict) -> ConfigDocument:
    problems: list[str] = []
    if not isinstance(doc, dict):
        raise ConfigError(["document: expected a JSON object"])
    for key in doc:
        if key not in ("version", "synth", "mapping", "game", "analyzer"):
            problems.append(f"{key}: unknown field")
    version = doc.get("version")
    if version is None:
        problems.append("version: required")
    elif version != CONFIG_VERSION:
        problems.append(f"version: expected {CONFIG_VERSION}, got {version!r}")

    s = _Section("synth", doc.get("synth", {}),
                 ("sample_rate", "channels", "pitch_floor_hz", "pitch_ceil_hz",
                  "max_harmonics", "ramp_ms"), problems)
    sample_rate = s.integer("sample_rate", 48000)
    channels = s.integer("channels", 1)
    pitch_floor = s.number("pitch_floor_hz", 110.0)
    pitch_ceil = s.number("pitch_ceil_hz", 3520.0)
    max_harmonics = s.integer("max_harmonics", 16)
    ramp_ms = s.number("ramp_ms", 10.0)
    s.check(sample_rate >= 8000, f"synth.sample_rate: must be >= 8000, got {sample_rate}")
    s.check(channels in (1, 2), f"synth.channels: must be 1 or 2, got {channels}")
    s.check(pitch_floor > 0, "synth.pitch_floor_hz: must be > 0")
    s.check(pitch_floor < pitch_ceil,
            "synth.pitch_floor_hz: must be below synth.pitch_ceil_hz")
    s.check(max_harmonics >= 1, "synth.max_harmonics: must be >= 1")
    s.check(ramp_ms >= 0, "synth.ramp_ms: must be >= 0")

    # An omitted mapping section means the default layout; a present one is
    # parsed strictly.
    if "mapping" in doc:
        mapping = _parse_mapping(doc["mapping"], problems)
    else:
        mapping = _default_mapping()

    g = _Section("game", doc.get("game", {}),
                 ("hit_radius", "base_speed", "speed_multiplier", "touch_min_interval_s",
                  "frame_rate", "rng_seed", "turn_std", "turn_reversion"), problems)
    hit_radius = g.number("hit_radius", 0.05)
    base_speed = g.number("base_speed", 0.05)
    speed_multiplier = g.number("speed_multiplier", 1.15)
    touch_min_interval = g.number("touch_min_interval_s", 1.0)
    game_fps = g.number("frame_rate", 50.0)
    rng_seed = g.integer("rng_seed", 0)
    turn_std = g.number("turn_std", 0.8)
    turn_reversion = g.number("turn_reversion", 0.5)
    g.check(hit_radius > 0, f"game.hit_radius: must be > 0, got {hit_radius}")
    g.check(base_speed >= 0, f"game.base_speed: must be >= 0, got {base_speed}")
    g.check(speed_multiplier > 1, f"game.speed_multiplier: must be > 1, got {speed_multiplier}")
    g.check(touch_min_interval > 0,
            f"game.touch_min_interval_s: must be > 0, got {touch_min_interval}")
    g.check(game_fps > 0, f"game.frame_rate: must be > 0, got {game_fps}")
    g.check(turn_std >= 0, "game.turn_std: must be >= 0")
    g.check(turn_reversion >= 0, "game.turn_reversion: must be >= 0")

    a = _Section("analyzer", doc.get("analyzer", {}),
                 ("bands", "freq_lo_hz", "freq_hi_hz", "frame_rate", "window", "floor_db"),
                 problems)
    bands = a.integer("bands", 64)
    freq_lo = a.number("freq_lo_hz", 100.0)
    freq_hi = a.number("freq_hi_hz", 8000.0)
    strip_fps = a.number("frame_rate", 30.0)
    window = None
    if a.obj is not None and a.obj.get("window") is not None:
        window = a.integer("window", None)
    floor_db = a.number("floor_db", -60.0)
    a.check(bands >= 8, f"analyzer.bands: must be >= 8, got {bands}")
    a.check(0 < freq_lo < freq_hi, "analyzer: need 0 < freq_lo_hz < freq_hi_hz")
    a.check(freq_hi <= sample_rate / 2,
            f"analyzer.freq_hi_hz: {freq_hi} exceeds Nyquist for sample rate {sample_rate}")
    a.check(strip_fps > 0, "analyzer.frame_rate: must be > 0")
    a.check(floor_db < 0, "analyzer.floor_db: must be below 0")

    if problems:
        raise ConfigError(problems)

    return ConfigDocument(
        version=CONFIG_VERSION,
        synth=SynthConfig(sample_rate=sample_rate, channels=channels,
                          pitch_floor_hz=float(pitch_floor), pitch_ceil_hz=float(pitch_ceil),
                          max_harmonics=max_harmonics, ramp_ms=float(ramp_ms)),
        mapping=mapping,
        game=GameConfig(spec=mapping, hit_radius=float(hit_radius),
                        base_speed=float(base_speed),
                        speed_multiplier=float(speed_multiplier),
                        touch_min_interval_s=float(touch_min_interval),
                        frame_rate=float(game_fps), rng_seed=rng_seed,
                        turn_std=float(turn_std), turn_reversion=float(turn_reversion)),
        analyzer=AnalyzerConfig(bands=bands, freq_lo_hz=float(freq_lo),
                                freq_hi_hz=float(freq_hi), frame_rate=float(strip_fps),
                                window=window, floor_db=float(floor_db)))


def load_config(path: str) -> ConfigDocument:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError([f"{path}: parse error at line {exc.lineno}, column {exc.colno}: "
                           f"{exc.msg}"]) from exc
    except OSError as exc:
        raise ConfigError([f"{path}: {exc.strerror or exc}"]) from exc
    return document_from_json_dict(doc)
