"""Position <-> sound-attribute mapping, local frames, and sonar ping sweeps.

A MappingSpec declares which spatial dimension of a coordinate frame is
carried by which sound attribute and through which curve.  Because any
attribute can house any dimension, the same machinery covers the default
game layout (waveshape = x, pitch = y) as well as polar range/bearing
layouts or frames centered on the player.
"""

import math
from dataclasses import dataclass, field

from .synth import SoundAttributeFrame

TAU = 2.0 * math.pi

FRAME_KINDS = ("global-cartesian", "local-cartesian", "local-polar")
FRAME_DIMENSIONS = {
    "global-cartesian": ("x", "y"),
    "local-cartesian": ("x", "y"),
    "local-polar": ("range", "bearing"),
}
ATTRIBUTES = ("pitch", "amplitude", "timbre", "waveshape", "pan")

# Legal value range per attribute; mapped output ranges must stay inside.
ATTRIBUTE_BOUNDS = {
    "pitch": (0.0, float("inf")),
    "amplitude": (0.0, 1.0),
    "timbre": (0.0, 1.0),
    "waveshape": (0.0, 1.0),
    "pan": (-1.0, 1.0),
}


class MappingError(ValueError):
    """Malformed spec or invalid mapping input."""


class RangeError(MappingError):
    """Value outside a declared input or output range."""


def wrap_angle(angle: float) -> float:
    """Normalize an angle to (-pi, pi]."""
    a = math.fmod(angle, TAU)
    if a > math.pi:
        a -= TAU
    elif a <= -math.pi:
        a += TAU
    return a


@dataclass(frozen=True)
class Pose:
    """Player position and heading (radians CCW from the global +x axis)."""

    x: float
    y: float
    heading: float

    def __post_init__(self) -> None:
        if not all(math.isfinite(v) for v in (self.x, self.y, self.heading)):
            raise MappingError("pose fields must be finite")
        object.__setattr__(self, "heading", wrap_angle(self.heading))


def world_to_local(player: Pose, point: tuple[float, float]) -> tuple[float, float]:
    """Express a global point in the player frame.

    Local +y points along the heading, local +x to the player's right.
    """
    px, py = point
    if not (math.isfinite(px) and math.isfinite(py)):
        raise MappingError("point must be finite")
    dx = px - player.x
    dy = py - player.y
    sin_h = math.sin(player.heading)
    cos_h = math.cos(player.heading)
    return (dx * sin_h - dy * cos_h, dx * cos_h + dy * sin_h)


def local_to_world(player: Pose, point: tuple[float, float]) -> tuple[float, float]:
    """Inverse of world_to_local."""
    lx, ly = point
    if not (math.isfinite(lx) and math.isfinite(ly)):
        raise MappingError("point must be finite")
    sin_h = math.sin(player.heading)
    cos_h = math.cos(player.heading)
    return (player.x + lx * sin_h + ly * cos_h,
            player.y - lx * cos_h + ly * sin_h)


# --------------------------------------------------------------------------
# Curves


@dataclass(frozen=True)
class LinearCurve:
    kind = "linear"

    def apply(self, u: float, out_range: tuple[float, float]) -> float:
        lo, hi = out_range
        return lo + u * (hi - lo)

    def invert(self, value: float, out_range: tuple[float, float]) -> float:
        lo, hi = out_range
        return (value - lo) / (hi - lo)


@dataclass(frozen=True)
class LogCurve:
    """Geometric interpolation; natural for pitch."""

    kind = "log"

    def apply(self, u: float, out_range: tuple[float, float]) -> float:
        lo, hi = out_range
        return lo * (hi / lo) ** u

    def invert(self, value: float, out_range: tuple[float, float]) -> float:
        lo, hi = out_range
        return math.log(value / lo) / math.log(hi / lo)


@dataclass(frozen=True)
class ProximityWarp:
    """Distance warp s = r0/(r0+d): output falls with distance, and the
    mapping is steepest near d = 0 so close objects get the most resolution."""

    r0: float = 5.0
    kind = "proximity-warp"

    def _shape(self, d: float) -> float:
        return self.r0 / (self.r0 + d)

    def warp(self, u: float, in_range: tuple[float, float]) -> float:
        # u is the normalized distance within in_range; result is a
        # normalized output coordinate, decreasing in distance.
        lo, hi = in_range
        s_lo = self._shape(lo)
        s_hi = self._shape(hi)
        s = self._shape(lo + u * (hi - lo))
        return (s - s_hi) / (s_lo - s_hi)

    def unwarp(self, w: float, in_range: tuple[float, float]) -> float:
        lo, hi = in_range
        s_lo = self._shape(lo)
        s_hi = self._shape(hi)
        s = s_hi + w * (s_lo - s_hi)
        d = self.r0 / s - self.r0
        return (d - lo) / (hi - lo)

    def apply(self, u: float, out_range: tuple[float, float]) -> float:  # pragma: no cover
        raise NotImplementedError("proximity warp needs the input range; use DimensionMap")

    def invert(self, value: float, out_range: tuple[float, float]) -> float:  # pragma: no cover
        raise NotImplementedError("proximity warp needs the input range; use DimensionMap")


Curve = LinearCurve | LogCurve | ProximityWarp


# --------------------------------------------------------------------------
# Mapping spec


@dataclass(frozen=True)
class DimensionMap:
    dimension: str
    attribute: str
    input_range: tuple[float, float]
    output_range: tuple[float, float]
    curve: Curve = LinearCurve()

    def forward(self, value: float) -> float:
        lo, hi = self.input_range
        u = (value - lo) / (hi - lo)
        if isinstance(self.curve, ProximityWarp):
            u = self.curve.warp(u, self.input_range)
            return LinearCurve().apply(u, self.output_range)
        return self.curve.apply(u, self.output_range)

    def backward(self, attr_value: float) -> float:
        if isinstance(self.curve, ProximityWarp):
            w = LinearCurve().invert(attr_value, self.output_range)
            u = self.curve.unwarp(w, self.input_range)
        else:
            u = self.curve.invert(attr_value, self.output_range)
        lo, hi = self.input_range
        return lo + u * (hi - lo)


@dataclass(frozen=True)
class RestValues:
    """Attribute values used when a spec leaves an attribute unmapped.

    Timbre rests at 0.5 rather than 0 so the waveshape formants always have
    harmonics to act on; pan rests absent (monaural).
    """

    pitch_hz: float = 440.0
    amplitude: float = 0.8
    timbre: float = 0.5
    waveshape: float = 0.5
    pan: float | None = None


@dataclass(frozen=True)
class MappingSpec:
    frame: str
    dims: tuple[DimensionMap, ...]
    rest: RestValues = field(default_factory=RestValues)

    def dimension_map(self, dimension: str) -> DimensionMap:
        for dm in self.dims:
            if dm.dimension == dimension:
                return dm
        raise MappingError(f"dimension {dimension!r} not housed by spec")


def default_game_spec() -> MappingSpec:
    """Unit-square game layout: x carried by waveshape, y by pitch 220-880 Hz."""
    return MappingSpec(
        frame="global-cartesian",
        dims=(
            DimensionMap("x", "waveshape", (0.0, 1.0), (0.0, 1.0), LinearCurve()),
            DimensionMap("y", "pitch", (0.0, 1.0), (220.0, 880.0), LogCurve()),
        ),
    )


def validate_spec(spec: MappingSpec) -> list[str]:
    """Return all violations; an empty list means the spec is usable."""
    problems: list[str] = []
    if spec.frame not in FRAME_KINDS:
        problems.append(f"unknown frame {spec.frame!r}")
        return problems
    wanted = FRAME_DIMENSIONS[spec.frame]
    seen_dims: list[str] = []
    seen_attrs: list[str] = []
    for dm in spec.dims:
        if dm.dimension not in wanted:
            problems.append(f"dimension {dm.dimension!r} not part of frame {spec.frame!r}")
        elif dm.dimension in seen_dims:
            problems.append(f"dimension {dm.dimension!r} housed twice")
        seen_dims.append(dm.dimension)

        if dm.attribute not in ATTRIBUTES:
            problems.append(f"unknown attribute {dm.attribute!r}")
        elif dm.attribute in seen_attrs:
            problems.append(f"attribute reused: {dm.attribute!r}")
        seen_attrs.append(dm.attribute)

        in_lo, in_hi = dm.input_range
        out_lo, out_hi = dm.output_range
        if not (in_lo < in_hi):
            problems.append(f"degenerate input range for {dm.dimension!r}: [{in_lo}, {in_hi}]")
        if not (out_lo < out_hi):
            problems.append(f"degenerate output range for {dm.dimension!r}: [{out_lo}, {out_hi}]")
        if isinstance(dm.curve, LogCurve) and (out_lo <= 0.0 or out_hi <= 0.0):
            problems.append(f"log curve for {dm.dimension!r} requires a positive output range")
        if isinstance(dm.curve, ProximityWarp):
            if dm.curve.r0 <= 0.0:
                problems.append(f"proximity warp for {dm.dimension!r} requires r0 > 0")
            if in_lo < 0.0:
                problems.append(f"proximity warp for {dm.dimension!r} requires distances >= 0")
        if dm.attribute in ATTRIBUTE_BOUNDS and out_lo < out_hi:
            b_lo, b_hi = ATTRIBUTE_BOUNDS[dm.attribute]
            if out_lo < b_lo or out_hi > b_hi:
                problems.append(
                    f"output range [{out_lo}, {out_hi}] outside {dm.attribute!r} "
                    f"bounds [{b_lo}, {b_hi}]")
    for dim in wanted:
        if dim not in seen_dims:
            problems.append(f"dimension unhoused: {dim!r}")
    return problems


def _checked_spec(spec: MappingSpec) -> None:
    problems = validate_spec(spec)
    if problems:
        raise MappingError("invalid mapping spec: " + "; ".join(problems))


def position_to_attributes(spec: MappingSpec, position: tuple[float, float],
                           t: float = 0.0, strict: bool = False) -> SoundAttributeFrame:
    """Map a position (in the spec's frame, canonical dimension order) to a frame.

    Out-of-range positions clamp to the mapped range and set the frame's
    ``clamped`` flag; with strict=True they raise RangeError instead.
    """
    _checked_spec(spec)
    dims = FRAME_DIMENSIONS[spec.frame]
    if len(position) != len(dims):
        raise MappingError(f"frame {spec.frame!r} takes {len(dims)} coordinates")
    values = dict(zip(dims, position))
    rest = spec.rest
    attrs = {"pitch": rest.pitch_hz, "amplitude": rest.amplitude,
             "timbre": rest.timbre, "waveshape": rest.waveshape, "pan": rest.pan}
    clamped = False
    for dm in spec.dims:
        v = values[dm.dimension]
        if not math.isfinite(v):
            raise MappingError(f"non-finite coordinate for {dm.dimension!r}")
        lo, hi = dm.input_range
        if v < lo or v > hi:
            if strict:
                raise RangeError(
                    f"{dm.dimension!r} value {v} outside input range [{lo}, {hi}]")
            v = min(max(v, lo), hi)
            clamped = True
        attrs[dm.attribute] = dm.forward(v)
    return SoundAttributeFrame(
        t=t, pitch_hz=attrs["pitch"], amplitude=attrs["amplitude"],
        timbre=attrs["timbre"], waveshape=attrs["waveshape"], pan=attrs["pan"],
        clamped=clamped)


def attributes_to_position(spec: MappingSpec, frame: SoundAttributeFrame) -> tuple[float, ...]:
    """Invert position_to_attributes; attribute values must sit inside the
    spec's output ranges."""
    _checked_spec(spec)
    attr_values = {"pitch": frame.pitch_hz, "amplitude": frame.amplitude,
                   "timbre": frame.timbre, "waveshape": frame.waveshape, "pan": frame.pan}
    out = {}
    for dm in spec.dims:
        value = attr_values[dm.attribute]
        if value is None:
            raise RangeError(f"attribute {dm.attribute!r} absent from frame")
        lo, hi = dm.output_range
        slack = 1e-9 * (hi - lo)
        if value < lo - slack or value > hi + slack:
            raise RangeError(
                f"attribute {dm.attribute!r} value {value} outside output range [{lo}, {hi}]")
        out[dm.dimension] = dm.backward(min(max(value, lo), hi))
    return tuple(out[d] for d in FRAME_DIMENSIONS[spec.frame])


# --------------------------------------------------------------------------
# Sonar ping sweep

# Default attribute ranges used when a ping encodes range: near objects map
# to the high end, far objects to the low end.
PING_RANGE_OUTPUTS = {
    "timbre": (0.0, 1.0),
    "waveshape": (0.0, 1.0),
    "amplitude": (0.1, 1.0),
    "pitch": (220.0, 880.0),
}

ZERO_ANGLES = ("facing", "behind")


@dataclass(frozen=True)
class PingEvent:
    object_index: int
    offset_s: float
    bearing_rad: float
    range_m: float
    frame: SoundAttributeFrame


@dataclass(frozen=True)
class PingSchedule:
    sweep_period_s: float
    zero_angle: str
    pings: tuple[PingEvent, ...]


def ping_schedule(player: Pose, objects: list[tuple[float, float]],
                  sweep_period_s: float = 2.0, range_attribute: str = "timbre",
                  r0: float = 5.0, zero_angle: str = "facing") -> PingSchedule:
    """One clockwise 360-degree sweep encoding each object as a timed ping.

    The sweep starts at the zero angle (the facing direction by default, or
    directly behind) and each object pings at offset (bearing/2pi)*period,
    bearing measured clockwise.  Range is encoded on range_attribute through
    the proximity shape r0/(r0+d).  An object coincident with the player has
    no bearing and pings at offset 0 with range 0.
    """
    if sweep_period_s <= 0.0:
        raise MappingError("sweep_period_s must be > 0")
    if range_attribute not in PING_RANGE_OUTPUTS:
        raise MappingError(
            f"range attribute must be one of {sorted(PING_RANGE_OUTPUTS)}, "
            f"got {range_attribute!r}")
    if zero_angle not in ZERO_ANGLES:
        raise MappingError(f"zero_angle must be one of {ZERO_ANGLES}")

    rest = RestValues()
    out_lo, out_hi = PING_RANGE_OUTPUTS[range_attribute]
    events = []
    for i, obj in enumerate(objects):
        lx, ly = world_to_local(player, obj)
        dist = math.hypot(lx, ly)
        if dist == 0.0:
            bearing = 0.0
        else:
            bearing = math.atan2(lx, ly) % TAU  # clockwise from facing
            if zero_angle == "behind":
                bearing = (bearing + math.pi) % TAU
            if TAU - bearing < 1e-12:  # float dust from the frame transform
                bearing = 0.0
        offset = bearing / TAU * sweep_period_s
        proximity = r0 / (r0 + dist)
        encoded = out_lo + proximity * (out_hi - out_lo)
        attrs = {"pitch_hz": rest.pitch_hz, "amplitude": rest.amplitude,
                 "timbre": rest.timbre, "waveshape": rest.waveshape, "pan": rest.pan}
        attrs[{"pitch": "pitch_hz"}.get(range_attribute, range_attribute)] = encoded
        frame = SoundAttributeFrame(t=offset, **attrs)
        events.append(PingEvent(i, offset, bearing, dist, frame))
    events.sort(key=lambda e: (e.offset_s, e.object_index))
    return PingSchedule(sweep_period_s, zero_angle, tuple(events))
