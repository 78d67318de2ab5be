"""Target-chase game: a single target wanders the unit square on a smooth
random path while its position is sonified; touches score when they land
within the hit radius, hits speed the target up, and registered touches are
rate limited to one per second.
"""

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .mapping import MappingSpec, default_game_spec, position_to_attributes, wrap_angle
from .synth import SoundAttributeFrame

AREA_LO = 0.0
AREA_HI = 1.0


class GameError(ValueError):
    """Invalid configuration or game input."""


@dataclass(frozen=True)
class GameConfig:
    spec: MappingSpec = field(default_factory=default_game_spec)
    hit_radius: float = 0.05
    base_speed: float = 0.05
    speed_multiplier: float = 1.15
    touch_min_interval_s: float = 1.0
    frame_rate: float = 50.0
    rng_seed: int = 0
    turn_std: float = 0.8        # heading noise, rad per sqrt(s)
    turn_reversion: float = 0.5  # pull back toward the base heading, 1/s

    def __post_init__(self) -> None:
        if self.hit_radius <= 0.0:
            raise GameError("hit_radius must be > 0")
        if self.base_speed < 0.0:
            raise GameError("base_speed must be >= 0")
        if self.speed_multiplier <= 1.0:
            raise GameError("speed_multiplier must be > 1")
        if self.touch_min_interval_s <= 0.0:
            raise GameError("touch_min_interval_s must be > 0")
        if self.frame_rate <= 0.0:
            raise GameError("frame_rate must be > 0")
        if self.turn_std < 0.0 or self.turn_reversion < 0.0:
            raise GameError("turning noise parameters must be >= 0")


class Outcome(enum.Enum):
    HIT = "hit"
    MISS = "miss"
    RATE_LIMITED = "rate_limited"


@dataclass(frozen=True)
class TouchEvent:
    x: float
    y: float
    t: float


@dataclass(frozen=True)
class TouchOutcome:
    kind: Outcome
    points: int = 0


@dataclass
class GameState:
    t: float
    target_x: float
    target_y: float
    heading: float
    base_heading: float
    speed: float
    speed_level: int
    score: int
    last_registered_touch_t: float | None
    rng: np.random.Generator

    @property
    def target(self) -> tuple[float, float]:
        return (self.target_x, self.target_y)

    @property
    def velocity(self) -> tuple[float, float]:
        return (self.speed * math.cos(self.heading), self.speed * math.sin(self.heading))


def new_game(config: GameConfig) -> GameState:
    """Seeded fresh state: uniform random target, random heading, level 0."""
    rng = np.random.default_rng(config.rng_seed)
    x, y = rng.random(2)
    heading = wrap_angle(rng.uniform(-math.pi, math.pi))
    return GameState(
        t=0.0, target_x=float(x), target_y=float(y),
        heading=heading, base_heading=heading,
        speed=config.base_speed, speed_level=0, score=0,
        last_registered_touch_t=None, rng=rng)


def _fold(pos: float) -> tuple[float, bool]:
    # Triangle-wave fold into [0, 1]; the parity bit says whether the net
    # reflection count is odd (direction mirrored).  O(1) at any speed.
    r = pos % 2.0
    if r > 1.0:
        return 2.0 - r, True
    return r, False


def _reflect(state: GameState) -> None:
    x, flip_x = _fold(state.target_x)
    y, flip_y = _fold(state.target_y)
    state.target_x = x
    state.target_y = y
    if flip_x:
        state.heading = wrap_angle(math.pi - state.heading)
        state.base_heading = wrap_angle(math.pi - state.base_heading)
    if flip_y:
        state.heading = wrap_angle(-state.heading)
        state.base_heading = wrap_angle(-state.base_heading)


def step(state: GameState, dt: float, config: GameConfig) -> GameState:
    """Advance the target by dt seconds (dt in (0, 0.1]).

    The heading deviates from a base direction as a mean-reverting random
    walk, so the path is smooth and non-repeating; boundary hits reflect.
    """
    if not (0.0 < dt <= 0.1):
        raise GameError(f"dt must be in (0, 0.1], got {dt}")
    dev = wrap_angle(state.heading - state.base_heading)
    dev += (-config.turn_reversion * dev * dt
            + config.turn_std * math.sqrt(dt) * float(state.rng.standard_normal()))
    state.heading = wrap_angle(state.base_heading + dev)
    state.target_x += state.speed * math.cos(state.heading) * dt
    state.target_y += state.speed * math.sin(state.heading) * dt
    _reflect(state)
    state.t += dt
    return state


def current_attribute_frame(state: GameState, config: GameConfig) -> SoundAttributeFrame:
    """Sonify the target's current position (monaural: pan stays absent)."""
    return position_to_attributes(config.spec, (state.target_x, state.target_y), t=state.t)


def register_touch(state: GameState, touch: TouchEvent,
                   config: GameConfig) -> tuple[GameState, TouchOutcome]:
    """Process a touch at the current simulation time.

    A touch less than the minimum interval after the last registered touch
    is rate limited and consumes nothing.  Otherwise it registers (hit or
    miss both consume the slot); a hit scores one point, bumps the speed
    level, and respawns the target at a random position and heading.
    """
    if not (AREA_LO <= touch.x <= AREA_HI and AREA_LO <= touch.y <= AREA_HI):
        raise GameError(f"touch ({touch.x}, {touch.y}) outside play area")
    if touch.t < state.t:
        raise GameError(f"touch time {touch.t} behind simulation time {state.t}")
    now = state.t  # touches are evaluated at the current simulation instant
    if (state.last_registered_touch_t is not None
            and now - state.last_registered_touch_t < config.touch_min_interval_s):
        return state, TouchOutcome(Outcome.RATE_LIMITED)
    state.last_registered_touch_t = now
    dist = math.hypot(touch.x - state.target_x, touch.y - state.target_y)
    if dist <= config.hit_radius:
        state.score += 1
        state.speed_level += 1
        state.speed = config.base_speed * config.speed_multiplier ** state.speed_level
        x, y = state.rng.random(2)
        state.target_x = float(x)
        state.target_y = float(y)
        heading = wrap_angle(state.rng.uniform(-math.pi, math.pi))
        state.heading = heading
        state.base_heading = heading
        return state, TouchOutcome(Outcome.HIT, points=1)
    return state, TouchOutcome(Outcome.MISS)
