"""Sonified 2-D game engine.

Renders spatial game state as sound attributes (pitch, amplitude, timbre,
waveshape, pan), synthesizes those attributes to audio, plays an automated
or human game against the sonified channel, and renders stereo audio back
into visual strip displays.
"""

from .bot import (BotParams, SessionReport, bot_decide, report_from_json, report_to_json,
                  run_headless_detailed, run_headless_session)
from .configio import (ConfigDocument, ConfigError, default_config_document, load_config,
                       save_config)
from .game import (GameConfig, GameError, GameState, Outcome, TouchEvent, TouchOutcome,
                   current_attribute_frame, new_game, register_touch, step)
from .mapping import (DimensionMap, LinearCurve, LogCurve, MappingError, MappingSpec,
                      PingEvent, PingSchedule, Pose, ProximityWarp, RangeError, RestValues,
                      attributes_to_position, default_game_spec, local_to_world,
                      ping_schedule, position_to_attributes, validate_spec, world_to_local)
from .strips import (AnalyzerConfig, DecodedFrame, StripFrame, StripsError, analyze,
                     decode_attributes, render_strip_image, separability)
from .synth import (FormantPair, PcmBuffer, SoundAttributeFrame, SynthConfig, SynthError,
                    apply_pan, mono_to_stereo, render, steady_frames, timbre_spectrum,
                    waveshape_spectrum)
from .wavio import WavFormatError, read_wav, write_wav

__version__ = "0.1.0"
