"""Additive synthesis engine turning sound-attribute frames into PCM audio.

The voice is a harmonic stack driven by four controls:

* pitch   - fundamental frequency of the stack
* amplitude - linear output gain
* timbre  - spectral tilt from a pure sine (0) to a brassy 1/k rolloff (1)
* waveshape - vowel-like morph from "ooh" (0) to "aah" (1), realized as a
  pair of resonant formant peaks that reweight harmonics 2..K

All attribute paths are linearly interpolated between frames and then run
through a one-pole smoother, so rendered audio is free of clicks even when
frames arrive at coarse game rates.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import lfilter


class SynthError(ValueError):
    """Out-of-range attribute or invalid synthesis configuration."""


# Formant anchors for the waveshape morph, Hz.
OOH_FORMANTS = (350.0, 800.0)
AAH_FORMANTS = (850.0, 1200.0)
FORMANT_BANDWIDTHS = (80.0, 120.0)

# Harmonics are faded out over the top 10% below the drop frequency so a
# pitch ramp never steps a partial in or out audibly.
_HARMONIC_FADE = 0.1

_CHUNK = 32768


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise SynthError(msg)


@dataclass(frozen=True)
class SoundAttributeFrame:
    """One instant of the sound attributes driving synthesis.

    ``pan`` is None in monaural contexts.  ``clamped`` marks frames whose
    source position was clamped into its mapping range; it does not take
    part in equality.
    """

    t: float
    pitch_hz: float
    amplitude: float
    timbre: float
    waveshape: float
    pan: float | None = None
    clamped: bool = field(default=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        _require(math.isfinite(self.t) and self.t >= 0.0, f"t must be finite and >= 0, got {self.t}")
        _require(math.isfinite(self.pitch_hz) and self.pitch_hz > 0.0,
                 f"pitch_hz must be finite and > 0, got {self.pitch_hz}")
        _require(0.0 <= self.amplitude <= 1.0, f"amplitude must be in [0, 1], got {self.amplitude}")
        _require(0.0 <= self.timbre <= 1.0, f"timbre must be in [0, 1], got {self.timbre}")
        _require(0.0 <= self.waveshape <= 1.0, f"waveshape must be in [0, 1], got {self.waveshape}")
        if self.pan is not None:
            _require(-1.0 <= self.pan <= 1.0, f"pan must be in [-1, 1], got {self.pan}")


@dataclass(frozen=True)
class SynthConfig:
    sample_rate: int = 48000
    channels: int = 1
    pitch_floor_hz: float = 110.0
    pitch_ceil_hz: float = 3520.0
    max_harmonics: int = 16
    ramp_ms: float = 10.0

    def __post_init__(self) -> None:
        _require(self.sample_rate >= 8000, f"sample_rate must be >= 8000, got {self.sample_rate}")
        _require(self.channels in (1, 2), f"channels must be 1 or 2, got {self.channels}")
        _require(self.pitch_floor_hz > 0.0, "pitch_floor_hz must be > 0")
        _require(self.pitch_floor_hz < self.pitch_ceil_hz,
                 "pitch_floor_hz must be below pitch_ceil_hz")
        _require(self.max_harmonics >= 1, "max_harmonics must be >= 1")
        _require(self.ramp_ms >= 0.0, "ramp_ms must be >= 0")

    @property
    def harmonic_drop_hz(self) -> float:
        """Frequency above which partials are silenced (quarter sample rate)."""
        return self.sample_rate / 4.0


@dataclass(frozen=True)
class PcmBuffer:
    """Float PCM in [-1, 1], interleaved when stereo."""

    samples: np.ndarray
    sample_rate: int
    channels: int

    def __post_init__(self) -> None:
        samples = np.asarray(self.samples, dtype=np.float64)
        _require(samples.ndim == 1, "samples must be a flat array")
        _require(self.channels in (1, 2), f"channels must be 1 or 2, got {self.channels}")
        _require(self.sample_rate >= 1, "sample_rate must be positive")
        _require(samples.size % self.channels == 0,
                 "sample count must be divisible by channel count")
        if samples.size:
            peak = float(np.max(np.abs(samples)))
            _require(peak <= 1.0 + 1e-9, f"samples exceed unit magnitude (peak {peak})")
            if peak > 1.0:
                samples = np.clip(samples, -1.0, 1.0)
        object.__setattr__(self, "samples", samples)

    @property
    def n_frames(self) -> int:
        return self.samples.size // self.channels

    @property
    def duration_s(self) -> float:
        return self.n_frames / self.sample_rate

    def channel(self, index: int) -> np.ndarray:
        _require(0 <= index < self.channels, f"no channel {index} in {self.channels}-channel buffer")
        return self.samples[index::self.channels]


def timbre_spectrum(timbre: float, max_harmonics: int) -> np.ndarray:
    """Harmonic amplitudes for a timbre setting, unit-energy normalized.

    timbre 0 is exactly a pure tone; above that the stack follows
    k**-(4 - 3*timbre), so the spectral centroid rises monotonically with
    timbre.
    """
    _require(0.0 <= timbre <= 1.0, f"timbre must be in [0, 1], got {timbre}")
    _require(max_harmonics >= 1, "max_harmonics must be >= 1")
    amps = np.zeros(max_harmonics, dtype=np.float64)
    if timbre == 0.0:
        amps[0] = 1.0
        return amps
    k = np.arange(1, max_harmonics + 1, dtype=np.float64)
    amps = k ** -(4.0 - 3.0 * timbre)
    return amps / np.linalg.norm(amps)


@dataclass(frozen=True)
class FormantPair:
    """Two resonant peaks (center frequency + bandwidth each)."""

    f1_hz: float
    f2_hz: float
    bw1_hz: float = FORMANT_BANDWIDTHS[0]
    bw2_hz: float = FORMANT_BANDWIDTHS[1]

    def gain(self, freq_hz):
        """Resonance gain at freq_hz (scalar or array), peak ~1 per formant."""
        f = np.asarray(freq_hz, dtype=np.float64)
        g1 = 1.0 / (1.0 + ((f - self.f1_hz) / (self.bw1_hz / 2.0)) ** 2)
        g2 = 1.0 / (1.0 + ((f - self.f2_hz) / (self.bw2_hz / 2.0)) ** 2)
        return g1 + g2


def waveshape_spectrum(waveshape: float) -> FormantPair:
    """Formant pair for a waveshape setting: linear "ooh" -> "aah" morph."""
    _require(0.0 <= waveshape <= 1.0, f"waveshape must be in [0, 1], got {waveshape}")
    f1 = OOH_FORMANTS[0] + waveshape * (AAH_FORMANTS[0] - OOH_FORMANTS[0])
    f2 = OOH_FORMANTS[1] + waveshape * (AAH_FORMANTS[1] - OOH_FORMANTS[1])
    return FormantPair(f1, f2)


def steady_frames(duration_s: float, pitch_hz: float, amplitude: float = 1.0,
                  timbre: float = 0.0, waveshape: float = 0.0,
                  pan: float | None = None) -> list[SoundAttributeFrame]:
    """Two frames holding one attribute set for duration_s seconds."""
    _require(duration_s > 0.0, "duration_s must be > 0")
    make = lambda t: SoundAttributeFrame(t, pitch_hz, amplitude, timbre, waveshape, pan)
    return [make(0.0), make(duration_s)]


def _smooth(x: np.ndarray, alpha: float, y_prev: float) -> tuple[np.ndarray, float]:
    # One-pole lowpass y[i] = y[i-1] + alpha*(x[i] - y[i-1]).
    if alpha >= 1.0:
        return x, float(x[-1])
    y, _ = lfilter([alpha], [1.0, alpha - 1.0], x, zi=[(1.0 - alpha) * y_prev])
    return y, float(y[-1])


def _harmonic_weights(pitch: np.ndarray, timbre: np.ndarray, waveshape: np.ndarray,
                      k: np.ndarray, drop_hz: float) -> np.ndarray:
    """Per-sample harmonic weight matrix, rows normalized to unit L1.

    The fundamental always carries weight 1 before normalization and is
    exempt from formant weighting, which keeps it the strongest partial
    (formant gains stay near or below 1 while the timbre law caps harmonic
    k at 1/k of the fundamental); the spectral peak therefore sits at the
    commanded pitch for every in-range setting.
    """
    n = pitch.size
    w = np.empty((n, k.size), dtype=np.float64)
    w[:, 0] = 1.0
    if k.size > 1:
        exponent = 4.0 - 3.0 * timbre
        w[:, 1:] = k[1:][None, :] ** -exponent[:, None]
        pure = timbre <= 0.0
        if np.any(pure):
            w[pure, 1:] = 0.0
        f1 = OOH_FORMANTS[0] + waveshape * (AAH_FORMANTS[0] - OOH_FORMANTS[0])
        f2 = OOH_FORMANTS[1] + waveshape * (AAH_FORMANTS[1] - OOH_FORMANTS[1])
        freqs = pitch[:, None] * k[1:][None, :]
        g1 = 1.0 / (1.0 + ((freqs - f1[:, None]) / (FORMANT_BANDWIDTHS[0] / 2.0)) ** 2)
        g2 = 1.0 / (1.0 + ((freqs - f2[:, None]) / (FORMANT_BANDWIDTHS[1] / 2.0)) ** 2)
        w[:, 1:] *= g1 + g2
    # Anti-aliasing drop with a short fade so partials never step in or out.
    all_freqs = pitch[:, None] * k[None, :]
    gate = np.clip((drop_hz - all_freqs) / (_HARMONIC_FADE * drop_hz), 0.0, 1.0)
    w *= gate
    norms = w.sum(axis=1)
    alive = norms > 0.0
    w[alive] /= norms[alive, None]
    return w


def render(frames: list[SoundAttributeFrame], config: SynthConfig) -> PcmBuffer:
    """Render an ordered frame sequence to PCM spanning [first t, last t).

    Attribute values are linearly interpolated between frames, smoothed
    with the configured ramp, and synthesized with a phase accumulator so
    phase stays continuous across pitch changes.
    """
    _require(len(frames) >= 1, "at least one frame required")
    for a, b in zip(frames, frames[1:]):
        _require(b.t > a.t, f"frame times must be strictly increasing ({a.t} then {b.t})")
    for f in frames:
        _require(config.pitch_floor_hz <= f.pitch_hz <= config.pitch_ceil_hz,
                 f"pitch {f.pitch_hz} outside synth range "
                 f"[{config.pitch_floor_hz}, {config.pitch_ceil_hz}]")

    sr = config.sample_rate
    t0 = frames[0].t
    n = int(round((frames[-1].t - t0) * sr))
    if n <= 0:
        return PcmBuffer(np.zeros(0), sr, config.channels)

    ft = np.array([f.t for f in frames])
    fpitch = np.array([f.pitch_hz for f in frames])
    famp = np.array([f.amplitude for f in frames])
    ftim = np.array([f.timbre for f in frames])
    fwav = np.array([f.waveshape for f in frames])
    fpan = np.array([0.0 if f.pan is None else f.pan for f in frames])

    alpha = 1.0 if config.ramp_ms <= 0.0 else 1.0 - math.exp(-1000.0 / (sr * config.ramp_ms))
    k = np.arange(1, config.max_harmonics + 1, dtype=np.float64)
    drop_hz = config.harmonic_drop_hz
    stereo = config.channels == 2

    out = np.empty(n * config.channels, dtype=np.float64)
    phase = 0.0
    prev = {"pitch": float(fpitch[0]), "amp": float(famp[0]),
            "tim": float(ftim[0]), "wav": float(fwav[0]), "pan": float(fpan[0])}

    for s0 in range(0, n, _CHUNK):
        s1 = min(n, s0 + _CHUNK)
        ts = t0 + np.arange(s0, s1, dtype=np.float64) / sr
        pitch, prev["pitch"] = _smooth(np.interp(ts, ft, fpitch), alpha, prev["pitch"])
        amp, prev["amp"] = _smooth(np.interp(ts, ft, famp), alpha, prev["amp"])
        tim, prev["tim"] = _smooth(np.interp(ts, ft, ftim), alpha, prev["tim"])
        wav, prev["wav"] = _smooth(np.interp(ts, ft, fwav), alpha, prev["wav"])

        phi = phase + 2.0 * math.pi * np.cumsum(pitch) / sr
        phase = float(phi[-1])
        weights = _harmonic_weights(pitch, tim, wav, k, drop_hz)
        mono = amp * np.einsum("ij,ij->i", weights, np.sin(phi[:, None] * k[None, :]))

        if stereo:
            pan, prev["pan"] = _smooth(np.interp(ts, ft, fpan), alpha, prev["pan"])
            theta = (pan + 1.0) * math.pi / 4.0
            out[2 * s0:2 * s1:2] = mono * np.cos(theta)
            out[2 * s0 + 1:2 * s1:2] = mono * np.sin(theta)
        else:
            out[s0:s1] = mono

    return PcmBuffer(np.clip(out, -1.0, 1.0), sr, config.channels)


def apply_pan(mono: PcmBuffer, pan: float) -> PcmBuffer:
    """Spread a mono buffer to stereo with the constant-power law.

    left = cos((pan+1)*pi/4), right = sin((pan+1)*pi/4); the two gains
    always satisfy left**2 + right**2 == 1.
    """
    _require(mono.channels == 1, "apply_pan expects a mono buffer")
    _require(-1.0 <= pan <= 1.0, f"pan must be in [-1, 1], got {pan}")
    theta = (pan + 1.0) * math.pi / 4.0
    left = mono.samples * math.cos(theta)
    right = mono.samples * math.sin(theta)
    out = np.empty(mono.samples.size * 2, dtype=np.float64)
    out[0::2] = left
    out[1::2] = right
    return PcmBuffer(out, mono.sample_rate, 2)


def mono_to_stereo(mono: PcmBuffer) -> PcmBuffer:
    """Duplicate a mono buffer into both stereo channels at full scale."""
    _require(mono.channels == 1, "mono_to_stereo expects a mono buffer")
    out = np.repeat(mono.samples, 2)
    return PcmBuffer(out, mono.sample_rate, 2)
