"""Minimal RIFF/WAVE reader and writer, 16-bit PCM little-endian only."""

import struct

import numpy as np

from .synth import PcmBuffer

_PCM_FORMAT = 1
_BITS = 16
_SCALE = 32767.0


class WavFormatError(ValueError):
    """Malformed or unsupported WAV data."""


def write_wav(buffer: PcmBuffer, path: str) -> None:
    """Write a PcmBuffer as 16-bit PCM; round-trip error stays within 1 LSB."""
    ints = np.clip(np.round(buffer.samples * _SCALE), -32768, 32767).astype("<i2")
    data = ints.tobytes()
    byte_rate = buffer.sample_rate * buffer.channels * _BITS // 8
    block_align = buffer.channels * _BITS // 8
    with open(path, "wb") as fh:
        fh.write(b"RIFF")
        fh.write(struct.pack("<I", 36 + len(data)))
        fh.write(b"WAVE")
        fh.write(b"fmt ")
        fh.write(struct.pack("<IHHIIHH", 16, _PCM_FORMAT, buffer.channels,
                             buffer.sample_rate, byte_rate, block_align, _BITS))
        fh.write(b"data")
        fh.write(struct.pack("<I", len(data)))
        fh.write(data)


def read_wav(path: str) -> PcmBuffer:
    """Parse a 16-bit PCM WAV file; anything else raises WavFormatError."""
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < 12:
        raise WavFormatError(f"{path}: truncated header ({len(raw)} bytes)")
    if raw[0:4] != b"RIFF":
        raise WavFormatError(f"{path}: missing RIFF magic")
    if raw[8:12] != b"WAVE":
        raise WavFormatError(f"{path}: missing WAVE form type")

    fmt = None
    data = None
    pos = 12
    while pos + 8 <= len(raw):
        chunk_id = raw[pos:pos + 4]
        (size,) = struct.unpack_from("<I", raw, pos + 4)
        body = raw[pos + 8:pos + 8 + size]
        if len(body) < size:
            raise WavFormatError(f"{path}: chunk {chunk_id!r} truncated "
                                 f"({len(body)} of {size} bytes)")
        if chunk_id == b"fmt ":
            if size < 16:
                raise WavFormatError(f"{path}: fmt chunk too small ({size} bytes)")
            fmt = struct.unpack_from("<HHIIHH", body, 0)
        elif chunk_id == b"data":
            data = body
        pos += 8 + size + (size & 1)  # chunks are word-aligned

    if fmt is None:
        raise WavFormatError(f"{path}: no fmt chunk")
    if data is None:
        raise WavFormatError(f"{path}: no data chunk")
    audio_format, channels, sample_rate, _, _, bits = fmt
    if audio_format != _PCM_FORMAT:
        raise WavFormatError(f"{path}: unsupported encoding (format tag {audio_format})")
    if bits != _BITS:
        raise WavFormatError(f"{path}: unsupported bit depth {bits}")
    if channels not in (1, 2):
        raise WavFormatError(f"{path}: unsupported channel count {channels}")
    if sample_rate < 1:
        raise WavFormatError(f"{path}: bad sample rate {sample_rate}")
    if len(data) % (channels * 2) != 0:
        raise WavFormatError(f"{path}: data size {len(data)} not frame-aligned")
    ints = np.frombuffer(data, dtype="<i2").astype(np.float64)
    return PcmBuffer(np.clip(ints / _SCALE, -1.0, 1.0), sample_rate, channels)
