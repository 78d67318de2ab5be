"""Independent reference implementations used to check the package.

Everything here is deliberately written from first principles (plain loops,
direct transforms) and never calls into the code paths it is checking.
"""

import math

import numpy as np


def estimate_fundamental(samples: np.ndarray, sample_rate: int) -> float:
    """FFT peak with parabolic interpolation on a Hann-windowed, zero-padded
    spectrum."""
    x = np.asarray(samples, dtype=np.float64)
    w = np.hanning(x.size)
    n = 1 << (int(np.ceil(np.log2(max(x.size, 2)))) + 2)
    mags = np.abs(np.fft.rfft(x * w, n))
    k = int(np.argmax(mags))
    delta = 0.0
    if 0 < k < mags.size - 1:
        la, lb, lc = np.log(mags[k - 1:k + 2] + 1e-300)
        denom = la - 2.0 * lb + lc
        if denom != 0.0:
            delta = 0.5 * (la - lc) / denom
    return (k + delta) * sample_rate / n


def spectral_centroid(samples: np.ndarray, sample_rate: int) -> float:
    x = np.asarray(samples, dtype=np.float64)
    mags = np.abs(np.fft.rfft(x * np.hanning(x.size)))
    freqs = np.fft.rfftfreq(x.size, 1.0 / sample_rate)
    return float((mags * freqs).sum() / mags.sum())


def spearman_rho(a, b) -> float:
    ra = _ranks(a)
    rb = _ranks(b)
    ra = ra - np.mean(ra)
    rb = rb - np.mean(rb)
    return float(np.sum(ra * rb) / math.sqrt(np.sum(ra ** 2) * np.sum(rb ** 2)))


def _ranks(values) -> np.ndarray:
    order = np.argsort(np.asarray(values))
    ranks = np.empty(len(values), dtype=np.float64)
    ranks[order] = np.arange(1, len(values) + 1)
    return ranks


def rotate_to_local(px: float, py: float, heading: float,
                    ox: float, oy: float) -> tuple[float, float]:
    """2-D rotation-matrix reference for the player-frame transform.

    Basis vectors written out directly: forward = (cos h, sin h) is local
    +y, right = (sin h, -cos h) is local +x.
    """
    dx, dy = ox - px, oy - py
    fwd = (math.cos(heading), math.sin(heading))
    right = (math.sin(heading), -math.cos(heading))
    return (dx * right[0] + dy * right[1], dx * fwd[0] + dy * fwd[1])


def direct_band_intensities(samples: np.ndarray, sample_rate: int, bands: int,
                            freq_lo: float, freq_hi: float, frame_rate: float,
                            floor_db: float) -> list[list[float]]:
    """Naive short-time band analysis: explicit per-bin pooling loops."""
    hop = round(sample_rate / frame_rate)
    window = 1
    while window < hop:
        window *= 2
    win = np.hanning(window)
    ref = 0.5 * math.sqrt(window * float(np.sum(win ** 2)))
    edges = [freq_lo * (freq_hi / freq_lo) ** (i / bands) for i in range(bands + 1)]
    freqs = np.fft.rfftfreq(window, 1.0 / sample_rate)
    out = []
    j = 0
    while j * hop < len(samples):
        seg = np.asarray(samples[j * hop:j * hop + window], dtype=np.float64)
        seg = np.pad(seg, (0, window - seg.size))
        spec = np.fft.rfft(seg * win)
        row = []
        for b in range(bands):
            power = 0.0
            for k in range(freqs.size):
                if edges[b] <= freqs[k] < edges[b + 1]:
                    power += abs(spec[k]) ** 2
            mag = math.sqrt(power)
            if mag > 0.0:
                db = 20.0 * math.log10(mag / ref)
                row.append(min(max((db - floor_db) / -floor_db, 0.0), 1.0))
            else:
                row.append(0.0)
        out.append(row)
        j += 1
    return out


def band_index_for(freq: float, bands: int, freq_lo: float, freq_hi: float) -> int:
    """Which log-spaced band a frequency falls into, computed from scratch."""
    if freq < freq_lo or freq >= freq_hi:
        raise ValueError(f"{freq} outside [{freq_lo}, {freq_hi})")
    return int(math.floor(bands * math.log(freq / freq_lo) / math.log(freq_hi / freq_lo)))
