/** Client-side spectral analysis: a small radix-2 FFT, a pitch estimator,
 * and band pooling for the strip view. */

export function hann(n: number): Float64Array {
    const w = new Float64Array(n);
    for (let i = 0; i < n; i++) {
        w[i] = 0.5 - 0.5 * Math.cos((2 * Math.PI * i) / (n - 1));
    }
    return w;
}

/** In-place iterative Cooley-Tukey; re and im must be power-of-two length. */
export function fft(re: Float64Array, im: Float64Array): void {
    const n = re.length;
    if ((n & (n - 1)) !== 0) throw new RangeError("fft length must be a power of two");
    for (let i = 1, j = 0; i < n; i++) {
        let bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) {
            [re[i], re[j]] = [re[j], re[i]];
            [im[i], im[j]] = [im[j], im[i]];
        }
    }
    for (let len = 2; len <= n; len <<= 1) {
        const angle = (-2 * Math.PI) / len;
        const wr = Math.cos(angle);
        const wi = Math.sin(angle);
        for (let i = 0; i < n; i += len) {
            let cr = 1;
            let ci = 0;
            for (let j = 0; j < len / 2; j++) {
                const ur = re[i + j];
                const ui = im[i + j];
                const vr = re[i + j + len / 2] * cr - im[i + j + len / 2] * ci;
                const vi = re[i + j + len / 2] * ci + im[i + j + len / 2] * cr;
                re[i + j] = ur + vr;
                im[i + j] = ui + vi;
                re[i + j + len / 2] = ur - vr;
                im[i + j + len / 2] = ui - vi;
                const ncr = cr * wr - ci * wi;
                ci = cr * wi + ci * wr;
                cr = ncr;
            }
        }
    }
}

export function spectrumMagnitudes(samples: ArrayLike<number>, padFactor = 4): Float64Array {
    let n = 1;
    while (n < samples.length) n <<= 1;
    n *= padFactor;
    const re = new Float64Array(n);
    const im = new Float64Array(n);
    const w = hann(samples.length);
    for (let i = 0; i < samples.length; i++) re[i] = samples[i] * w[i];
    fft(re, im);
    const mags = new Float64Array(n / 2 + 1);
    for (let k = 0; k <= n / 2; k++) mags[k] = Math.hypot(re[k], im[k]);
    return mags;
}

/** FFT peak with parabolic interpolation on log magnitudes. */
export function estimatePitch(samples: ArrayLike<number>, sampleRate: number): number {
    const mags = spectrumMagnitudes(samples);
    const n = (mags.length - 1) * 2;
    let peak = 1;
    for (let k = 2; k < mags.length - 1; k++) {
        if (mags[k] > mags[peak]) peak = k;
    }
    let delta = 0;
    if (peak > 0 && peak < mags.length - 1) {
        const la = Math.log(mags[peak - 1] + 1e-300);
        const lb = Math.log(mags[peak] + 1e-300);
        const lc = Math.log(mags[peak + 1] + 1e-300);
        const denom = la - 2 * lb + lc;
        if (denom !== 0) delta = (0.5 * (la - lc)) / denom;
    }
    return ((peak + delta) * sampleRate) / n;
}

export function bandEdges(bands: number, freqLo: number, freqHi: number): Float64Array {
    const edges = new Float64Array(bands + 1);
    for (let i = 0; i <= bands; i++) {
        edges[i] = freqLo * Math.pow(freqHi / freqLo, i / bands);
    }
    return edges;
}

/**
 * Pool an AnalyserNode dB spectrum (one value per linear FFT bin) into
 * log-spaced band intensities in [0, 1], 0 at floorDb and 1 at full scale.
 */
export function poolAnalyserBands(dbBins: Float32Array, sampleRate: number,
                                  fftSize: number, edges: Float64Array,
                                  floorDb = -60): Float64Array {
    const bands = edges.length - 1;
    const out = new Float64Array(bands);
    const binHz = sampleRate / fftSize;
    for (let b = 0; b < bands; b++) {
        let power = 0;
        const kLo = Math.ceil(edges[b] / binHz);
        const kHi = Math.min(Math.ceil(edges[b + 1] / binHz), dbBins.length);
        for (let k = kLo; k < kHi; k++) {
            if (Number.isFinite(dbBins[k])) power += Math.pow(10, dbBins[k] / 10);
        }
        if (power > 0) {
            const db = 10 * Math.log10(power);
            out[b] = Math.min(Math.max((db - floorDb) / -floorDb, 0), 1);
        }
    }
    return out;
}
