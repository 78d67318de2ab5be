/**
 * Client-side additive synthesis with the same spectrum laws as the engine:
 * a harmonic stack tilted by the timbre control (pure sine at 0, 1/k rolloff
 * at 1), reweighted by two vowel formants morphed by the waveshape control,
 * fundamental exempt so the heard pitch always matches the commanded pitch.
 */

export const OOH_FORMANTS: [number, number] = [350, 800];
export const AAH_FORMANTS: [number, number] = [850, 1200];
export const FORMANT_BANDWIDTHS: [number, number] = [80, 120];

const HARMONIC_FADE = 0.1;

export interface AttributeTarget {
    pitch_hz: number;
    amplitude: number;
    timbre: number;
    waveshape: number;
}

export function timbreSpectrum(timbre: number, maxHarmonics: number): Float64Array {
    if (!(timbre >= 0 && timbre <= 1)) throw new RangeError(`timbre ${timbre} outside [0, 1]`);
    const amps = new Float64Array(maxHarmonics);
    if (timbre === 0) {
        amps[0] = 1;
        return amps;
    }
    const p = 4 - 3 * timbre;
    let energy = 0;
    for (let k = 1; k <= maxHarmonics; k++) {
        const a = Math.pow(k, -p);
        amps[k - 1] = a;
        energy += a * a;
    }
    const norm = Math.sqrt(energy);
    for (let i = 0; i < maxHarmonics; i++) amps[i] /= norm;
    return amps;
}

export function formantFrequencies(waveshape: number): [number, number] {
    if (!(waveshape >= 0 && waveshape <= 1)) {
        throw new RangeError(`waveshape ${waveshape} outside [0, 1]`);
    }
    return [
        OOH_FORMANTS[0] + waveshape * (AAH_FORMANTS[0] - OOH_FORMANTS[0]),
        OOH_FORMANTS[1] + waveshape * (AAH_FORMANTS[1] - OOH_FORMANTS[1]),
    ];
}

export function formantGain(freq: number, f1: number, f2: number): number {
    const d1 = (freq - f1) / (FORMANT_BANDWIDTHS[0] / 2);
    const d2 = (freq - f2) / (FORMANT_BANDWIDTHS[1] / 2);
    return 1 / (1 + d1 * d1) + 1 / (1 + d2 * d2);
}

/** Per-harmonic weights, L1-normalized so the sample peak never exceeds the
 * amplitude control. */
export function harmonicWeights(pitch: number, timbre: number, waveshape: number,
                                maxHarmonics: number, dropHz: number): Float64Array {
    const w = new Float64Array(maxHarmonics);
    const [f1, f2] = formantFrequencies(waveshape);
    const p = 4 - 3 * timbre;
    let sum = 0;
    for (let k = 1; k <= maxHarmonics; k++) {
        const freq = k * pitch;
        let weight: number;
        if (k === 1) {
            weight = 1;
        } else if (timbre <= 0) {
            weight = 0;
        } else {
            weight = Math.pow(k, -p) * formantGain(freq, f1, f2);
        }
        const gate = Math.min(Math.max((dropHz - freq) / (HARMONIC_FADE * dropHz), 0), 1);
        weight *= gate;
        w[k - 1] = weight;
        sum += weight;
    }
    if (sum > 0) {
        for (let i = 0; i < maxHarmonics; i++) w[i] /= sum;
    }
    return w;
}

/**
 * Streaming voice: targets are updated at frame-message rate, every control
 * is smoothed per sample with a one-pole ramp, and phase accumulates so
 * pitch changes never click.
 */
export class AdditiveVoice {
    readonly sampleRate: number;
    readonly maxHarmonics: number;
    private readonly alpha: number;
    private phase = 0;
    private pitch = 440;
    private amplitude = 0;
    private timbre = 0;
    private waveshape = 0;
    private target: AttributeTarget = { pitch_hz: 440, amplitude: 0, timbre: 0, waveshape: 0 };
    private started = false;

    constructor(sampleRate: number, maxHarmonics = 16, rampMs = 10) {
        this.sampleRate = sampleRate;
        this.maxHarmonics = maxHarmonics;
        this.alpha = rampMs <= 0 ? 1 : 1 - Math.exp(-1000 / (sampleRate * rampMs));
    }

    setTarget(target: AttributeTarget): void {
        this.target = target;
        if (!this.started) {
            // first frame: jump straight to it instead of ramping from silence
            this.pitch = target.pitch_hz;
            this.amplitude = target.amplitude;
            this.timbre = target.timbre;
            this.waveshape = target.waveshape;
            this.started = true;
        }
    }

    render(out: Float32Array): void {
        const a = this.alpha;
        const drop = this.sampleRate / 4;
        const twoPiOverSr = (2 * Math.PI) / this.sampleRate;
        for (let i = 0; i < out.length; i++) {
            this.pitch += a * (this.target.pitch_hz - this.pitch);
            this.amplitude += a * (this.target.amplitude - this.amplitude);
            this.timbre += a * (this.target.timbre - this.timbre);
            this.waveshape += a * (this.target.waveshape - this.waveshape);
            this.phase += twoPiOverSr * this.pitch;
            const w = harmonicWeights(this.pitch, this.timbre, this.waveshape,
                                      this.maxHarmonics, drop);
            let sample = 0;
            for (let k = 1; k <= this.maxHarmonics; k++) {
                const weight = w[k - 1];
                if (weight > 0) sample += weight * Math.sin(k * this.phase);
            }
            out[i] = this.amplitude * sample;
        }
        this.phase %= 2 * Math.PI * 1e9;  // keep the accumulator bounded
    }
}

/** Offline helper used by tests and the strips preview: drive a voice with
 * timed frame targets and collect the full signal. */
export function renderOffline(frames: { t: number; target: AttributeTarget }[],
                              seconds: number, sampleRate: number,
                              maxHarmonics = 16, rampMs = 10): Float32Array {
    const voice = new AdditiveVoice(sampleRate, maxHarmonics, rampMs);
    const total = Math.round(seconds * sampleRate);
    const out = new Float32Array(total);
    const block = 128;
    let next = 0;
    let written = 0;
    while (written < total) {
        const tNow = written / sampleRate;
        while (next < frames.length && frames[next].t <= tNow) {
            voice.setTarget(frames[next].target);
            next++;
        }
        const n = Math.min(block, total - written);
        const chunk = new Float32Array(n);
        voice.render(chunk);
        out.set(chunk, written);
        written += n;
    }
    return out;
}
