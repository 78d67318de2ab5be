import { describe, expect, it } from "vitest";

import { estimatePitch } from "../src/analysis.js";
import {
    AdditiveVoice,
    formantFrequencies,
    harmonicWeights,
    renderOffline,
    timbreSpectrum,
} from "../src/synthcore.js";

const SR = 48000;

function steady(pitch: number, amplitude = 1, timbre = 0.5, waveshape = 0.5,
                seconds = 0.5): Float32Array {
    return renderOffline(
        [{ t: 0, target: { pitch_hz: pitch, amplitude, timbre, waveshape } }],
        seconds, SR);
}

describe("spectrum laws match the engine contracts", () => {
    it("timbre 0 is a pure tone", () => {
        const amps = timbreSpectrum(0, 16);
        expect(amps[0]).toBe(1);
        expect(Math.max(...amps.slice(1))).toBe(0);
    });

    it("timbre 1 is a normalized 1/k rolloff", () => {
        const amps = timbreSpectrum(1, 16);
        const raw = Array.from({ length: 16 }, (_, i) => 1 / (i + 1));
        const norm = Math.sqrt(raw.reduce((s, a) => s + a * a, 0));
        raw.forEach((a, i) => expect(amps[i]).toBeCloseTo(a / norm, 12));
    });

    it("spectral centroid of the weights rises with timbre", () => {
        const centroid = (w: Float64Array) => {
            let num = 0, den = 0;
            w.forEach((a, i) => { num += (i + 1) * a; den += a; });
            return num / den;
        };
        const grid = [0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1];
        const cents = grid.map((t) => centroid(timbreSpectrum(t, 16)));
        for (let i = 1; i < cents.length; i++) expect(cents[i]).toBeGreaterThanOrEqual(cents[i - 1]);
    });

    it("waveshape endpoints give the ooh and aah formants", () => {
        expect(formantFrequencies(0)).toEqual([350, 800]);
        expect(formantFrequencies(1)).toEqual([850, 1200]);
        expect(formantFrequencies(0.5)).toEqual([600, 1000]);
    });

    it("fundamental always dominates the harmonic weights", () => {
        for (const pitch of [110, 220, 440, 880, 1760]) {
            for (const waveshape of [0, 0.5, 1]) {
                const w = harmonicWeights(pitch, 1, waveshape, 16, SR / 4);
                for (let k = 1; k < 16; k++) expect(w[0]).toBeGreaterThan(w[k]);
            }
        }
    });
});

describe("client-side voice", () => {
    it("renders commanded pitch within 1 Hz under its own analyzer", () => {
        for (const pitch of [220, 440, 587.33, 880]) {
            const est = estimatePitch(steady(pitch), SR);
            expect(Math.abs(est - pitch)).toBeLessThanOrEqual(1.0);
        }
    });

    it("amplitude 0 renders silence", () => {
        const out = steady(440, 0, 0.5, 0.5, 0.1);
        expect(Math.max(...out.map(Math.abs))).toBe(0);
    });

    it("waveshape ramp is continuous and click-free", () => {
        const frames = [];
        for (let i = 0; i <= 50; i++) {
            frames.push({
                t: i * 0.02,
                target: { pitch_hz: 440, amplitude: 1, timbre: 1, waveshape: i / 50 },
            });
        }
        const out = renderOffline(frames, 1.0, SR);
        let worst = 0;
        for (let i = 1; i < out.length; i++) {
            worst = Math.max(worst, Math.abs(out[i] - out[i - 1]));
        }
        expect(worst).toBeLessThanOrEqual(0.2);
    });

    it("pitch steps stay click-free through the smoother", () => {
        const frames = [
            { t: 0.0, target: { pitch_hz: 330, amplitude: 1, timbre: 0, waveshape: 0 } },
            { t: 0.25, target: { pitch_hz: 660, amplitude: 1, timbre: 0, waveshape: 0 } },
        ];
        const out = renderOffline(frames, 0.5, SR);
        let worst = 0;
        for (let i = 1; i < out.length; i++) {
            worst = Math.max(worst, Math.abs(out[i] - out[i - 1]));
        }
        expect(worst).toBeLessThanOrEqual(0.2);
    });

    it("never exceeds unit magnitude", () => {
        const voice = new AdditiveVoice(SR);
        voice.setTarget({ pitch_hz: 880, amplitude: 1, timbre: 1, waveshape: 1 });
        const out = new Float32Array(4800);
        voice.render(out);
        expect(Math.max(...out.map(Math.abs))).toBeLessThanOrEqual(1.0);
    });
});
