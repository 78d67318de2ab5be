import { describe, expect, it } from "vitest";

import { ProtocolError, encodeTouch, parseServerMessage } from "../src/protocol.js";

describe("parseServerMessage", () => {
    it("parses frame messages (pan optional)", () => {
        const msg = parseServerMessage(
            '{"type":"frame","t":1.5,"pitch_hz":440,"amplitude":0.8,"timbre":0.5,"waveshape":0.25}');
        expect(msg).toEqual({
            type: "frame", t: 1.5, pitch_hz: 440, amplitude: 0.8, timbre: 0.5, waveshape: 0.25,
        });
        const panned = parseServerMessage(
            '{"type":"frame","t":0,"pitch_hz":220,"amplitude":1,"timbre":0,"waveshape":1,"pan":-0.5}');
        expect(panned.type === "frame" && panned.pan).toBe(-0.5);
    });

    it("parses result, config, end, error messages", () => {
        expect(parseServerMessage(
            '{"type":"result","outcome":"rate_limited","score":2,"speed_level":2,"t":3.0}'))
            .toMatchObject({ outcome: "rate_limited", score: 2 });
        expect(parseServerMessage('{"type":"config","config":{"version":1}}'))
            .toMatchObject({ config: { version: 1 } });
        expect(parseServerMessage('{"type":"end","report":{"hits":4},"touch_log":[]}'))
            .toMatchObject({ report: { hits: 4 } });
        expect(parseServerMessage('{"type":"error","reason":"nope"}'))
            .toMatchObject({ reason: "nope" });
    });

    it.each([
        "",
        "not json",
        "[1,2]",
        '{"type":"mystery"}',
        '{"type":"frame","t":0,"pitch_hz":-1,"amplitude":1,"timbre":0,"waveshape":0}',
        '{"type":"frame","t":0,"pitch_hz":440,"amplitude":7,"timbre":0,"waveshape":0}',
        '{"type":"result","outcome":"draw","score":0,"speed_level":0,"t":0}',
        '{"type":"end","report":[]}',
    ])("rejects malformed input %#", (text) => {
        expect(() => parseServerMessage(text)).toThrow(ProtocolError);
    });
});

describe("encodeTouch", () => {
    it("round-trips through JSON", () => {
        const text = encodeTouch({ type: "touch", x: 0.5, y: 0.25, t: 1.0 });
        expect(JSON.parse(text)).toEqual({ type: "touch", x: 0.5, y: 0.25, t: 1.0 });
    });

    it("rejects coordinates outside the unit square", () => {
        expect(() => encodeTouch({ type: "touch", x: 1.5, y: 0.5, t: 0 }))
            .toThrow(ProtocolError);
    });
});
