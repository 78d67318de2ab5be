import { describe, expect, it, vi } from "vitest";

import { ClientSession, pointerToGame } from "../src/client.js";

function frameText(t: number): string {
    return JSON.stringify({
        type: "frame", t, pitch_hz: 440, amplitude: 0.8, timbre: 0.5, waveshape: 0.5,
    });
}

function resultText(outcome: string, score: number, t: number): string {
    return JSON.stringify({ type: "result", outcome, score, speed_level: score, t });
}

function makeSession() {
    const sent: string[] = [];
    const session = new ClientSession({ send: (d) => sent.push(d), close: () => {} });
    return { session, sent };
}

describe("pointerToGame", () => {
    it("maps canvas center to (0.5, 0.5)", () => {
        expect(pointerToGame(400, 300, 800, 600)).toEqual({ x: 0.5, y: 0.5 });
    });

    it("maps bottom-left pixel to the game origin (y points up)", () => {
        expect(pointerToGame(0, 600, 800, 600)).toEqual({ x: 0, y: 0 });
    });

    it("maps top-right to (1, 1) and clamps overshoot", () => {
        expect(pointerToGame(800, 0, 800, 600)).toEqual({ x: 1, y: 1 });
        expect(pointerToGame(900, -20, 800, 600)).toEqual({ x: 1, y: 1 });
    });
});

describe("ClientSession", () => {
    it("stamps touches with the latest frame time", () => {
        const { session, sent } = makeSession();
        session.handleRaw(frameText(2.5));
        session.sendTouch(0.25, 0.75);
        expect(JSON.parse(sent[0])).toEqual({ type: "touch", x: 0.25, y: 0.75, t: 2.5 });
    });

    it("refuses to touch before the first frame", () => {
        const { session, sent } = makeSession();
        expect(session.sendTouch(0.5, 0.5)).toBeNull();
        expect(sent).toHaveLength(0);
    });

    it("sends both taps of a rapid double tap and shows the second rate limited", () => {
        const { session, sent } = makeSession();
        session.handleRaw(frameText(1.0));
        const first = session.sendTouch(0.5, 0.5)!;
        session.handleRaw(frameText(1.4));
        const second = session.sendTouch(0.5, 0.5)!;
        expect(sent).toHaveLength(2);  // client never suppresses sends

        session.handleRaw(resultText("hit", 1, 1.0));
        session.handleRaw(resultText("rate_limited", 1, 1.4));
        expect(first.outcome).toBe("hit");
        expect(second.outcome).toBe("rate_limited");
        expect(session.lastResult?.outcome).toBe("rate_limited");
        expect(session.score).toBe(1);
    });

    it("tracks the cooldown display without blocking sends", () => {
        const { session, sent } = makeSession();
        session.handleRaw(frameText(1.0));
        session.sendTouch(0.5, 0.5);
        session.handleRaw(resultText("miss", 0, 1.0));
        session.handleRaw(frameText(1.5));
        expect(session.coolingDown()).toBe(true);
        session.sendTouch(0.1, 0.1);  // still allowed
        expect(sent).toHaveLength(2);
        session.handleRaw(frameText(2.05));
        expect(session.coolingDown()).toBe(false);
    });

    it("rate limited results do not extend the cooldown", () => {
        const { session } = makeSession();
        session.handleRaw(frameText(1.0));
        session.sendTouch(0.5, 0.5);
        session.handleRaw(resultText("hit", 1, 1.0));
        session.sendTouch(0.5, 0.5);
        session.handleRaw(resultText("rate_limited", 1, 1.2));
        expect(session.cooldownUntil).toBeCloseTo(2.0, 12);
    });

    it("ignores malformed frames with a console diagnostic", () => {
        const warn = vi.spyOn(console, "warn").mockImplementation(() => {});
        const { session } = makeSession();
        expect(session.handleRaw("garbage")).toBeNull();
        expect(session.handleRaw('{"type":"frame","t":0}')).toBeNull();
        expect(warn).toHaveBeenCalledTimes(2);
        warn.mockRestore();
    });

    it("reads the rate limit interval from the config message", () => {
        const { session } = makeSession();
        session.handleRaw(JSON.stringify({
            type: "config",
            config: { version: 1, game: { touch_min_interval_s: 2.5 } },
        }));
        expect(session.touchMinIntervalS).toBe(2.5);
    });

    it("collects the final report", () => {
        const reports: unknown[] = [];
        const session = new ClientSession(
            { send: () => {}, close: () => {} },
            { onEnd: (r) => reports.push(r) });
        session.handleRaw(JSON.stringify({ type: "end", report: { hits: 7 }, touch_log: [] }));
        expect(session.finished).toBe(true);
        expect(reports).toEqual([{ hits: 7 }]);
    });
});
