/** Wire protocol mirror: one JSON object per WebSocket text message. */

export interface FrameMessage {
    type: "frame";
    t: number;
    pitch_hz: number;
    amplitude: number;
    timbre: number;
    waveshape: number;
    pan?: number;
}

export interface TouchMessage {
    type: "touch";
    x: number;
    y: number;
    t: number;
}

export type Outcome = "hit" | "miss" | "rate_limited";

export interface ResultMessage {
    type: "result";
    outcome: Outcome;
    score: number;
    speed_level: number;
    t: number;
}

export interface ConfigMessage {
    type: "config";
    config: Record<string, unknown>;
}

export interface TouchLogEntry {
    t: number;
    x: number;
    y: number;
    outcome: Outcome;
    target: { x: number; y: number };
}

export interface EndMessage {
    type: "end";
    report: Record<string, unknown>;
    touch_log: TouchLogEntry[];
}

export interface ErrorMessage {
    type: "error";
    reason: string;
}

export type ServerMessage = FrameMessage | ResultMessage | ConfigMessage | EndMessage | ErrorMessage;

export class ProtocolError extends Error {}

function num(obj: Record<string, unknown>, key: string, lo = -Infinity, hi = Infinity): number {
    const v = obj[key];
    if (typeof v !== "number" || !Number.isFinite(v)) {
        throw new ProtocolError(`field '${key}' must be a finite number`);
    }
    if (v < lo || v > hi) {
        throw new ProtocolError(`field '${key}' value ${v} outside [${lo}, ${hi}]`);
    }
    return v;
}

export function parseServerMessage(text: string): ServerMessage {
    let obj: unknown;
    try {
        obj = JSON.parse(text);
    } catch (err) {
        throw new ProtocolError(`not valid JSON: ${(err as Error).message}`);
    }
    if (typeof obj !== "object" || obj === null || Array.isArray(obj)) {
        throw new ProtocolError("message must be a JSON object");
    }
    const rec = obj as Record<string, unknown>;
    switch (rec.type) {
        case "frame": {
            const msg: FrameMessage = {
                type: "frame",
                t: num(rec, "t", 0),
                pitch_hz: num(rec, "pitch_hz", 0),
                amplitude: num(rec, "amplitude", 0, 1),
                timbre: num(rec, "timbre", 0, 1),
                waveshape: num(rec, "waveshape", 0, 1),
            };
            if (rec.pan !== undefined && rec.pan !== null) {
                msg.pan = num(rec, "pan", -1, 1);
            }
            return msg;
        }
        case "result": {
            const outcome = rec.outcome;
            if (outcome !== "hit" && outcome !== "miss" && outcome !== "rate_limited") {
                throw new ProtocolError(`unknown outcome ${String(outcome)}`);
            }
            return {
                type: "result",
                outcome,
                score: num(rec, "score", 0),
                speed_level: num(rec, "speed_level", 0),
                t: num(rec, "t", 0),
            };
        }
        case "config": {
            if (typeof rec.config !== "object" || rec.config === null) {
                throw new ProtocolError("field 'config' must be an object");
            }
            return { type: "config", config: rec.config as Record<string, unknown> };
        }
        case "end": {
            if (typeof rec.report !== "object" || rec.report === null) {
                throw new ProtocolError("field 'report' must be an object");
            }
            if (!Array.isArray(rec.touch_log)) {
                throw new ProtocolError("field 'touch_log' must be a list");
            }
            return {
                type: "end",
                report: rec.report as Record<string, unknown>,
                touch_log: rec.touch_log as TouchLogEntry[],
            };
        }
        case "error": {
            if (typeof rec.reason !== "string") {
                throw new ProtocolError("field 'reason' must be a string");
            }
            return { type: "error", reason: rec.reason };
        }
        default:
            throw new ProtocolError(`unknown message type ${String(rec.type)}`);
    }
}

export function encodeTouch(touch: TouchMessage): string {
    if (!(touch.x >= 0 && touch.x <= 1 && touch.y >= 0 && touch.y <= 1)) {
        throw new ProtocolError(`touch (${touch.x}, ${touch.y}) outside [0, 1]`);
    }
    return JSON.stringify({ type: "touch", x: touch.x, y: touch.y, t: touch.t });
}
