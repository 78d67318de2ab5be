/**
 * Session state machine, kept free of DOM and WebSocket specifics so the
 * message layer can be driven headlessly.  The server stays authoritative:
 * touches are always sent, and the client-side cooldown is display only.
 */

import {
    FrameMessage,
    ProtocolError,
    ResultMessage,
    ServerMessage,
    encodeTouch,
    parseServerMessage,
} from "./protocol.js";

export type Mode = "audio-only" | "strips" | "both";

export interface SocketLike {
    send(data: string): void;
    close(): void;
}

export interface SessionEvents {
    onConfig?(config: Record<string, unknown>): void;
    onFrame?(frame: FrameMessage): void;
    onResult?(result: ResultMessage): void;
    onEnd?(report: Record<string, unknown>): void;
    onServerError?(reason: string): void;
    onStatus?(text: string): void;
}

export interface TapFeedback {
    x: number;
    y: number;
    t: number;
    outcome: ResultMessage["outcome"] | "pending";
}

export class ClientSession {
    mode: Mode = "audio-only";
    score = 0;
    speedLevel = 0;
    finished = false;
    lastFrame: FrameMessage | null = null;
    lastResult: ResultMessage | null = null;
    /** Most recent taps, for positionless ripple feedback. */
    readonly taps: TapFeedback[] = [];
    /** Display-only cooldown end, in session seconds. */
    cooldownUntil = 0;
    touchMinIntervalS = 1.0;

    private readonly socket: SocketLike;
    private readonly events: SessionEvents;
    private pendingTouches: TapFeedback[] = [];

    constructor(socket: SocketLike, events: SessionEvents = {}) {
        this.socket = socket;
        this.events = events;
    }

    /** Parse and dispatch one raw server message.  Malformed input is
     * ignored with a console diagnostic; the session keeps running. */
    handleRaw(text: string): ServerMessage | null {
        let msg: ServerMessage;
        try {
            msg = parseServerMessage(text);
        } catch (err) {
            if (err instanceof ProtocolError) {
                console.warn(`ignoring malformed server message: ${err.message}`);
                return null;
            }
            throw err;
        }
        switch (msg.type) {
            case "config": {
                const game = msg.config["game"] as Record<string, unknown> | undefined;
                if (game && typeof game["touch_min_interval_s"] === "number") {
                    this.touchMinIntervalS = game["touch_min_interval_s"];
                }
                this.events.onConfig?.(msg.config);
                break;
            }
            case "frame":
                this.lastFrame = msg;
                this.events.onFrame?.(msg);
                break;
            case "result": {
                this.score = msg.score;
                this.speedLevel = msg.speed_level;
                this.lastResult = msg;
                const pending = this.pendingTouches.shift();
                if (pending) {
                    pending.outcome = msg.outcome;
                }
                if (msg.outcome !== "rate_limited") {
                    this.cooldownUntil = msg.t + this.touchMinIntervalS;
                }
                this.events.onResult?.(msg);
                break;
            }
            case "end":
                this.finished = true;
                this.events.onEnd?.(msg.report);
                break;
            case "error":
                this.events.onServerError?.(msg.reason);
                break;
        }
        return msg;
    }

    /** Send a touch at normalized game coordinates.  Never suppressed: the
     * server decides hit, miss, or rate limited. */
    sendTouch(x: number, y: number): TapFeedback | null {
        if (this.lastFrame === null || this.finished) {
            this.events.onStatus?.("not in a running session");
            return null;
        }
        const tap: TapFeedback = { x, y, t: this.lastFrame.t, outcome: "pending" };
        this.socket.send(encodeTouch({ type: "touch", x, y, t: this.lastFrame.t }));
        this.pendingTouches.push(tap);
        this.taps.push(tap);
        if (this.taps.length > 16) this.taps.shift();
        return tap;
    }

    /** True while the display should show the cooldown indicator. */
    coolingDown(): boolean {
        return this.lastFrame !== null && this.lastFrame.t < this.cooldownUntil;
    }
}

/** Normalize pointer coordinates to the unit square with y pointing up
 * (pixel origin is top-left, game origin is bottom-left). */
export function pointerToGame(px: number, py: number,
                              width: number, height: number): { x: number; y: number } {
    const clamp = (v: number) => Math.min(Math.max(v, 0), 1);
    return { x: clamp(px / width), y: clamp(1 - py / height) };
}
