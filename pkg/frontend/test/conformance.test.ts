/**
 * Protocol conformance against the real engine: spawn the serve CLI, drive
 * the client message layer headlessly, and require the identical score the
 * headless session produced from the same seed and touch trace.
 */

import { execFile, spawn, ChildProcess } from "node:child_process";
import { once } from "node:events";
import * as path from "node:path";
import { fileURLToPath } from "node:url";
import { promisify } from "node:util";

import { WebSocket } from "ws";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ClientSession } from "../src/client.js";
import { EndMessage, ResultMessage } from "../src/protocol.js";

const execFileAsync = promisify(execFile);
const HERE = path.dirname(fileURLToPath(import.meta.url));
const REPO_ROOT = path.resolve(HERE, "..", "..");
const PYTHON = process.env.PYTHON ?? "python3";
const PORT = 8900 + (process.pid % 90);  // avoid collisions with stale runs
const DURATION = 6.0;

interface Fixture {
    duration_s: number;
    expected_report: Record<string, unknown> & { hits: number };
    trace: { t: number; x: number; y: number }[];
    estimates: { t: number; x: number; y: number }[];
}

let fixture: Fixture;
let server: ChildProcess;

async function startServer(): Promise<ChildProcess> {
    const child = spawn(PYTHON, [
        "-m", "sonigame.cli", "serve",
        "--port", String(PORT),
        "--seconds", String(DURATION),
        "--pacing", "0.002",
    ], { cwd: REPO_ROOT, stdio: ["ignore", "pipe", "pipe"] });
    await new Promise<void>((resolve, reject) => {
        child.stdout!.on("data", (chunk: Buffer) => {
            if (chunk.toString().includes("serving")) resolve();
        });
        child.stderr!.on("data", (chunk: Buffer) => {
            process.stderr.write(chunk);
        });
        child.on("exit", (code) => reject(new Error(`server exited early (${code})`)));
        setTimeout(() => reject(new Error("server startup timed out")), 15000);
    });
    return child;
}

interface WireRun {
    session: ClientSession;
    results: ResultMessage[];
    end: EndMessage | null;
}

function playSession(sendTrace: (session: ClientSession, ws: WebSocket) => void): Promise<WireRun> {
    return new Promise((resolve, reject) => {
        const ws = new WebSocket(`ws://127.0.0.1:${PORT}`);
        const results: ResultMessage[] = [];
        let end: EndMessage | null = null;
        const session = new ClientSession(
            { send: (d) => ws.send(d), close: () => ws.close() },
            { onResult: (r) => results.push(r) });
        ws.on("open", () => sendTrace(session, ws));
        ws.on("message", (data) => {
            const msg = session.handleRaw(data.toString());
            if (msg?.type === "end") end = msg;
        });
        ws.on("close", () => resolve({ session, results, end }));
        ws.on("error", reject);
        setTimeout(() => reject(new Error("session timed out")), 30000);
    });
}

beforeAll(async () => {
    const { stdout } = await execFileAsync(
        PYTHON, [path.join(HERE, "make_fixture.py"), String(DURATION)],
        { cwd: REPO_ROOT });
    fixture = JSON.parse(stdout);
    server = await startServer();
}, 60000);

afterAll(() => {
    server?.kill();
});

describe("wire conformance with the engine", () => {
    it("replaying the recorded trace reaches the identical score", async () => {
        const run = await playSession((_session, ws) => {
            for (const touch of fixture.trace) {
                ws.send(JSON.stringify({ type: "touch", x: touch.x, y: touch.y, t: touch.t }));
            }
        });
        expect(run.end).not.toBeNull();
        expect(run.results.length).toBe(fixture.trace.length);
        expect(run.session.score).toBe(fixture.expected_report.hits);
        expect(run.end!.report["hits"]).toBe(fixture.expected_report.hits);
        expect(run.end!.report["touches_attempted"])
            .toBe(fixture.expected_report["touches_attempted"]);

        // reconstruct the full report with localization stats from the
        // disclosed ground truth; it must match the headless report exactly
        const byT = new Map(fixture.estimates.map((e) => [e.t, e]));
        const errors = run.end!.touch_log.map((entry) => {
            const est = byT.get(entry.t)!;
            return Math.hypot(est.x - entry.target.x, est.y - entry.target.y);
        });
        const reconstructed = {
            ...run.end!.report,
            localization_error: errors.length === 0 ? null : {
                max: Math.max(...errors),
                mean: errors.reduce((s, e) => s + e, 0) / errors.length,
            },
        };
        expect(reconstructed).toEqual(fixture.expected_report);
    }, 30000);

    it("rapid double tap: both sent, second answered rate_limited", async () => {
        const dt = 0.02;
        const run = await playSession((_session, ws) => {
            const t0 = 10 * dt;
            ws.send(JSON.stringify({ type: "touch", x: 0.5, y: 0.5, t: t0 }));
            ws.send(JSON.stringify({ type: "touch", x: 0.5, y: 0.5, t: t0 + 0.4 }));
        });
        expect(run.results.length).toBe(2);
        expect(["hit", "miss"]).toContain(run.results[0].outcome);
        expect(run.results[1].outcome).toBe("rate_limited");
    }, 30000);

    it("a silent client still gets the full frame stream and a zero-score end", async () => {
        const run = await playSession(() => { /* send nothing */ });
        expect(run.end).not.toBeNull();
        expect(run.end!.report["hits"]).toBe(0);
        expect(run.session.lastFrame).not.toBeNull();
        expect(run.session.lastFrame!.t).toBeCloseTo(DURATION, 6);
    }, 30000);
});
