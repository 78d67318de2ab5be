/** Browser entry point: blank tap surface, score readout, optional strips. */

import { AudioEngine } from "./audio.js";
import { ClientSession, Mode, pointerToGame } from "./client.js";
import { bandEdges, poolAnalyserBands } from "./analysis.js";
import { StripView } from "./strips.js";

const BANDS = 64;
const FREQ_LO = 100;
const FREQ_HI = 8000;
const STRIP_FPS = 30;

function el<T extends HTMLElement>(id: string): T {
    const node = document.getElementById(id);
    if (!node) throw new Error(`missing element #${id}`);
    return node as T;
}

const surface = el<HTMLCanvasElement>("surface");
const leftStripCanvas = el<HTMLCanvasElement>("strip-left");
const rightStripCanvas = el<HTMLCanvasElement>("strip-right");
const scoreLabel = el<HTMLSpanElement>("score");
const statusLabel = el<HTMLSpanElement>("status");
const outcomeLabel = el<HTMLSpanElement>("outcome");
const connectButton = el<HTMLButtonElement>("connect");
const urlInput = el<HTMLInputElement>("url");
const modeSelect = el<HTMLSelectElement>("mode");

const audio = new AudioEngine();
let session: ClientSession | null = null;
let socket: WebSocket | null = null;
let stripTimer: number | null = null;

const leftStrip = new StripView(leftStripCanvas, BANDS);
const rightStrip = new StripView(rightStripCanvas, BANDS);
const edges = bandEdges(BANDS, FREQ_LO, FREQ_HI);

function setMode(mode: Mode): void {
    if (session) session.mode = mode;
    const showStrips = mode !== "audio-only";
    leftStripCanvas.style.visibility = showStrips ? "visible" : "hidden";
    rightStripCanvas.style.visibility = showStrips ? "visible" : "hidden";
}

function drawSurface(): void {
    const ctx = surface.getContext("2d");
    if (!ctx) return;
    ctx.fillStyle = "#05060a";
    ctx.fillRect(0, 0, surface.width, surface.height);
    // Audio-only contract: nothing positional about the target is drawn,
    // only fading ripples where the player tapped.
    if (session) {
        const now = session.lastFrame?.t ?? 0;
        for (const tap of session.taps) {
            const age = now - tap.t;
            if (age > 1.2) continue;
            const alpha = Math.max(0, 1 - age);
            const radius = 12 + 40 * age;
            ctx.strokeStyle = tap.outcome === "hit"
                ? `rgba(120, 255, 160, ${alpha})`
                : tap.outcome === "rate_limited"
                    ? `rgba(255, 170, 60, ${alpha})`
                    : `rgba(150, 170, 255, ${alpha})`;
            ctx.lineWidth = 2;
            ctx.beginPath();
            ctx.arc(tap.x * surface.width, (1 - tap.y) * surface.height, radius, 0, 2 * Math.PI);
            ctx.stroke();
        }
        if (session.coolingDown()) {
            ctx.fillStyle = "rgba(255, 255, 255, 0.25)";
            ctx.fillRect(0, surface.height - 4, surface.width, 4);
        }
    }
    requestAnimationFrame(drawSurface);
}

function startStrips(): void {
    if (stripTimer !== null) return;
    stripTimer = window.setInterval(() => {
        if (!audio.analyser || !session || session.mode === "audio-only") return;
        const bins = new Float32Array(audio.analyser.frequencyBinCount);
        audio.analyser.getFloatFrequencyData(bins);
        const intensities = poolAnalyserBands(bins, audio.sampleRate,
                                              audio.analyser.fftSize, edges);
        // monaural game audio: both strips show the same channel content
        leftStrip.push(intensities);
        rightStrip.push(intensities);
    }, 1000 / STRIP_FPS);
}

connectButton.addEventListener("click", async () => {
    socket?.close();
    await audio.start();
    statusLabel.textContent = "connecting";
    const ws = new WebSocket(urlInput.value);
    socket = ws;
    session = new ClientSession(
        { send: (d) => ws.send(d), close: () => ws.close() },
        {
            onFrame: (frame) => audio.update(frame),
            onResult: (result) => {
                scoreLabel.textContent = String(result.score);
                outcomeLabel.textContent = result.outcome.replace("_", " ");
            },
            onEnd: (report) => {
                statusLabel.textContent = `finished: ${report["hits"]} hits`;
            },
            onServerError: (reason) => console.warn(`server: ${reason}`),
        });
    setMode(modeSelect.value as Mode);
    ws.onopen = () => { statusLabel.textContent = "playing"; };
    ws.onclose = () => {
        statusLabel.textContent = session?.finished ? statusLabel.textContent
            : "disconnected: press connect to retry";
    };
    ws.onerror = () => { statusLabel.textContent = "connection failed"; };
    ws.onmessage = (event) => session?.handleRaw(String(event.data));
    startStrips();
});

modeSelect.addEventListener("change", () => setMode(modeSelect.value as Mode));

surface.addEventListener("pointerdown", (event) => {
    if (!session) return;
    const rect = surface.getBoundingClientRect();
    const { x, y } = pointerToGame(event.clientX - rect.left, event.clientY - rect.top,
                                   rect.width, rect.height);
    session.sendTouch(x, y);
});

setMode("audio-only");
requestAnimationFrame(drawSurface);
