/** AudioWorklet processor hosting the additive voice.  Attribute frames
 * arrive over the message port; parameter targets swap at render-quantum
 * boundaries and are smoothed inside the voice, so updates never click. */

import { AdditiveVoice, AttributeTarget } from "./synthcore.js";

declare const sampleRate: number;

declare abstract class AudioWorkletProcessor {
    readonly port: MessagePort;
    constructor();
    abstract process(inputs: Float32Array[][], outputs: Float32Array[][],
                     parameters: Record<string, Float32Array>): boolean;
}

declare function registerProcessor(
    name: string,
    ctor: new () => AudioWorkletProcessor,
): void;

class VoiceProcessor extends AudioWorkletProcessor {
    private readonly voice = new AdditiveVoice(sampleRate, 16, 10);
    private pendingTarget: AttributeTarget | null = null;
    private running = true;

    constructor() {
        super();
        this.port.onmessage = (event: MessageEvent) => {
            const data = event.data as { type: string } & AttributeTarget;
            if (data.type === "frame") {
                this.pendingTarget = {
                    pitch_hz: data.pitch_hz,
                    amplitude: data.amplitude,
                    timbre: data.timbre,
                    waveshape: data.waveshape,
                };
            } else if (data.type === "stop") {
                this.running = false;
            }
        };
    }

    process(_inputs: Float32Array[][], outputs: Float32Array[][]): boolean {
        if (this.pendingTarget) {
            this.voice.setTarget(this.pendingTarget);
            this.pendingTarget = null;
        }
        const channels = outputs[0];
        if (channels.length === 0) return this.running;
        this.voice.render(channels[0]);
        for (let c = 1; c < channels.length; c++) {
            channels[c].set(channels[0]);  // monaural: same signal everywhere
        }
        return this.running;
    }
}

registerProcessor("sonigame-voice", VoiceProcessor);
