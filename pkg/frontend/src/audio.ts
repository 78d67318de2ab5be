/** WebAudio graph: worklet voice -> analyser -> speakers.  The analyser
 * feeds the strip view and a pitch readout from the client's own output. */

import { FrameMessage } from "./protocol.js";

export class AudioEngine {
    private context: AudioContext | null = null;
    private node: AudioWorkletNode | null = null;
    analyser: AnalyserNode | null = null;

    async start(workletUrl = "./dist/worklet.js"): Promise<void> {
        if (this.context) return;
        const context = new AudioContext({ sampleRate: 48000 });
        await context.audioWorklet.addModule(workletUrl);
        const node = new AudioWorkletNode(context, "sonigame-voice", {
            numberOfInputs: 0,
            numberOfOutputs: 1,
            outputChannelCount: [1],
        });
        const analyser = context.createAnalyser();
        analyser.fftSize = 4096;
        analyser.smoothingTimeConstant = 0;
        node.connect(analyser);
        analyser.connect(context.destination);
        this.context = context;
        this.node = node;
        this.analyser = analyser;
    }

    update(frame: FrameMessage): void {
        this.node?.port.postMessage({
            type: "frame",
            pitch_hz: frame.pitch_hz,
            amplitude: frame.amplitude,
            timbre: frame.timbre,
            waveshape: frame.waveshape,
        });
    }

    get sampleRate(): number {
        return this.context?.sampleRate ?? 48000;
    }

    async stop(): Promise<void> {
        this.node?.port.postMessage({ type: "stop" });
        await this.context?.close();
        this.context = null;
        this.node = null;
        this.analyser = null;
    }
}
