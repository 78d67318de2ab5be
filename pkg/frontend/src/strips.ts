/** Vertical strip rendering: one column per analysis frame per side,
 * bottom row = lowest band, fed by client-side analysis of the synth
 * output (left channel on the left strip, right on the right). */

export class StripView {
    private readonly canvas: HTMLCanvasElement;
    private readonly ctx: CanvasRenderingContext2D;
    private readonly bands: number;
    private column = 0;

    constructor(canvas: HTMLCanvasElement, bands: number) {
        this.canvas = canvas;
        this.bands = bands;
        const ctx = canvas.getContext("2d");
        if (!ctx) throw new Error("2d canvas unavailable");
        this.ctx = ctx;
        this.clear();
    }

    clear(): void {
        this.ctx.fillStyle = "#000";
        this.ctx.fillRect(0, 0, this.canvas.width, this.canvas.height);
        this.column = 0;
    }

    /** Paint one intensity column (values in [0, 1], index 0 = lowest band). */
    push(intensities: ArrayLike<number>): void {
        const w = this.canvas.width;
        const h = this.canvas.height;
        const rowH = h / this.bands;
        const x = this.column % w;
        for (let b = 0; b < this.bands; b++) {
            const v = Math.round(255 * Math.min(Math.max(intensities[b], 0), 1));
            this.ctx.fillStyle = `rgb(${v},${v},${v})`;
            this.ctx.fillRect(x, h - (b + 1) * rowH, 1, rowH);
        }
        // moving cursor line so the sweep position is visible
        this.ctx.fillStyle = "#234";
        this.ctx.fillRect((x + 1) % w, 0, 1, h);
        this.column++;
    }
}
