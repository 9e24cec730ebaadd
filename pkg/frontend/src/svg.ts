/** Minimal deterministic SVG assembly: fixed size, no timestamps. */

export interface Extent {
  xmin: number;
  xmax: number;
  ymin: number;
  ymax: number;
}

const FMT = (v: number) => {
  const s = v.toFixed(3);
  return s === "-0.000" ? "0.000" : s;
};

export class Svg {
  readonly width: number;
  readonly height: number;
  private parts: string[] = [];

  constructor(width = 900, height = 700) {
    this.width = width;
    this.height = height;
  }

  rect(x: number, y: number, w: number, h: number, fill: string): void {
    this.parts.push(
      `<rect x="${FMT(x)}" y="${FMT(y)}" width="${FMT(w)}" height="${FMT(h)}" fill="${fill}"/>`,
    );
  }

  circle(cx: number, cy: number, r: number, fill: string, stroke = "none"): void {
    this.parts.push(
      `<circle cx="${FMT(cx)}" cy="${FMT(cy)}" r="${FMT(r)}" fill="${fill}" stroke="${stroke}"/>`,
    );
  }

  polyline(points: Array<[number, number]>, stroke: string, width = 1.5): void {
    const pts = points.map(([x, y]) => `${FMT(x)},${FMT(y)}`).join(" ");
    this.parts.push(
      `<polyline points="${pts}" fill="none" stroke="${stroke}" stroke-width="${width}"/>`,
    );
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke: string, width = 1): void {
    this.parts.push(
      `<line x1="${FMT(x1)}" y1="${FMT(y1)}" x2="${FMT(x2)}" y2="${FMT(y2)}" stroke="${stroke}" stroke-width="${width}"/>`,
    );
  }

  text(x: number, y: number, content: string, size = 13, anchor = "start"): void {
    this.parts.push(
      `<text x="${FMT(x)}" y="${FMT(y)}" font-family="monospace" font-size="${size}" text-anchor="${anchor}">${escapeXml(content)}</text>`,
    );
  }

  render(): string {
    return (
      `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" height="${this.height}" ` +
      `viewBox="0 0 ${this.width} ${this.height}">\n<rect width="100%" height="100%" fill="white"/>\n` +
      this.parts.join("\n") +
      "\n</svg>\n"
    );
  }
}

function escapeXml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;");
}

/** Affine map from data coordinates to a plot area with margins. */
export class Frame {
  constructor(
    readonly extent: Extent,
    readonly width: number,
    readonly height: number,
    readonly margin = 60,
  ) {}

  x(v: number): number {
    const { xmin, xmax } = this.extent;
    return this.margin + ((v - xmin) / (xmax - xmin)) * (this.width - 2 * this.margin);
  }

  y(v: number): number {
    const { ymin, ymax } = this.extent;
    return this.height - this.margin - ((v - ymin) / (ymax - ymin)) * (this.height - 2 * this.margin);
  }

  axes(svg: Svg, xlabel: string, ylabel: string, title: string): void {
    const m = this.margin;
    svg.line(m, this.height - m, this.width - m, this.height - m, "#222");
    svg.line(m, m, m, this.height - m, "#222");
    for (let i = 0; i <= 4; i++) {
      const fx = this.extent.xmin + (i / 4) * (this.extent.xmax - this.extent.xmin);
      const fy = this.extent.ymin + (i / 4) * (this.extent.ymax - this.extent.ymin);
      svg.text(this.x(fx), this.height - m + 18, fx.toPrecision(3), 11, "middle");
      svg.text(m - 8, this.y(fy) + 4, fy.toPrecision(3), 11, "end");
    }
    svg.text(this.width / 2, this.height - 15, xlabel, 13, "middle");
    svg.text(15, this.height / 2, ylabel, 13, "middle");
    svg.text(this.width / 2, 25, title, 15, "middle");
  }
}

/** Small perceptual-ish colormap (dark blue to yellow), 9 anchors. */
const STOPS: Array<[number, number, number]> = [
  [68, 1, 84],
  [71, 44, 122],
  [59, 81, 139],
  [44, 113, 142],
  [33, 144, 141],
  [39, 173, 129],
  [92, 200, 99],
  [170, 220, 50],
  [253, 231, 37],
];

export function colormap(t: number): string {
  const u = Math.min(1, Math.max(0, t)) * (STOPS.length - 1);
  const i = Math.min(STOPS.length - 2, Math.floor(u));
  const f = u - i;
  const c = STOPS[i].map((a, j) => Math.round(a + f * (STOPS[i + 1][j] - a)));
  return `rgb(${c[0]},${c[1]},${c[2]})`;
}
