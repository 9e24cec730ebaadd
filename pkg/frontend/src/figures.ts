import { readFileSync } from "node:fs";

import { column, readCsv, SchemaError, Table } from "./csv.js";
import { cabs, cadd, cmul, Cx, cx, polyEval, polyRoots } from "./complexpoly.js";
import { colormap, Extent, Frame, Svg } from "./svg.js";

export interface FigureResult {
  svg: string;
  checks: Record<string, unknown>;
}

export interface FigureSpec {
  kind: "heatmap" | "locus" | "curvature" | "decay" | "convergence";
  input: string;
  fit?: string;
  w?: string;
  mass?: number;
  tolerance?: number;
  width?: number;
  height?: number;
  xrange?: [number, number];
  yrange?: [number, number];
}

function extentOf(xs: number[], ys: number[], spec: FigureSpec, pad = 0.05): Extent {
  const xmin = spec.xrange ? spec.xrange[0] : Math.min(...xs);
  const xmax = spec.xrange ? spec.xrange[1] : Math.max(...xs);
  const ymin = spec.yrange ? spec.yrange[0] : Math.min(...ys);
  const ymax = spec.yrange ? spec.yrange[1] : Math.max(...ys);
  const dx = (xmax - xmin) * pad + 1e-9;
  const dy = (ymax - ymin) * pad + 1e-9;
  return { xmin: xmin - dx, xmax: xmax + dx, ymin: ymin - dy, ymax: ymax + dy };
}

function medianSpacing(xs: number[], ys: number[]): number {
  const n = xs.length;
  const nearest: number[] = [];
  for (let i = 0; i < n; i++) {
    let best = Infinity;
    for (let j = 0; j < n; j++) {
      if (i === j) continue;
      const d = Math.hypot(xs[i] - xs[j], ys[i] - ys[j]);
      if (d < best) best = d;
    }
    nearest.push(best);
  }
  nearest.sort((a, b) => a - b);
  return nearest[Math.floor(nearest.length / 2)] || 0.1;
}

function scatterField(
  spec: FigureSpec,
  xs: number[],
  ys: number[],
  vals: number[],
  title: string,
  valueLabel: string,
): Svg {
  const svg = new Svg(spec.width ?? 900, spec.height ?? 700);
  const frame = new Frame(extentOf(xs, ys, spec), svg.width, svg.height);
  const lo = Math.min(...vals);
  const hi = Math.max(...vals);
  const span = hi - lo || 1;
  const radius =
    (medianSpacing(xs, ys) / (frame.extent.xmax - frame.extent.xmin)) *
    (svg.width - 2 * frame.margin) * 0.55;
  for (let i = 0; i < xs.length; i++) {
    svg.circle(
      frame.x(xs[i]),
      frame.y(ys[i]),
      Math.max(2, radius),
      colormap((vals[i] - lo) / span),
    );
  }
  frame.axes(svg, "Re z", "Im z", title);
  svg.text(svg.width - frame.margin, 25,
    `${valueLabel}: [${lo.toPrecision(3)}, ${hi.toPrecision(3)}]`, 11, "end");
  return svg;
}

/** Two-point heatmap over the z plane for a fixed w column of a scan grid. */
export function renderHeatmap(spec: FigureSpec): FigureResult {
  const t = readCsv(spec.input, ["re_w", "im_w", "re_z", "im_z", "value"]);
  const rew = column(t, "re_w");
  const imw = column(t, "im_w");
  let w0: [number, number];
  if (spec.w) {
    const parsed = parseComplexArg(spec.w);
    w0 = [parsed.re, parsed.im];
  } else {
    w0 = [rew[0], imw[0]];
  }
  // nearest w actually present in the file
  let best = 0;
  let bestD = Infinity;
  for (let i = 0; i < rew.length; i++) {
    const d = Math.hypot(rew[i] - w0[0], imw[i] - w0[1]);
    if (d < bestD) {
      bestD = d;
      best = i;
    }
  }
  const wSel: [number, number] = [rew[best], imw[best]];
  const keep = t.rows.filter(
    (r) => Math.hypot(r[0] - wSel[0], r[1] - wSel[1]) < 1e-12,
  );
  if (keep.length === 0) throw new SchemaError("no rows for the requested w");
  const xs = keep.map((r) => r[2]);
  const ys = keep.map((r) => r[3]);
  const vals = keep.map((r) => r[4]);
  const svg = scatterField(
    spec, xs, ys, vals,
    `two-point values against w = ${wSel[0].toPrecision(3)}+${wSel[1].toPrecision(3)}i`,
    "value",
  );
  const vmin = Math.min(...vals);
  return {
    svg: svg.render(),
    checks: { n_points: xs.length, min_value: vmin, w: wSel },
  };
}

interface Fit {
  k: number;
  coeffs: Cx[][]; // [a][b] multiplying w^a z^b
}

export function readFit(path: string): Fit {
  let doc: any;
  try {
    doc = JSON.parse(readFileSync(path, "utf-8"));
  } catch (err) {
    throw new SchemaError(`cannot parse fit file ${path}: ${String(err)}`);
  }
  if (typeof doc.k !== "number" || !doc.coeffs?.re || !doc.coeffs?.im) {
    throw new SchemaError(`${path}: expected {k, coeffs:{re, im}}`);
  }
  const coeffs: Cx[][] = [];
  for (let a = 0; a <= doc.k; a++) {
    const row: Cx[] = [];
    for (let b = 0; b <= doc.k; b++) {
      row.push(cx(doc.coeffs.re[a][b], doc.coeffs.im[a][b]));
    }
    coeffs.push(row);
  }
  return { k: doc.k, coeffs };
}

/** Coefficients of z -> psi(w, z) for fixed w. */
function zPolynomial(fit: Fit, w: Cx): Cx[] {
  const out: Cx[] = [];
  for (let b = 0; b <= fit.k; b++) {
    let acc = cx(0);
    let wp = cx(1);
    for (let a = 0; a <= fit.k; a++) {
      acc = cadd(acc, cmul(fit.coeffs[a][b], wp));
      wp = cmul(wp, w);
    }
    out.push(acc);
  }
  return out;
}

/** Scan minima over the fitted zero set, with the containment check. */
export function renderLocus(spec: FigureSpec): FigureResult {
  if (!spec.fit) throw new SchemaError("locus figures need --fit");
  const t = readCsv(spec.input, ["re_w", "im_w", "re_z", "im_z", "value"]);
  const fit = readFit(spec.fit);
  const tol = spec.tolerance ?? 0.05;

  const hits = t.rows.map((r) => ({
    w: cx(r[0], r[1]),
    z: cx(r[2], r[3]),
    value: r[4],
  }));
  const predicted: Cx[] = [];
  const distances: number[] = [];
  for (const h of hits) {
    const roots = polyRoots(zPolynomial(fit, h.w));
    let best = Infinity;
    let bestRoot = cx(NaN, NaN);
    for (const r of roots) {
      const d = Math.hypot(r.re - h.z.re, r.im - h.z.im);
      if (d < best) {
        best = d;
        bestRoot = r;
      }
    }
    predicted.push(bestRoot);
    distances.push(best);
  }
  const maxDistance = Math.max(...distances);
  const contained = maxDistance <= tol;

  const xs = hits.map((h) => h.z.re).concat(predicted.map((p) => p.re));
  const ys = hits.map((h) => h.z.im).concat(predicted.map((p) => p.im));
  const svg = new Svg(spec.width ?? 900, spec.height ?? 700);
  const frame = new Frame(extentOf(xs, ys, spec), svg.width, svg.height);
  const unit =
    (svg.width - 2 * frame.margin) / (frame.extent.xmax - frame.extent.xmin);
  // band: tolerance-radius disks around the fitted roots
  for (const p of predicted) {
    svg.circle(frame.x(p.re), frame.y(p.im), tol * unit, "#dbe9f6");
  }
  for (const p of predicted) {
    svg.circle(frame.x(p.re), frame.y(p.im), 2.2, "#1f77b4");
  }
  for (const h of hits) {
    svg.circle(frame.x(h.z.re), frame.y(h.z.im), 3.0, "#d62728");
  }
  frame.axes(svg, "Re z", "Im z", "scan minima over the fitted zero set");
  svg.text(frame.margin, 42,
    `containment: ${contained ? "PASS" : "FAIL"} (max dist ${maxDistance.toExponential(2)}, tol ${tol})`,
    12);
  return {
    svg: svg.render(),
    checks: {
      n_hits: hits.length,
      max_distance: maxDistance,
      tolerance: tol,
      contained,
    },
  };
}

/** Boundary curvature density over the z plane. */
export function renderCurvature(spec: FigureSpec): FigureResult {
  const t = readCsv(spec.input, ["re_z", "im_z", "re_lambda", "im_lambda", "F"]);
  const xs = column(t, "re_z");
  const ys = column(t, "im_z");
  const vals = column(t, "F");
  const svg = scatterField(spec, xs, ys, vals, "boundary curvature density", "F");
  return {
    svg: svg.render(),
    checks: {
      n_points: xs.length,
      f_min: Math.min(...vals),
      f_max: Math.max(...vals),
      all_nonpositive: Math.max(...vals) <= 1e-8,
    },
  };
}

/** Log-norm decay of a scattering solution, with the tail-slope check. */
export function renderDecay(spec: FigureSpec): FigureResult {
  const t = readCsv(spec.input, ["t", "re_s1", "im_s1", "re_s2", "im_s2", "norm"]);
  const ts = column(t, "t");
  const norms = column(t, "norm");
  const logn = norms.map((v) => Math.log(Math.max(v, 1e-300)));
  const tmax = Math.max(...ts.map(Math.abs));
  const sel: number[] = [];
  for (let i = 0; i < ts.length; i++) {
    if (ts[i] >= 0.55 * tmax && ts[i] <= 0.9 * tmax) sel.push(i);
  }
  const slope = fitSlope(sel.map((i) => ts[i]), sel.map((i) => logn[i]));
  const mass = spec.mass ?? 1.0;
  const slopeDev = Math.abs(slope + mass) / mass;

  const svg = new Svg(spec.width ?? 900, spec.height ?? 700);
  const frame = new Frame(extentOf(ts, logn, spec), svg.width, svg.height);
  svg.polyline(ts.map((v, i) => [frame.x(v), frame.y(logn[i])]), "#1f77b4");
  // fitted tail line
  const t0 = 0.55 * tmax;
  const t1 = 0.9 * tmax;
  const mid = sel.reduce((acc, i) => acc + logn[i] - slope * ts[i], 0) / sel.length;
  svg.polyline(
    [
      [frame.x(t0), frame.y(slope * t0 + mid)],
      [frame.x(t1), frame.y(slope * t1 + mid)],
    ],
    "#d62728",
    2.5,
  );
  frame.axes(svg, "t", "ln |s(t)|", "decay of the forward solution");
  svg.text(frame.margin, 42,
    `tail slope ${slope.toFixed(5)} vs -m = ${(-mass).toFixed(5)} (dev ${(100 * slopeDev).toFixed(3)}%)`,
    12);
  return {
    svg: svg.render(),
    checks: { slope, mass, slope_dev: slopeDev, within_one_percent: slopeDev <= 0.01 },
  };
}

/** Pairing value against truncation length, log-distance to the last value. */
export function renderConvergence(spec: FigureSpec): FigureResult {
  const t = readCsv(spec.input, ["T", "re", "im"]);
  const ts = column(t, "T");
  const re = column(t, "re");
  const im = column(t, "im");
  const last = [re[re.length - 1], im[im.length - 1]];
  const devs = re.map((v, i) =>
    Math.log10(Math.max(Math.hypot(v - last[0], im[i] - last[1]), 1e-16)),
  );
  const n = ts.length - 1; // the last point is the reference
  const svg = new Svg(spec.width ?? 900, spec.height ?? 700);
  const frame = new Frame(
    extentOf(ts.slice(0, n), devs.slice(0, n), spec), svg.width, svg.height,
  );
  svg.polyline(
    ts.slice(0, n).map((v, i) => [frame.x(v), frame.y(devs[i])]), "#1f77b4",
  );
  for (let i = 0; i < n; i++) {
    svg.circle(frame.x(ts[i]), frame.y(devs[i]), 3, "#1f77b4");
  }
  frame.axes(svg, "truncation T", "log10 |value - final|", "truncation convergence");
  const monotone = devs.slice(0, n - 1).every((v, i) => devs[i + 1] <= v + 1e-9);
  return {
    svg: svg.render(),
    checks: { n_points: n, monotone_decrease: monotone, final_gap: devs[n - 1] },
  };
}

function fitSlope(xs: number[], ys: number[]): number {
  const n = xs.length;
  const mx = xs.reduce((a, b) => a + b, 0) / n;
  const my = ys.reduce((a, b) => a + b, 0) / n;
  let num = 0;
  let den = 0;
  for (let i = 0; i < n; i++) {
    num += (xs[i] - mx) * (ys[i] - my);
    den += (xs[i] - mx) ** 2;
  }
  return num / den;
}

export function parseComplexArg(text: string): Cx {
  const t = text.trim().replace(/\s+/g, "");
  if (!t) throw new SchemaError("empty complex value");
  if (!t.endsWith("i")) {
    const v = Number(t);
    if (Number.isNaN(v)) throw new SchemaError(`cannot parse complex value '${text}'`);
    return cx(v, 0);
  }
  const body = t.slice(0, -1);
  let split = -1;
  for (let i = body.length - 1; i > 0; i--) {
    const ch = body[i];
    if ((ch === "+" || ch === "-") && body[i - 1] !== "e" && body[i - 1] !== "E") {
      split = i;
      break;
    }
  }
  const toNum = (s: string): number => {
    if (s === "" || s === "+") return 1;
    if (s === "-") return -1;
    const v = Number(s);
    if (Number.isNaN(v)) throw new SchemaError(`cannot parse complex value '${text}'`);
    return v;
  };
  if (split < 0) {
    return cx(0, toNum(body));
  }
  const re = Number(body.slice(0, split));
  if (Number.isNaN(re)) throw new SchemaError(`cannot parse complex value '${text}'`);
  return cx(re, toNum(body.slice(split)));
}

export function render(spec: FigureSpec): FigureResult {
  switch (spec.kind) {
    case "heatmap":
      return renderHeatmap(spec);
    case "locus":
      return renderLocus(spec);
    case "curvature":
      return renderCurvature(spec);
    case "decay":
      return renderDecay(spec);
    case "convergence":
      return renderConvergence(spec);
    default:
      throw new SchemaError(`unknown figure kind '${(spec as FigureSpec).kind}'`);
  }
}
