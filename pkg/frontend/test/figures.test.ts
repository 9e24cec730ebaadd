import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { SchemaError, readCsv } from "../src/csv.js";
import { cx, polyRoots, polyEval, cabs } from "../src/complexpoly.js";
import {
  parseComplexArg,
  render,
  renderConvergence,
  renderCurvature,
  renderDecay,
  renderHeatmap,
  renderLocus,
} from "../src/figures.js";

const DATA = join(__dirname, "..", "testdata");

describe("csv", () => {
  it("rejects malformed files", () => {
    const dir = mkdtempSync(join(tmpdir(), "viz-"));
    const bad = join(dir, "bad.csv");
    writeFileSync(bad, "re_w,im_w\n1,notanumber\n");
    expect(() => readCsv(bad, ["re_w", "im_w"])).toThrow(SchemaError);
    const missing = join(dir, "missing.csv");
    writeFileSync(missing, "a,b\n1,2\n");
    expect(() => readCsv(missing, ["re_w"])).toThrow(SchemaError);
  });
});

describe("complex polynomial roots", () => {
  it("solves a factored cubic", () => {
    // (z - 1)(z - 2i)(z + 0.5) expanded, ascending coefficients
    const roots = [cx(1), cx(0, 2), cx(-0.5)];
    let coeffs = [cx(1)];
    for (const r of roots) {
      const next = coeffs.map(() => cx(0)).concat([cx(0)]);
      for (let i = 0; i < coeffs.length; i++) {
        next[i + 1] = { re: next[i + 1].re + coeffs[i].re, im: next[i + 1].im + coeffs[i].im };
        next[i] = {
          re: next[i].re - (coeffs[i].re * r.re - coeffs[i].im * r.im),
          im: next[i].im - (coeffs[i].re * r.im + coeffs[i].im * r.re),
        };
      }
      coeffs = next;
    }
    const found = polyRoots(coeffs);
    expect(found.length).toBe(3);
    for (const r of roots) {
      const best = Math.min(...found.map((f) => Math.hypot(f.re - r.re, f.im - r.im)));
      expect(best).toBeLessThan(1e-9);
    }
    for (const f of found) {
      expect(cabs(polyEval(coeffs, f))).toBeLessThan(1e-9);
    }
  });
});

describe("parseComplexArg", () => {
  it("handles the i notation", () => {
    expect(parseComplexArg("2+0i")).toEqual({ re: 2, im: 0 });
    expect(parseComplexArg("-0.5-1.5i")).toEqual({ re: -0.5, im: -1.5 });
    expect(parseComplexArg("2i")).toEqual({ re: 0, im: 2 });
    expect(parseComplexArg("1e-3+2i")).toEqual({ re: 1e-3, im: 2 });
    expect(parseComplexArg("0.25")).toEqual({ re: 0.25, im: 0 });
    expect(() => parseComplexArg("zz")).toThrow(SchemaError);
  });
});

describe("all five figure kinds render from the shipped samples", () => {
  it("heatmap", () => {
    const out = renderHeatmap({ kind: "heatmap", input: join(DATA, "grid.csv") });
    expect(out.svg).toContain("<svg");
    expect(out.svg).toContain("circle");
    expect(out.checks.n_points).toBeGreaterThan(4);
  });

  it("locus with containment at 0.05", () => {
    const out = renderLocus({
      kind: "locus",
      input: join(DATA, "locus.csv"),
      fit: join(DATA, "fit.json"),
      tolerance: 0.05,
    });
    expect(out.svg).toContain("<svg");
    expect(out.checks.contained).toBe(true);
    expect(out.checks.max_distance as number).toBeLessThan(0.05);
  });

  it("curvature map", () => {
    const out = renderCurvature({ kind: "curvature", input: join(DATA, "map.csv") });
    expect(out.svg).toContain("<svg");
    expect(out.checks.all_nonpositive).toBe(true);
  });

  it("decay with tail slope within 1 percent", () => {
    const out = renderDecay({
      kind: "decay",
      input: join(DATA, "trajectory.csv"),
      mass: 1.0,
    });
    expect(out.svg).toContain("polyline");
    expect(out.checks.within_one_percent).toBe(true);
    expect(Math.abs((out.checks.slope as number) + 1.0)).toBeLessThan(0.01);
  });

  it("convergence", () => {
    const out = renderConvergence({
      kind: "convergence",
      input: join(DATA, "convergence.csv"),
    });
    expect(out.svg).toContain("polyline");
    expect(out.checks.n_points).toBeGreaterThan(2);
  });
});

describe("determinism", () => {
  it("renders are pure functions of the inputs", () => {
    const spec = {
      kind: "locus" as const,
      input: join(DATA, "locus.csv"),
      fit: join(DATA, "fit.json"),
    };
    const a = render(spec);
    const b = render(spec);
    expect(a.svg).toBe(b.svg);
  });

  it("fixed dimensions", () => {
    const out = render({ kind: "heatmap", input: join(DATA, "grid.csv") });
    expect(out.svg).toContain('width="900" height="700"');
  });
});
