import { createHash } from "node:crypto";
import { writeFileSync, renameSync } from "node:fs";

import { SchemaError } from "./csv.js";
import { FigureSpec, render } from "./figures.js";

const KINDS = ["heatmap", "locus", "curvature", "decay", "convergence"] as const;

function usage(): never {
  console.error(
    "usage: node dist/cli.js <kind> --input data.csv --out figure.svg " +
      "[--fit fit.json] [--w a+bi] [--mass m] [--tolerance t] [--report out.json]\n" +
      `kinds: ${KINDS.join(", ")}`,
  );
  process.exit(2);
}

export function parseArgs(argv: string[]): { spec: FigureSpec; out: string; report?: string } {
  if (argv.length < 1) usage();
  const kind = argv[0] as FigureSpec["kind"];
  if (!KINDS.includes(kind as (typeof KINDS)[number])) usage();
  const flags = new Map<string, string>();
  for (let i = 1; i < argv.length; i += 2) {
    if (!argv[i].startsWith("--") || i + 1 >= argv.length) usage();
    flags.set(argv[i].slice(2), argv[i + 1]);
  }
  const input = flags.get("input");
  const out = flags.get("out");
  if (!input || !out) usage();
  const spec: FigureSpec = {
    kind,
    input,
    fit: flags.get("fit"),
    w: flags.get("w"),
    mass: flags.has("mass") ? Number(flags.get("mass")) : undefined,
    tolerance: flags.has("tolerance") ? Number(flags.get("tolerance")) : undefined,
    width: flags.has("width") ? Number(flags.get("width")) : undefined,
    height: flags.has("height") ? Number(flags.get("height")) : undefined,
  };
  return { spec, out, report: flags.get("report") };
}

/** Write atomically: temp file beside the target, then rename. */
function atomicWrite(path: string, content: string): void {
  const tmp = `${path}.tmp-${process.pid}`;
  writeFileSync(tmp, content);
  renameSync(tmp, path);
}

export function main(argv: string[]): number {
  let parsed;
  try {
    parsed = parseArgs(argv);
  } catch {
    return 2;
  }
  try {
    const result = render(parsed.spec);
    atomicWrite(parsed.out, result.svg);
    const sidecar = {
      kind: parsed.spec.kind,
      input: parsed.spec.input,
      width: parsed.spec.width ?? 900,
      height: parsed.spec.height ?? 700,
      sha256: createHash("sha256").update(result.svg).digest("hex"),
      checks: result.checks,
    };
    const text = JSON.stringify(sidecar, null, 2) + "\n";
    if (parsed.report) atomicWrite(parsed.report, text);
    console.log(text.trimEnd());
    return 0;
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`schema error: ${err.message}`);
      return 2;
    }
    console.error(String(err));
    return 1;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined && import.meta.url.endsWith(process.argv[1].split("/").pop() ?? "");
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
