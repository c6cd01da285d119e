import assert from "node:assert/strict";
import { test } from "node:test";
import { existsSync, mkdtempSync, readFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { parseCsv } from "../src/csv";
import { parseArgs, renderFig1, renderFig2, run } from "../src/render";

const FIXTURES = join(__dirname, "..", "..", "tests", "fixtures");

function fixture(name: string): string {
  return join(FIXTURES, name);
}

test("fig1 renders from the miss-count fixture", () => {
  const out = join(mkdtempSync(join(tmpdir(), "fig-")), "fig1.svg");
  run({ which: "fig1", input: fixture("fig1.csv"), output: out });
  const svg = readFileSync(out, "utf8");
  assert.ok(svg.includes("<polyline"));
  assert.ok(svg.includes("jmax="));
});

test("fig2 renders from the synthetic fixture with overlay", () => {
  const out = join(mkdtempSync(join(tmpdir(), "fig-")), "fig2.svg");
  run({ which: "fig2", input: fixture("fig2.csv"), output: out });
  const svg = readFileSync(out, "utf8");
  assert.ok(svg.includes("stroke-dasharray"));
  assert.ok(svg.includes("mu-hits"));
});

test("rendering is byte-deterministic", () => {
  const dir = mkdtempSync(join(tmpdir(), "fig-"));
  const a = join(dir, "a.svg");
  const b = join(dir, "b.svg");
  run({ which: "fig1", input: fixture("fig1.csv"), output: a });
  run({ which: "fig1", input: fixture("fig1.csv"), output: b });
  assert.deepEqual(readFileSync(a), readFileSync(b));
});

test("cli overlay flags override the file comment", () => {
  const dir = mkdtempSync(join(tmpdir(), "fig-"));
  const a = join(dir, "a.svg");
  run({ which: "fig2", input: fixture("fig2.csv"), output: a, alpha: 0.5, x0: 10 });
  assert.ok(readFileSync(a, "utf8").includes("^0.5"));
});

test("empty csv leaves no output file", () => {
  const out = join(mkdtempSync(join(tmpdir(), "fig-")), "never.svg");
  assert.throws(
    () => run({ which: "fig1", input: fixture("empty.csv"), output: out }),
    /empty CSV/
  );
  assert.ok(!existsSync(out));
});

test("schema mismatch is reported with both schemas", () => {
  const out = join(mkdtempSync(join(tmpdir(), "fig-")), "never.svg");
  assert.throws(
    () => run({ which: "fig2", input: fixture("fig1.csv"), output: out }),
    /expected '# schema=collatz-abc\/fig2\/1'/
  );
  assert.ok(!existsSync(out));
});

test("fig1 rejects tables missing required columns", () => {
  const table = parseCsv("# schema=collatz-abc/fig1/1\na,b\n1,2\n", "collatz-abc/fig1/1");
  assert.throws(() => renderFig1(table), /columns/);
});

test("zero counts are omitted from log curves", () => {
  const table = parseCsv(
    "# schema=collatz-abc/fig2/1\nx,N_mu,N_abc,N_good\n10,0,1,0\n100,2,4,1\n",
    "collatz-abc/fig2/1"
  );
  const svg = renderFig2(table);
  // N_mu polyline starts at x=100 (single positive point), never at x=10
  assert.ok(svg.includes("mu-hits"));
});

test("argument parsing", () => {
  const args = parseArgs(["--which", "fig1", "--in", "a.csv", "--out", "b.svg"]);
  assert.equal(args.which, "fig1");
  assert.throws(() => parseArgs(["--which", "fig3", "--in", "a", "--out", "b"]), /fig1 or fig2/);
  assert.throws(() => parseArgs(["--in", "a"]), /required/);
  assert.throws(() => parseArgs(["--bogus", "x"]), /unknown flag/);
});
