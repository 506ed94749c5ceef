import { spawnSync } from "node:child_process";
import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";

import { describe, expect, it } from "vitest";

const ROOT = path.resolve(__dirname, "..");

function haveQtypology(): boolean {
  const probe = spawnSync("qtypology", ["--help"], { encoding: "utf8" });
  return probe.status === 0;
}

/**
 * End-to-end interoperability: the committed golden conversion must load
 * into the downstream typology pipeline with no schema errors, and the
 * anchor question must produce its expected dependency fragments.
 */
describe.skipIf(!haveQtypology())("round trip through the typology pipeline", () => {
  const work = fs.mkdtempSync(path.join(os.tmpdir(), "adapter-rt-"));
  const config = path.join(work, "config.json");
  fs.writeFileSync(config, JSON.stringify({
    paths: {
      metadata: path.join(ROOT, "golden", "metadata.jsonl"),
      parses: path.join(ROOT, "golden", "parses.conllu"),
    },
    workdir: path.join(work, "out"),
    seed: 7,
  }));

  it("ingests the golden corpus with nothing rejected", () => {
    const res = spawnSync("qtypology", ["ingest", "--config", config], { encoding: "utf8" });
    expect(res.status).toBe(0);
    const report = JSON.parse(
      fs.readFileSync(path.join(work, "out", "load_report.json"), "utf8"),
    );
    expect(report.retained).toBe(100);
    expect(report.rejected).toBe(0);
  });

  it("extracts the expected fragments for the anchor question", () => {
    const res = spawnSync("qtypology", ["fragments", "--config", config], { encoding: "utf8" });
    expect(res.status).toBe(0);
    const tsv = fs.readFileSync(path.join(work, "out", "question_fragments.tsv"), "utf8");
    const got = tsv.split("\n")
      .filter((l) => l.startsWith("pmq-0000:q:0\t"))
      .map((l) => l.split("\t")[1])
      .sort();
    expect(got).toEqual(["going→*", "going→do", "is←going", "what", "what is"].sort());
  });
});
