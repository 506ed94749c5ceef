import * as fs from "node:fs";
import * as path from "node:path";

import { describe, expect, it } from "vitest";

import { UnknownModelError, convertCorpus } from "../src/convert";

const ROOT = path.resolve(__dirname, "..");

function fixtureLines(name: string): string[] {
  const text = fs.readFileSync(path.join(ROOT, "fixtures", name), "utf8");
  const lines = text.split("\n");
  if (lines[lines.length - 1] === "") lines.pop();
  return lines;
}

describe("convertCorpus", () => {
  it("rejects unknown models", () => {
    expect(() => convertCorpus([], "nonexistent-model")).toThrow(UnknownModelError);
  });

  it("converts the small fixture completely", () => {
    const res = convertCorpus(fixtureLines("raw.small.jsonl"), "builtin-en-v1");
    expect(res.report.records_read).toBe(3);
    expect(res.report.converted).toBe(3);
    expect(res.report.skipped).toEqual([]);
    expect(res.report.parse_fallbacks).toBe(0);

    const meta = res.metadataJsonl.trim().split("\n").map((l) => JSON.parse(l));
    expect(meta.map((m) => m.pair_id)).toEqual(["demo-000", "demo-001", "demo-002"]);
    expect(meta[0].asker.speaker_id).toBe("mp-alderton");
    expect(meta[0].question_text).toBe("What is the minister going to do about the policy?");

    expect(res.conllu).toContain("# sent_id = demo-001:q:1\n");
    expect(res.report.question_sentences["demo-001:q:0"]).toBe(false);
    expect(res.report.question_sentences["demo-001:q:1"]).toBe(true);
    expect(res.report.question_sentences["demo-002:a:0"]).toBe(false);
  });

  it("orders output by pair_id regardless of input order", () => {
    const lines = fixtureLines("raw.small.jsonl");
    const reversed = [...lines].reverse();
    const a = convertCorpus(lines, "builtin-en-v1");
    const b = convertCorpus(reversed, "builtin-en-v1");
    expect(b.metadataJsonl).toBe(a.metadataJsonl);
    expect(b.conllu).toBe(a.conllu);
  });

  it("skips malformed records with one reason each and keeps the rest", () => {
    const res = convertCorpus(fixtureLines("raw.edge.jsonl"), "builtin-en-v1");
    expect(res.report.records_read).toBe(11);
    expect(res.report.converted).toBe(2);
    const reasons = Object.fromEntries(res.report.skipped.map((s) => [s.where, s.reason]));
    expect(reasons["line 2"]).toBe("invalid JSON");
    expect(reasons["line 3"]).toBe("pair_id missing or empty");
    expect(reasons["line 4"]).toBe("pair_id missing or empty");
    expect(reasons["line 5"]).toBe("duplicate pair_id edge-ok");
    expect(reasons["line 6"]).toBe("date is not a valid YYYY-MM-DD string");
    expect(reasons["line 7"]).toBe("question_text missing or empty");
    expect(reasons["line 8"]).toBe("answer_text missing or empty");
    expect(reasons["line 9"]).toBe("asker.speaker_id missing or empty");
    expect(reasons["line 11"]).toBe("department is not a string or null");
    expect(res.report.skipped).toHaveLength(9);

    const meta = res.metadataJsonl.trim().split("\n").map((l) => JSON.parse(l));
    expect(meta.map((m) => m.pair_id)).toEqual(["edge-noq", "edge-ok"]);
  });

  it("converts a statement-only question side and flags no question sentence", () => {
    const res = convertCorpus(fixtureLines("raw.edge.jsonl"), "builtin-en-v1");
    const noq = Object.entries(res.report.question_sentences)
      .filter(([id]) => id.startsWith("edge-noq:q:"));
    expect(noq.length).toBeGreaterThan(0);
    expect(noq.every(([, flag]) => flag === false)).toBe(true);
  });

  it("is deterministic across repeated runs", () => {
    const lines = fixtureLines("raw.100.jsonl");
    const a = convertCorpus(lines, "builtin-en-v1");
    const b = convertCorpus(lines, "builtin-en-v1");
    expect(b.metadataJsonl).toBe(a.metadataJsonl);
    expect(b.conllu).toBe(a.conllu);
    expect(JSON.stringify(b.report)).toBe(JSON.stringify(a.report));
  });

  it("covers every emitted sentence in the question flag map", () => {
    const res = convertCorpus(fixtureLines("raw.100.jsonl"), "builtin-en-v1");
    const ids = [...res.conllu.matchAll(/^# sent_id = (.+)$/gm)].map((m) => m[1]);
    expect(ids.length).toBe(
      res.report.sentences.question + res.report.sentences.answer,
    );
    for (const id of ids) {
      expect(res.report.question_sentences).toHaveProperty(id);
    }
  });

  it("emits conllu blocks the downstream loader can rely on", () => {
    const res = convertCorpus(fixtureLines("raw.small.jsonl"), "builtin-en-v1");
    for (const block of res.conllu.trim().split("\n\n")) {
      const lines = block.split("\n");
      expect(lines[0]).toMatch(/^# sent_id = demo-\d{3}:[qa]:\d+$/);
      expect(lines[1]).toMatch(/^# text = /);
      const rows = lines.slice(2).map((l) => l.split("\t"));
      rows.forEach((cols, i) => {
        expect(cols).toHaveLength(10);
        expect(cols[0]).toBe(String(i + 1));
        expect(cols[3]).not.toBe("_");
        expect(cols[4]).not.toBe("_");
        expect(cols[7]).not.toBe("_");
      });
      expect(rows.filter((c) => c[6] === "0")).toHaveLength(1);
      expect(rows.length).toBeGreaterThan(0);
    }
  });

  it("counts tokens consistently with the emitted rows", () => {
    const res = convertCorpus(fixtureLines("raw.small.jsonl"), "builtin-en-v1");
    const rows = res.conllu.split("\n").filter((l) => l !== "" && !l.startsWith("#"));
    expect(rows.length).toBe(res.report.tokens);
  });
});
