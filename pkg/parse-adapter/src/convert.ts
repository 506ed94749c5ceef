/**
 * Conversion core: raw exchange records in, metadata JSONL plus CoNLL-U
 * parses plus a conversion report out.
 *
 * The converter is pure (strings in, strings out) so tests can run it
 * in memory; parseCorpus wraps it with file handling.
 */

import * as fs from "node:fs";
import * as path from "node:path";

import { sentenceBlock } from "./conllu";
import { parseSentence } from "./parser";
import { tagTokens } from "./tagger";
import { isQuestionText, segmentSentences, tokenize } from "./tokenize";
import {
  ConversionReport,
  ConversionResult,
  DepToken,
  FragmentConfigHint,
  RawRecord,
  RawSpeaker,
  SkippedRecord,
} from "./types";

/* Registry of pinned parser models. The version number is part of the
   output contract: bumping it means regenerated parses may differ. */
export const MODELS: Record<string, number> = {
  "builtin-en-v1": 1,
};

export class UnknownModelError extends Error {
  constructor(model: string) {
    super(`unknown parser model: ${model}`);
    this.name = "UnknownModelError";
  }
}

/* Mirrors the downstream extractor's defaults for this tag scheme, so a
   consumer can drop the hint straight into its fragment configuration. */
export function recommendedFragmentConfig(): FragmentConfigHint {
  return {
    np_dep_labels: ["attr", "dobj", "iobj", "nsubj", "nsubjpass", "pobj"],
    pronoun_pos_tags: ["PRON", "PRP", "PRP$"],
    wdt_pos_tags: ["WDT"],
    recursion_dep_labels: ["advcl", "ccomp", "conj", "parataxis"],
    punct_dep_labels: ["punct"],
    punct_pos_tags: [
      "PUNCT", ".", ",", ":", "``", "''", "-LRB-", "-RRB-", "HYPH", "NFP", "SYM",
    ].sort(),
    use_lemma: false,
  };
}

const DATE_RE = /^\d{4}-\d{2}-\d{2}$/;

function isValidDate(s: string): boolean {
  if (!DATE_RE.test(s)) return false;
  const d = new Date(s + "T00:00:00Z");
  return !Number.isNaN(d.getTime()) && d.toISOString().slice(0, 10) === s;
}

function isPlainObject(v: unknown): v is Record<string, unknown> {
  return typeof v === "object" && v !== null && !Array.isArray(v);
}

/* Validates one speaker object; returns a normalized copy or an error string. */
function checkSpeaker(v: unknown, role: string): { speaker?: RawSpeaker; error?: string } {
  if (!isPlainObject(v)) return { error: `${role} is not an object` };
  const id = v["speaker_id"];
  if (typeof id !== "string" || id.trim() === "") {
    return { error: `${role}.speaker_id missing or empty` };
  }
  const party = v["party"] ?? null;
  if (party !== null && typeof party !== "string") {
    return { error: `${role}.party is not a string or null` };
  }
  const office = v["first_office_date"] ?? null;
  if (office !== null && (typeof office !== "string" || !isValidDate(office))) {
    return { error: `${role}.first_office_date is not a valid date or null` };
  }
  for (const key of ["is_minister", "is_shadow"] as const) {
    const flag = v[key] ?? null;
    if (flag !== null && typeof flag !== "boolean") {
      return { error: `${role}.${key} is not a boolean or null` };
    }
  }
  return {
    speaker: {
      speaker_id: id,
      party: party as string | null,
      first_office_date: office as string | null,
      is_minister: (v["is_minister"] ?? null) as boolean | null,
      is_shadow: (v["is_shadow"] ?? null) as boolean | null,
    },
  };
}

function checkRecord(v: unknown): { record?: RawRecord; error?: string } {
  if (!isPlainObject(v)) return { error: "record is not an object" };
  const pairId = v["pair_id"];
  if (typeof pairId !== "string" || pairId.trim() === "") {
    return { error: "pair_id missing or empty" };
  }
  const date = v["date"];
  if (typeof date !== "string" || !isValidDate(date)) {
    return { error: "date is not a valid YYYY-MM-DD string" };
  }
  const asker = checkSpeaker(v["asker"], "asker");
  if (asker.error) return { error: asker.error };
  const answerer = checkSpeaker(v["answerer"], "answerer");
  if (answerer.error) return { error: answerer.error };
  const department = v["department"] ?? null;
  if (department !== null && typeof department !== "string") {
    return { error: "department is not a string or null" };
  }
  const qText = v["question_text"];
  if (typeof qText !== "string" || qText.trim() === "") {
    return { error: "question_text missing or empty" };
  }
  const aText = v["answer_text"];
  if (typeof aText !== "string" || aText.trim() === "") {
    return { error: "answer_text missing or empty" };
  }
  return {
    record: {
      pair_id: pairId,
      date,
      asker: asker.speaker!,
      answerer: answerer.speaker!,
      department: department as string | null,
      question_text: qText,
      answer_text: aText,
    },
  };
}

interface ParsedSide {
  texts: string[];
  parses: DepToken[][];
  fallbacks: number;
  tokens: number;
}

function parseSide(text: string): ParsedSide {
  const side: ParsedSide = { texts: [], parses: [], fallbacks: 0, tokens: 0 };
  for (const sent of segmentSentences(text)) {
    const words = tokenize(sent);
    if (words.length === 0) continue;
    const tagged = tagTokens(words);
    const parsed = parseSentence(tagged);
    side.texts.push(sent);
    side.parses.push(parsed.tokens);
    side.tokens += parsed.tokens.length;
    if (parsed.usedFallback) side.fallbacks += 1;
  }
  return side;
}

function metadataLine(r: RawRecord): string {
  const speaker = (s: RawSpeaker) => ({
    speaker_id: s.speaker_id,
    party: s.party,
    first_office_date: s.first_office_date,
    is_minister: s.is_minister,
    is_shadow: s.is_shadow,
  });
  return JSON.stringify({
    pair_id: r.pair_id,
    date: r.date,
    asker: speaker(r.asker),
    answerer: speaker(r.answerer),
    department: r.department,
    question_text: r.question_text,
    answer_text: r.answer_text,
  });
}

export function convertCorpus(rawLines: string[], model: string): ConversionResult {
  if (!(model in MODELS)) throw new UnknownModelError(model);

  const skipped: SkippedRecord[] = [];
  const seen = new Set<string>();
  const kept: { record: RawRecord; question: ParsedSide; answer: ParsedSide }[] = [];
  let recordsRead = 0;

  rawLines.forEach((line, i) => {
    const where = `line ${i + 1}`;
    if (line.trim() === "") return;
    recordsRead += 1;
    let raw: unknown;
    try {
      raw = JSON.parse(line);
    } catch {
      skipped.push({ where, reason: "invalid JSON" });
      return;
    }
    const checked = checkRecord(raw);
    if (checked.error) {
      skipped.push({ where, reason: checked.error });
      return;
    }
    const record = checked.record!;
    if (seen.has(record.pair_id)) {
      skipped.push({ where, reason: `duplicate pair_id ${record.pair_id}` });
      return;
    }
    seen.add(record.pair_id);
    const question = parseSide(record.question_text);
    const answer = parseSide(record.answer_text);
    if (question.texts.length === 0) {
      skipped.push({ where, reason: "question produced no sentences" });
      return;
    }
    if (answer.texts.length === 0) {
      skipped.push({ where, reason: "answer produced no sentences" });
      return;
    }
    kept.push({ record, question, answer });
  });

  kept.sort((a, b) =>
    a.record.pair_id < b.record.pair_id ? -1 : a.record.pair_id > b.record.pair_id ? 1 : 0,
  );

  const metaLines: string[] = [];
  const blocks: string[] = [];
  const questionFlags: Record<string, boolean> = {};
  const labels = new Set<string>();
  let qSentences = 0;
  let aSentences = 0;
  let tokens = 0;
  let fallbacks = 0;

  for (const { record, question, answer } of kept) {
    metaLines.push(metadataLine(record));
    const sides: [string, ParsedSide][] = [["q", question], ["a", answer]];
    for (const [tag, side] of sides) {
      side.texts.forEach((text, i) => {
        const sentId = `${record.pair_id}:${tag}:${i}`;
        blocks.push(sentenceBlock(sentId, text, side.parses[i]));
        questionFlags[sentId] = isQuestionText(text);
        for (const t of side.parses[i]) labels.add(t.deprel);
      });
      tokens += side.tokens;
      fallbacks += side.fallbacks;
    }
    qSentences += question.texts.length;
    aSentences += answer.texts.length;
  }

  const orderedFlags: Record<string, boolean> = {};
  for (const key of Object.keys(questionFlags).sort()) {
    orderedFlags[key] = questionFlags[key];
  }

  const report: ConversionReport = {
    model,
    model_version: MODELS[model],
    tag_scheme: {
      pos: "penn-treebank xpos with coarse upos",
      deps: "stanford-style grammatical relations",
      labels: [...labels].sort(),
    },
    records_read: recordsRead,
    converted: kept.length,
    skipped,
    sentences: { question: qSentences, answer: aSentences },
    tokens,
    parse_fallbacks: fallbacks,
    question_sentences: orderedFlags,
    recommended_fragment_config: recommendedFragmentConfig(),
  };

  return {
    metadataJsonl: metaLines.map((l) => l + "\n").join(""),
    conllu: blocks.join(""),
    report,
  };
}

export function parseCorpus(
  rawPath: string,
  outMetadataPath: string,
  outConlluPath: string,
  model: string,
  reportPath?: string,
): ConversionReport {
  const text = fs.readFileSync(rawPath, "utf8");
  const lines = text.split("\n");
  if (lines.length > 0 && lines[lines.length - 1] === "") lines.pop();
  const result = convertCorpus(lines, model);
  for (const p of [outMetadataPath, outConlluPath, reportPath]) {
    if (p) fs.mkdirSync(path.dirname(path.resolve(p)), { recursive: true });
  }
  fs.writeFileSync(outMetadataPath, result.metadataJsonl);
  fs.writeFileSync(outConlluPath, result.conllu);
  if (reportPath) {
    fs.writeFileSync(reportPath, JSON.stringify(result.report, null, 2) + "\n");
  }
  return result.report;
}
