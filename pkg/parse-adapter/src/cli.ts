#!/usr/bin/env node
/**
 * Command line front end.
 *
 * parse-adapter --in raw.jsonl --out-meta metadata.jsonl \
 *     --out-conllu parses.conllu --model builtin-en-v1 [--report report.json]
 *
 * Exit codes: 0 success, 2 usage or unknown model, 4 unreadable input.
 */

import * as path from "node:path";

import { MODELS, UnknownModelError, parseCorpus } from "./convert";

const USAGE = `usage: parse-adapter --in RAW_JSONL --out-meta METADATA_JSONL \\
    --out-conllu PARSES_CONLLU --model NAME [--report REPORT_JSON] [--quiet]

Converts raw question-answer exchange records into the metadata JSONL and
CoNLL-U parse files consumed by the typology pipeline. Known models:
${Object.keys(MODELS).sort().map((m) => `  ${m}`).join("\n")}
`;

interface CliArgs {
  input: string;
  outMeta: string;
  outConllu: string;
  model: string;
  report: string;
  quiet: boolean;
}

function parseArgs(argv: string[]): CliArgs {
  const flags: Record<string, string> = {};
  let quiet = false;
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (arg === "-h" || arg === "--help") {
      process.stdout.write(USAGE);
      process.exit(0);
    }
    if (arg === "--quiet") {
      quiet = true;
      continue;
    }
    if (!["--in", "--out-meta", "--out-conllu", "--model", "--report"].includes(arg)) {
      process.stderr.write(`parse-adapter: unknown argument ${arg}\n${USAGE}`);
      process.exit(2);
    }
    const value = argv[i + 1];
    if (value === undefined || value.startsWith("--")) {
      process.stderr.write(`parse-adapter: ${arg} requires a value\n`);
      process.exit(2);
    }
    flags[arg] = value;
    i++;
  }
  for (const required of ["--in", "--out-meta", "--out-conllu", "--model"]) {
    if (!(required in flags)) {
      process.stderr.write(`parse-adapter: missing ${required}\n${USAGE}`);
      process.exit(2);
    }
  }
  return {
    input: flags["--in"],
    outMeta: flags["--out-meta"],
    outConllu: flags["--out-conllu"],
    model: flags["--model"],
    report: flags["--report"] ?? path.join(path.dirname(flags["--out-meta"]), "report.json"),
    quiet,
  };
}

export function main(argv: string[]): void {
  const args = parseArgs(argv);
  let report;
  try {
    report = parseCorpus(args.input, args.outMeta, args.outConllu, args.model, args.report);
  } catch (err) {
    if (err instanceof UnknownModelError) {
      process.stderr.write(`parse-adapter: ${err.message}\n`);
      process.exit(2);
    }
    if (err instanceof Error && "code" in err && err.code === "ENOENT") {
      process.stderr.write(`parse-adapter: cannot read ${args.input}\n`);
      process.exit(4);
    }
    throw err;
  }
  if (!args.quiet) {
    const skipped = report.skipped.length;
    process.stdout.write(
      `converted ${report.converted}/${report.records_read} records ` +
      `(${skipped} skipped, ${report.parse_fallbacks} parse fallbacks), ` +
      `${report.sentences.question} question and ${report.sentences.answer} answer sentences\n`,
    );
  }
}

if (require.main === module) {
  main(process.argv.slice(2));
}
