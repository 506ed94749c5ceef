/**
 * CoNLL-U block serialization: sent_id and text comments, ten columns,
 * underscore for empty fields, one blank line after every block.
 */

import { DepToken } from "./types";

function clean(field: string): string {
  const s = field.replace(/\s+/g, " ").trim();
  return s === "" ? "_" : s;
}

export function sentenceBlock(sentId: string, text: string, tokens: DepToken[]): string {
  const lines: string[] = [];
  lines.push(`# sent_id = ${sentId}`);
  lines.push(`# text = ${text.replace(/\s+/g, " ").trim()}`);
  for (const t of tokens) {
    lines.push([
      String(t.index),
      clean(t.surface),
      clean(t.lemma),
      clean(t.upos),
      clean(t.xpos),
      "_",
      String(t.head),
      clean(t.deprel),
      "_",
      "_",
    ].join("\t"));
  }
  return lines.join("\n") + "\n\n";
}
