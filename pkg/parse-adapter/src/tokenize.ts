/**
 * Sentence segmentation and word tokenization.
 *
 * Segmentation splits on sentence-final . ? ! keeping the terminator with
 * its sentence; a handful of title abbreviations are protected. The rule
 * downstream stages rely on: a sentence is a question iff its trimmed
 * text ends with a question mark.
 */

const ABBREVIATIONS = new Set(["mr", "mrs", "ms", "dr", "prof", "hon", "st", "no"]);

export function segmentSentences(text: string): string[] {
  const out: string[] = [];
  let start = 0;
  for (let i = 0; i < text.length; i++) {
    const ch = text[i];
    if (ch !== "." && ch !== "?" && ch !== "!") continue;
    if (ch === ".") {
      // protect "Mr." etc: the dot belongs to a known abbreviation
      const before = text.slice(start, i);
      const m = before.match(/([A-Za-z]+)$/);
      if (m && ABBREVIATIONS.has(m[1].toLowerCase())) continue;
      // decimal point
      if (/\d$/.test(before) && /^\d/.test(text.slice(i + 1))) continue;
    }
    // absorb any run of terminators (e.g. "?!")
    let end = i + 1;
    while (end < text.length && "?!.".includes(text[end])) end++;
    const sentence = text.slice(start, end).trim();
    if (sentence) out.push(sentence);
    start = end;
    i = end - 1;
  }
  const tail = text.slice(start).trim();
  if (tail) out.push(tail);
  return out;
}

// Words (with internal apostrophes/hyphens), numbers (with , . separators),
// everything else one character at a time.
const TOKEN_RE = /[A-Za-z]+(?:['’-][A-Za-z]+)*|\d+(?:[.,]\d+)*|[^\sA-Za-z\d]/g;

export function tokenize(sentence: string): string[] {
  return sentence.match(TOKEN_RE) ?? [];
}

export function isQuestionText(sentence: string): boolean {
  return sentence.trimEnd().endsWith("?");
}
