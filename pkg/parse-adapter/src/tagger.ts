/**
 * Deterministic lexicon-and-rules part of speech tagger.
 *
 * Emits Penn-style fine tags (xpos) alongside coarse tags (upos) so
 * consumers can match on either column. Closed classes come from fixed
 * word lists, verbs from an inflection table generated over a base-form
 * lexicon, and everything else from suffix heuristics with noun as the
 * default.
 */

import { TaggedWord } from "./types";

const DETERMINERS = new Set([
  "the", "a", "an", "this", "that", "these", "those", "each", "every",
  "another", "no", "some", "any", "either", "neither", "such",
]);

const WH_PRONOUNS = new Set(["what", "who", "whom"]);
const WH_POSSESSIVE = "whose";
const WH_DETERMINERS = new Set(["which", "whatever", "whichever"]);
const WH_ADVERBS = new Set(["when", "where", "why", "how"]);

const PRONOUNS = new Set([
  "i", "you", "he", "she", "it", "we", "they",
  "me", "him", "her", "us", "them",
  "myself", "yourself", "himself", "herself", "itself", "ourselves", "themselves",
]);

const POSSESSIVES = new Set(["my", "your", "his", "its", "our", "their"]);

const MODALS = new Set([
  "will", "would", "can", "could", "shall", "should", "may", "might", "must",
]);

const BE_FORMS: Record<string, string> = {
  am: "VBP", is: "VBZ", are: "VBP", was: "VBD", were: "VBD",
  be: "VB", been: "VBN", being: "VBG",
};

const HAVE_FORMS: Record<string, string> = {
  have: "VBP", has: "VBZ", had: "VBD", having: "VBG",
};

const DO_FORMS: Record<string, string> = {
  do: "VBP", does: "VBZ", did: "VBD", done: "VBN", doing: "VBG",
};

const PREPOSITIONS = new Set([
  "of", "in", "on", "at", "by", "for", "with", "from", "about", "against",
  "between", "during", "after", "before", "over", "under", "through",
  "across", "towards", "toward", "within", "without", "into", "onto",
  "upon", "since", "until", "behind", "near", "regarding", "concerning",
]);

const COORDINATORS = new Set(["and", "or", "but", "nor"]);

const SUBORDINATORS = new Set([
  "that", "if", "whether", "because", "although", "while", "unless",
]);

const ADVERBS = new Set([
  "not", "never", "also", "very", "too", "so", "still", "just", "now",
  "then", "soon", "already", "again", "here", "there", "yet", "often",
  "always", "really", "simply", "quite", "earlier", "shortly", "today",
  "forward", "ahead",
]);

const INTENSIFIERS = new Set(["very", "so", "too", "quite", "really"]);

const NUMBER_WORDS = new Set([
  "one", "two", "three", "four", "five", "six", "seven", "eight", "nine",
  "ten", "twenty", "fifty", "hundred", "thousand", "million", "billion",
]);

const ADJECTIVES = new Set([
  "unacceptable", "accurate", "aware", "urgent", "serious", "significant",
  "important", "full", "local", "honourable", "real", "clear", "new",
  "vital", "essential", "fair", "adequate", "safe", "modern", "affordable",
  "many", "other", "last", "next", "own", "public", "rural", "national",
  "extra", "major", "poor", "wrong", "right", "necessary", "due",
  "recent", "more", "less", "better", "worse", "further", "several", "ready",
]);

const VERB_BASES = [
  "go", "make", "take", "give", "tell", "ask", "ensure", "explain",
  "confirm", "act", "plan", "propose", "publish", "fund", "support",
  "protect", "deliver", "address", "update", "report", "assess", "review",
  "guarantee", "improve", "provide", "tackle", "investigate", "extend",
  "announce", "introduce", "implement", "accept", "visit", "meet",
  "discuss", "agree", "answer", "invest", "refer", "need", "require",
  "affect", "fail", "wait", "struggle", "believe", "expect", "deserve",
  "demand", "commit", "consider", "continue", "remain", "work", "happen",
  "intend", "listen", "apologise", "recognise", "restore", "rebuild",
  "reopen", "modernise", "upgrade", "repair", "inspect", "monitor",
  "consult", "respond", "intervene", "allocate", "recruit", "train",
  "build", "cut", "close", "delay", "ignore", "promise", "welcome",
  "share", "raise", "write", "speak", "look", "press", "urge", "bring",
  "set", "put", "keep", "see", "know", "think", "say", "suffer", "serve",
];

const IRREGULAR_PAST: Record<string, { vbd: string; vbn: string }> = {
  go: { vbd: "went", vbn: "gone" },
  make: { vbd: "made", vbn: "made" },
  take: { vbd: "took", vbn: "taken" },
  give: { vbd: "gave", vbn: "given" },
  tell: { vbd: "told", vbn: "told" },
  meet: { vbd: "met", vbn: "met" },
  build: { vbd: "built", vbn: "built" },
  cut: { vbd: "cut", vbn: "cut" },
  put: { vbd: "put", vbn: "put" },
  set: { vbd: "set", vbn: "set" },
  keep: { vbd: "kept", vbn: "kept" },
  see: { vbd: "saw", vbn: "seen" },
  know: { vbd: "knew", vbn: "known" },
  think: { vbd: "thought", vbn: "thought" },
  say: { vbd: "said", vbn: "said" },
  speak: { vbd: "spoke", vbn: "spoken" },
  bring: { vbd: "brought", vbn: "brought" },
  write: { vbd: "wrote", vbn: "written" },
};

// final consonant doubles before -ing/-ed
const DOUBLE_FINAL = new Set(["plan", "commit", "refer", "cut", "put", "set"]);

function inflect(base: string): Record<string, string> {
  const out: Record<string, string> = { [base]: "VB" };
  if (/(s|x|z|ch|sh)$/.test(base)) out[base + "es"] = "VBZ";
  else if (/[^aeiou]y$/.test(base)) out[base.slice(0, -1) + "ies"] = "VBZ";
  else out[base + "s"] = "VBZ";
  let stem = base;
  if (DOUBLE_FINAL.has(base)) stem = base + base[base.length - 1];
  else if (/e$/.test(base) && !/ee$/.test(base)) stem = base.slice(0, -1);
  out[stem + "ing"] = "VBG";
  const irr = IRREGULAR_PAST[base];
  if (irr) {
    out[irr.vbd] = "VBD";
    out[irr.vbn] = "VBN";
  } else {
    let past: string;
    if (/e$/.test(base)) past = base + "d";
    else if (/[^aeiou]y$/.test(base)) past = base.slice(0, -1) + "ied";
    else if (DOUBLE_FINAL.has(base)) past = base + base[base.length - 1] + "ed";
    else past = base + "ed";
    out[past] = "VBD|VBN";
  }
  return out;
}

const VERB_FORMS = new Map<string, { lemma: string; xpos: string }>();
for (const base of VERB_BASES) {
  for (const [form, xpos] of Object.entries(inflect(base))) {
    if (!VERB_FORMS.has(form)) VERB_FORMS.set(form, { lemma: base, xpos });
  }
}

const PUNCT_XPOS: Record<string, string> = {
  ".": ".", "?": ".", "!": ".", ",": ",", ";": ":", ":": ":",
  "(": "-LRB-", ")": "-RRB-", '"': "''", "'": "''",
};

function singularize(word: string): string {
  if (/ies$/.test(word) && word.length > 4) return word.slice(0, -3) + "y";
  if (/(xes|ses|zes|ches|shes)$/.test(word)) return word.slice(0, -2);
  if (/s$/.test(word) && !/ss$/.test(word)) return word.slice(0, -1);
  return word;
}

const NOMINAL_XPOS = new Set(["NN", "NNS", "NNP", "CD", "JJ"]);
const VERBAL_XPOS = new Set(["VB", "VBP", "VBZ", "VBD", "VBG", "VBN", "MD"]);

type Slot = { surface: string; lower: string; lemma: string; upos: string; xpos: string };

function lexiconTag(slot: Slot, next: Slot | undefined): boolean {
  const w = slot.lower;
  if (PUNCT_XPOS[slot.surface] !== undefined || /^[^\w]$/.test(slot.surface)) {
    slot.xpos = PUNCT_XPOS[slot.surface] ?? "SYM";
    slot.upos = slot.xpos === "SYM" ? "SYM" : "PUNCT";
    return true;
  }
  if (/^\d/.test(slot.surface)) {
    slot.xpos = "CD"; slot.upos = "NUM";
    return true;
  }
  if (w === "to") {
    // particle before a base verb, preposition otherwise
    const verbal = next !== undefined && (VERB_FORMS.get(next.lower)?.xpos === "VB"
      || next.lower in BE_FORMS || next.lower in DO_FORMS || next.lower in HAVE_FORMS);
    if (verbal) { slot.xpos = "TO"; slot.upos = "PART"; }
    else { slot.xpos = "IN"; slot.upos = "ADP"; }
    return true;
  }
  if (w === "there") { slot.xpos = "EX"; slot.upos = "PRON"; return true; }
  if (w === WH_POSSESSIVE) { slot.xpos = "WP$"; slot.upos = "PRON"; return true; }
  if (WH_DETERMINERS.has(w)) { slot.xpos = "WDT"; slot.upos = "DET"; return true; }
  if (WH_PRONOUNS.has(w)) {
    // "what steps", "what measures": determiner reading before a nominal
    const det = w === "what" && next !== undefined
      && (NOMINAL_XPOS.has(provisionalXpos(next)) || DETERMINERS.has(next.lower));
    if (det && next !== undefined && !DETERMINERS.has(next.lower)) {
      slot.xpos = "WDT"; slot.upos = "DET";
    } else {
      slot.xpos = "WP"; slot.upos = "PRON";
    }
    return true;
  }
  if (WH_ADVERBS.has(w)) { slot.xpos = "WRB"; slot.upos = "ADV"; return true; }
  if (POSSESSIVES.has(w)) { slot.xpos = "PRP$"; slot.upos = "PRON"; return true; }
  if (PRONOUNS.has(w)) { slot.xpos = "PRP"; slot.upos = "PRON"; return true; }
  if (MODALS.has(w)) { slot.xpos = "MD"; slot.upos = "AUX"; return true; }
  if (w in BE_FORMS) { slot.xpos = BE_FORMS[w]; slot.upos = "AUX"; slot.lemma = "be"; return true; }
  if (w in HAVE_FORMS) { slot.xpos = HAVE_FORMS[w]; slot.upos = "VERB"; slot.lemma = "have"; return true; }
  if (w in DO_FORMS) { slot.xpos = DO_FORMS[w]; slot.upos = "VERB"; slot.lemma = "do"; return true; }
  if (COORDINATORS.has(w)) { slot.xpos = "CC"; slot.upos = "CCONJ"; return true; }
  if (SUBORDINATORS.has(w) && w !== "that") { slot.xpos = "IN"; slot.upos = "SCONJ"; return true; }
  if (DETERMINERS.has(w)) { slot.xpos = "DT"; slot.upos = "DET"; return true; }
  if (PREPOSITIONS.has(w)) { slot.xpos = "IN"; slot.upos = "ADP"; return true; }
  if (ADVERBS.has(w)) { slot.xpos = "RB"; slot.upos = "ADV"; return true; }
  if (NUMBER_WORDS.has(w)) { slot.xpos = "CD"; slot.upos = "NUM"; return true; }
  return false;
}

// a cheap class guess used only for what/which disambiguation lookahead
function provisionalXpos(slot: Slot): string {
  const w = slot.lower;
  if (ADJECTIVES.has(w)) return "JJ";
  const v = VERB_FORMS.get(w);
  if (v) return v.xpos.split("|")[0];
  if (DETERMINERS.has(w) || PRONOUNS.has(w) || PREPOSITIONS.has(w) || MODALS.has(w)
    || w in BE_FORMS || w in DO_FORMS || w in HAVE_FORMS || ADVERBS.has(w)) return "X";
  return "NN";
}

/** Tag one tokenized sentence. Deterministic; no state between calls. */
export function tagTokens(words: string[]): TaggedWord[] {
  const slots: Slot[] = words.map((surface) => ({
    surface,
    lower: surface.toLowerCase(),
    lemma: surface.toLowerCase(),
    upos: "",
    xpos: "",
  }));

  for (let i = 0; i < slots.length; i++) {
    const slot = slots[i];
    if (lexiconTag(slot, slots[i + 1])) continue;
    const w = slot.lower;
    const prev = i > 0 ? slots[i - 1] : undefined;
    const verb = VERB_FORMS.get(w);
    const nominalContext = prev !== undefined
      && (prev.xpos === "DT" || prev.xpos === "JJ" || prev.xpos === "PRP$"
        || prev.xpos === "WDT" || prev.xpos === "CD");
    if (verb && !nominalContext) {
      slot.xpos = verb.xpos; slot.lemma = verb.lemma; slot.upos = "VERB";
      continue;
    }
    if (ADJECTIVES.has(w)) { slot.xpos = "JJ"; slot.upos = "ADJ"; continue; }
    if (/ly$/.test(w) && w.length > 3) { slot.xpos = "RB"; slot.upos = "ADV"; continue; }
    if (i > 0 && /^[A-Z]/.test(slot.surface)) { slot.xpos = "NNP"; slot.upos = "PROPN"; continue; }
    // morphological guesses for verbs outside the lexicon
    if (/ing$/.test(w) && w.length > 5 && !nominalContext) {
      slot.xpos = "VBG"; slot.upos = "VERB"; slot.lemma = w.slice(0, -3);
      continue;
    }
    if (/ed$/.test(w) && w.length > 4 && !nominalContext) {
      slot.xpos = "VBD|VBN"; slot.upos = "VERB"; slot.lemma = w.slice(0, -1);
      continue;
    }
    // deliberately narrow: -al/-ent/-ant words are as often nouns
    if (!verb && /(ous|ful|ive|able|ible|ic)$/.test(w) && w.length > 4) {
      slot.xpos = "JJ"; slot.upos = "ADJ"; continue;
    }
    // verb-form words after a determiner or attributive read as nouns
    if (/s$/.test(w) && !/(ss|us|is)$/.test(w)) {
      slot.xpos = "NNS"; slot.upos = "NOUN"; slot.lemma = singularize(w);
    } else {
      slot.xpos = "NN"; slot.upos = "NOUN";
    }
  }

  // second pass: context-dependent refinements
  for (let i = 0; i < slots.length; i++) {
    const slot = slots[i];
    // lexicon-fixed finite forms read as base after infinitival "to"
    if (i > 0 && slots[i - 1].xpos === "TO"
      && (slot.lemma === "be" || slot.lemma === "do" || slot.lemma === "have")) {
      slot.xpos = "VB";
    }
    // VBD|VBN: participle after a be/have auxiliary within reach, else past
    if (slot.xpos === "VBD|VBN") {
      let participle = false;
      for (let j = i - 1; j >= 0 && j >= i - 3; j--) {
        const p = slots[j];
        if (p.lemma === "be" || p.lemma === "have") { participle = true; break; }
        if (!(p.xpos === "RB" || p.upos === "ADV")) break;
      }
      slot.xpos = participle ? "VBN" : "VBD";
    }
    // "that" heading a clause after a verb reads as a subordinator
    if (slot.lower === "that" && slot.xpos === "DT") {
      const prev = i > 0 ? slots[i - 1] : undefined;
      if (prev !== undefined && (VERBAL_XPOS.has(prev.xpos) || prev.xpos === "JJ")) {
        slot.xpos = "IN"; slot.upos = "SCONJ";
      }
    }
    // do/have acting as auxiliaries for a later verb
    if ((slot.lemma === "do" || slot.lemma === "have") && slot.upos === "VERB") {
      const wanted = slot.lemma === "do" ? "VB" : "VBN";
      for (let j = i + 1; j < slots.length && j <= i + 6; j++) {
        const q = slots[j];
        if (q.xpos === wanted || q.xpos === "VBD|VBN") { slot.upos = "AUX"; break; }
        if (q.upos === "PUNCT" || q.xpos === "CC" || q.xpos === "IN") break;
      }
    }
  }

  return slots.map(({ surface, lemma, upos, xpos }) => ({ surface, lemma, upos, xpos }));
}
