/**
 * Deterministic rule-based dependency parser.
 *
 * Produces Stanford-style arcs over the tagger's output: noun phrases are
 * chunked first, clauses are split at top-level coordinators and
 * subordinators, and each clause resolves auxiliaries, subject, object,
 * prepositional attachment, and infinitive chains around one main verb.
 * Copular clauses follow the predicate-as-head convention. Prepositional
 * phrases attach to the immediately preceding nominal when there is one,
 * otherwise to the nearest verb on the left.
 *
 * Every sentence yields a single rooted tree: anything the rules leave
 * unattached falls back to a generic dependent of the root, and a parse
 * that still fails validation is replaced by a flat tree (counted by the
 * caller via the fallback flag).
 */

import { DepToken, TaggedWord } from "./types";

const VERBAL = new Set(["MD", "VB", "VBP", "VBZ", "VBD", "VBG", "VBN"]);
const NOMINAL = new Set(["NN", "NNS", "NNP", "CD"]);
const CHUNK_OPENERS = new Set(["DT", "WDT", "PRP$", "WP$"]);
const CHUNK_BODY = new Set(["JJ", "CD", "NN", "NNS", "NNP"]);
const SINGLE_PRON = new Set(["PRP", "WP", "EX"]);
const DEMONSTRATIVES = new Set(["this", "that", "these", "those"]);
const INTENSIFIERS = new Set(["very", "so", "too", "quite", "really"]);
const COMPLEMENT_SCONJ = new Set(["that", "whether", "if"]);

const ROOT = -2;
const UNSET = -1;

type Chunk = { start: number; end: number; head: number; wh: boolean };

type State = {
  tags: TaggedWord[];
  head: number[];
  deprel: string[];
  inChunk: number[]; // chunk index per token or -1
  chunks: Chunk[];
};

function attach(st: State, child: number, head: number, rel: string): void {
  if (child === head || st.head[child] !== UNSET) return;
  st.head[child] = head;
  st.deprel[child] = rel;
}

function isWh(xpos: string): boolean {
  return xpos === "WP" || xpos === "WDT" || xpos === "WP$";
}

function chunkNouns(st: State): void {
  const { tags } = st;
  const n = tags.length;
  let i = 0;
  while (i < n) {
    const x = tags[i].xpos;
    if (st.inChunk[i] >= 0) { i++; continue; }
    // single-token pronoun chunks
    if (SINGLE_PRON.has(x)) {
      pushChunk(st, i, i, i);
      i++;
      continue;
    }
    // bare demonstrative: "That is not the case."
    if (x === "DT" && DEMONSTRATIVES.has(tags[i].surface.toLowerCase())
      && (i + 1 >= n || !(CHUNK_BODY.has(tags[i + 1].xpos) || CHUNK_OPENERS.has(tags[i + 1].xpos)))) {
      pushChunk(st, i, i, i);
      i++;
      continue;
    }
    // "how many X" folds the measure phrase into the chunk
    let start = i;
    let j = i;
    if (x === "WRB" && j + 1 < n && tags[j + 1].xpos === "JJ") {
      let k = j + 2;
      while (k < n && CHUNK_BODY.has(tags[k].xpos)) k++;
      if (k > j + 2) j = j + 1; // step onto the JJ, nominal run confirmed
      else { i++; continue; }
    } else if (CHUNK_OPENERS.has(x)) {
      j = i + 1;
    } else if (!CHUNK_BODY.has(x)) {
      i++;
      continue;
    }
    let end = j;
    let sawNominal = false;
    while (end < n && CHUNK_BODY.has(tags[end].xpos)) {
      // a JJ after the head noun is predicative, not part of the phrase
      if (tags[end].xpos === "JJ" && sawNominal) break;
      if (NOMINAL.has(tags[end].xpos)) sawNominal = true;
      end++;
    }
    end--;
    const nominals: number[] = [];
    for (let k = start; k <= end; k++) if (NOMINAL.has(tags[k].xpos)) nominals.push(k);
    if (nominals.length === 0) {
      // "which" with no nominal behaves like a pronoun
      if (isWh(x)) { pushChunk(st, i, i, i); }
      i++;
      continue;
    }
    let head = nominals[nominals.length - 1];
    for (let k = nominals.length - 1; k >= 0; k--) {
      if (tags[nominals[k]].xpos !== "CD") { head = nominals[k]; break; }
    }
    pushChunk(st, start, end, head);
    i = end + 1;
  }
}

function pushChunk(st: State, start: number, end: number, head: number): void {
  const { tags } = st;
  const idx = st.chunks.length;
  let wh = false;
  for (let k = start; k <= end; k++) {
    st.inChunk[k] = idx;
    if (isWh(tags[k].xpos)) wh = true;
  }
  for (let k = start; k <= end; k++) {
    if (k === head) continue;
    const x = tags[k].xpos;
    if (x === "WRB") {
      // "how" attaches to the measure adjective it scales
      const jj = k + 1 <= end && tags[k + 1].xpos === "JJ" ? k + 1 : head;
      attach(st, k, jj, "advmod");
    } else if (x === "DT" || x === "WDT") attach(st, k, head, "det");
    else if (x === "PRP$" || x === "WP$") attach(st, k, head, "poss");
    else if (x === "JJ") attach(st, k, head, "amod");
    else if (x === "CD") attach(st, k, head, "num");
    else if (NOMINAL.has(x)) attach(st, k, head, "nn");
  }
  st.chunks.push({ start, end, head, wh });
}

function verbIndices(st: State, lo: number, hi: number): number[] {
  const out: number[] = [];
  for (let i = lo; i < hi; i++) {
    if (st.inChunk[i] < 0 && VERBAL.has(st.tags[i].xpos)) out.push(i);
  }
  return out;
}

function prevNonPunct(st: State, i: number, lo: number): number {
  for (let j = i - 1; j >= lo; j--) {
    if (st.tags[j].upos !== "PUNCT") return j;
  }
  return -1;
}

function chunksWithin(st: State, lo: number, hi: number): Chunk[] {
  return st.chunks.filter((c) => c.start >= lo && c.end < hi);
}

/** Parse one clause with no internal top-level coordination/subordination. */
function parseCore(st: State, lo: number, hi: number): number {
  const { tags } = st;
  const verbs = verbIndices(st, lo, hi);
  const clauseChunks = chunksWithin(st, lo, hi);

  if (verbs.length === 0 && clauseChunks.length === 0) {
    for (let i = lo; i < hi; i++) if (tags[i].upos !== "PUNCT") return i;
    return lo;
  }

  // classify verbs: auxiliaries, infinitive-chained, candidates for main
  const isAux = new Map<number, string>(); // index -> aux | auxpass placeholder
  const chained: number[] = [];
  const candidates: number[] = [];
  for (let k = 0; k < verbs.length; k++) {
    const v = verbs[k];
    const lemma = tags[v].lemma;
    const x = tags[v].xpos;
    if (x === "MD") {
      if (verbs.length > 1) isAux.set(v, "aux");
      else candidates.push(v);
      continue;
    }
    if (lemma === "be") {
      const hasLater = verbs.slice(k + 1).some((w) => tags[w].xpos !== "MD");
      if (hasLater) isAux.set(v, "aux");
      // else: copular, resolved below
      continue;
    }
    if ((lemma === "have" || lemma === "do") && tags[v].upos === "AUX") {
      isAux.set(v, "aux");
      continue;
    }
    const p = prevNonPunct(st, v, lo);
    if (p >= 0 && tags[p].xpos === "TO") chained.push(v);
    else candidates.push(v);
  }

  let root: number;
  let copula = -1;
  if (candidates.length > 0) {
    root = candidates[0];
  } else if (chained.length > 0) {
    root = chained.shift() as number;
  } else {
    // copular clause, or a stranded auxiliary
    const beIdx = verbs.filter((v) => tags[v].lemma === "be").pop() ?? verbs[verbs.length - 1] ?? -1;
    if (beIdx === -1) {
      root = clauseChunks[0].head;
    } else {
      copula = beIdx;
      root = resolveCopularRoot(st, lo, hi, beIdx, clauseChunks);
    }
  }

  if (copula >= 0 && copula !== root) attach(st, copula, root, "cop");

  const passive = copula < 0 && tags[root].xpos === "VBN"
    && verbs.some((v) => isAux.get(v) === "aux" && tags[v].lemma === "be");
  for (const v of isAux.keys()) {
    const rel = tags[v].lemma === "be" && passive ? "auxpass" : "aux";
    attach(st, v, root, rel);
  }

  // infinitive chain: going -> do -> ...
  let prevChain = root;
  for (const v of chained) {
    attach(st, v, prevChain, "xcomp");
    const p = prevNonPunct(st, v, lo);
    if (p >= 0 && tags[p].xpos === "TO") attach(st, p, v, "mark");
    prevChain = v;
  }
  // any remaining finite verb the rules did not place
  for (const v of candidates.slice(1)) attach(st, v, root, "dep");

  // prepositional attachment: preceding nominal, else nearest verb left
  for (let i = lo; i < hi; i++) {
    if (st.inChunk[i] >= 0 || tags[i].xpos !== "IN" || tags[i].upos === "SCONJ") continue;
    const p = prevNonPunct(st, i, lo);
    let at = root;
    if (p >= 0 && st.inChunk[p] >= 0) at = st.chunks[st.inChunk[p]].head;
    else if (p >= 0 && VERBAL.has(tags[p].xpos)) at = p;
    else if (p >= 0 && tags[p].xpos === "JJ") at = p;
    else {
      let v = -1;
      for (const w of verbs) if (w < i) v = w;
      if (v >= 0) at = v;
    }
    attach(st, i, at, "prep");
    for (let j = i + 1; j < hi; j++) {
      if (tags[j].upos === "PUNCT" || tags[j].xpos === "RB") continue;
      if (st.inChunk[j] >= 0) {
        const c = st.inChunk[j];
        if (st.head[st.chunks[c].head] === UNSET) {
          attach(st, st.chunks[c].head, i, "pobj");
        }
      }
      break;
    }
  }

  // noun-phrase coordination: "and <chunk>" directly after another nominal
  for (const c of clauseChunks) {
    if (st.head[c.head] !== UNSET) continue;
    const p = prevNonPunct(st, c.start, lo);
    if (p < 0 || tags[p].xpos !== "CC") continue;
    const q = prevNonPunct(st, p, lo);
    if (q >= 0 && st.inChunk[q] >= 0) {
      const prior = st.chunks[st.inChunk[q]].head;
      attach(st, c.head, prior, "conj");
      attach(st, p, prior, "cc");
    }
  }

  // subject and fronted wh phrase
  const anchor = copula >= 0 ? copula : root;
  const pre = clauseChunks.filter((c) => c.end < anchor && st.head[c.head] === UNSET);
  if (copula < 0) {
    if (pre.length > 0) {
      const subj = pre[pre.length - 1];
      attach(st, subj.head, root, tags[subj.head].xpos === "EX" ? "expl" : passive ? "nsubjpass" : "nsubj");
      // fronted object lands on the chain's last verb unless that verb
      // still has an unclaimed object of its own to the right
      let deepest = prevChain;
      if (deepest !== root
        && clauseChunks.some((c) => c.start > deepest && st.head[c.head] === UNSET)) {
        deepest = root;
      }
      for (const c of pre.slice(0, -1)) {
        if (c.wh) attach(st, c.head, deepest, "dobj");
        else attach(st, c.head, root, "dep");
      }
    }
  }

  // direct objects: first free chunk after each verb in the chain
  const chainVerbs = [root, ...verbs.filter((v) => st.deprel[v] === "xcomp")];
  if (copula < 0) {
    for (const c of clauseChunks) {
      if (st.head[c.head] !== UNSET || c.start <= root) continue;
      let owner = -1;
      for (const v of chainVerbs) if (v < c.start) owner = v;
      if (owner >= 0 && !clauseChunks.some((d) => st.head[d.head] === owner && st.deprel[d.head] === "dobj")) {
        attach(st, c.head, owner, "dobj");
      } else {
        attach(st, c.head, root, "dep");
      }
    }
  } else {
    for (const c of clauseChunks) {
      if (st.head[c.head] === UNSET) attach(st, c.head, root, "dep");
    }
  }

  // adverbs and stray adjectives
  for (let i = lo; i < hi; i++) {
    if (st.inChunk[i] >= 0 || st.head[i] !== UNSET) continue;
    const x = tags[i].xpos;
    if (x === "RB" || x === "WRB") {
      const w = tags[i].surface.toLowerCase();
      if (w === "not" || w === "never") { attach(st, i, root, "neg"); continue; }
      if (INTENSIFIERS.has(w) && i + 1 < hi && (tags[i + 1].xpos === "RB" || tags[i + 1].xpos === "JJ")) {
        attach(st, i, i + 1, "advmod");
        continue;
      }
      let v = -1;
      for (const u of verbs) if (u < i) v = u;
      let at = v >= 0 ? v : root;
      while (["cop", "aux", "auxpass"].includes(st.deprel[at])) at = st.head[at];
      attach(st, i, at, "advmod");
    } else if (x === "JJ" && copula < 0) {
      let v = -1;
      for (const u of verbs) if (u < i) v = u;
      attach(st, i, v >= 0 ? v : root, "acomp");
    }
  }

  return root;
}

function resolveCopularRoot(st: State, lo: number, hi: number, beIdx: number, clauseChunks: Chunk[]): number {
  const { tags } = st;
  const postJJ: number[] = [];
  for (let i = beIdx + 1; i < hi; i++) {
    if (st.inChunk[i] < 0 && tags[i].xpos === "JJ") postJJ.push(i);
  }
  const whFront = clauseChunks.find((c) => c.wh && c.start < beIdx);
  const pre = clauseChunks.filter((c) => c.end < beIdx && c !== whFront);
  const post = clauseChunks.filter((c) => c.start > beIdx);
  // a chunk right after a preposition is its object, never the subject
  const free = (cs: Chunk[]) => cs.filter((c) => {
    let k = c.start - 1;
    while (k >= lo && tags[k].upos === "ADV") k--;
    return !(k >= lo && tags[k].upos === "ADP");
  });
  const freePre = free(pre);
  const freePost = free(post);

  let root: number;
  let subject: number | undefined;
  if (whFront !== undefined && postJJ.length === 0) {
    root = whFront.head;
    subject = freePost[0]?.head;
  } else if (postJJ.length > 0) {
    root = postJJ[0];
    const preSubj = whFront !== undefined ? whFront : freePre[freePre.length - 1];
    subject = (preSubj ?? freePost[0])?.head;
  } else if (post.length > 0) {
    root = (freePost[freePost.length - 1] ?? post[post.length - 1]).head;
    const preSubj = freePre[freePre.length - 1] ?? whFront;
    subject = preSubj !== undefined ? preSubj.head
      : freePost.length >= 2 ? freePost[0].head : undefined;
  } else {
    // "Where is the report?" style handled above; nothing after "be" at all
    root = (pre[pre.length - 1] ?? whFront)?.head ?? beIdx;
  }
  if (subject !== undefined && subject !== root) {
    attach(st, subject, root, tags[subject].xpos === "EX" ? "expl" : "nsubj");
  }
  return root;
}

/** Parse a clause range, peeling one leading or internal subordinator. */
function parseClauseRange(st: State, lo: number, hi: number): number {
  const { tags } = st;
  let s = -1;
  for (let i = lo; i < hi; i++) {
    if (st.inChunk[i] < 0 && tags[i].upos === "SCONJ") { s = i; break; }
  }
  if (s === -1) return parseCore(st, lo, hi);

  if (s === lo) {
    // "If the scheme fails, patients will suffer."
    let comma = -1;
    for (let i = s + 1; i < hi; i++) {
      if (tags[i].surface === "," && st.inChunk[i] < 0) { comma = i; break; }
    }
    if (comma > s + 1 && comma + 1 < hi) {
      const outer = parseClauseRange(st, comma + 1, hi);
      const inner = parseClauseRange(st, s + 1, comma);
      attach(st, inner, outer, "advcl");
      attach(st, s, inner, "mark");
      return outer;
    }
    const only = parseClauseRange(st, s + 1, hi);
    attach(st, s, only, "mark");
    return only;
  }

  const outer = parseCore(st, lo, s);
  const inner = parseClauseRange(st, s + 1, hi);
  // governor: nearest verb left of the subordinator, lifted off aux/cop arcs
  let gov = outer;
  for (let i = s - 1; i >= lo; i--) {
    if (st.inChunk[i] < 0 && VERBAL.has(tags[i].xpos)) {
      gov = ["cop", "aux", "auxpass"].includes(st.deprel[i]) && st.head[i] >= 0 ? st.head[i] : i;
      break;
    }
    if (st.inChunk[i] < 0 && tags[i].xpos === "JJ" && st.head[i] === UNSET) { gov = i; break; }
  }
  const word = tags[s].surface.toLowerCase();
  const rel = COMPLEMENT_SCONJ.has(word) ? "ccomp" : "advcl";
  attach(st, inner, gov, rel);
  attach(st, s, inner, "mark");
  return outer;
}

/** Reject malformed trees; returns a reason or null when well-formed. */
export function validateTree(tokens: DepToken[]): string | null {
  const n = tokens.length;
  if (n === 0) return "empty sentence";
  for (let i = 0; i < n; i++) {
    if (tokens[i].index !== i + 1) return "token indices not contiguous";
  }
  const roots = tokens.filter((t) => t.head === 0);
  if (roots.length !== 1) return `expected 1 root, found ${roots.length}`;
  for (const t of tokens) {
    if (t.head < 0 || t.head > n) return `head ${t.head} out of range`;
    if (t.head === t.index) return `token ${t.index} heads itself`;
    if (!t.deprel) return `token ${t.index} has no relation`;
  }
  for (const t of tokens) {
    const seen = new Set<number>();
    let cur = t.index;
    while (cur !== 0) {
      if (seen.has(cur)) return `cycle through token ${cur}`;
      seen.add(cur);
      cur = tokens[cur - 1].head;
    }
  }
  return null;
}

function flatTree(tags: TaggedWord[]): DepToken[] {
  let root = 0;
  for (let i = 0; i < tags.length; i++) {
    if (VERBAL.has(tags[i].xpos)) { root = i; break; }
    if (tags[i].upos !== "PUNCT" && root === 0 && i > 0) root = i;
  }
  return tags.map((t, i) => ({
    ...t,
    index: i + 1,
    head: i === root ? 0 : root + 1,
    deprel: i === root ? "root" : t.upos === "PUNCT" ? "punct" : "dep",
  }));
}

export type ParseOutcome = { tokens: DepToken[]; usedFallback: boolean };

/** Parse one tagged sentence into a single-rooted dependency tree. */
export function parseSentence(tags: TaggedWord[]): ParseOutcome {
  if (tags.length === 0) return { tokens: [], usedFallback: false };
  const n = tags.length;
  const st: State = {
    tags,
    head: new Array(n).fill(UNSET),
    deprel: new Array(n).fill(""),
    inChunk: new Array(n).fill(-1),
    chunks: [],
  };
  chunkNouns(st);

  // clause coordination: a top-level CC with verbs on both sides
  let sentenceRoot = -1;
  let ccAt = -1;
  for (let i = 0; i < n; i++) {
    if (st.inChunk[i] >= 0 || st.tags[i].xpos !== "CC") continue;
    if (verbIndices(st, 0, i).length > 0 && verbIndices(st, i + 1, n).length > 0) {
      ccAt = i;
      break;
    }
  }
  if (ccAt >= 0) {
    const left = parseClauseRange(st, 0, ccAt);
    const right = parseClauseRange(st, ccAt + 1, n);
    attach(st, right, left, "conj");
    attach(st, ccAt, left, "cc");
    sentenceRoot = left;
  } else {
    sentenceRoot = parseClauseRange(st, 0, n);
  }

  st.head[sentenceRoot] = ROOT;
  st.deprel[sentenceRoot] = "root";
  for (let i = 0; i < n; i++) {
    if (st.head[i] !== UNSET) continue;
    st.head[i] = sentenceRoot;
    st.deprel[i] = tags[i].upos === "PUNCT" ? "punct" : "dep";
  }

  const tokens: DepToken[] = tags.map((t, i) => ({
    ...t,
    index: i + 1,
    head: st.head[i] === ROOT ? 0 : st.head[i] + 1,
    deprel: st.deprel[i],
  }));
  if (validateTree(tokens) === null) return { tokens, usedFallback: false };
  return { tokens: flatTree(tags), usedFallback: true };
}
